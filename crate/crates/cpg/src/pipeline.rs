//! End-to-end orchestration: load files through the dispatched frontends
//! into one shared graph, then run the pass pipeline over the merged
//! result.

use std::path::{Path, PathBuf};
use std::time::Instant;

use walkdir::WalkDir;

use crate::error::{CpgError, Result};
use crate::frontend::{self, FrontendKind, TranslationResult};
use crate::graph::Graph;
use crate::passes::{DfgMode, PassManager, PassStats};
use crate::scopes::ScopeForest;

/// One analysis: a graph, its scope forest, and per-unit bookkeeping.
/// Frontend errors are collected per file rather than aborting the run.
pub struct Analysis {
    pub graph: Graph,
    pub scopes: ScopeForest,
    pub units: Vec<TranslationResult>,
    pub file_errors: Vec<(PathBuf, String)>,
    pub dfg_mode: Option<DfgMode>,
    pub pass_stats: PassStats,
    pub diagnostics: Vec<String>,
}

impl Analysis {
    pub fn new() -> Self {
        Analysis {
            graph: Graph::new(),
            scopes: ScopeForest::new(),
            units: Vec::new(),
            file_errors: Vec::new(),
            dfg_mode: None,
            pass_stats: PassStats::default(),
            diagnostics: Vec::new(),
        }
    }

    /// Load a file or a directory tree. Directory walks pick up only files
    /// with a registered extension, in path order; explicitly named files
    /// are always dispatched, so an unsupported one is reported.
    pub fn load_path(&mut self, path: &Path, deadline: Option<Instant>) -> Result<()> {
        if path.is_dir() {
            let mut files: Vec<PathBuf> = WalkDir::new(path)
                .sort_by_file_name()
                .into_iter()
                .filter_map(|e| e.ok())
                .filter(|e| e.file_type().is_file())
                .map(|e| e.into_path())
                .filter(|p| frontend::dispatch(p).is_ok())
                .collect();
            files.sort();
            for file in files {
                if let Some(d) = deadline {
                    if Instant::now() > d {
                        return Err(CpgError::Timeout);
                    }
                }
                self.load_file(&file);
            }
            return Ok(());
        }
        if let Some(d) = deadline {
            if Instant::now() > d {
                return Err(CpgError::Timeout);
            }
        }
        self.load_file(path);
        Ok(())
    }

    /// Translate one file, recording failures instead of propagating them.
    pub fn load_file(&mut self, path: &Path) {
        let outcome = frontend::dispatch(path).and_then(|kind| {
            let source = std::fs::read_to_string(path)?;
            self.load_source(kind, &path.display().to_string(), &source)
        });
        if let Err(err) = outcome {
            self.file_errors.push((path.to_path_buf(), err.to_string()));
        }
    }

    pub fn load_source(
        &mut self,
        kind: FrontendKind,
        file: &str,
        source: &str,
    ) -> Result<()> {
        let unit = frontend::translate_source(&mut self.graph, &mut self.scopes, kind, file, source)?;
        self.units.push(unit);
        Ok(())
    }

    /// Run the standard pass pipeline. The data-flow mode is fixed for the
    /// lifetime of the graph: enriching the same graph under two modes
    /// would mix their edge sets.
    pub fn run_passes(&mut self, mode: DfgMode, deadline: Option<Instant>) -> Result<()> {
        if let Some(prev) = self.dfg_mode {
            if prev != mode {
                return Err(CpgError::Configuration(format!(
                    "graph is already enriched with dfg mode {prev:?}; reload before switching"
                )));
            }
        }
        PassManager::standard().run_all(
            &mut self.graph,
            &mut self.scopes,
            mode,
            &mut self.diagnostics,
            &mut self.pass_stats,
            deadline,
        )?;
        self.dfg_mode = Some(mode);
        Ok(())
    }
}

impl Default for Analysis {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::kinds;
    use std::io::Write;

    #[test]
    fn multi_file_load_merges_into_one_graph() {
        let dir = tempfile::tempdir().unwrap();
        for (name, text) in [
            ("a.c", "int shared(int v) { return v; }"),
            ("b.c", "int user() { return shared(2); }"),
            ("notes.txt", "not code"),
        ] {
            let mut f = std::fs::File::create(dir.path().join(name)).unwrap();
            f.write_all(text.as_bytes()).unwrap();
        }
        let mut analysis = Analysis::new();
        analysis.load_path(dir.path(), None).unwrap();
        assert_eq!(analysis.units.len(), 2);
        assert!(analysis.file_errors.is_empty(), "txt files are skipped silently in dir walks");
        analysis.run_passes(DfgMode::FlowSensitive, None).unwrap();
        let tus = analysis.graph.nodes_by_kind(kinds::TRANSLATION_UNIT, false).unwrap();
        assert_eq!(tus.len(), 2);
        // the cross-file call resolved, so nothing was inferred
        assert!(analysis.graph.nodes().all(|n| !n.flags.inferred));
    }

    #[test]
    fn explicit_unsupported_file_is_recorded_not_fatal() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("missing.xyz");
        std::fs::write(&path, "whatever").unwrap();
        let mut analysis = Analysis::new();
        analysis.load_path(&path, None).unwrap();
        assert_eq!(analysis.file_errors.len(), 1);
        assert!(analysis.file_errors[0].1.contains("unsupported language"));
    }

    #[test]
    fn switching_dfg_mode_is_rejected() {
        let mut analysis = Analysis::new();
        analysis
            .load_source(FrontendKind::C, "t.c", "void f() { int x; x = 1; }")
            .unwrap();
        analysis.run_passes(DfgMode::FlowSensitive, None).unwrap();
        assert!(analysis.run_passes(DfgMode::DeclarationLink, None).is_err());
        // re-running under the same mode is fine and adds nothing
        let edges = analysis.graph.edge_count();
        analysis.run_passes(DfgMode::FlowSensitive, None).unwrap();
        assert_eq!(analysis.graph.edge_count(), edges);
    }
}
