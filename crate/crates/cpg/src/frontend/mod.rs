//! Language frontends and the extension-based dispatch between them.
//!
//! Every frontend translates one file into a translation-unit subtree of
//! the shared graph plus a scope tree, and records which nodes were
//! properly handled so coverage can be computed later.

pub mod c;
pub mod generic;

use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{CpgError, Result};
use crate::graph::{Graph, NodeId};
use crate::scopes::{ScopeForest, ScopeId};

/// Which frontend handles a file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrontendKind {
    /// Built-in parser for the C subset (`.c`, `.h`).
    C,
    /// Language-neutral JSON AST documents (`.cpg.json`).
    Generic,
}

/// Handled/unhandled record for one node, feeding the coverage metric.
#[derive(Debug, Clone)]
pub struct CoverageRecord {
    pub node: NodeId,
    pub handled: bool,
}

/// Outcome of translating one file.
#[derive(Debug, Clone)]
pub struct TranslationResult {
    pub file: String,
    pub language: &'static str,
    pub root: NodeId,
    pub global_scope: ScopeId,
    pub coverage: Vec<CoverageRecord>,
    /// Lines counting as SLoC for this unit. The C frontend derives them
    /// from the source text; the generic frontend uses the union of the
    /// document's location lines, since the original source may not exist.
    pub sloc_lines: BTreeSet<u32>,
    pub diagnostics: Vec<String>,
}

/// Pick a frontend by file extension.
pub fn dispatch(path: &Path) -> Result<FrontendKind> {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default().to_lowercase();
    if name.ends_with(".cpg.json") {
        return Ok(FrontendKind::Generic);
    }
    match path.extension().and_then(|e| e.to_str()).map(|e| e.to_lowercase()) {
        Some(ext) if ext == "c" || ext == "h" => Ok(FrontendKind::C),
        Some(ext) => Err(CpgError::UnsupportedLanguage(format!(".{ext}"))),
        None => Err(CpgError::UnsupportedLanguage(format!(
            "{} (no file extension)",
            path.display()
        ))),
    }
}

/// Translate one source text with the given frontend.
pub fn translate_source(
    graph: &mut Graph,
    forest: &mut ScopeForest,
    kind: FrontendKind,
    file: &str,
    source: &str,
) -> Result<TranslationResult> {
    match kind {
        FrontendKind::C => c::translate(graph, forest, file, source),
        FrontendKind::Generic => generic::ingest_str(graph, forest, file, source),
    }
}
