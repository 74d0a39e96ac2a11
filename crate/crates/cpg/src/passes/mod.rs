//! Graph-enrichment passes and their dependency-ordered execution.
//!
//! Passes run after every file is translated, on the merged graph. Each
//! pass declares the passes whose results it needs; execution order is the
//! topological order with ties broken by registration order, so a given
//! registration sequence always runs the same way.

pub mod calls;
pub mod dfg;
pub mod eog;
pub mod inference;
pub mod symbols;
pub mod types;

use std::collections::HashMap;
use std::time::Instant;

use crate::error::{CpgError, Result};
use crate::graph::Graph;
use crate::scopes::ScopeForest;

/// How the data-flow pass links definitions and uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DfgMode {
    /// Write references link to the declaration and the declaration to
    /// read references.
    DeclarationLink,
    /// Reaching definitions over the evaluation order: the last valid
    /// write links to each point of use.
    FlowSensitive,
}

impl DfgMode {
    pub fn parse(s: &str) -> Result<DfgMode> {
        match s {
            "flow" => Ok(DfgMode::FlowSensitive),
            "decl" => Ok(DfgMode::DeclarationLink),
            other => Err(CpgError::Configuration(format!(
                "unknown dfg mode `{other}` (expected `flow` or `decl`)"
            ))),
        }
    }
}

/// Per-run statistics some passes publish (used by tests and reports).
#[derive(Debug, Default, Clone)]
pub struct PassStats {
    /// (function node id, fixpoint sweeps, nodes in the function's EOG).
    pub dfg_fixpoint: Vec<(crate::graph::NodeId, usize, usize)>,
}

/// Mutable state handed to each pass.
pub struct PassContext<'a> {
    pub graph: &'a mut Graph,
    pub scopes: &'a mut ScopeForest,
    pub dfg_mode: DfgMode,
    pub diagnostics: &'a mut Vec<String>,
    pub stats: &'a mut PassStats,
}

pub trait Pass {
    fn name(&self) -> &'static str;
    fn depends_on(&self) -> &'static [&'static str] {
        &[]
    }
    fn run(&self, ctx: &mut PassContext) -> Result<()>;
}

/// Registry of passes, executed in dependency order.
pub struct PassManager {
    passes: Vec<Box<dyn Pass>>,
}

impl PassManager {
    pub fn empty() -> Self {
        PassManager { passes: Vec::new() }
    }

    /// The standard pipeline: symbols, types, calls, inference, evaluation
    /// order, data flow.
    pub fn standard() -> Self {
        let mut pm = PassManager::empty();
        pm.register(Box::new(symbols::SymbolPass));
        pm.register(Box::new(types::TypePass));
        pm.register(Box::new(calls::CallPass));
        pm.register(Box::new(inference::InferencePass));
        pm.register(Box::new(eog::EogPass));
        pm.register(Box::new(dfg::DfgPass));
        pm
    }

    pub fn register(&mut self, pass: Box<dyn Pass>) {
        self.passes.push(pass);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.passes.iter().map(|p| p.name()).collect()
    }

    /// Topological order over the dependency relation; ties broken by
    /// registration order. A cycle is a configuration error naming it.
    pub fn order(&self) -> Result<Vec<usize>> {
        let index: HashMap<&str, usize> =
            self.passes.iter().enumerate().map(|(i, p)| (p.name(), i)).collect();
        let mut deps: Vec<Vec<usize>> = Vec::with_capacity(self.passes.len());
        for pass in &self.passes {
            let mut d = Vec::new();
            for dep in pass.depends_on() {
                match index.get(dep) {
                    Some(&i) => d.push(i),
                    None => {
                        return Err(CpgError::Configuration(format!(
                            "pass `{}` depends on unregistered pass `{dep}`",
                            pass.name()
                        )))
                    }
                }
            }
            deps.push(d);
        }
        let mut done = vec![false; self.passes.len()];
        let mut order = Vec::with_capacity(self.passes.len());
        while order.len() < self.passes.len() {
            let next = (0..self.passes.len())
                .find(|&i| !done[i] && deps[i].iter().all(|&d| done[d]));
            match next {
                Some(i) => {
                    done[i] = true;
                    order.push(i);
                }
                None => {
                    let stuck: Vec<&str> = (0..self.passes.len())
                        .filter(|&i| !done[i])
                        .map(|i| self.passes[i].name())
                        .collect();
                    return Err(CpgError::Configuration(format!(
                        "pass dependency cycle involving: {}",
                        stuck.join(" -> ")
                    )));
                }
            }
        }
        Ok(order)
    }

    /// Run every pass in order. `deadline` is checked between passes; use
    /// it for benchmark timeouts.
    pub fn run_all(
        &self,
        graph: &mut Graph,
        scopes: &mut ScopeForest,
        dfg_mode: DfgMode,
        diagnostics: &mut Vec<String>,
        stats: &mut PassStats,
        deadline: Option<Instant>,
    ) -> Result<()> {
        let order = self.order()?;
        for i in order {
            if let Some(d) = deadline {
                if Instant::now() > d {
                    return Err(CpgError::Timeout);
                }
            }
            let mut ctx = PassContext { graph, scopes, dfg_mode, diagnostics, stats };
            self.passes[i].run(&mut ctx)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Named {
        name: &'static str,
        deps: &'static [&'static str],
    }

    impl Pass for Named {
        fn name(&self) -> &'static str {
            self.name
        }
        fn depends_on(&self) -> &'static [&'static str] {
            self.deps
        }
        fn run(&self, _ctx: &mut PassContext) -> Result<()> {
            Ok(())
        }
    }

    #[test]
    fn dependency_forces_order() {
        let mut pm = PassManager::empty();
        pm.register(Box::new(Named { name: "dfg", deps: &["eog"] }));
        pm.register(Box::new(Named { name: "eog", deps: &[] }));
        let order = pm.order().unwrap();
        let names: Vec<&str> = order.iter().map(|&i| pm.passes[i].name()).collect();
        assert_eq!(names, vec!["eog", "dfg"]);
    }

    #[test]
    fn cycle_is_a_configuration_error_naming_it() {
        let mut pm = PassManager::empty();
        pm.register(Box::new(Named { name: "a", deps: &["b"] }));
        pm.register(Box::new(Named { name: "b", deps: &["a"] }));
        let err = pm.order().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("cycle") && msg.contains('a') && msg.contains('b'), "{msg}");
    }

    #[test]
    fn ties_break_by_registration_order() {
        let mut pm = PassManager::empty();
        pm.register(Box::new(Named { name: "p", deps: &[] }));
        pm.register(Box::new(Named { name: "q", deps: &[] }));
        let order = pm.order().unwrap();
        let names: Vec<&str> = order.iter().map(|&i| pm.passes[i].name()).collect();
        assert_eq!(names, vec!["p", "q"]);
    }

    #[test]
    fn missing_dependency_is_reported() {
        let mut pm = PassManager::empty();
        pm.register(Box::new(Named { name: "a", deps: &["ghost"] }));
        assert!(pm.order().is_err());
    }

    #[test]
    fn standard_pipeline_orders_cleanly() {
        let pm = PassManager::standard();
        let order = pm.order().unwrap();
        let names: Vec<&str> = order.iter().map(|&i| pm.passes[i].name()).collect();
        let pos = |n: &str| names.iter().position(|&x| x == n).unwrap();
        assert!(pos("symbols") < pos("types"));
        assert!(pos("calls") < pos("inference"));
        assert!(pos("eog") < pos("dfg"));
        assert!(pos("inference") < pos("dfg"));
    }
}
