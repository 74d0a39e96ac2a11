//! Inference of declarations standing in for missing code: every call that
//! resolved to nothing gets an INFERRED function declaration (name and
//! arity from the call site, parameter types from argument types when
//! known), and every unresolved reference an INFERRED variable. Inferred
//! declarations live under a synthetic translation unit and are declared
//! in its global scope, so re-running the pass finds them and adds nothing.

use crate::error::Result;
use crate::graph::{kinds, roles, Edge, EdgeLabel, Graph, NodeFlags, NodeId};
use crate::scopes::{ScopeForest, ScopeManager};

use super::{Pass, PassContext};

/// Label of the synthetic unit holding inferred declarations.
pub const INFERRED_UNIT: &str = "<inferred>";

pub struct InferencePass;

impl Pass for InferencePass {
    fn name(&self) -> &'static str {
        "inference"
    }

    fn depends_on(&self) -> &'static [&'static str] {
        &["symbols", "calls"]
    }

    fn run(&self, ctx: &mut PassContext) -> Result<()> {
        let calls = ctx.graph.nodes_by_kind(kinds::CALL, true)?;
        for call in calls {
            if ctx.graph.edges_of(call, EdgeLabel::Invokes, crate::graph::Direction::Out).next().is_some() {
                continue;
            }
            let Some(name) = ctx.graph.node(call)?.name.clone() else { continue };
            let args = ctx.graph.ast_children_role(call, roles::ARGUMENT);
            let decl = match find_inferred_function(ctx.graph, &name, args.len()) {
                Some(d) => d,
                None => infer_function(ctx.graph, ctx.scopes, &name, &args)?,
            };
            ctx.graph.add_edge(Edge::plain(call, decl, EdgeLabel::Invokes))?;
        }

        let refs = ctx.graph.nodes_by_kind(kinds::REFERENCE, true)?;
        for r in refs {
            if ctx.graph.edges_of(r, EdgeLabel::RefersTo, crate::graph::Direction::Out).next().is_some() {
                continue;
            }
            let Some(name) = ctx.graph.node(r)?.name.clone() else { continue };
            let decl = match find_inferred_variable(ctx.graph, &name) {
                Some(d) => d,
                None => {
                    let ty = ctx.graph.node(r)?.property_str("type").map(str::to_string);
                    infer_variable(ctx.graph, ctx.scopes, &name, ty)?
                }
            };
            ctx.graph.add_edge(Edge::plain(r, decl, EdgeLabel::RefersTo))?;
        }
        Ok(())
    }
}

fn find_inferred_function(graph: &Graph, name: &str, arity: usize) -> Option<NodeId> {
    graph.nodes_by_name(name).into_iter().find(|&n| {
        graph.node(n).map(|nd| nd.flags.inferred).unwrap_or(false)
            && graph.node_is(n, kinds::FUNCTION)
            && graph.ast_children_role(n, roles::PARAMETER).len() == arity
    })
}

fn find_inferred_variable(graph: &Graph, name: &str) -> Option<NodeId> {
    graph.nodes_by_name(name).into_iter().find(|&n| {
        graph.node(n).map(|nd| nd.flags.inferred).unwrap_or(false) && graph.node_is(n, kinds::VARIABLE)
    })
}

/// The synthetic unit (and its global scope) inferred declarations hang off.
fn inferred_unit(graph: &mut Graph, scopes: &mut ScopeForest) -> Result<NodeId> {
    if let Some(existing) = graph
        .nodes_by_name(INFERRED_UNIT)
        .into_iter()
        .find(|&n| graph.node_is(n, kinds::TRANSLATION_UNIT))
    {
        return Ok(existing);
    }
    let tu = graph.add_node(
        kinds::TRANSLATION_UNIT,
        Some(INFERRED_UNIT.to_string()),
        None,
        NodeFlags::INFERRED,
    )?;
    let mgr = ScopeManager::new(scopes, INFERRED_UNIT);
    let global = mgr.finish()?;
    scopes.record_node(tu, global);
    Ok(tu)
}

fn attach_to_unit(graph: &mut Graph, tu: NodeId, decl: NodeId) -> Result<()> {
    let next = graph.ast_children_role(tu, roles::DECLARATION).len() as u32;
    graph.add_edge(Edge::ast(tu, decl, roles::DECLARATION, Some(next)))
}

fn declare_in_unit(graph: &Graph, scopes: &mut ScopeForest, name: &str, decl: NodeId) {
    if let Some(global) = scopes.global_of(INFERRED_UNIT) {
        let scope = scopes.scope_mut(global);
        scope.declarations.insert(name.to_string(), decl);
        scope.declaration_order.push((name.to_string(), decl));
        let _ = graph;
    }
}

fn infer_function(
    graph: &mut Graph,
    scopes: &mut ScopeForest,
    name: &str,
    args: &[NodeId],
) -> Result<NodeId> {
    let tu = inferred_unit(graph, scopes)?;
    let f = graph.add_node(kinds::FUNCTION, Some(name.to_string()), None, NodeFlags::INFERRED)?;
    for (i, &arg) in args.iter().enumerate() {
        let p = graph.add_node(
            kinds::PARAMETER,
            Some(format!("p{i}")),
            None,
            NodeFlags::INFERRED,
        )?;
        if let Some(ty) = graph.node(arg)?.property_str("type").map(str::to_string) {
            graph.set_property(p, "type", ty)?;
        }
        graph.add_edge(Edge::ast(f, p, roles::PARAMETER, Some(i as u32)))?;
    }
    attach_to_unit(graph, tu, f)?;
    declare_in_unit(graph, scopes, name, f);
    Ok(f)
}

fn infer_variable(
    graph: &mut Graph,
    scopes: &mut ScopeForest,
    name: &str,
    ty: Option<String>,
) -> Result<NodeId> {
    let tu = inferred_unit(graph, scopes)?;
    let v = graph.add_node(kinds::VARIABLE, Some(name.to_string()), None, NodeFlags::INFERRED)?;
    if let Some(ty) = ty {
        graph.set_property(v, "type", ty)?;
    }
    attach_to_unit(graph, tu, v)?;
    declare_in_unit(graph, scopes, name, v);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::c::translate;
    use crate::passes::{DfgMode, PassManager, PassStats};

    fn analyzed(source: &str) -> (Graph, ScopeForest) {
        let mut g = Graph::new();
        let mut forest = ScopeForest::new();
        translate(&mut g, &mut forest, "t.c", source).unwrap();
        let mut diags = Vec::new();
        let mut stats = PassStats::default();
        PassManager::standard()
            .run_all(&mut g, &mut forest, DfgMode::DeclarationLink, &mut diags, &mut stats, None)
            .unwrap();
        (g, forest)
    }

    fn rerun_inference(g: &mut Graph, forest: &mut ScopeForest) {
        let mut diags = Vec::new();
        let mut stats = PassStats::default();
        let mut ctx = super::super::PassContext {
            graph: g,
            scopes: forest,
            dfg_mode: DfgMode::DeclarationLink,
            diagnostics: &mut diags,
            stats: &mut stats,
        };
        InferencePass.run(&mut ctx).unwrap();
    }

    #[test]
    fn undeclared_call_gets_an_inferred_declaration() {
        let (g, _) = analyzed("void f() { log(msg); }");
        let inferred: Vec<_> = g
            .nodes_by_kind(kinds::FUNCTION, false)
            .unwrap()
            .into_iter()
            .filter(|&n| g.node(n).unwrap().flags.inferred)
            .collect();
        assert_eq!(inferred.len(), 1);
        assert_eq!(g.node(inferred[0]).unwrap().name.as_deref(), Some("log"));
        assert_eq!(g.ast_children_role(inferred[0], roles::PARAMETER).len(), 1);
        assert!(g.node(inferred[0]).unwrap().location.is_none());
        let call = g.nodes_by_kind(kinds::CALL, false).unwrap()[0];
        assert_eq!(
            g.neighbors(call, EdgeLabel::Invokes, crate::graph::Direction::Out).unwrap(),
            vec![inferred[0]]
        );
    }

    #[test]
    fn fully_resolvable_program_infers_nothing() {
        let (g, _) = analyzed("int f(int a) { return a; }\nvoid g() { int x; x = f(1); }");
        assert!(g.nodes().all(|n| !n.flags.inferred));
    }

    #[test]
    fn same_missing_callee_is_shared() {
        let (g, _) = analyzed("void f() { log(1); log(2); }");
        let inferred: Vec<_> = g
            .nodes_by_kind(kinds::FUNCTION, false)
            .unwrap()
            .into_iter()
            .filter(|&n| g.node(n).unwrap().flags.inferred)
            .collect();
        assert_eq!(inferred.len(), 1);
        let calls = g.nodes_by_kind(kinds::CALL, false).unwrap();
        for call in calls {
            assert_eq!(
                g.neighbors(call, EdgeLabel::Invokes, crate::graph::Direction::Out).unwrap(),
                vec![inferred[0]]
            );
        }
    }

    #[test]
    fn rerunning_inference_adds_nothing() {
        let (mut g, mut forest) = analyzed("void f() { a(); b(1); c(x); }");
        let nodes_before = g.node_count();
        let edges_before = g.edge_count();
        rerun_inference(&mut g, &mut forest);
        assert_eq!(g.node_count(), nodes_before);
        assert_eq!(g.edge_count(), edges_before);
    }

    #[test]
    fn every_reference_resolves_after_all_passes() {
        let (g, _) = analyzed("void f() { x = y + unknown_fn(z); }");
        for r in g.nodes_by_kind(kinds::REFERENCE, true).unwrap() {
            let targets = g.neighbors(r, EdgeLabel::RefersTo, crate::graph::Direction::Out).unwrap();
            assert_eq!(targets.len(), 1, "reference {r} should resolve exactly once");
        }
    }

    #[test]
    fn inferred_unit_is_the_ast_parent() {
        let (g, _) = analyzed("void f() { ghost(); }");
        let tu = g
            .nodes_by_name(INFERRED_UNIT)
            .into_iter()
            .find(|&n| g.node_is(n, kinds::TRANSLATION_UNIT))
            .unwrap();
        let decl = g.ast_children_role(tu, roles::DECLARATION);
        assert_eq!(decl.len(), 1);
    }
}
