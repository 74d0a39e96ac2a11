//! Call resolution: draws `INVOKES` edges from calls to candidate targets
//! in a best-effort manner. Candidates are the function declarations the
//! call's name can reach through the scope chain (including shadowed and
//! same-name redeclarations, so overload sets survive), filtered by arity
//! and then, when argument types are known, narrowed to exact parameter
//! matches. Every surviving candidate gets an edge; none is a guess the
//! inference pass may later fill.

use crate::error::Result;
use crate::graph::{kinds, roles, Edge, EdgeLabel, Graph, NodeId};

use super::{Pass, PassContext};

pub struct CallPass;

impl Pass for CallPass {
    fn name(&self) -> &'static str {
        "calls"
    }

    fn depends_on(&self) -> &'static [&'static str] {
        &["symbols", "types"]
    }

    fn run(&self, ctx: &mut PassContext) -> Result<()> {
        let calls = ctx.graph.nodes_by_kind(kinds::CALL, true)?;
        for call in calls {
            if ctx.graph.edges_of(call, EdgeLabel::Invokes, crate::graph::Direction::Out).next().is_some() {
                continue;
            }
            let Some(name) = ctx.graph.node(call)?.name.clone() else { continue };
            let mut candidates: Vec<NodeId> = Vec::new();
            // method-style calls look in the base type's record scope first
            if ctx.graph.node_is(call, kinds::MEMBER_CALL) {
                if let Some(found) = member_candidates(ctx, call, &name)? {
                    candidates.extend(found);
                }
            }
            if candidates.is_empty() {
                if let Some(scope) = ctx.scopes.scope_of_node(call) {
                    candidates = ctx
                        .scopes
                        .all_visible(&name, scope)
                        .into_iter()
                        .filter(|&d| ctx.graph.node_is(d, kinds::FUNCTION))
                        .collect();
                }
            }
            let args = ctx.graph.ast_children_role(call, roles::ARGUMENT);
            candidates.retain(|&c| ctx.graph.ast_children_role(c, roles::PARAMETER).len() == args.len());
            let exact: Vec<NodeId> = candidates
                .iter()
                .copied()
                .filter(|&c| exact_type_match(ctx.graph, &args, c))
                .collect();
            let chosen = if !exact.is_empty() { exact } else { candidates };
            for target in &chosen {
                ctx.graph.add_edge(Edge::plain(call, *target, EdgeLabel::Invokes))?;
            }
            if chosen.len() == 1 {
                if let Some(ret) = ctx.graph.node(chosen[0])?.property_str("type").map(str::to_string) {
                    if ctx.graph.node(call)?.property_str("type").is_none() {
                        ctx.graph.set_property(call, "type", ret)?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn member_candidates(ctx: &mut PassContext, call: NodeId, name: &str) -> Result<Option<Vec<NodeId>>> {
    let Some(base) = ctx.graph.ast_child(call, roles::BASE) else { return Ok(None) };
    let Some(base_ty) = ctx.graph.node(base)?.property_str("type").map(str::to_string) else {
        return Ok(None);
    };
    let record_name = base_ty.trim_end_matches('*');
    let Some(record) = ctx
        .graph
        .nodes_by_name(record_name)
        .into_iter()
        .find(|&n| ctx.graph.node_is(n, kinds::RECORD))
    else {
        return Ok(None);
    };
    let Some(scope) = ctx.scopes.scope_anchored_at(record) else { return Ok(None) };
    let found: Vec<NodeId> = ctx
        .scopes
        .scope(scope)
        .declaration_order
        .iter()
        .filter(|(n, d)| n == name && ctx.graph.node_is(*d, kinds::FUNCTION))
        .map(|(_, d)| *d)
        .collect();
    Ok(if found.is_empty() { None } else { Some(found) })
}

/// A candidate matches exactly when every position where both the argument
/// and the parameter have a known type agrees.
fn exact_type_match(graph: &Graph, args: &[NodeId], candidate: NodeId) -> bool {
    let params = graph.ast_children_role(candidate, roles::PARAMETER);
    args.iter().zip(params.iter()).all(|(&a, &p)| {
        let at = graph.node(a).ok().and_then(|n| n.property_str("type").map(str::to_string));
        let pt = graph.node(p).ok().and_then(|n| n.property_str("type").map(str::to_string));
        match (at, pt) {
            (Some(a), Some(p)) => a == p,
            _ => true,
        }
    })
}
