//! Reference resolution: draws a `REFERS_TO` edge from every reference
//! whose name resolves through the scope chain to its declaration.
//! Unresolved references are left for the inference pass.

use crate::error::Result;
use crate::graph::{kinds, Edge, EdgeLabel};

use super::{Pass, PassContext};

pub struct SymbolPass;

impl Pass for SymbolPass {
    fn name(&self) -> &'static str {
        "symbols"
    }

    fn run(&self, ctx: &mut PassContext) -> Result<()> {
        let refs = ctx.graph.nodes_by_kind(kinds::REFERENCE, true)?;
        for r in refs {
            let already = ctx
                .graph
                .edges_of(r, EdgeLabel::RefersTo, crate::graph::Direction::Out)
                .next()
                .is_some();
            if already {
                continue;
            }
            let Some(name) = ctx.graph.node(r)?.name.clone() else { continue };
            let Some(scope) = ctx.scopes.scope_of_node(r) else { continue };
            if let Some(decl) = ctx.scopes.resolve(&name, scope) {
                ctx.graph.add_edge(Edge::plain(r, decl, EdgeLabel::RefersTo))?;
            }
        }
        Ok(())
    }
}
