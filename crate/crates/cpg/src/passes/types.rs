//! Type sub-graph construction: one `TypeNode` per distinct type name and
//! pointer depth, linkage from record types to their declarations, and
//! best-effort propagation of a `type` property onto expressions.
//!
//! Pointer types carry their pointee under the `elementType` property, so
//! `int**` chains down to `int`.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::graph::{kinds, roles, Edge, EdgeLabel, Graph, NodeFlags, NodeId};

use super::{Pass, PassContext};

pub struct TypePass;

impl Pass for TypePass {
    fn name(&self) -> &'static str {
        "types"
    }

    fn depends_on(&self) -> &'static [&'static str] {
        &["symbols"]
    }

    fn run(&self, ctx: &mut PassContext) -> Result<()> {
        propagate_expression_types(ctx.graph)?;
        materialize_type_nodes(ctx.graph)?;
        Ok(())
    }
}

/// Walk every AST tree bottom-up once, deriving expression types from
/// literals, resolved references and operand types.
pub fn propagate_expression_types(graph: &mut Graph) -> Result<()> {
    let roots = graph.nodes_by_kind(kinds::TRANSLATION_UNIT, false)?;
    for root in roots {
        // post-order: children first
        let order = graph.ast_subtree(root);
        for &node in order.iter().rev() {
            if graph.node(node)?.property_str("type").is_some() {
                continue;
            }
            if let Some(ty) = derive_type(graph, node)? {
                graph.set_property(node, "type", ty)?;
            }
        }
    }
    Ok(())
}

fn derive_type(graph: &Graph, node: NodeId) -> Result<Option<String>> {
    let kind = graph.kind_name(node)?.to_string();
    let ty = match kind.as_str() {
        k if k == kinds::LITERAL => {
            let n = graph.node(node)?;
            match n.properties.get("value") {
                Some(crate::graph::PropertyValue::Int(_)) => {
                    if n.properties.contains_key("charLiteral") {
                        Some("char".to_string())
                    } else {
                        Some("int".to_string())
                    }
                }
                Some(crate::graph::PropertyValue::Str(_)) => Some("char*".to_string()),
                Some(crate::graph::PropertyValue::Null) => Some("void*".to_string()),
                _ => None,
            }
        }
        k if k == kinds::REFERENCE => graph
            .neighbors(node, EdgeLabel::RefersTo, crate::graph::Direction::Out)?
            .first()
            .and_then(|&d| graph.node(d).ok())
            .and_then(|d| d.property_str("type").map(str::to_string)),
        k if k == kinds::BINARY_OPERATOR => {
            let op = graph.node(node)?.property_str("operator").unwrap_or("").to_string();
            let lhs_ty = child_type(graph, node, roles::LHS);
            let rhs_ty = child_type(graph, node, roles::RHS);
            match op.as_str() {
                "==" | "!=" | "<" | ">" | "<=" | ">=" | "&&" | "||" => Some("int".to_string()),
                "=" => lhs_ty,
                _ => match (lhs_ty, rhs_ty) {
                    (Some(a), Some(b)) if a == b => Some(a),
                    _ => None,
                },
            }
        }
        k if k == kinds::UNARY_OPERATOR => {
            let op = graph.node(node)?.property_str("operator").unwrap_or("").to_string();
            let operand_ty = child_type(graph, node, roles::OPERAND);
            match op.as_str() {
                "!" => Some("int".to_string()),
                "-" => operand_ty,
                "*" => operand_ty.and_then(|t| t.strip_suffix('*').map(str::to_string)),
                "&" => operand_ty.map(|t| format!("{t}*")),
                _ => None,
            }
        }
        k if k == kinds::CONDITIONAL_EXPRESSION => {
            match (child_type(graph, node, roles::THEN), child_type(graph, node, roles::ELSE)) {
                (Some(a), Some(b)) if a == b => Some(a),
                _ => None,
            }
        }
        k if k == kinds::MEMBER_EXPRESSION || k == kinds::MEMBER_CALL => {
            field_type(graph, node)
        }
        _ => None,
    };
    Ok(ty)
}

fn child_type(graph: &Graph, node: NodeId, role: &str) -> Option<String> {
    let child = graph.ast_child(node, role)?;
    graph.node(child).ok()?.property_str("type").map(str::to_string)
}

/// Member access typing: strip the pointer for `->`, find the record
/// declaration by the base's type name and take the named field's type.
fn field_type(graph: &Graph, member: NodeId) -> Option<String> {
    let base = graph.ast_child(member, roles::BASE)?;
    let base_ty = graph.node(base).ok()?.property_str("type")?.to_string();
    let arrow = graph.node(member).ok()?.property_str("operator") == Some("->");
    let record_name = if arrow { base_ty.strip_suffix('*')? } else { base_ty.as_str() };
    let field_name = graph.node(member).ok()?.name.clone()?;
    let record = graph
        .nodes_by_name(record_name)
        .into_iter()
        .find(|&n| graph.node_is(n, kinds::RECORD))?;
    let field = graph
        .ast_children_role(record, roles::FIELD)
        .into_iter()
        .find(|&f| graph.node(f).map(|n| n.name.as_deref() == Some(&field_name)).unwrap_or(false))?;
    graph.node(field).ok()?.property_str("type").map(str::to_string)
}

/// Create one `TypeNode` per distinct `type` property in the graph, chain
/// pointer types to their pointees via `elementType`, and link record type
/// nodes to their record declarations.
pub fn materialize_type_nodes(graph: &mut Graph) -> Result<()> {
    let mut names: BTreeSet<String> = BTreeSet::new();
    for node in graph.nodes() {
        if let Some(t) = node.property_str("type") {
            names.insert(t.to_string());
        }
    }
    // pointee chains for pointer types
    let mut all: BTreeSet<String> = BTreeSet::new();
    for name in names {
        let mut cur = name;
        loop {
            all.insert(cur.clone());
            match cur.strip_suffix('*') {
                Some(rest) => cur = rest.to_string(),
                None => break,
            }
        }
    }
    for name in all {
        let existing = graph
            .nodes_by_name(&name)
            .into_iter()
            .find(|&n| graph.node_is(n, kinds::TYPE_NODE));
        if existing.is_some() {
            continue;
        }
        let id = graph.add_node(kinds::TYPE_NODE, Some(name.clone()), None, NodeFlags::NONE)?;
        if let Some(pointee) = name.strip_suffix('*') {
            graph.set_property(id, "elementType", pointee)?;
        }
        if let Some(record) = graph
            .nodes_by_name(&name)
            .into_iter()
            .find(|&n| graph.node_is(n, kinds::RECORD))
        {
            graph.add_edge(Edge::plain(id, record, EdgeLabel::RefersTo))?;
        }
    }
    Ok(())
}
