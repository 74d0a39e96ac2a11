//! Data-flow construction.
//!
//! Edges drawn in both modes:
//! - child to parent wherever the parent's value depends on the child
//!   (operands into operators, initializers into declarations, the
//!   assigned value into both the assignment and its target, conditional
//!   arms into the conditional, return values into the return),
//! - argument to parameter for every resolved call target. Flows merge
//!   across call sites; nothing distinguishes callers.
//!
//! Mode-specific edges for variable access:
//! - declaration link: write reference to declaration, declaration to read
//!   reference;
//! - flow sensitive: reaching definitions over the evaluation order, from
//!   the last valid write (assignment target or declaration) to each point
//!   of use; merges union definition sets, loops iterate to a fixpoint.
//!
//! A write happens at the assignment node, not at its target reference, so
//! in `x = x + 1` the right-hand read still sees the previous definition.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::error::Result;
use crate::graph::{kinds, roles, Edge, EdgeLabel, Graph, NodeId};

use super::{DfgMode, Pass, PassContext};

pub struct DfgPass;

impl Pass for DfgPass {
    fn name(&self) -> &'static str {
        "dfg"
    }

    fn depends_on(&self) -> &'static [&'static str] {
        &["symbols", "calls", "inference", "eog"]
    }

    fn run(&self, ctx: &mut PassContext) -> Result<()> {
        let mut emitted: HashSet<(NodeId, NodeId)> = ctx
            .graph
            .edges()
            .filter(|e| e.label == EdgeLabel::Dfg)
            .map(|e| (e.from, e.to))
            .collect();
        value_dependence_edges(ctx.graph, &mut emitted)?;
        argument_parameter_edges(ctx.graph, &mut emitted)?;
        match ctx.dfg_mode {
            DfgMode::DeclarationLink => declaration_link_edges(ctx.graph, &mut emitted)?,
            DfgMode::FlowSensitive => flow_sensitive_edges(ctx, &mut emitted)?,
        }
        Ok(())
    }
}

fn add(graph: &mut Graph, emitted: &mut HashSet<(NodeId, NodeId)>, from: NodeId, to: NodeId) -> Result<()> {
    if emitted.insert((from, to)) {
        graph.add_edge(Edge::plain(from, to, EdgeLabel::Dfg))?;
    }
    Ok(())
}

/// True when the reference is the direct assignment target.
pub fn is_write_reference(graph: &Graph, reference: NodeId) -> bool {
    let Some(parent) = graph.ast_parent(reference) else { return false };
    let is_assign = graph.node_is(parent, kinds::BINARY_OPERATOR)
        && graph.node(parent).map(|n| n.property_str("operator") == Some("=")).unwrap_or(false);
    is_assign && graph.ast_child(parent, roles::LHS) == Some(reference)
}

fn value_dependence_edges(graph: &mut Graph, emitted: &mut HashSet<(NodeId, NodeId)>) -> Result<()> {
    let nodes: Vec<NodeId> = graph.nodes().map(|n| n.id).collect();
    for node in nodes {
        let kind = graph.kind_name(node)?.to_string();
        match kind.as_str() {
            k if k == kinds::BINARY_OPERATOR => {
                let op = graph.node(node)?.property_str("operator").unwrap_or("").to_string();
                let lhs = graph.ast_child(node, roles::LHS);
                let rhs = graph.ast_child(node, roles::RHS);
                if op == "=" {
                    if let Some(r) = rhs {
                        add(graph, emitted, r, node)?;
                        if let Some(l) = lhs {
                            // the assigned value flows into the write target
                            add(graph, emitted, r, l)?;
                        }
                    }
                } else {
                    for child in [lhs, rhs].into_iter().flatten() {
                        add(graph, emitted, child, node)?;
                    }
                }
            }
            k if k == kinds::UNARY_OPERATOR => {
                if let Some(o) = graph.ast_child(node, roles::OPERAND) {
                    add(graph, emitted, o, node)?;
                }
            }
            k if k == kinds::CONDITIONAL_EXPRESSION => {
                for role in [roles::THEN, roles::ELSE] {
                    if let Some(arm) = graph.ast_child(node, role) {
                        add(graph, emitted, arm, node)?;
                    }
                }
            }
            k if k == kinds::VARIABLE => {
                if let Some(init) = graph.ast_child(node, roles::INITIALIZER) {
                    add(graph, emitted, init, node)?;
                }
            }
            k if k == kinds::RETURN_STATEMENT => {
                if let Some(v) = graph.ast_child(node, roles::VALUE) {
                    add(graph, emitted, v, node)?;
                }
            }
            _ => {}
        }
    }
    Ok(())
}

fn argument_parameter_edges(graph: &mut Graph, emitted: &mut HashSet<(NodeId, NodeId)>) -> Result<()> {
    let calls = graph.nodes_by_kind(kinds::CALL, true)?;
    for call in calls {
        let args = graph.ast_children_role(call, roles::ARGUMENT);
        let targets = graph.neighbors(call, EdgeLabel::Invokes, crate::graph::Direction::Out)?;
        for target in targets {
            let params = graph.ast_children_role(target, roles::PARAMETER);
            for (&arg, &param) in args.iter().zip(params.iter()) {
                add(graph, emitted, arg, param)?;
            }
        }
    }
    Ok(())
}

fn resolved_declaration(graph: &Graph, reference: NodeId) -> Option<NodeId> {
    graph
        .neighbors(reference, EdgeLabel::RefersTo, crate::graph::Direction::Out)
        .ok()?
        .into_iter()
        .next()
}

fn declaration_link_edges(graph: &mut Graph, emitted: &mut HashSet<(NodeId, NodeId)>) -> Result<()> {
    let refs = graph.nodes_by_kind(kinds::REFERENCE, true)?;
    for r in refs {
        let Some(decl) = resolved_declaration(graph, r) else { continue };
        if is_write_reference(graph, r) {
            add(graph, emitted, r, decl)?;
        } else {
            add(graph, emitted, decl, r)?;
        }
    }
    Ok(())
}

// ---- reaching definitions over the EOG -------------------------------------

/// Per-declaration sets of definition sites currently reaching a point.
type DefState = BTreeMap<NodeId, BTreeSet<NodeId>>;

fn flow_sensitive_edges(ctx: &mut PassContext, emitted: &mut HashSet<(NodeId, NodeId)>) -> Result<()> {
    let functions = ctx.graph.nodes_by_kind(kinds::FUNCTION, true)?;
    let mut linked_reads: HashSet<NodeId> = HashSet::new();
    for f in functions {
        run_function(ctx, f, emitted, &mut linked_reads)?;
    }
    // reads the traversal never saw (globals' initializers, unreachable
    // code) fall back to the declaration as their definition
    let refs = ctx.graph.nodes_by_kind(kinds::REFERENCE, true)?;
    for r in refs {
        if linked_reads.contains(&r) || is_write_reference(ctx.graph, r) {
            continue;
        }
        if let Some(decl) = resolved_declaration(ctx.graph, r) {
            add(ctx.graph, emitted, decl, r)?;
        }
    }
    Ok(())
}

fn run_function(
    ctx: &mut PassContext,
    function: NodeId,
    emitted: &mut HashSet<(NodeId, NodeId)>,
    linked_reads: &mut HashSet<NodeId>,
) -> Result<()> {
    let graph = &mut *ctx.graph;
    // nodes reachable over EOG from the entry anchor, in traversal order
    let mut order: Vec<NodeId> = Vec::new();
    let mut seen: HashSet<NodeId> = HashSet::new();
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(function);
    seen.insert(function);
    while let Some(n) = queue.pop_front() {
        order.push(n);
        let mut succ = graph.neighbors(n, EdgeLabel::Eog, crate::graph::Direction::Out)?;
        succ.sort();
        for s in succ {
            if seen.insert(s) {
                queue.push_back(s);
            }
        }
    }
    if order.len() <= 1 {
        return Ok(()); // no body
    }

    let body_nodes: HashSet<NodeId> = graph.ast_subtree(function).into_iter().collect();

    // entry state: parameters define themselves; declarations living
    // outside this function (globals, inferred stand-ins) reach the entry
    let mut entry = DefState::new();
    for &p in &graph.ast_children_role(function, roles::PARAMETER) {
        entry.insert(p, BTreeSet::from([p]));
    }
    for &n in &order {
        if graph.node_is(n, kinds::REFERENCE) {
            if let Some(decl) = resolved_declaration(graph, n) {
                if !body_nodes.contains(&decl) {
                    entry.insert(decl, BTreeSet::from([decl]));
                }
            }
        }
    }

    let mut out: HashMap<NodeId, DefState> = HashMap::new();
    out.insert(function, entry);

    let mut sweeps = 0usize;
    loop {
        sweeps += 1;
        let mut changed = false;
        for &n in &order {
            if n == function {
                continue;
            }
            let mut in_state = DefState::new();
            for e in graph.edges_of(n, EdgeLabel::Eog, crate::graph::Direction::In) {
                if let Some(pred_out) = out.get(&e.from) {
                    for (decl, defs) in pred_out {
                        in_state.entry(*decl).or_default().extend(defs.iter().copied());
                    }
                }
            }
            let new_out = transfer(graph, n, in_state);
            if out.get(&n) != Some(&new_out) {
                out.insert(n, new_out);
                changed = true;
            }
        }
        if !changed {
            break;
        }
        if sweeps > order.len() + 1 {
            // the state lattice grows monotonically, so this cannot happen;
            // bail out rather than loop forever if it ever does
            ctx.diagnostics.push(format!(
                "reaching definitions did not stabilize within {} sweeps in function {function}",
                sweeps
            ));
            break;
        }
    }
    ctx.stats.dfg_fixpoint.push((function, sweeps, order.len()));

    // link each read from the definitions reaching it
    for &n in &order {
        if n == function || !graph.node_is(n, kinds::REFERENCE) || is_write_reference(graph, n) {
            continue;
        }
        let Some(decl) = resolved_declaration(graph, n) else { continue };
        let mut reaching: BTreeSet<NodeId> = BTreeSet::new();
        for e in graph.edges_of(n, EdgeLabel::Eog, crate::graph::Direction::In) {
            if let Some(pred_out) = out.get(&e.from) {
                if let Some(defs) = pred_out.get(&decl) {
                    reaching.extend(defs.iter().copied());
                }
            }
        }
        if reaching.is_empty() {
            reaching.insert(decl); // use before any definition
        }
        linked_reads.insert(n);
        for def in reaching {
            add(graph, emitted, def, n)?;
        }
    }
    Ok(())
}

/// Kill/gen at one node: declarations define themselves; an assignment
/// redefines its target's declaration with the write reference as the
/// definition site.
fn transfer(graph: &Graph, node: NodeId, mut state: DefState) -> DefState {
    if graph.node_is(node, kinds::VARIABLE) || graph.node_is(node, kinds::PARAMETER) {
        state.insert(node, BTreeSet::from([node]));
        return state;
    }
    if graph.node_is(node, kinds::BINARY_OPERATOR)
        && graph.node(node).map(|n| n.property_str("operator") == Some("=")).unwrap_or(false)
    {
        if let Some(lhs) = graph.ast_child(node, roles::LHS) {
            if graph.node_is(lhs, kinds::REFERENCE) {
                if let Some(decl) = resolved_declaration(graph, lhs) {
                    state.insert(decl, BTreeSet::from([lhs]));
                }
            }
        }
    }
    state
}
