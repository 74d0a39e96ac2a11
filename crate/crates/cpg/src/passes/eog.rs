//! Evaluation-order construction, per function body.
//!
//! Expressions connect children left to right and then the parent, like a
//! post-order traversal. Branching nodes (`if`, loops, the conditional
//! expression and the short-circuiting operators) connect their root after
//! the branching expression and before the targets; edges leaving the root
//! carry the branch value that selects the target. A for-loop runs
//! initializer, condition, root, body, iteration, and back to the
//! condition. Compound and declaration statements are transparent
//! containers; problem nodes join as single opaque steps.
//!
//! The function declaration is the entry anchor. There is no materialized
//! exit node: returns and the final open ends are recorded on the function
//! under the `eogExits` property (comma-joined node ids).

use crate::error::Result;
use crate::graph::{kinds, roles, BranchValue, Edge, EdgeLabel, Graph, NodeId};
use crate::scopes::{JumpKind, ScopeForest};

use super::{Pass, PassContext};

pub struct EogPass;

impl Pass for EogPass {
    fn name(&self) -> &'static str {
        "eog"
    }

    fn run(&self, ctx: &mut PassContext) -> Result<()> {
        let functions = ctx.graph.nodes_by_kind(kinds::FUNCTION, true)?;
        for f in functions {
            // idempotence: a function already carrying exits was built
            if ctx.graph.node(f)?.properties.contains_key("eogExits") {
                continue;
            }
            let Some(body) = ctx.graph.ast_child(f, roles::BODY) else { continue };
            let mut builder = Builder {
                graph: ctx.graph,
                scopes: ctx.scopes,
                frontier: vec![(f, None)],
                loops: Vec::new(),
                exits: Vec::new(),
                diagnostics: ctx.diagnostics,
            };
            builder.stmt(body)?;
            let mut exits = builder.exits;
            exits.extend(builder.frontier.iter().map(|(n, _)| *n));
            exits.sort();
            exits.dedup();
            let joined = exits.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",");
            ctx.graph.set_property(f, "eogExits", joined)?;
        }
        Ok(())
    }
}

/// An open end awaiting its successor: the node plus the branch value the
/// connecting edge must carry.
type Open = (NodeId, Option<BranchValue>);

struct LoopCtx {
    loop_node: NodeId,
    breaks: Vec<Open>,
    continues: Vec<Open>,
}

struct Builder<'a> {
    graph: &'a mut Graph,
    scopes: &'a ScopeForest,
    frontier: Vec<Open>,
    loops: Vec<LoopCtx>,
    exits: Vec<NodeId>,
    diagnostics: &'a mut Vec<String>,
}

impl<'a> Builder<'a> {
    /// Wire every open end to `to` and make it the sole open end.
    fn connect(&mut self, to: NodeId) -> Result<()> {
        for (from, branch) in std::mem::take(&mut self.frontier) {
            self.graph.add_edge(Edge::eog(from, to, branch))?;
        }
        self.frontier = vec![(to, None)];
        Ok(())
    }

    /// Build a statement subtree; returns its EOG entry when it has one.
    fn stmt(&mut self, node: NodeId) -> Result<Option<NodeId>> {
        let kind = self.graph.kind_name(node)?.to_string();
        match kind.as_str() {
            k if k == kinds::COMPOUND_STATEMENT => {
                let mut entry = None;
                for child in self.graph.ast_children_role(node, roles::STATEMENT) {
                    let e = self.stmt(child)?;
                    entry = entry.or(e);
                }
                Ok(entry)
            }
            k if k == kinds::DECLARATION_STATEMENT => {
                let mut entry = None;
                for child in self.graph.ast_children_role(node, roles::DECLARATION) {
                    let e = self.expr(child)?;
                    entry = entry.or(e);
                }
                Ok(entry)
            }
            k if k == kinds::IF_STATEMENT => {
                let cond = self.graph.ast_child(node, roles::CONDITION);
                let entry = match cond {
                    Some(c) => self.expr(c)?,
                    None => None,
                };
                self.connect(node)?;
                let entry = entry.or(Some(node));
                let mut after: Vec<Open> = Vec::new();
                self.frontier = vec![(node, Some(BranchValue::True))];
                if let Some(then) = self.graph.ast_child(node, roles::THEN) {
                    self.stmt(then)?;
                }
                after.append(&mut self.frontier);
                match self.graph.ast_child(node, roles::ELSE) {
                    Some(els) => {
                        self.frontier = vec![(node, Some(BranchValue::False))];
                        self.stmt(els)?;
                        after.append(&mut self.frontier);
                    }
                    None => after.push((node, Some(BranchValue::False))),
                }
                self.frontier = after;
                Ok(entry)
            }
            k if k == kinds::WHILE_STATEMENT => {
                let cond = self.graph.ast_child(node, roles::CONDITION);
                let cond_entry = match cond {
                    Some(c) => self.expr(c)?,
                    None => None,
                };
                self.connect(node)?;
                let entry = cond_entry.or(Some(node));
                // re-entry point for the back edge: the condition's entry,
                // or the loop root itself for a missing condition
                let reentry = cond_entry.unwrap_or(node);
                self.loops.push(LoopCtx { loop_node: node, breaks: Vec::new(), continues: Vec::new() });
                self.frontier = if cond.is_some() {
                    vec![(node, Some(BranchValue::True))]
                } else {
                    vec![(node, None)]
                };
                if let Some(body) = self.graph.ast_child(node, roles::BODY) {
                    self.stmt(body)?;
                }
                let ctx = self.loops.pop().expect("loop context pushed above");
                let mut back: Vec<Open> = std::mem::take(&mut self.frontier);
                back.extend(ctx.continues);
                for (from, branch) in back {
                    self.graph.add_edge(Edge::eog(from, reentry, branch))?;
                }
                self.frontier = ctx.breaks;
                if cond.is_some() {
                    self.frontier.push((node, Some(BranchValue::False)));
                }
                Ok(entry)
            }
            k if k == kinds::FOR_STATEMENT => {
                let init = self.graph.ast_child(node, roles::INITIALIZER);
                let cond = self.graph.ast_child(node, roles::CONDITION);
                let iter = self.graph.ast_child(node, roles::ITERATION);
                let mut entry = None;
                if let Some(i) = init {
                    entry = self.expr(i)?;
                }
                let cond_entry = match cond {
                    Some(c) => {
                        let e = self.expr(c)?;
                        entry = entry.or(e);
                        e
                    }
                    None => None,
                };
                self.connect(node)?;
                let entry = entry.or(Some(node));
                let reentry = cond_entry.unwrap_or(node);
                self.loops.push(LoopCtx { loop_node: node, breaks: Vec::new(), continues: Vec::new() });
                self.frontier = if cond.is_some() {
                    vec![(node, Some(BranchValue::True))]
                } else {
                    vec![(node, None)]
                };
                if let Some(body) = self.graph.ast_child(node, roles::BODY) {
                    self.stmt(body)?;
                }
                let ctx = self.loops.pop().expect("loop context pushed above");
                // body falls into the iteration expression, as do continues
                self.frontier.extend(ctx.continues);
                if let Some(it) = iter {
                    self.expr(it)?;
                }
                for (from, branch) in std::mem::take(&mut self.frontier) {
                    self.graph.add_edge(Edge::eog(from, reentry, branch))?;
                }
                self.frontier = ctx.breaks;
                if cond.is_some() {
                    self.frontier.push((node, Some(BranchValue::False)));
                }
                Ok(entry)
            }
            k if k == kinds::RETURN_STATEMENT => {
                let mut entry = None;
                if let Some(v) = self.graph.ast_child(node, roles::VALUE) {
                    entry = self.expr(v)?;
                }
                self.connect(node)?;
                self.exits.push(node);
                self.frontier.clear(); // nothing after a return is reachable
                Ok(entry.or(Some(node)))
            }
            k if k == kinds::BREAK_STATEMENT => {
                self.connect(node)?;
                let target = self
                    .scopes
                    .scope_of_node(node)
                    .and_then(|s| self.scopes.jump_target(JumpKind::Break, s));
                match target.and_then(|t| self.loop_ctx_for_break(t)) {
                    Some(idx) => {
                        let open = std::mem::take(&mut self.frontier);
                        self.loops[idx].breaks.extend(open);
                    }
                    None => {
                        self.diagnostics.push(format!("break outside of a loop (node {node})"));
                        self.frontier.clear();
                    }
                }
                Ok(Some(node))
            }
            k if k == kinds::CONTINUE_STATEMENT => {
                self.connect(node)?;
                let target = self
                    .scopes
                    .scope_of_node(node)
                    .and_then(|s| self.scopes.jump_target(JumpKind::Continue, s));
                match target.and_then(|t| self.loop_ctx_for_continue(t)) {
                    Some(idx) => {
                        let open = std::mem::take(&mut self.frontier);
                        self.loops[idx].continues.extend(open);
                    }
                    None => {
                        self.diagnostics.push(format!("continue outside of a loop (node {node})"));
                        self.frontier.clear();
                    }
                }
                Ok(Some(node))
            }
            _ => self.expr(node),
        }
    }

    /// Break anchors are the loop statement node itself.
    fn loop_ctx_for_break(&self, anchor: NodeId) -> Option<usize> {
        self.loops.iter().rposition(|c| c.loop_node == anchor)
    }

    /// Continue anchors are the loop's condition/iteration node (or the
    /// loop itself); map the anchor back to the loop that owns it by
    /// climbing to the nearest loop statement.
    fn loop_ctx_for_continue(&self, anchor: NodeId) -> Option<usize> {
        let mut cur = Some(anchor);
        while let Some(n) = cur {
            if self.graph.node_is(n, kinds::WHILE_STATEMENT)
                || self.graph.node_is(n, kinds::FOR_STATEMENT)
            {
                if let Some(idx) = self.loops.iter().rposition(|c| c.loop_node == n) {
                    return Some(idx);
                }
            }
            cur = self.graph.ast_parent(n);
        }
        self.loops.iter().rposition(|c| c.loop_node == anchor)
    }

    /// Build an expression subtree; returns the first node evaluated.
    fn expr(&mut self, node: NodeId) -> Result<Option<NodeId>> {
        let kind = self.graph.kind_name(node)?.to_string();
        match kind.as_str() {
            k if k == kinds::BINARY_OPERATOR => {
                let op = self.graph.node(node)?.property_str("operator").unwrap_or("").to_string();
                let lhs = self.graph.ast_child(node, roles::LHS);
                let rhs = self.graph.ast_child(node, roles::RHS);
                if op == "&&" || op == "||" {
                    let entry = match lhs {
                        Some(l) => self.expr(l)?,
                        None => None,
                    };
                    self.connect(node)?;
                    // the side that evaluates the right operand
                    let taken = if op == "&&" { BranchValue::True } else { BranchValue::False };
                    let skipped = if op == "&&" { BranchValue::False } else { BranchValue::True };
                    let mut after = vec![(node, Some(skipped))];
                    if let Some(r) = rhs {
                        self.frontier = vec![(node, Some(taken))];
                        self.expr(r)?;
                        after.append(&mut self.frontier);
                    }
                    self.frontier = after;
                    return Ok(entry.or(Some(node)));
                }
                let mut entry = None;
                if let Some(l) = lhs {
                    entry = self.expr(l)?;
                }
                if let Some(r) = rhs {
                    let e = self.expr(r)?;
                    entry = entry.or(e);
                }
                self.connect(node)?;
                Ok(entry.or(Some(node)))
            }
            k if k == kinds::CONDITIONAL_EXPRESSION => {
                let entry = match self.graph.ast_child(node, roles::CONDITION) {
                    Some(c) => self.expr(c)?,
                    None => None,
                };
                self.connect(node)?;
                let mut after: Vec<Open> = Vec::new();
                for (role, value) in
                    [(roles::THEN, BranchValue::True), (roles::ELSE, BranchValue::False)]
                {
                    match self.graph.ast_child(node, role) {
                        Some(arm) => {
                            self.frontier = vec![(node, Some(value))];
                            self.expr(arm)?;
                            after.append(&mut self.frontier);
                        }
                        None => after.push((node, Some(value))),
                    }
                }
                self.frontier = after;
                Ok(entry.or(Some(node)))
            }
            k if k == kinds::MEMBER_CALL => {
                let mut entry = None;
                if let Some(base) = self.graph.ast_child(node, roles::BASE) {
                    entry = self.expr(base)?;
                }
                for arg in self.graph.ast_children_role(node, roles::ARGUMENT) {
                    let e = self.expr(arg)?;
                    entry = entry.or(e);
                }
                self.connect(node)?;
                Ok(entry.or(Some(node)))
            }
            k if k == kinds::CALL => {
                let mut entry = None;
                for arg in self.graph.ast_children_role(node, roles::ARGUMENT) {
                    let e = self.expr(arg)?;
                    entry = entry.or(e);
                }
                self.connect(node)?;
                Ok(entry.or(Some(node)))
            }
            k if k == kinds::UNARY_OPERATOR => {
                let entry = match self.graph.ast_child(node, roles::OPERAND) {
                    Some(o) => self.expr(o)?,
                    None => None,
                };
                self.connect(node)?;
                Ok(entry.or(Some(node)))
            }
            k if k == kinds::MEMBER_EXPRESSION => {
                let entry = match self.graph.ast_child(node, roles::BASE) {
                    Some(b) => self.expr(b)?,
                    None => None,
                };
                self.connect(node)?;
                Ok(entry.or(Some(node)))
            }
            k if k == kinds::VARIABLE => {
                let entry = match self.graph.ast_child(node, roles::INITIALIZER) {
                    Some(i) => self.expr(i)?,
                    None => None,
                };
                self.connect(node)?;
                Ok(entry.or(Some(node)))
            }
            k if k == kinds::PROBLEM_NODE => {
                // opaque single evaluation step
                self.connect(node)?;
                Ok(Some(node))
            }
            k if k == kinds::LITERAL || k == kinds::REFERENCE => {
                self.connect(node)?;
                Ok(Some(node))
            }
            _ => {
                // unknown construct (e.g. ingested kinds): children in
                // stored order, then the node itself
                let mut entry = None;
                for child in self.graph.ast_children(node) {
                    let e = self.stmt(child)?;
                    entry = entry.or(e);
                }
                self.connect(node)?;
                Ok(entry.or(Some(node)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::c::translate;
    use crate::passes::{DfgMode, PassManager, PassStats};
    use crate::scopes::ScopeForest;

    pub fn analyzed(source: &str) -> Graph {
        let mut g = Graph::new();
        let mut forest = ScopeForest::new();
        translate(&mut g, &mut forest, "t.c", source).unwrap();
        let mut diags = Vec::new();
        let mut stats = PassStats::default();
        PassManager::standard()
            .run_all(&mut g, &mut forest, DfgMode::FlowSensitive, &mut diags, &mut stats, None)
            .unwrap();
        g
    }

    fn eog_succ(g: &Graph, n: NodeId) -> Vec<NodeId> {
        g.neighbors(n, EdgeLabel::Eog, crate::graph::Direction::Out).unwrap()
    }

    fn by_code<'g>(g: &'g Graph, code: &str) -> NodeId {
        g.nodes()
            .find(|n| n.code() == Some(code))
            .unwrap_or_else(|| panic!("no node with code `{code}`"))
            .id
    }

    #[test]
    fn addition_evaluates_children_then_parent() {
        let g = analyzed("int f(int a) { return a + 5; }");
        let a = by_code(&g, "a");
        let five = by_code(&g, "5");
        let plus = by_code(&g, "a + 5");
        assert_eq!(eog_succ(&g, a), vec![five]);
        assert_eq!(eog_succ(&g, five), vec![plus]);
    }

    #[test]
    fn ternary_root_follows_condition_and_precedes_both_arms() {
        let g = analyzed("int f(int a) { return a > 1 ? a : 0; }");
        let cond = by_code(&g, "a > 1");
        let root = by_code(&g, "a > 1 ? a : 0");
        assert_eq!(eog_succ(&g, cond), vec![root]);
        let succ = g
            .edges_of(root, EdgeLabel::Eog, crate::graph::Direction::Out)
            .map(|e| (e.to, e.branch.clone()))
            .collect::<Vec<_>>();
        assert_eq!(succ.len(), 2);
        let then_arm = succ.iter().find(|(_, b)| b == &Some(BranchValue::True)).unwrap().0;
        let else_arm = succ.iter().find(|(_, b)| b == &Some(BranchValue::False)).unwrap().0;
        assert_eq!(g.node(then_arm).unwrap().code(), Some("a"));
        assert_eq!(g.node(else_arm).unwrap().code(), Some("0"));
        // both arms join at the return statement
        let ret = by_code(&g, "return a > 1 ? a : 0;");
        assert_eq!(eog_succ(&g, then_arm), vec![ret]);
        assert_eq!(eog_succ(&g, else_arm), vec![ret]);
    }

    #[test]
    fn while_loop_cycles_body_back_to_the_condition() {
        let g = analyzed("void f(int c) { while (c) { g(); } }");
        let cond = by_code(&g, "c");
        let root = by_code(&g, "while (c) { g(); }");
        let call = by_code(&g, "g()");
        assert_eq!(eog_succ(&g, cond), vec![root]);
        let branches: Vec<(NodeId, Option<BranchValue>)> = g
            .edges_of(root, EdgeLabel::Eog, crate::graph::Direction::Out)
            .map(|e| (e.to, e.branch.clone()))
            .collect();
        assert!(branches.contains(&(call, Some(BranchValue::True))));
        assert!(branches.iter().any(|(_, b)| b == &Some(BranchValue::False)));
        assert_eq!(eog_succ(&g, call), vec![cond]);
    }

    #[test]
    fn for_loop_orders_init_cond_root_body_iter() {
        let g = analyzed("void f() { for (int i = 0; i < 3; i = i + 1) { work(i); } }");
        let init = by_code(&g, "int i = 0;");
        let cond = by_code(&g, "i < 3");
        let root = by_code(&g, "for (int i = 0; i < 3; i = i + 1) { work(i); }");
        let body_call = by_code(&g, "work(i)");
        let iter = by_code(&g, "i = i + 1");
        // initializer reaches the condition's entry
        let cond_entry = by_code(&g, "i < 3"); // i ref comes first
        let _ = cond_entry;
        let i_ref_in_cond = g
            .neighbors(init, EdgeLabel::Eog, crate::graph::Direction::Out)
            .unwrap();
        assert_eq!(i_ref_in_cond.len(), 1);
        // condition's root flows into the loop root
        assert_eq!(eog_succ(&g, cond), vec![root]);
        // body executes on the true branch, before the iteration
        let true_target = g
            .edges_of(root, EdgeLabel::Eog, crate::graph::Direction::Out)
            .find(|e| e.branch == Some(BranchValue::True))
            .map(|e| e.to)
            .unwrap();
        let mut cur = true_target;
        let mut seen_body = false;
        for _ in 0..20 {
            if cur == body_call {
                seen_body = true;
            }
            if cur == iter {
                break;
            }
            let next = eog_succ(&g, cur);
            assert_eq!(next.len(), 1);
            cur = next[0];
        }
        assert!(seen_body, "body should precede the iteration expression");
        assert_eq!(cur, iter);
    }

    #[test]
    fn break_exits_and_continue_reenters() {
        let g = analyzed("void f(int c) { while (c) { if (c) { break; } continue; } done(); }");
        let brk = by_code(&g, "break;");
        let cont = by_code(&g, "continue;");
        let done = by_code(&g, "done()");
        let cond = by_code(&g, "c"); // first `c` is the while condition
        assert_eq!(eog_succ(&g, brk), vec![done]);
        assert_eq!(eog_succ(&g, cont), vec![cond]);
    }

    #[test]
    fn code_after_return_is_unreachable() {
        let g = analyzed("int f() { return 1; g(); }");
        let call = by_code(&g, "g()");
        assert!(g
            .neighbors(call, EdgeLabel::Eog, crate::graph::Direction::In)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn short_circuit_and_branches_over_the_rhs() {
        let g = analyzed("void f(int a, int b) { use(a && b); }");
        let a = by_code(&g, "a");
        let root = by_code(&g, "a && b");
        let b = by_code(&g, "b");
        assert_eq!(eog_succ(&g, a), vec![root]);
        let branches: Vec<(NodeId, Option<BranchValue>)> = g
            .edges_of(root, EdgeLabel::Eog, crate::graph::Direction::Out)
            .map(|e| (e.to, e.branch.clone()))
            .collect();
        assert!(branches.contains(&(b, Some(BranchValue::True))));
        // false edge skips b entirely
        let false_target = branches.iter().find(|(_, br)| br == &Some(BranchValue::False)).unwrap().0;
        assert_ne!(false_target, b);
        // rhs and the false edge join at the call
        assert_eq!(eog_succ(&g, b), vec![false_target]);
    }

    #[test]
    fn eog_stays_within_one_function() {
        let g = analyzed("int a() { return 1; }\nint b() { return a(); }");
        // node sets of the two functions must not share EOG edges
        let funcs = g.nodes_by_kind(kinds::FUNCTION, false).unwrap();
        for f in funcs {
            let members: std::collections::HashSet<NodeId> =
                g.ast_subtree(f).into_iter().collect();
            for e in g.edges().filter(|e| e.label == EdgeLabel::Eog) {
                assert_eq!(
                    members.contains(&e.from),
                    members.contains(&e.to),
                    "EOG edge {} -> {} crosses a function boundary",
                    e.from,
                    e.to
                );
            }
        }
    }

    #[test]
    fn branch_values_are_distinct_per_node() {
        let g = analyzed(
            "int f(int a, int b) { if (a) { while (b) { b = b - 1; } } else { return a || b; } return 0; }",
        );
        for node in g.nodes().map(|n| n.id).collect::<Vec<_>>() {
            let out: Vec<Option<BranchValue>> = g
                .edges_of(node, EdgeLabel::Eog, crate::graph::Direction::Out)
                .map(|e| e.branch.clone())
                .collect();
            if out.len() > 1 {
                let mut seen = std::collections::BTreeSet::new();
                for b in &out {
                    let key = b.as_ref().map(|v| v.to_string()).unwrap_or_default();
                    assert!(seen.insert(key), "node {node} has duplicate branch values {out:?}");
                }
            }
        }
    }

    #[test]
    fn implicit_return_is_the_last_step() {
        let g = analyzed("void f() { int x = 1; }");
        let f = g.nodes_by_kind(kinds::FUNCTION, false).unwrap()[0];
        let exits = g.node(f).unwrap().property_str("eogExits").unwrap().to_string();
        let ret = g.nodes_by_kind(kinds::RETURN_STATEMENT, false).unwrap()[0];
        assert_eq!(exits, ret.to_string());
    }

    #[test]
    fn descendants_precede_expression_parents() {
        // post-order property spot check on a nested expression
        let g = analyzed("int f(int a, int b) { return (a + 1) * (b - 2); }");
        let mul = by_code(&g, "(a + 1) * (b - 2)");
        let mut reachable_backwards = std::collections::HashSet::new();
        let mut stack = vec![mul];
        while let Some(n) = stack.pop() {
            for p in g.neighbors(n, EdgeLabel::Eog, crate::graph::Direction::In).unwrap() {
                if reachable_backwards.insert(p) {
                    stack.push(p);
                }
            }
        }
        for d in g.ast_subtree(mul) {
            if d != mul {
                assert!(
                    reachable_backwards.contains(&d),
                    "descendant {d} should precede the operator"
                );
            }
        }
    }
}
