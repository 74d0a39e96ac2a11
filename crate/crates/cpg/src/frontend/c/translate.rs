//! Translation of the parsed C subset into the language-independent AST,
//! building the scope tree as it walks.

use crate::error::Result;
use crate::frontend::{CoverageRecord, TranslationResult};
use crate::graph::{kinds, roles, Edge, Graph, NodeFlags, NodeId, PropertyValue, SourceLocation};
use crate::metrics::sloc_count;
use crate::scopes::{ScopeForest, ScopeKind, ScopeManager};

use super::parser::{
    parse, BaseType, Block, Expr, ForInit, Item, ParseTree, Problem, Span, Stmt, VarDecl,
};

pub fn translate(
    graph: &mut Graph,
    forest: &mut ScopeForest,
    file: &str,
    source: &str,
) -> Result<TranslationResult> {
    let tree = parse(source);
    translate_tree(graph, forest, file, source, &tree)
}

pub fn translate_tree(
    graph: &mut Graph,
    forest: &mut ScopeForest,
    file: &str,
    source: &str,
    tree: &ParseTree,
) -> Result<TranslationResult> {
    let mgr = ScopeManager::new(forest, file);
    let mut t = Translator { graph, mgr, file, source };
    let root = t.graph.add_node(kinds::TRANSLATION_UNIT, Some(file.to_string()), None, NodeFlags::NONE)?;
    t.mgr.record_node(root);

    let mut index = 0u32;
    for item in &tree.items {
        let child = match item {
            Item::Function(f) => t.function(f)?,
            Item::Struct(s) => t.record(s)?,
            Item::Global(v) => t.variable(v)?,
            Item::Problem(p) => t.problem(p)?,
        };
        t.graph.add_edge(Edge::ast(root, child, roles::DECLARATION, Some(index)))?;
        index += 1;
    }

    let global_scope = t.mgr.finish()?;
    insert_implicit_returns(graph, root)?;

    let coverage = coverage_records(graph, root);
    let sloc = sloc_count(source);
    Ok(TranslationResult {
        file: file.to_string(),
        language: "c",
        root,
        global_scope,
        coverage,
        sloc_lines: sloc.lines,
        diagnostics: Vec::new(),
    })
}

struct Translator<'a, 'f> {
    graph: &'a mut Graph,
    mgr: ScopeManager<'f>,
    file: &'a str,
    source: &'a str,
}

impl<'a, 'f> Translator<'a, 'f> {
    fn mk(&mut self, kind: &str, name: Option<&str>, span: Span) -> Result<NodeId> {
        let loc = SourceLocation::new(
            self.file,
            span.start_line,
            span.start_col,
            span.end_line,
            span.end_col,
        )?;
        let id = self.graph.add_node(kind, name.map(str::to_string), Some(loc), NodeFlags::NONE)?;
        let code = self.source.get(span.start_byte..span.end_byte).unwrap_or("");
        self.graph.set_property(id, "code", code)?;
        self.mgr.record_node(id);
        Ok(id)
    }

    fn function(&mut self, f: &super::parser::FunctionDef) -> Result<NodeId> {
        let id = self.mk(kinds::FUNCTION, Some(&f.name), f.span)?;
        self.graph.set_property(id, "type", f.return_type.display())?;
        self.mgr.declare(&f.name, id);
        self.mgr.enter(ScopeKind::Function, id);
        for (i, p) in f.params.iter().enumerate() {
            let pid = self.mk(kinds::PARAMETER, p.name.as_deref(), p.span)?;
            self.graph.set_property(pid, "type", p.ty.display())?;
            if let Some(name) = &p.name {
                self.mgr.declare(name, pid);
            }
            self.graph.add_edge(Edge::ast(id, pid, roles::PARAMETER, Some(i as u32)))?;
        }
        if let Some(body) = &f.body {
            let bid = self.block(body)?;
            self.graph.add_edge(Edge::ast(id, bid, roles::BODY, None))?;
        }
        self.mgr.leave()?;
        Ok(id)
    }

    fn record(&mut self, s: &super::parser::StructDef) -> Result<NodeId> {
        let id = self.mk(kinds::RECORD, Some(&s.name), s.span)?;
        self.mgr.declare(&s.name, id);
        self.mgr.enter(ScopeKind::Record, id);
        for (i, field) in s.fields.iter().enumerate() {
            let fid = self.mk(kinds::FIELD, Some(&field.name), field.span)?;
            self.graph.set_property(fid, "type", field.ty.display())?;
            self.mgr.declare(&field.name, fid);
            self.graph.add_edge(Edge::ast(id, fid, roles::FIELD, Some(i as u32)))?;
        }
        self.mgr.leave()?;
        Ok(id)
    }

    fn variable(&mut self, v: &VarDecl) -> Result<NodeId> {
        let id = self.mk(kinds::VARIABLE, Some(&v.name), v.span)?;
        self.graph.set_property(id, "type", v.ty.display())?;
        if matches!(v.ty.base, BaseType::Struct(_)) {
            self.graph.set_property(id, "recordType", record_name(&v.ty.base))?;
        }
        if let Some(init) = &v.init {
            let iid = self.expr(init)?;
            self.graph.add_edge(Edge::ast(id, iid, roles::INITIALIZER, None))?;
        }
        self.mgr.declare(&v.name, id);
        Ok(id)
    }

    fn problem(&mut self, p: &Problem) -> Result<NodeId> {
        let id = self.mk(kinds::PROBLEM_NODE, None, p.span)?;
        self.graph.set_property(id, "message", p.message.as_str())?;
        Ok(id)
    }

    fn block(&mut self, b: &Block) -> Result<NodeId> {
        let id = self.mk(kinds::COMPOUND_STATEMENT, None, b.span)?;
        self.mgr.enter(ScopeKind::Block, id);
        let mut index = 0u32;
        for stmt in &b.stmts {
            if let Some(sid) = self.stmt(stmt)? {
                self.graph.add_edge(Edge::ast(id, sid, roles::STATEMENT, Some(index)))?;
                index += 1;
            }
        }
        self.mgr.leave()?;
        Ok(id)
    }

    /// Translate a statement; empty statements produce no node.
    fn stmt(&mut self, s: &Stmt) -> Result<Option<NodeId>> {
        let id = match s {
            Stmt::Empty(_) => return Ok(None),
            Stmt::Compound(b) => self.block(b)?,
            Stmt::If { cond, then_branch, else_branch, span } => {
                let id = self.mk(kinds::IF_STATEMENT, None, *span)?;
                let cid = self.expr(cond)?;
                self.graph.add_edge(Edge::ast(id, cid, roles::CONDITION, None))?;
                if let Some(tid) = self.stmt(then_branch)? {
                    self.graph.add_edge(Edge::ast(id, tid, roles::THEN, None))?;
                }
                if let Some(else_branch) = else_branch {
                    if let Some(eid) = self.stmt(else_branch)? {
                        self.graph.add_edge(Edge::ast(id, eid, roles::ELSE, None))?;
                    }
                }
                id
            }
            Stmt::While { cond, body, span } => {
                let id = self.mk(kinds::WHILE_STATEMENT, None, *span)?;
                let scope = self.mgr.enter(ScopeKind::Loop, id);
                self.mgr.forest().scope_mut(scope).break_target = Some(id);
                let cid = self.expr(cond)?;
                self.graph.add_edge(Edge::ast(id, cid, roles::CONDITION, None))?;
                self.mgr.forest().scope_mut(scope).continue_target = Some(cid);
                if let Some(bid) = self.stmt(body)? {
                    self.graph.add_edge(Edge::ast(id, bid, roles::BODY, None))?;
                }
                self.mgr.leave()?;
                id
            }
            Stmt::For { init, cond, iter, body, span } => {
                let id = self.mk(kinds::FOR_STATEMENT, None, *span)?;
                let scope = self.mgr.enter(ScopeKind::Loop, id);
                self.mgr.forest().scope_mut(scope).break_target = Some(id);
                if let Some(init) = init {
                    let iid = match init {
                        ForInit::Decl(d) => self.variable(d)?,
                        ForInit::Expr(e) => self.expr(e)?,
                    };
                    self.graph.add_edge(Edge::ast(id, iid, roles::INITIALIZER, None))?;
                }
                let mut continue_anchor = id;
                if let Some(cond) = cond {
                    let cid = self.expr(cond)?;
                    self.graph.add_edge(Edge::ast(id, cid, roles::CONDITION, None))?;
                    continue_anchor = cid;
                }
                if let Some(iter) = iter {
                    let itid = self.expr(iter)?;
                    self.graph.add_edge(Edge::ast(id, itid, roles::ITERATION, None))?;
                    continue_anchor = itid;
                }
                self.mgr.forest().scope_mut(scope).continue_target = Some(continue_anchor);
                if let Some(bid) = self.stmt(body)? {
                    self.graph.add_edge(Edge::ast(id, bid, roles::BODY, None))?;
                }
                self.mgr.leave()?;
                id
            }
            Stmt::Return { value, span } => {
                let id = self.mk(kinds::RETURN_STATEMENT, None, *span)?;
                if let Some(v) = value {
                    let vid = self.expr(v)?;
                    self.graph.add_edge(Edge::ast(id, vid, roles::VALUE, None))?;
                }
                id
            }
            Stmt::Break(span) => self.mk(kinds::BREAK_STATEMENT, None, *span)?,
            Stmt::Continue(span) => self.mk(kinds::CONTINUE_STATEMENT, None, *span)?,
            Stmt::Decl(d) => {
                let id = self.mk(kinds::DECLARATION_STATEMENT, None, d.span)?;
                let vid = self.variable(d)?;
                self.graph.add_edge(Edge::ast(id, vid, roles::DECLARATION, None))?;
                id
            }
            Stmt::Expr(e) => self.expr(e)?,
            Stmt::Problem(p) => self.problem(p)?,
        };
        Ok(Some(id))
    }

    fn expr(&mut self, e: &Expr) -> Result<NodeId> {
        match e {
            Expr::IntLit { value, span } => {
                let id = self.mk(kinds::LITERAL, None, *span)?;
                self.graph.set_property(id, "value", *value)?;
                Ok(id)
            }
            Expr::CharLit { value, span } => {
                let id = self.mk(kinds::LITERAL, None, *span)?;
                self.graph.set_property(id, "value", *value)?;
                self.graph.set_property(id, "charLiteral", true)?;
                Ok(id)
            }
            Expr::StrLit { value, span } => {
                let id = self.mk(kinds::LITERAL, None, *span)?;
                self.graph.set_property(id, "value", value.as_str())?;
                Ok(id)
            }
            Expr::NullLit { span } => {
                let id = self.mk(kinds::LITERAL, None, *span)?;
                self.graph.set_property(id, "value", PropertyValue::Null)?;
                Ok(id)
            }
            Expr::Ref { name, span } => self.mk(kinds::REFERENCE, Some(name), *span),
            Expr::Binary { op, lhs, rhs, span } => {
                let id = self.mk(kinds::BINARY_OPERATOR, Some(op), *span)?;
                self.graph.set_property(id, "operator", *op)?;
                let l = self.expr(lhs)?;
                let r = self.expr(rhs)?;
                self.graph.add_edge(Edge::ast(id, l, roles::LHS, None))?;
                self.graph.add_edge(Edge::ast(id, r, roles::RHS, None))?;
                Ok(id)
            }
            Expr::Unary { op, operand, span } => {
                let id = self.mk(kinds::UNARY_OPERATOR, Some(op), *span)?;
                self.graph.set_property(id, "operator", *op)?;
                let o = self.expr(operand)?;
                self.graph.add_edge(Edge::ast(id, o, roles::OPERAND, None))?;
                Ok(id)
            }
            Expr::Ternary { cond, then_expr, else_expr, span } => {
                let id = self.mk(kinds::CONDITIONAL_EXPRESSION, None, *span)?;
                let c = self.expr(cond)?;
                let t = self.expr(then_expr)?;
                let e2 = self.expr(else_expr)?;
                self.graph.add_edge(Edge::ast(id, c, roles::CONDITION, None))?;
                self.graph.add_edge(Edge::ast(id, t, roles::THEN, None))?;
                self.graph.add_edge(Edge::ast(id, e2, roles::ELSE, None))?;
                Ok(id)
            }
            Expr::Call { name, args, span, .. } => {
                let id = self.mk(kinds::CALL, Some(name), *span)?;
                for (i, arg) in args.iter().enumerate() {
                    let aid = self.expr(arg)?;
                    self.graph.add_edge(Edge::ast(id, aid, roles::ARGUMENT, Some(i as u32)))?;
                }
                Ok(id)
            }
            Expr::MemberCall { base, field, arrow, args, span } => {
                let id = self.mk(kinds::MEMBER_CALL, Some(field), *span)?;
                self.graph.set_property(id, "operator", if *arrow { "->" } else { "." })?;
                let b = self.expr(base)?;
                self.graph.add_edge(Edge::ast(id, b, roles::BASE, None))?;
                for (i, arg) in args.iter().enumerate() {
                    let aid = self.expr(arg)?;
                    self.graph.add_edge(Edge::ast(id, aid, roles::ARGUMENT, Some(i as u32)))?;
                }
                Ok(id)
            }
            Expr::Member { base, field, arrow, span } => {
                let id = self.mk(kinds::MEMBER_EXPRESSION, Some(field), *span)?;
                self.graph.set_property(id, "operator", if *arrow { "->" } else { "." })?;
                let b = self.expr(base)?;
                self.graph.add_edge(Edge::ast(id, b, roles::BASE, None))?;
                Ok(id)
            }
        }
    }
}

fn record_name(base: &BaseType) -> &str {
    match base {
        BaseType::Struct(n) => n,
        _ => "",
    }
}

/// Append an IMPLICIT return to every `void` function whose body can fall
/// through. Non-void fall-through is a defect analyses may flag, so it is
/// left untouched. Applying this twice is a no-op.
pub fn insert_implicit_returns(graph: &mut Graph, root: NodeId) -> Result<()> {
    let functions: Vec<NodeId> = graph
        .ast_subtree(root)
        .into_iter()
        .filter(|&n| graph.node_is(n, kinds::FUNCTION))
        .collect();
    for f in functions {
        if graph.node(f)?.property_str("type") != Some("void") {
            continue;
        }
        let Some(body) = graph.ast_child(f, roles::BODY) else { continue };
        if !falls_through(graph, body) {
            continue;
        }
        let ret = graph.add_node(kinds::RETURN_STATEMENT, None, None, NodeFlags::IMPLICIT)?;
        let next = graph.ast_children_role(body, roles::STATEMENT).len() as u32;
        graph.add_edge(Edge::ast(body, ret, roles::STATEMENT, Some(next)))?;
    }
    Ok(())
}

/// Conservative: true when execution may run past the end of `stmt`.
fn falls_through(graph: &Graph, stmt: NodeId) -> bool {
    let kind = graph.kind_name(stmt).unwrap_or("");
    match kind {
        k if k == kinds::RETURN_STATEMENT => false,
        k if k == kinds::BREAK_STATEMENT || k == kinds::CONTINUE_STATEMENT => false,
        k if k == kinds::COMPOUND_STATEMENT => {
            match graph.ast_children_role(stmt, roles::STATEMENT).last() {
                Some(&last) => falls_through(graph, last),
                None => true,
            }
        }
        k if k == kinds::IF_STATEMENT => {
            let then_ft = graph.ast_child(stmt, roles::THEN).map_or(true, |t| falls_through(graph, t));
            match graph.ast_child(stmt, roles::ELSE) {
                Some(e) => then_ft || falls_through(graph, e),
                None => true,
            }
        }
        _ => true,
    }
}

fn coverage_records(graph: &Graph, root: NodeId) -> Vec<CoverageRecord> {
    graph
        .ast_subtree(root)
        .into_iter()
        .map(|n| CoverageRecord { node: n, handled: !graph.node_is(n, kinds::PROBLEM_NODE) })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Direction, EdgeLabel};

    fn translate_one(source: &str) -> (Graph, ScopeForest, TranslationResult) {
        let mut g = Graph::new();
        let mut forest = ScopeForest::new();
        let result = translate(&mut g, &mut forest, "test.c", source).unwrap();
        (g, forest, result)
    }

    #[test]
    fn assignment_builds_the_expected_shape() {
        let (g, _, r) = translate_one("void f() { a = b + 5; }");
        let assigns = g.nodes_by_kind(kinds::BINARY_OPERATOR, false).unwrap();
        let assign = *assigns
            .iter()
            .find(|&&n| g.node(n).unwrap().property_str("operator") == Some("="))
            .unwrap();
        let lhs = g.ast_child(assign, roles::LHS).unwrap();
        let rhs = g.ast_child(assign, roles::RHS).unwrap();
        assert_eq!(g.kind_name(lhs).unwrap(), kinds::REFERENCE);
        assert_eq!(g.node(lhs).unwrap().name.as_deref(), Some("a"));
        assert_eq!(g.node(rhs).unwrap().property_str("operator"), Some("+"));
        let b = g.ast_child(rhs, roles::LHS).unwrap();
        let five = g.ast_child(rhs, roles::RHS).unwrap();
        assert_eq!(g.node(b).unwrap().name.as_deref(), Some("b"));
        assert_eq!(g.node(five).unwrap().properties.get("value"), Some(&PropertyValue::Int(5)));
        assert_eq!(g.kind_name(r.root).unwrap(), kinds::TRANSLATION_UNIT);
    }

    #[test]
    fn arrow_member_access_keeps_base_and_operator() {
        let (g, _, _) = translate_one("int f(struct S *p) { return p->f; }");
        let members = g.nodes_by_kind(kinds::MEMBER_EXPRESSION, false).unwrap();
        assert_eq!(members.len(), 1);
        let m = members[0];
        assert_eq!(g.node(m).unwrap().property_str("operator"), Some("->"));
        let base = g.ast_child(m, roles::BASE).unwrap();
        assert_eq!(g.node(base).unwrap().name.as_deref(), Some("p"));
    }

    #[test]
    fn struct_becomes_record_with_fields() {
        let (g, _, _) = translate_one("struct S { int a; char *b; };");
        let recs = g.nodes_by_kind(kinds::RECORD, false).unwrap();
        assert_eq!(recs.len(), 1);
        let fields = g.ast_children_role(recs[0], roles::FIELD);
        assert_eq!(fields.len(), 2);
        assert_eq!(g.node(fields[1]).unwrap().property_str("type"), Some("char*"));
    }

    #[test]
    fn void_fallthrough_gains_an_implicit_return() {
        let (g, _, _) = translate_one("void f() { x = 1; }");
        let rets = g.nodes_by_kind(kinds::RETURN_STATEMENT, false).unwrap();
        assert_eq!(rets.len(), 1);
        assert!(g.node(rets[0]).unwrap().flags.implicit);
        assert!(g.node(rets[0]).unwrap().location.is_none());
        // the implicit return is the body's last child
        let f = g.nodes_by_kind(kinds::FUNCTION, false).unwrap()[0];
        let body = g.ast_child(f, roles::BODY).unwrap();
        assert_eq!(g.ast_children_role(body, roles::STATEMENT).last(), Some(&rets[0]));
    }

    #[test]
    fn explicit_return_stays_untouched() {
        let (g, _, _) = translate_one("void f() { return; }");
        let rets = g.nodes_by_kind(kinds::RETURN_STATEMENT, false).unwrap();
        assert_eq!(rets.len(), 1);
        assert!(!g.node(rets[0]).unwrap().flags.implicit);
    }

    #[test]
    fn non_void_missing_return_is_left_alone() {
        let (g, _, _) = translate_one("int f() { }");
        assert!(g.nodes_by_kind(kinds::RETURN_STATEMENT, false).unwrap().is_empty());
    }

    #[test]
    fn insert_implicit_is_idempotent() {
        let mut g = Graph::new();
        let mut forest = ScopeForest::new();
        let r = translate(&mut g, &mut forest, "t.c", "void f() { x = 1; }").unwrap();
        let before = g.node_count();
        insert_implicit_returns(&mut g, r.root).unwrap();
        assert_eq!(g.node_count(), before);
    }

    #[test]
    fn locations_slice_back_to_the_source() {
        let source = "int f() {\n  return 40 + 2;\n}\n";
        let (g, _, _) = translate_one(source);
        for node in g.nodes() {
            if let Some(loc) = &node.location {
                let code = node.code().unwrap();
                assert!(source.contains(code), "code of node {} not found in source", node.id);
                assert!(loc.start_line <= loc.end_line);
            }
        }
        let adds = g.nodes_by_kind(kinds::BINARY_OPERATOR, false).unwrap();
        assert_eq!(g.node(adds[0]).unwrap().code(), Some("40 + 2"));
    }

    #[test]
    fn child_lines_stay_within_parent_lines() {
        let source = "int f(int a) {\n  if (a > 1) {\n    return a;\n  }\n  return 0;\n}\n";
        let (g, _, r) = translate_one(source);
        for &n in &g.ast_subtree(r.root) {
            let Some(parent_loc) = g.node(n).unwrap().location.clone() else { continue };
            for c in g.ast_children(n) {
                if let Some(child_loc) = &g.node(c).unwrap().location {
                    assert!(child_loc.start_line >= parent_loc.start_line);
                    assert!(child_loc.end_line <= parent_loc.end_line);
                }
            }
        }
    }

    #[test]
    fn scopes_anchor_functions_and_loops() {
        let (g, forest, _) = translate_one("int f(int a) { while (a) { break; } return a; }");
        let f = g.nodes_by_kind(kinds::FUNCTION, false).unwrap()[0];
        let fscope = forest.scope_anchored_at(f).unwrap();
        assert_eq!(forest.scope(fscope).kind, ScopeKind::Function);
        let brk = g.nodes_by_kind(kinds::BREAK_STATEMENT, false).unwrap()[0];
        let bscope = forest.scope_of_node(brk).unwrap();
        let w = g.nodes_by_kind(kinds::WHILE_STATEMENT, false).unwrap()[0];
        assert_eq!(forest.jump_target(crate::scopes::JumpKind::Break, bscope), Some(w));
    }

    #[test]
    fn problem_region_covers_skipped_tokens() {
        let (g, _, r) = translate_one("int f() { @@@ }\nint g() { return 1; }");
        let problems = g.nodes_by_kind(kinds::PROBLEM_NODE, false).unwrap();
        assert_eq!(problems.len(), 1);
        assert!(r.coverage.iter().any(|c| c.node == problems[0] && !c.handled));
        // the second function still translated
        assert_eq!(g.nodes_by_kind(kinds::FUNCTION, false).unwrap().len(), 2);
    }

    #[test]
    fn translation_unit_is_the_only_ast_root() {
        let (g, _, r) = translate_one("int x;\nint f() { return x; }");
        for node in g.nodes() {
            let parents = g.neighbors(node.id, EdgeLabel::Ast, Direction::In).unwrap();
            if node.id == r.root {
                assert!(parents.is_empty());
            } else {
                assert_eq!(parents.len(), 1, "node {} should have one AST parent", node.id);
            }
        }
    }
}
