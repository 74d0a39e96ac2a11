//! Scope trees: name-validity regions built by the frontends and kept for
//! the passes.
//!
//! A `ScopeManager` tracks the active scope stack while one file is being
//! translated. The resulting trees stay navigable inside a `ScopeForest`,
//! which also answers cross-file lookups through the merged global scopes
//! and records which scope each graph node was created in.

use std::collections::HashMap;
use std::fmt;

use crate::error::{CpgError, Result};
use crate::graph::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScopeId(pub usize);

impl fmt::Display for ScopeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScopeKind {
    Global,
    Record,
    Function,
    Block,
    Loop,
    Try,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JumpKind {
    Break,
    Continue,
}

/// One name-validity region, anchored to the AST node that opened it.
#[derive(Debug, Clone)]
pub struct Scope {
    pub id: ScopeId,
    pub kind: ScopeKind,
    pub ast_node: Option<NodeId>,
    pub parent: Option<ScopeId>,
    pub children: Vec<ScopeId>,
    /// Primary bindings; on redeclaration the newer binding wins.
    pub declarations: HashMap<String, NodeId>,
    /// Every declaration in order, including shadowed duplicates. Call
    /// resolution uses this to see same-name overloads.
    pub declaration_order: Vec<(String, NodeId)>,
    pub break_target: Option<NodeId>,
    pub continue_target: Option<NodeId>,
}

/// All scope trees of an analysis run, one per translation unit.
#[derive(Debug, Default)]
pub struct ScopeForest {
    scopes: Vec<Scope>,
    /// (file label, global scope) per tree, in load order.
    roots: Vec<(String, ScopeId)>,
    /// Scope that was active when a node was created.
    node_scope: HashMap<NodeId, ScopeId>,
    /// AST node -> scope it opened (records, namespaces, functions).
    anchored: HashMap<NodeId, ScopeId>,
    pub diagnostics: Vec<String>,
}

impl ScopeForest {
    pub fn new() -> Self {
        Self::default()
    }

    fn alloc(&mut self, kind: ScopeKind, ast_node: Option<NodeId>, parent: Option<ScopeId>) -> ScopeId {
        let id = ScopeId(self.scopes.len());
        self.scopes.push(Scope {
            id,
            kind,
            ast_node,
            parent,
            children: Vec::new(),
            declarations: HashMap::new(),
            declaration_order: Vec::new(),
            break_target: None,
            continue_target: None,
        });
        if let Some(p) = parent {
            self.scopes[p.0].children.push(id);
        }
        if let Some(n) = ast_node {
            self.anchored.insert(n, id);
        }
        id
    }

    pub fn scope(&self, id: ScopeId) -> &Scope {
        &self.scopes[id.0]
    }

    pub fn scope_mut(&mut self, id: ScopeId) -> &mut Scope {
        &mut self.scopes[id.0]
    }

    pub fn roots(&self) -> &[(String, ScopeId)] {
        &self.roots
    }

    pub fn global_of(&self, file: &str) -> Option<ScopeId> {
        self.roots.iter().find(|(f, _)| f == file).map(|(_, s)| *s)
    }

    pub fn scope_of_node(&self, node: NodeId) -> Option<ScopeId> {
        self.node_scope.get(&node).copied()
    }

    pub fn scope_anchored_at(&self, node: NodeId) -> Option<ScopeId> {
        self.anchored.get(&node).copied()
    }

    pub fn record_node(&mut self, node: NodeId, scope: ScopeId) {
        self.node_scope.insert(node, scope);
    }

    /// Resolve a (possibly dot-qualified) name from a scope. Unqualified
    /// lookup walks the parent chain innermost-first and then the global
    /// scopes of the other trees in load order. Qualified names resolve the
    /// first segment to a declaration anchoring a scope, then look the rest
    /// up inside it.
    pub fn resolve(&self, name: &str, from: ScopeId) -> Option<NodeId> {
        if let Some((head, rest)) = name.split_once('.') {
            let container = self.resolve(head, from)?;
            let inner = self.scope_anchored_at(container)?;
            return self.scope(inner).declarations.get(rest.split('.').next().unwrap()).copied().and_then(|d| {
                match rest.split_once('.') {
                    None => Some(d),
                    Some((_, tail)) => {
                        let next = self.scope_anchored_at(d)?;
                        self.resolve_local_chainless(tail, next)
                    }
                }
            });
        }
        let mut cur = Some(from);
        let mut own_global = from;
        while let Some(s) = cur {
            if let Some(d) = self.scope(s).declarations.get(name) {
                return Some(*d);
            }
            own_global = s;
            cur = self.scope(s).parent;
        }
        for (_, g) in &self.roots {
            if *g == own_global {
                continue;
            }
            if let Some(d) = self.scope(*g).declarations.get(name) {
                return Some(*d);
            }
        }
        None
    }

    fn resolve_local_chainless(&self, name: &str, scope: ScopeId) -> Option<NodeId> {
        match name.split_once('.') {
            None => self.scope(scope).declarations.get(name).copied(),
            Some((head, tail)) => {
                let d = self.scope(scope).declarations.get(head).copied()?;
                let inner = self.scope_anchored_at(d)?;
                self.resolve_local_chainless(tail, inner)
            }
        }
    }

    /// All declarations named `name` visible from `from`, innermost scopes
    /// first, then foreign globals. Shadowed and redeclared bindings are all
    /// included; call resolution filters them further.
    pub fn all_visible(&self, name: &str, from: ScopeId) -> Vec<NodeId> {
        let mut found = Vec::new();
        let mut cur = Some(from);
        let mut own_global = from;
        while let Some(s) = cur {
            for (n, d) in &self.scope(s).declaration_order {
                if n == name && !found.contains(d) {
                    found.push(*d);
                }
            }
            own_global = s;
            cur = self.scope(s).parent;
        }
        for (_, g) in &self.roots {
            if *g == own_global {
                continue;
            }
            for (n, d) in &self.scope(*g).declaration_order {
                if n == name && !found.contains(d) {
                    found.push(*d);
                }
            }
        }
        found
    }

    /// Nearest enclosing loop's jump anchor for a break or continue.
    pub fn jump_target(&self, kind: JumpKind, from: ScopeId) -> Option<NodeId> {
        let mut cur = Some(from);
        while let Some(s) = cur {
            let scope = self.scope(s);
            if scope.kind == ScopeKind::Loop {
                return match kind {
                    JumpKind::Break => scope.break_target,
                    JumpKind::Continue => scope.continue_target,
                };
            }
            cur = scope.parent;
        }
        None
    }
}

/// Stack-tracking view over the forest used while translating one file.
pub struct ScopeManager<'f> {
    forest: &'f mut ScopeForest,
    stack: Vec<ScopeId>,
}

impl<'f> ScopeManager<'f> {
    /// Open a new tree for `file` with a fresh global scope.
    pub fn new(forest: &'f mut ScopeForest, file: &str) -> Self {
        let global = forest.alloc(ScopeKind::Global, None, None);
        forest.roots.push((file.to_string(), global));
        ScopeManager { forest, stack: vec![global] }
    }

    pub fn forest(&mut self) -> &mut ScopeForest {
        self.forest
    }

    pub fn current(&self) -> ScopeId {
        *self.stack.last().expect("scope stack is never empty")
    }

    pub fn depth(&self) -> usize {
        self.stack.len()
    }

    pub fn enter(&mut self, kind: ScopeKind, ast_node: NodeId) -> ScopeId {
        let id = self.forest.alloc(kind, Some(ast_node), Some(self.current()));
        self.stack.push(id);
        id
    }

    pub fn leave(&mut self) -> Result<ScopeId> {
        if self.stack.len() <= 1 {
            return Err(CpgError::ScopeUnderflow);
        }
        Ok(self.stack.pop().unwrap())
    }

    /// Bind `name` in the current scope. Redeclaration is a diagnostic, not
    /// an error; the newer binding wins.
    pub fn declare(&mut self, name: &str, decl: NodeId) {
        let scope_id = self.current();
        let scope = self.forest.scope_mut(scope_id);
        if let Some(old) = scope.declarations.insert(name.to_string(), decl) {
            self.forest
                .diagnostics
                .push(format!("redeclaration of `{name}` (previous declaration is node {old})"));
        }
        self.forest.scope_mut(scope_id).declaration_order.push((name.to_string(), decl));
    }

    pub fn record_node(&mut self, node: NodeId) {
        let scope = self.current();
        self.forest.record_node(node, scope);
    }

    /// Check the traversal left the stack balanced (only the global scope).
    pub fn finish(self) -> Result<ScopeId> {
        if self.stack.len() != 1 {
            return Err(CpgError::Integrity(format!(
                "unbalanced scope traversal: {} scopes still open",
                self.stack.len() - 1
            )));
        }
        Ok(self.stack[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{kinds, Graph, NodeFlags};

    fn node(g: &mut Graph, kind: &str, name: &str) -> NodeId {
        g.add_node(kind, Some(name.to_string()), None, NodeFlags::NONE).unwrap()
    }

    #[test]
    fn enter_leave_builds_a_tree() {
        let mut g = Graph::new();
        let f = node(&mut g, kinds::FUNCTION, "f");
        let body = node(&mut g, kinds::COMPOUND_STATEMENT, "body");
        let mut forest = ScopeForest::new();
        let mut mgr = ScopeManager::new(&mut forest, "a.c");
        let fs = mgr.enter(ScopeKind::Function, f);
        let bs = mgr.enter(ScopeKind::Block, body);
        mgr.leave().unwrap();
        mgr.leave().unwrap();
        let global = mgr.finish().unwrap();
        assert_eq!(forest.scope(fs).parent, Some(global));
        assert_eq!(forest.scope(bs).parent, Some(fs));
        assert_eq!(forest.scope(global).children, vec![fs]);
    }

    #[test]
    fn leave_at_global_underflows() {
        let mut forest = ScopeForest::new();
        let mut mgr = ScopeManager::new(&mut forest, "a.c");
        assert!(matches!(mgr.leave(), Err(CpgError::ScopeUnderflow)));
    }

    #[test]
    fn sibling_functions_are_children_of_global() {
        let mut g = Graph::new();
        let f = node(&mut g, kinds::FUNCTION, "f");
        let h = node(&mut g, kinds::FUNCTION, "h");
        let mut forest = ScopeForest::new();
        let mut mgr = ScopeManager::new(&mut forest, "a.c");
        mgr.enter(ScopeKind::Function, f);
        mgr.leave().unwrap();
        mgr.enter(ScopeKind::Function, h);
        mgr.leave().unwrap();
        let global = mgr.finish().unwrap();
        assert_eq!(forest.scope(global).children.len(), 2);
    }

    #[test]
    fn shadowing_resolves_innermost_first() {
        let mut g = Graph::new();
        let outer = node(&mut g, kinds::VARIABLE, "x");
        let inner = node(&mut g, kinds::VARIABLE, "x");
        let f = node(&mut g, kinds::FUNCTION, "f");
        let mut forest = ScopeForest::new();
        let mut mgr = ScopeManager::new(&mut forest, "a.c");
        mgr.declare("x", outer);
        let block = mgr.enter(ScopeKind::Block, f);
        mgr.declare("x", inner);
        mgr.leave().unwrap();
        let global = mgr.finish().unwrap();
        assert_eq!(forest.resolve("x", block), Some(inner));
        assert_eq!(forest.resolve("x", global), Some(outer));
        assert_eq!(forest.resolve("y", block), None);
    }

    #[test]
    fn redeclaration_is_a_diagnostic_and_newer_wins() {
        let mut g = Graph::new();
        let first = node(&mut g, kinds::VARIABLE, "x");
        let second = node(&mut g, kinds::VARIABLE, "x");
        let mut forest = ScopeForest::new();
        let mut mgr = ScopeManager::new(&mut forest, "a.c");
        mgr.declare("x", first);
        mgr.declare("x", second);
        let global = mgr.finish().unwrap();
        assert_eq!(forest.resolve("x", global), Some(second));
        assert_eq!(forest.diagnostics.len(), 1);
        assert_eq!(forest.all_visible("x", global), vec![first, second]);
    }

    #[test]
    fn qualified_name_resolves_through_record_scope() {
        let mut g = Graph::new();
        let rec = node(&mut g, kinds::RECORD, "Rec");
        let field = node(&mut g, kinds::FIELD, "f");
        let mut forest = ScopeForest::new();
        let mut mgr = ScopeManager::new(&mut forest, "a.c");
        mgr.declare("Rec", rec);
        mgr.enter(ScopeKind::Record, rec);
        mgr.declare("f", field);
        mgr.leave().unwrap();
        let global = mgr.finish().unwrap();
        assert_eq!(forest.resolve("Rec.f", global), Some(field));
        assert_eq!(forest.resolve("Rec.g", global), None);
    }

    #[test]
    fn jump_targets_come_from_the_nearest_loop() {
        let mut g = Graph::new();
        let outer_loop = node(&mut g, kinds::WHILE_STATEMENT, "outer");
        let inner_loop = node(&mut g, kinds::WHILE_STATEMENT, "inner");
        let mut forest = ScopeForest::new();
        let mut mgr = ScopeManager::new(&mut forest, "a.c");
        let global = mgr.current();
        let outer_scope = mgr.enter(ScopeKind::Loop, outer_loop);
        mgr.forest().scope_mut(outer_scope).break_target = Some(outer_loop);
        mgr.forest().scope_mut(outer_scope).continue_target = Some(outer_loop);
        let inner_scope = mgr.enter(ScopeKind::Loop, inner_loop);
        mgr.forest().scope_mut(inner_scope).break_target = Some(inner_loop);
        mgr.forest().scope_mut(inner_scope).continue_target = Some(inner_loop);
        assert_eq!(forest.jump_target(JumpKind::Break, inner_scope), Some(inner_loop));
        assert_eq!(forest.jump_target(JumpKind::Continue, inner_scope), Some(inner_loop));
        assert_eq!(forest.jump_target(JumpKind::Break, outer_scope), Some(outer_loop));
        assert_eq!(forest.jump_target(JumpKind::Break, global), None);
    }

    #[test]
    fn cross_tree_global_lookup_merges_namespaces() {
        let mut g = Graph::new();
        let f = node(&mut g, kinds::FUNCTION, "f");
        let mut forest = ScopeForest::new();
        {
            let mut first = ScopeManager::new(&mut forest, "a.c");
            first.declare("f", f);
            first.finish().unwrap();
        }
        let second_global = {
            let second = ScopeManager::new(&mut forest, "b.c");
            second.finish().unwrap()
        };
        assert_eq!(forest.resolve("f", second_global), Some(f));
    }
}
