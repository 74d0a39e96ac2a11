//! The labeled directed property multi-graph underlying all analyses.
//!
//! Nodes represent syntactic or semantic entities; edges carry one of six
//! labels. `AST` edges form a forest rooted at translation units and carry
//! a rôle (e.g. `LHS`) plus an index wherever syntactic order matters.
//! `EOG` edges order evaluation, `DFG` edges carry value flow, and
//! `REFERS_TO` / `INVOKES` / `SUPERTYPE` link references, calls and types
//! to their targets.

pub mod taxonomy;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{CpgError, Result};
pub use taxonomy::{kinds, KindId, KindRegistry};

/// Dense node identifier, assigned in creation order starting at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Edge rôle names used on AST edges.
pub mod roles {
    pub const LHS: &str = "LHS";
    pub const RHS: &str = "RHS";
    pub const CONDITION: &str = "CONDITION";
    pub const THEN: &str = "THEN";
    pub const ELSE: &str = "ELSE";
    pub const BODY: &str = "BODY";
    pub const ARGUMENT: &str = "ARGUMENT";
    pub const PARAMETER: &str = "PARAMETER";
    pub const INITIALIZER: &str = "INITIALIZER";
    pub const ITERATION: &str = "ITERATION";
    pub const BASE: &str = "BASE";
    pub const OPERAND: &str = "OPERAND";
    pub const VALUE: &str = "VALUE";
    pub const STATEMENT: &str = "STATEMENT";
    pub const DECLARATION: &str = "DECLARATION";
    pub const FIELD: &str = "FIELD";
}

/// Scalar property value. Restricting to scalars keeps exports bit-exact.
#[derive(Debug, Clone, PartialEq)]
pub enum PropertyValue {
    Str(String),
    Int(i64),
    Bool(bool),
    Null,
}

impl PropertyValue {
    pub fn as_str(&self) -> Option<&str> {
        match self {
            PropertyValue::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_null(&self) -> bool {
        matches!(self, PropertyValue::Null)
    }
}

impl From<&str> for PropertyValue {
    fn from(s: &str) -> Self {
        PropertyValue::Str(s.to_string())
    }
}

impl From<String> for PropertyValue {
    fn from(s: String) -> Self {
        PropertyValue::Str(s)
    }
}

impl From<i64> for PropertyValue {
    fn from(v: i64) -> Self {
        PropertyValue::Int(v)
    }
}

impl From<bool> for PropertyValue {
    fn from(v: bool) -> Self {
        PropertyValue::Bool(v)
    }
}

/// 1-based source span. `start` is never after `end`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceLocation {
    pub file: String,
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl SourceLocation {
    pub fn new(file: impl Into<String>, start_line: u32, start_col: u32, end_line: u32, end_col: u32) -> Result<Self> {
        if start_line > end_line || (start_line == end_line && start_col > end_col) {
            return Err(CpgError::Attribute(format!(
                "invalid source span {start_line}:{start_col}..{end_line}:{end_col}"
            )));
        }
        Ok(SourceLocation { file: file.into(), start_line, start_col, end_line, end_col })
    }

    pub fn lines(&self) -> impl Iterator<Item = u32> {
        self.start_line..=self.end_line
    }
}

impl fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.start_line, self.start_col)
    }
}

/// Node flags. IMPLICIT marks entities the language implies but the source
/// does not spell out; INFERRED marks stand-ins for missing code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NodeFlags {
    pub implicit: bool,
    pub inferred: bool,
}

impl NodeFlags {
    pub const NONE: NodeFlags = NodeFlags { implicit: false, inferred: false };
    pub const IMPLICIT: NodeFlags = NodeFlags { implicit: true, inferred: false };
    pub const INFERRED: NodeFlags = NodeFlags { implicit: false, inferred: true };

    pub fn names(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.implicit {
            v.push("IMPLICIT");
        }
        if self.inferred {
            v.push("INFERRED");
        }
        v
    }
}

/// Edge label; the six sub-graphs of the property graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeLabel {
    Ast,
    Eog,
    Dfg,
    RefersTo,
    Invokes,
    Supertype,
}

impl EdgeLabel {
    pub const ALL: [EdgeLabel; 6] = [
        EdgeLabel::Ast,
        EdgeLabel::Eog,
        EdgeLabel::Dfg,
        EdgeLabel::RefersTo,
        EdgeLabel::Invokes,
        EdgeLabel::Supertype,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeLabel::Ast => "AST",
            EdgeLabel::Eog => "EOG",
            EdgeLabel::Dfg => "DFG",
            EdgeLabel::RefersTo => "REFERS_TO",
            EdgeLabel::Invokes => "INVOKES",
            EdgeLabel::Supertype => "SUPERTYPE",
        }
    }

    pub fn parse(s: &str) -> Result<EdgeLabel> {
        match s {
            "AST" => Ok(EdgeLabel::Ast),
            "EOG" => Ok(EdgeLabel::Eog),
            "DFG" => Ok(EdgeLabel::Dfg),
            "REFERS_TO" => Ok(EdgeLabel::RefersTo),
            "INVOKES" => Ok(EdgeLabel::Invokes),
            "SUPERTYPE" => Ok(EdgeLabel::Supertype),
            other => Err(CpgError::Attribute(format!("unknown edge label `{other}`"))),
        }
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a branching expression recorded on EOG edges leaving it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum BranchValue {
    True,
    False,
    Case(String),
    Default,
}

impl fmt::Display for BranchValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchValue::True => f.write_str("true"),
            BranchValue::False => f.write_str("false"),
            BranchValue::Case(v) => write!(f, "case {v}"),
            BranchValue::Default => f.write_str("default"),
        }
    }
}

/// Directed labeled edge. `role`/`index` are AST-only, `branch` EOG-only.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub from: NodeId,
    pub to: NodeId,
    pub label: EdgeLabel,
    pub role: Option<String>,
    pub index: Option<u32>,
    pub branch: Option<BranchValue>,
}

impl Edge {
    pub fn plain(from: NodeId, to: NodeId, label: EdgeLabel) -> Edge {
        Edge { from, to, label, role: None, index: None, branch: None }
    }

    pub fn ast(from: NodeId, to: NodeId, role: &str, index: Option<u32>) -> Edge {
        Edge { from, to, label: EdgeLabel::Ast, role: Some(role.to_string()), index, branch: None }
    }

    pub fn eog(from: NodeId, to: NodeId, branch: Option<BranchValue>) -> Edge {
        Edge { from, to, label: EdgeLabel::Eog, role: None, index: None, branch }
    }
}

/// One syntactic or semantic entity.
#[derive(Debug, Clone)]
pub struct Node {
    pub id: NodeId,
    pub kind: KindId,
    pub name: Option<String>,
    pub location: Option<SourceLocation>,
    pub flags: NodeFlags,
    pub properties: BTreeMap<String, PropertyValue>,
}

impl Node {
    /// Source excerpt, stored under the `code` property.
    pub fn code(&self) -> Option<&str> {
        self.properties.get("code").and_then(|v| v.as_str())
    }

    pub fn property_str(&self, key: &str) -> Option<&str> {
        self.properties.get(key).and_then(|v| v.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Out,
    In,
}

/// The property multi-graph with kind- and name-based indices.
#[derive(Debug, Clone)]
pub struct Graph {
    registry: KindRegistry,
    nodes: BTreeMap<NodeId, Node>,
    edges: Vec<Edge>,
    out: HashMap<NodeId, Vec<usize>>,
    inc: HashMap<NodeId, Vec<usize>>,
    by_kind: HashMap<KindId, Vec<NodeId>>,
    by_name: HashMap<String, Vec<NodeId>>,
    next_id: u64,
}

impl Graph {
    pub fn new() -> Self {
        Graph {
            registry: KindRegistry::with_builtin(),
            nodes: BTreeMap::new(),
            edges: Vec::new(),
            out: HashMap::new(),
            inc: HashMap::new(),
            by_kind: HashMap::new(),
            by_name: HashMap::new(),
            next_id: 1,
        }
    }

    pub fn registry(&self) -> &KindRegistry {
        &self.registry
    }

    pub fn registry_mut(&mut self) -> &mut KindRegistry {
        &mut self.registry
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Insert a node of a registered kind and return its fresh id.
    pub fn add_node(
        &mut self,
        kind: &str,
        name: Option<String>,
        location: Option<SourceLocation>,
        flags: NodeFlags,
    ) -> Result<NodeId> {
        let kind_id = self.registry.id(kind)?;
        Ok(self.insert_with_id(NodeId(self.next_id), kind_id, name, location, flags))
    }

    /// Insert a node preserving an explicit id (deserialization path).
    /// Fails if the id is already taken.
    pub fn add_node_with_id(
        &mut self,
        id: NodeId,
        kind: &str,
        name: Option<String>,
        location: Option<SourceLocation>,
        flags: NodeFlags,
    ) -> Result<NodeId> {
        let kind_id = self.registry.id(kind)?;
        if self.nodes.contains_key(&id) {
            return Err(CpgError::Integrity(format!("node id {id} already present")));
        }
        Ok(self.insert_with_id(id, kind_id, name, location, flags))
    }

    fn insert_with_id(
        &mut self,
        id: NodeId,
        kind: KindId,
        name: Option<String>,
        location: Option<SourceLocation>,
        flags: NodeFlags,
    ) -> NodeId {
        let node = Node { id, kind, name: name.clone(), location, flags, properties: BTreeMap::new() };
        self.nodes.insert(id, node);
        self.next_id = self.next_id.max(id.0 + 1);
        self.by_kind.entry(kind).or_default().push(id);
        if let Some(n) = name {
            self.by_name.entry(n).or_default().push(id);
        }
        id
    }

    pub fn node(&self, id: NodeId) -> Result<&Node> {
        self.nodes.get(&id).ok_or_else(|| CpgError::Integrity(format!("unknown node id {id}")))
    }

    pub fn node_mut(&mut self, id: NodeId) -> Result<&mut Node> {
        self.nodes.get_mut(&id).ok_or_else(|| CpgError::Integrity(format!("unknown node id {id}")))
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.nodes.contains_key(&id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.values()
    }

    pub fn kind_name(&self, id: NodeId) -> Result<&str> {
        Ok(self.registry.name(self.node(id)?.kind))
    }

    pub fn set_property(&mut self, id: NodeId, key: &str, value: impl Into<PropertyValue>) -> Result<()> {
        self.node_mut(id)?.properties.insert(key.to_string(), value.into());
        Ok(())
    }

    /// Append an edge. Parallel edges are permitted; endpoints must exist and
    /// the attribute set must be legal for the label.
    pub fn add_edge(&mut self, edge: Edge) -> Result<()> {
        if !self.nodes.contains_key(&edge.from) {
            return Err(CpgError::Integrity(format!("edge source {} does not exist", edge.from)));
        }
        if !self.nodes.contains_key(&edge.to) {
            return Err(CpgError::Integrity(format!("edge target {} does not exist", edge.to)));
        }
        if edge.label != EdgeLabel::Ast && (edge.role.is_some() || edge.index.is_some()) {
            return Err(CpgError::Attribute(format!(
                "role/index are only valid on AST edges, not {}",
                edge.label
            )));
        }
        if edge.label != EdgeLabel::Eog && edge.branch.is_some() {
            return Err(CpgError::Attribute(format!(
                "branch values are only valid on EOG edges, not {}",
                edge.label
            )));
        }
        if edge.label == EdgeLabel::Ast {
            if let (Some(role), Some(index)) = (&edge.role, edge.index) {
                let dup = self.edge_indices(edge.from, Direction::Out).any(|e| {
                    e.label == EdgeLabel::Ast && e.role.as_deref() == Some(role.as_str()) && e.index == Some(index)
                });
                if dup {
                    return Err(CpgError::Attribute(format!(
                        "duplicate AST index {index} for role {role} on node {}",
                        edge.from
                    )));
                }
            }
        }
        let idx = self.edges.len();
        self.out.entry(edge.from).or_default().push(idx);
        self.inc.entry(edge.to).or_default().push(idx);
        self.edges.push(edge);
        Ok(())
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    fn edge_indices(&self, node: NodeId, dir: Direction) -> impl Iterator<Item = &Edge> {
        let map = match dir {
            Direction::Out => &self.out,
            Direction::In => &self.inc,
        };
        map.get(&node).into_iter().flatten().map(|&i| &self.edges[i])
    }

    /// Edges with the given label touching `node` in the given direction,
    /// in insertion order.
    pub fn edges_of(&self, node: NodeId, label: EdgeLabel, dir: Direction) -> impl Iterator<Item = &Edge> {
        self.edge_indices(node, dir).filter(move |e| e.label == label)
    }

    /// Neighbor node ids over one label. AST results are sorted by
    /// (role, index); other labels keep insertion order.
    pub fn neighbors(&self, node: NodeId, label: EdgeLabel, dir: Direction) -> Result<Vec<NodeId>> {
        self.node(node)?;
        let mut found: Vec<&Edge> = self.edges_of(node, label, dir).collect();
        if label == EdgeLabel::Ast {
            found.sort_by(|a, b| (&a.role, a.index).cmp(&(&b.role, b.index)));
        }
        Ok(found
            .into_iter()
            .map(|e| match dir {
                Direction::Out => e.to,
                Direction::In => e.from,
            })
            .collect())
    }

    /// All nodes of `kind`, optionally including registered subkinds;
    /// ascending by id.
    pub fn nodes_by_kind(&self, kind: &str, include_subkinds: bool) -> Result<Vec<NodeId>> {
        let kind_id = self.registry.id(kind)?;
        let mut result: Vec<NodeId> = Vec::new();
        if include_subkinds {
            for k in self.registry.all() {
                if self.registry.is_subkind(k, kind_id) {
                    if let Some(ids) = self.by_kind.get(&k) {
                        result.extend_from_slice(ids);
                    }
                }
            }
            result.sort();
        } else if let Some(ids) = self.by_kind.get(&kind_id) {
            result.extend_from_slice(ids);
        }
        Ok(result)
    }

    pub fn nodes_by_name(&self, name: &str) -> Vec<NodeId> {
        self.by_name.get(name).cloned().unwrap_or_default()
    }

    pub fn is_subkind(&self, kind: &str, ancestor: &str) -> Result<bool> {
        Ok(self.registry.is_subkind(self.registry.id(kind)?, self.registry.id(ancestor)?))
    }

    /// True if the node's kind equals or derives from `ancestor`.
    pub fn node_is(&self, id: NodeId, ancestor: &str) -> bool {
        match (self.node(id), self.registry.id(ancestor)) {
            (Ok(n), Ok(a)) => self.registry.is_subkind(n.kind, a),
            _ => false,
        }
    }

    /// AST children sorted by (role, index).
    pub fn ast_children(&self, node: NodeId) -> Vec<NodeId> {
        self.neighbors(node, EdgeLabel::Ast, Direction::Out).unwrap_or_default()
    }

    /// AST children holding `role`, sorted by index.
    pub fn ast_children_role(&self, node: NodeId, role: &str) -> Vec<NodeId> {
        let mut found: Vec<&Edge> = self
            .edges_of(node, EdgeLabel::Ast, Direction::Out)
            .filter(|e| e.role.as_deref() == Some(role))
            .collect();
        found.sort_by_key(|e| e.index);
        found.into_iter().map(|e| e.to).collect()
    }

    /// Single AST child under `role`, if present.
    pub fn ast_child(&self, node: NodeId, role: &str) -> Option<NodeId> {
        self.ast_children_role(node, role).into_iter().next()
    }

    pub fn ast_parent(&self, node: NodeId) -> Option<NodeId> {
        self.edges_of(node, EdgeLabel::Ast, Direction::In).next().map(|e| e.from)
    }

    /// Walks AST parent links to the enclosing node of `kind`, if any
    /// (inclusive of `node` itself).
    pub fn enclosing(&self, node: NodeId, kind: &str) -> Option<NodeId> {
        let mut cur = Some(node);
        while let Some(n) = cur {
            if self.node_is(n, kind) {
                return Some(n);
            }
            cur = self.ast_parent(n);
        }
        None
    }

    /// Pre-order walk of the AST subtree rooted at `root`.
    pub fn ast_subtree(&self, root: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![root];
        while let Some(n) = stack.pop() {
            out.push(n);
            let children = self.ast_children(n);
            for c in children.into_iter().rev() {
                stack.push(c);
            }
        }
        out
    }
}

impl Default for Graph {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_insertion_gets_id_one() {
        let mut g = Graph::new();
        let id = g.add_node(kinds::TRANSLATION_UNIT, Some("main.c".into()), None, NodeFlags::NONE).unwrap();
        assert_eq!(id, NodeId(1));
        assert_eq!(g.node_count(), 1);
    }

    #[test]
    fn ids_are_distinct_and_dense() {
        let mut g = Graph::new();
        let a = g.add_node(kinds::LITERAL, None, None, NodeFlags::NONE).unwrap();
        let b = g.add_node(kinds::LITERAL, None, None, NodeFlags::NONE).unwrap();
        assert_ne!(a, b);
        assert_eq!(b.0, a.0 + 1);
    }

    #[test]
    fn unknown_kind_is_a_taxonomy_error() {
        let mut g = Graph::new();
        let err = g.add_node("Bogus", None, None, NodeFlags::NONE).unwrap_err();
        assert!(matches!(err, CpgError::UnknownKind(k) if k == "Bogus"));
    }

    #[test]
    fn ast_edge_stores_role_and_index() {
        let mut g = Graph::new();
        let p = g.add_node(kinds::BINARY_OPERATOR, Some("=".into()), None, NodeFlags::NONE).unwrap();
        let c = g.add_node(kinds::REFERENCE, Some("a".into()), None, NodeFlags::NONE).unwrap();
        g.add_edge(Edge::ast(p, c, roles::LHS, Some(0))).unwrap();
        let e = g.edges().next().unwrap();
        assert_eq!(e.role.as_deref(), Some("LHS"));
        assert_eq!(e.index, Some(0));
    }

    #[test]
    fn role_on_non_ast_edge_is_an_attribute_error() {
        let mut g = Graph::new();
        let a = g.add_node(kinds::LITERAL, None, None, NodeFlags::NONE).unwrap();
        let b = g.add_node(kinds::LITERAL, None, None, NodeFlags::NONE).unwrap();
        let err = g
            .add_edge(Edge {
                from: a,
                to: b,
                label: EdgeLabel::Eog,
                role: Some("LHS".into()),
                index: None,
                branch: None,
            })
            .unwrap_err();
        assert!(matches!(err, CpgError::Attribute(_)));
    }

    #[test]
    fn dangling_endpoint_is_an_integrity_error() {
        let mut g = Graph::new();
        let a = g.add_node(kinds::LITERAL, None, None, NodeFlags::NONE).unwrap();
        let err = g.add_edge(Edge::plain(a, NodeId(999), EdgeLabel::Dfg)).unwrap_err();
        assert!(matches!(err, CpgError::Integrity(_)));
    }

    #[test]
    fn parallel_edges_are_allowed() {
        let mut g = Graph::new();
        let a = g.add_node(kinds::LITERAL, None, None, NodeFlags::NONE).unwrap();
        let b = g.add_node(kinds::LITERAL, None, None, NodeFlags::NONE).unwrap();
        g.add_edge(Edge::plain(a, b, EdgeLabel::Dfg)).unwrap();
        g.add_edge(Edge::plain(a, b, EdgeLabel::Dfg)).unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn duplicate_ast_index_within_role_is_rejected() {
        let mut g = Graph::new();
        let p = g.add_node(kinds::CALL, Some("f".into()), None, NodeFlags::NONE).unwrap();
        let a = g.add_node(kinds::LITERAL, None, None, NodeFlags::NONE).unwrap();
        let b = g.add_node(kinds::LITERAL, None, None, NodeFlags::NONE).unwrap();
        g.add_edge(Edge::ast(p, a, roles::ARGUMENT, Some(0))).unwrap();
        let err = g.add_edge(Edge::ast(p, b, roles::ARGUMENT, Some(0))).unwrap_err();
        assert!(matches!(err, CpgError::Attribute(_)));
    }

    #[test]
    fn neighbors_of_isolated_node_is_empty() {
        let mut g = Graph::new();
        let a = g.add_node(kinds::LITERAL, None, None, NodeFlags::NONE).unwrap();
        assert!(g.neighbors(a, EdgeLabel::Eog, Direction::Out).unwrap().is_empty());
        assert!(g.neighbors(NodeId(42), EdgeLabel::Eog, Direction::Out).is_err());
    }

    #[test]
    fn ast_neighbors_come_back_in_index_order() {
        let mut g = Graph::new();
        let p = g.add_node(kinds::CALL, Some("f".into()), None, NodeFlags::NONE).unwrap();
        let one = g.add_node(kinds::LITERAL, None, None, NodeFlags::NONE).unwrap();
        let zero = g.add_node(kinds::LITERAL, None, None, NodeFlags::NONE).unwrap();
        g.add_edge(Edge::ast(p, one, roles::ARGUMENT, Some(1))).unwrap();
        g.add_edge(Edge::ast(p, zero, roles::ARGUMENT, Some(0))).unwrap();
        assert_eq!(g.neighbors(p, EdgeLabel::Ast, Direction::Out).unwrap(), vec![zero, one]);
        // ordering is a pure function of the stored pairs
        assert_eq!(
            g.neighbors(p, EdgeLabel::Ast, Direction::Out).unwrap(),
            g.neighbors(p, EdgeLabel::Ast, Direction::Out).unwrap()
        );
    }

    #[test]
    fn refers_to_neighbors_reach_the_declaration() {
        let mut g = Graph::new();
        let decl = g.add_node(kinds::VARIABLE, Some("x".into()), None, NodeFlags::NONE).unwrap();
        let re = g.add_node(kinds::REFERENCE, Some("x".into()), None, NodeFlags::NONE).unwrap();
        g.add_edge(Edge::plain(re, decl, EdgeLabel::RefersTo)).unwrap();
        assert_eq!(g.neighbors(re, EdgeLabel::RefersTo, Direction::Out).unwrap(), vec![decl]);
    }

    #[test]
    fn kind_query_honours_subkind_flag() {
        let mut g = Graph::new();
        let mc = g.add_node(kinds::MEMBER_CALL, Some("f".into()), None, NodeFlags::NONE).unwrap();
        assert_eq!(g.nodes_by_kind(kinds::CALL, true).unwrap(), vec![mc]);
        assert!(g.nodes_by_kind(kinds::CALL, false).unwrap().is_empty());
        assert!(g.nodes_by_kind(kinds::LITERAL, true).unwrap().is_empty());
    }
}
