//! Ingestion of language-neutral JSON AST documents, the integration point
//! for external parsers.
//!
//! The document schema (version `"1"`) is:
//!
//! ```json
//! {
//!   "cpgAstVersion": "1",
//!   "language": "<producer language>",
//!   "file": "<original source file>",
//!   "root": {
//!     "kind": "TranslationUnitDeclaration",
//!     "role": "...", "index": 0, "name": "...",
//!     "value": <string|int|bool|null>, "operator": "...",
//!     "location": {"startLine": 1, "startCol": 1, "endLine": 1, "endCol": 1},
//!     "children": [ <node>, ... ]
//!   }
//! }
//! ```
//!
//! Kind strings matching registered node kinds map one to one. Unknown
//! kinds do not abort ingestion: the node becomes a `ProblemNode` recorded
//! as unhandled for coverage, and its subtree is not descended into.

use std::collections::BTreeSet;

use serde_json::Value;

use crate::error::{CpgError, Result};
use crate::frontend::{CoverageRecord, TranslationResult};
use crate::graph::{kinds, Edge, Graph, NodeFlags, NodeId, PropertyValue, SourceLocation};
use crate::scopes::{ScopeForest, ScopeKind, ScopeManager};

pub const AST_SCHEMA_VERSION: &str = "1";

/// One schema violation, addressed by a JSON path like `$.root.children[0].kind`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Validate a parsed document against the schema. Ingestion succeeds
/// exactly when this returns no diagnostics.
pub fn validate(doc: &Value) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let Some(obj) = doc.as_object() else {
        diags.push(Diagnostic { path: "$".into(), message: "document must be a JSON object".into() });
        return diags;
    };
    match obj.get("cpgAstVersion") {
        Some(Value::String(v)) if v == AST_SCHEMA_VERSION => {}
        Some(Value::String(v)) => diags.push(Diagnostic {
            path: "$.cpgAstVersion".into(),
            message: format!("unsupported version `{v}`, expected \"{AST_SCHEMA_VERSION}\""),
        }),
        _ => diags.push(Diagnostic {
            path: "$.cpgAstVersion".into(),
            message: format!("required string field, expected \"{AST_SCHEMA_VERSION}\""),
        }),
    }
    for field in ["language", "file"] {
        if !matches!(obj.get(field), Some(Value::String(_))) {
            diags.push(Diagnostic {
                path: format!("$.{field}"),
                message: "required string field".into(),
            });
        }
    }
    match obj.get("root") {
        Some(root) => {
            if root.get("kind").and_then(Value::as_str) != Some(kinds::TRANSLATION_UNIT) {
                diags.push(Diagnostic {
                    path: "$.root.kind".into(),
                    message: format!("root kind must be \"{}\"", kinds::TRANSLATION_UNIT),
                });
            }
            validate_node(root, "$.root", None, &mut diags);
        }
        None => diags.push(Diagnostic { path: "$.root".into(), message: "required field".into() }),
    }
    diags
}

fn validate_node(node: &Value, path: &str, parent_loc: Option<&LocBounds>, diags: &mut Vec<Diagnostic>) {
    let Some(obj) = node.as_object() else {
        diags.push(Diagnostic { path: path.into(), message: "node must be a JSON object".into() });
        return;
    };
    if !matches!(obj.get("kind"), Some(Value::String(s)) if !s.is_empty()) {
        diags.push(Diagnostic {
            path: format!("{path}.kind"),
            message: "required non-empty string field".into(),
        });
    }
    for (field, ok) in [
        ("role", obj.get("role").map_or(true, |v| v.is_string())),
        ("name", obj.get("name").map_or(true, |v| v.is_string())),
        ("operator", obj.get("operator").map_or(true, |v| v.is_string())),
    ] {
        if !ok {
            diags.push(Diagnostic {
                path: format!("{path}.{field}"),
                message: "must be a string".into(),
            });
        }
    }
    if let Some(index) = obj.get("index") {
        if !index.as_u64().is_some_and(|v| v <= u32::MAX as u64) {
            diags.push(Diagnostic {
                path: format!("{path}.index"),
                message: "must be a non-negative integer".into(),
            });
        }
    }
    if let Some(value) = obj.get("value") {
        let scalar = value.is_null()
            || value.is_string()
            || value.is_boolean()
            || value.as_i64().is_some();
        if !scalar {
            diags.push(Diagnostic {
                path: format!("{path}.value"),
                message: "must be a string, integer, boolean or null".into(),
            });
        }
    }
    let own_loc = match obj.get("location") {
        Some(loc) => validate_location(loc, &format!("{path}.location"), parent_loc, diags),
        None => None,
    };
    let effective = own_loc.as_ref().or(parent_loc);
    if let Some(children) = obj.get("children") {
        match children.as_array() {
            Some(arr) => {
                for (i, child) in arr.iter().enumerate() {
                    validate_node(child, &format!("{path}.children[{i}]"), effective, diags);
                }
            }
            None => diags.push(Diagnostic {
                path: format!("{path}.children"),
                message: "must be an array".into(),
            }),
        }
    }
}

struct LocBounds {
    start: (u64, u64),
    end: (u64, u64),
}

fn validate_location(
    loc: &Value,
    path: &str,
    parent: Option<&LocBounds>,
    diags: &mut Vec<Diagnostic>,
) -> Option<LocBounds> {
    let Some(obj) = loc.as_object() else {
        diags.push(Diagnostic { path: path.into(), message: "must be an object".into() });
        return None;
    };
    let mut fields = [0u64; 4];
    for (i, name) in ["startLine", "startCol", "endLine", "endCol"].iter().enumerate() {
        match obj.get(*name).and_then(Value::as_u64) {
            Some(v) if v >= 1 => fields[i] = v,
            _ => {
                diags.push(Diagnostic {
                    path: format!("{path}.{name}"),
                    message: "required positive integer".into(),
                });
                return None;
            }
        }
    }
    let [start_line, start_col, end_line, end_col] = fields;
    if start_line > end_line || (start_line == end_line && start_col > end_col) {
        diags.push(Diagnostic { path: path.into(), message: "span start is after its end".into() });
        return None;
    }
    let bounds = LocBounds { start: (start_line, start_col), end: (end_line, end_col) };
    if let Some(p) = parent {
        if bounds.start < p.start || bounds.end > p.end {
            diags.push(Diagnostic {
                path: path.into(),
                message: "location not nested within the parent's location".into(),
            });
        }
    }
    Some(bounds)
}

/// Parse and ingest a document given as text. `input_label` names the
/// document itself (e.g. the `.cpg.json` path) for error messages; node
/// locations and the unit label use the document's `file` field.
pub fn ingest_str(
    graph: &mut Graph,
    forest: &mut ScopeForest,
    input_label: &str,
    text: &str,
) -> Result<TranslationResult> {
    let doc: Value = serde_json::from_str(text).map_err(|e| CpgError::Ingestion {
        path: input_label.to_string(),
        message: format!("invalid JSON: {e}"),
    })?;
    ingest(graph, forest, &doc)
}

/// Ingest a parsed document into the graph.
pub fn ingest(graph: &mut Graph, forest: &mut ScopeForest, doc: &Value) -> Result<TranslationResult> {
    let diags = validate(doc);
    if let Some(first) = diags.first() {
        return Err(CpgError::Ingestion { path: first.path.clone(), message: first.message.clone() });
    }
    let file = doc["file"].as_str().unwrap_or_default().to_string();
    let root_obj = &doc["root"];

    let mut sloc_lines = BTreeSet::new();
    collect_location_lines(root_obj, &mut sloc_lines);

    let mgr = ScopeManager::new(forest, &file);
    let mut ing = Ingester { graph, mgr, file: file.clone(), records: Vec::new() };
    let root = ing.node(root_obj, None)?;
    let global_scope = ing.mgr.finish()?;
    let coverage = ing.records;
    Ok(TranslationResult {
        file,
        language: "generic",
        root,
        global_scope,
        coverage,
        sloc_lines,
        diagnostics: Vec::new(),
    })
}

/// Every location line in the document counts as SLoC, including lines
/// under unknown kinds we will not descend into.
fn collect_location_lines(node: &Value, lines: &mut BTreeSet<u32>) {
    if let Some(loc) = node.get("location") {
        if let (Some(s), Some(e)) = (
            loc.get("startLine").and_then(Value::as_u64),
            loc.get("endLine").and_then(Value::as_u64),
        ) {
            for l in s..=e {
                lines.insert(l as u32);
            }
        }
    }
    if let Some(children) = node.get("children").and_then(Value::as_array) {
        for c in children {
            collect_location_lines(c, lines);
        }
    }
}

struct Ingester<'a, 'f> {
    graph: &'a mut Graph,
    mgr: ScopeManager<'f>,
    file: String,
    records: Vec<CoverageRecord>,
}

impl<'a, 'f> Ingester<'a, 'f> {
    fn node(&mut self, obj: &Value, parent: Option<(NodeId, Option<&str>, Option<u32>, usize)>) -> Result<NodeId> {
        let kind_str = obj["kind"].as_str().unwrap_or_default();
        let name = obj.get("name").and_then(Value::as_str).map(str::to_string);
        let location = match obj.get("location") {
            Some(loc) => Some(SourceLocation::new(
                self.file.clone(),
                loc["startLine"].as_u64().unwrap_or(1) as u32,
                loc["startCol"].as_u64().unwrap_or(1) as u32,
                loc["endLine"].as_u64().unwrap_or(1) as u32,
                loc["endCol"].as_u64().unwrap_or(1) as u32,
            )?),
            None => None,
        };

        let known = self.graph.registry().contains(kind_str);
        let id = if known {
            self.graph.add_node(kind_str, name.clone(), location, NodeFlags::NONE)?
        } else {
            let p = self.graph.add_node(kinds::PROBLEM_NODE, None, location, NodeFlags::NONE)?;
            self.graph.set_property(p, "message", format!("no handler for kind `{kind_str}`"))?;
            self.graph.set_property(p, "unhandledKind", kind_str)?;
            p
        };
        self.mgr.record_node(id);
        self.records.push(CoverageRecord { node: id, handled: known });

        if let Some((parent_id, role, index, position)) = parent {
            let index = index.or(if role.is_none() { Some(position as u32) } else { None });
            self.graph.add_edge(Edge {
                from: parent_id,
                to: id,
                label: crate::graph::EdgeLabel::Ast,
                role: role.map(str::to_string),
                index,
                branch: None,
            })?;
        }
        if !known {
            return Ok(id); // no handler: leave the subtree opaque
        }

        if let Some(op) = obj.get("operator").and_then(Value::as_str) {
            self.graph.set_property(id, "operator", op)?;
        }
        if let Some(value) = obj.get("value") {
            let prop = match value {
                Value::Null => PropertyValue::Null,
                Value::Bool(b) => PropertyValue::Bool(*b),
                Value::String(s) => PropertyValue::Str(s.clone()),
                other => PropertyValue::Int(other.as_i64().unwrap_or_default()),
            };
            self.graph.set_property(id, "value", prop)?;
        }

        let scope_kind = scope_for_kind(self.graph, id);
        if let Some(name) = &name {
            if declares(self.graph, id) {
                self.mgr.declare(name, id);
            }
        }
        if let Some(sk) = scope_kind {
            self.mgr.enter(sk, id);
        }
        if let Some(children) = obj.get("children").and_then(Value::as_array) {
            for (i, child) in children.iter().enumerate() {
                let role = child.get("role").and_then(Value::as_str);
                let index = child.get("index").and_then(Value::as_u64).map(|v| v as u32);
                self.node(child, Some((id, role, index, i)))?;
            }
        }
        if let Some(sk) = scope_kind {
            if sk == ScopeKind::Loop {
                let scope = self.mgr.current();
                self.mgr.forest().scope_mut(scope).break_target = Some(id);
                let cont = self
                    .graph
                    .ast_child(id, crate::graph::roles::ITERATION)
                    .or_else(|| self.graph.ast_child(id, crate::graph::roles::CONDITION))
                    .unwrap_or(id);
                self.mgr.forest().scope_mut(scope).continue_target = Some(cont);
            }
            self.mgr.leave()?;
        }
        Ok(id)
    }
}

fn scope_for_kind(graph: &Graph, node: NodeId) -> Option<ScopeKind> {
    if graph.node_is(node, kinds::FUNCTION) {
        Some(ScopeKind::Function)
    } else if graph.node_is(node, kinds::RECORD) || graph.node_is(node, kinds::NAMESPACE) {
        Some(ScopeKind::Record)
    } else if graph.node_is(node, kinds::WHILE_STATEMENT) || graph.node_is(node, kinds::FOR_STATEMENT) {
        Some(ScopeKind::Loop)
    } else if graph.node_is(node, kinds::COMPOUND_STATEMENT) {
        Some(ScopeKind::Block)
    } else {
        None
    }
}

fn declares(graph: &Graph, node: NodeId) -> bool {
    graph.node_is(node, kinds::VALUE_DECLARATION)
        || graph.node_is(node, kinds::RECORD)
        || graph.node_is(node, kinds::NAMESPACE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn ingest_value(doc: Value) -> Result<(Graph, ScopeForest, TranslationResult)> {
        let mut g = Graph::new();
        let mut forest = ScopeForest::new();
        let r = ingest(&mut g, &mut forest, &doc)?;
        Ok((g, forest, r))
    }

    fn minimal(children: Value) -> Value {
        json!({
            "cpgAstVersion": "1",
            "language": "demo",
            "file": "demo.src",
            "root": { "kind": "TranslationUnitDeclaration", "children": children }
        })
    }

    #[test]
    fn root_plus_function_child_yields_two_nodes() {
        let doc = minimal(json!([
            { "kind": "FunctionDeclaration", "name": "f", "role": "DECLARATION", "index": 0 }
        ]));
        let (g, _, r) = ingest_value(doc).unwrap();
        assert_eq!(g.node_count(), 2);
        let f = g.ast_children(r.root)[0];
        assert_eq!(g.kind_name(f).unwrap(), kinds::FUNCTION);
        let edge = g.edges().find(|e| e.to == f).unwrap();
        assert_eq!(edge.role.as_deref(), Some("DECLARATION"));
        assert_eq!(edge.index, Some(0));
    }

    #[test]
    fn unknown_kind_becomes_problem_node_with_uncovered_line() {
        let doc = minimal(json!([
            {
                "kind": "FancyMacroExpansion",
                "location": {"startLine": 3, "startCol": 1, "endLine": 3, "endCol": 10}
            }
        ]));
        let (g, _, r) = ingest_value(doc).unwrap();
        let problems = g.nodes_by_kind(kinds::PROBLEM_NODE, false).unwrap();
        assert_eq!(problems.len(), 1);
        assert!(r.coverage.iter().any(|c| c.node == problems[0] && !c.handled));
        assert!(r.sloc_lines.contains(&3));
    }

    #[test]
    fn wrong_root_kind_is_an_ingestion_error() {
        let doc = json!({
            "cpgAstVersion": "1",
            "language": "demo",
            "file": "demo.src",
            "root": { "kind": "CompoundStatement" }
        });
        let mut g = Graph::new();
        let mut forest = ScopeForest::new();
        let err = ingest(&mut g, &mut forest, &doc).unwrap_err();
        assert!(matches!(err, CpgError::Ingestion { path, .. } if path == "$.root.kind"));
    }

    #[test]
    fn validate_accepts_a_good_document() {
        assert!(validate(&minimal(json!([]))).is_empty());
    }

    #[test]
    fn validate_flags_missing_kind_with_its_path() {
        let doc = minimal(json!([ { "name": "f" } ]));
        let diags = validate(&doc);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].path, "$.root.children[0].kind");
    }

    #[test]
    fn validate_flags_inverted_spans() {
        let doc = minimal(json!([
            {
                "kind": "FunctionDeclaration",
                "location": {"startLine": 5, "startCol": 1, "endLine": 3, "endCol": 1}
            }
        ]));
        let diags = validate(&doc);
        assert_eq!(diags.len(), 1);
        assert!(diags[0].message.contains("after its end"));
    }

    #[test]
    fn validate_requires_version() {
        let doc = json!({
            "language": "demo", "file": "f", "root": {"kind": "TranslationUnitDeclaration"}
        });
        let diags = validate(&doc);
        assert!(diags.iter().any(|d| d.path == "$.cpgAstVersion"));
    }

    #[test]
    fn unknown_kind_count_equals_problem_node_count() {
        let doc = minimal(json!([
            { "kind": "AlienNode" },
            { "kind": "FunctionDeclaration", "name": "f" },
            { "kind": "OtherAlien" }
        ]));
        let (g, _, _) = ingest_value(doc).unwrap();
        assert_eq!(g.nodes_by_kind(kinds::PROBLEM_NODE, false).unwrap().len(), 2);
    }

    #[test]
    fn nested_function_scopes_declare_parameters() {
        let doc = minimal(json!([
            {
                "kind": "FunctionDeclaration", "name": "f", "role": "DECLARATION",
                "children": [
                    { "kind": "ParameterDeclaration", "name": "p", "role": "PARAMETER", "index": 0 }
                ]
            }
        ]));
        let (g, forest, _) = ingest_value(doc).unwrap();
        let f = g.nodes_by_kind(kinds::FUNCTION, false).unwrap()[0];
        let fscope = forest.scope_anchored_at(f).unwrap();
        let p = g.nodes_by_kind(kinds::PARAMETER, false).unwrap()[0];
        assert_eq!(forest.resolve("p", fscope), Some(p));
    }
}
