//! Node-kind registry: a rooted forest of kinds with single inheritance.
//!
//! Kinds are data, not hard-coded variants, so applications can register
//! additional kinds (new frontends, new semantic entities) without touching
//! the core. The built-in taxonomy has three main roots — `Declaration`,
//! `Statement`, `Expression` — plus the auxiliary roots `TypeNode` and
//! `ProblemNode`.

use std::collections::HashMap;

use crate::error::{CpgError, Result};

/// Interned handle for a registered node kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KindId(pub u16);

/// Well-known kind names used throughout the crate.
pub mod kinds {
    pub const DECLARATION: &str = "Declaration";
    pub const TRANSLATION_UNIT: &str = "TranslationUnitDeclaration";
    pub const NAMESPACE: &str = "NamespaceDeclaration";
    pub const RECORD: &str = "RecordDeclaration";
    pub const VALUE_DECLARATION: &str = "ValueDeclaration";
    pub const FUNCTION: &str = "FunctionDeclaration";
    pub const METHOD: &str = "MethodDeclaration";
    pub const CONSTRUCTOR: &str = "ConstructorDeclaration";
    pub const PARAMETER: &str = "ParameterDeclaration";
    pub const VARIABLE: &str = "VariableDeclaration";
    pub const FIELD: &str = "FieldDeclaration";

    pub const STATEMENT: &str = "Statement";
    pub const COMPOUND_STATEMENT: &str = "CompoundStatement";
    pub const IF_STATEMENT: &str = "IfStatement";
    pub const WHILE_STATEMENT: &str = "WhileStatement";
    pub const FOR_STATEMENT: &str = "ForStatement";
    pub const RETURN_STATEMENT: &str = "ReturnStatement";
    pub const BREAK_STATEMENT: &str = "BreakStatement";
    pub const CONTINUE_STATEMENT: &str = "ContinueStatement";
    pub const DECLARATION_STATEMENT: &str = "DeclarationStatement";

    pub const EXPRESSION: &str = "Expression";
    pub const LITERAL: &str = "Literal";
    pub const REFERENCE: &str = "DeclaredReferenceExpression";
    pub const BINARY_OPERATOR: &str = "BinaryOperator";
    pub const UNARY_OPERATOR: &str = "UnaryOperator";
    pub const CALL: &str = "CallExpression";
    pub const MEMBER_CALL: &str = "MemberCallExpression";
    pub const MEMBER_EXPRESSION: &str = "MemberExpression";
    pub const CONDITIONAL_EXPRESSION: &str = "ConditionalExpression";

    pub const TYPE_NODE: &str = "TypeNode";
    pub const PROBLEM_NODE: &str = "ProblemNode";
}

/// (kind, parent) pairs of the built-in taxonomy; parents precede children.
const BUILTIN: &[(&str, Option<&str>)] = &[
    (kinds::DECLARATION, None),
    (kinds::TRANSLATION_UNIT, Some(kinds::DECLARATION)),
    (kinds::NAMESPACE, Some(kinds::DECLARATION)),
    (kinds::RECORD, Some(kinds::DECLARATION)),
    (kinds::VALUE_DECLARATION, Some(kinds::DECLARATION)),
    (kinds::FUNCTION, Some(kinds::VALUE_DECLARATION)),
    (kinds::METHOD, Some(kinds::FUNCTION)),
    (kinds::CONSTRUCTOR, Some(kinds::METHOD)),
    (kinds::PARAMETER, Some(kinds::VALUE_DECLARATION)),
    (kinds::VARIABLE, Some(kinds::VALUE_DECLARATION)),
    (kinds::FIELD, Some(kinds::VARIABLE)),
    (kinds::STATEMENT, None),
    (kinds::COMPOUND_STATEMENT, Some(kinds::STATEMENT)),
    (kinds::IF_STATEMENT, Some(kinds::STATEMENT)),
    (kinds::WHILE_STATEMENT, Some(kinds::STATEMENT)),
    (kinds::FOR_STATEMENT, Some(kinds::STATEMENT)),
    (kinds::RETURN_STATEMENT, Some(kinds::STATEMENT)),
    (kinds::BREAK_STATEMENT, Some(kinds::STATEMENT)),
    (kinds::CONTINUE_STATEMENT, Some(kinds::STATEMENT)),
    (kinds::DECLARATION_STATEMENT, Some(kinds::STATEMENT)),
    (kinds::EXPRESSION, None),
    (kinds::LITERAL, Some(kinds::EXPRESSION)),
    (kinds::REFERENCE, Some(kinds::EXPRESSION)),
    (kinds::BINARY_OPERATOR, Some(kinds::EXPRESSION)),
    (kinds::UNARY_OPERATOR, Some(kinds::EXPRESSION)),
    (kinds::CALL, Some(kinds::EXPRESSION)),
    (kinds::MEMBER_CALL, Some(kinds::CALL)),
    (kinds::MEMBER_EXPRESSION, Some(kinds::EXPRESSION)),
    (kinds::CONDITIONAL_EXPRESSION, Some(kinds::EXPRESSION)),
    (kinds::TYPE_NODE, None),
    (kinds::PROBLEM_NODE, None),
];

#[derive(Debug, Clone)]
struct KindEntry {
    name: String,
    parent: Option<KindId>,
}

/// Registry of node kinds with single-inheritance parent links.
#[derive(Debug, Clone)]
pub struct KindRegistry {
    entries: Vec<KindEntry>,
    by_name: HashMap<String, KindId>,
}

impl KindRegistry {
    /// Registry preloaded with the built-in taxonomy.
    pub fn with_builtin() -> Self {
        let mut reg = KindRegistry { entries: Vec::new(), by_name: HashMap::new() };
        for (name, parent) in BUILTIN {
            reg.register(name, *parent).expect("builtin taxonomy is well-formed");
        }
        reg
    }

    /// Register a new kind under an optional parent. The parent must already
    /// be registered; re-registering an existing name is a taxonomy error.
    pub fn register(&mut self, name: &str, parent: Option<&str>) -> Result<KindId> {
        if self.by_name.contains_key(name) {
            return Err(CpgError::Taxonomy(format!("kind `{name}` is already registered")));
        }
        let parent_id = match parent {
            Some(p) => Some(self.id(p)?),
            None => None,
        };
        let id = KindId(self.entries.len() as u16);
        self.entries.push(KindEntry { name: name.to_string(), parent: parent_id });
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn id(&self, name: &str) -> Result<KindId> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| CpgError::UnknownKind(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.by_name.contains_key(name)
    }

    pub fn name(&self, id: KindId) -> &str {
        &self.entries[id.0 as usize].name
    }

    pub fn parent(&self, id: KindId) -> Option<KindId> {
        self.entries[id.0 as usize].parent
    }

    /// True iff `kind` equals `ancestor` or `ancestor` lies on its parent chain.
    pub fn is_subkind(&self, kind: KindId, ancestor: KindId) -> bool {
        let mut cur = Some(kind);
        while let Some(k) = cur {
            if k == ancestor {
                return true;
            }
            cur = self.parent(k);
        }
        false
    }

    /// Ancestor chain from the root down to (and including) `kind`.
    pub fn ancestry(&self, kind: KindId) -> Vec<KindId> {
        let mut chain = Vec::new();
        let mut cur = Some(kind);
        while let Some(k) = cur {
            chain.push(k);
            cur = self.parent(k);
        }
        chain.reverse();
        chain
    }

    pub fn all(&self) -> impl Iterator<Item = KindId> + '_ {
        (0..self.entries.len()).map(|i| KindId(i as u16))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Default for KindRegistry {
    fn default() -> Self {
        Self::with_builtin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn member_call_chain_reaches_expression() {
        let reg = KindRegistry::with_builtin();
        let mc = reg.id(kinds::MEMBER_CALL).unwrap();
        let call = reg.id(kinds::CALL).unwrap();
        let expr = reg.id(kinds::EXPRESSION).unwrap();
        assert_eq!(reg.parent(mc), Some(call));
        assert!(reg.is_subkind(mc, call));
        assert!(reg.is_subkind(mc, expr));
        assert!(reg.is_subkind(call, expr));
    }

    #[test]
    fn subkind_is_reflexive_antisymmetric_transitive() {
        let reg = KindRegistry::with_builtin();
        let all: Vec<KindId> = reg.all().collect();
        for &a in &all {
            assert!(reg.is_subkind(a, a), "reflexivity for {}", reg.name(a));
            for &b in &all {
                if a != b && reg.is_subkind(a, b) {
                    assert!(!reg.is_subkind(b, a), "antisymmetry {} / {}", reg.name(a), reg.name(b));
                }
                for &c in &all {
                    if reg.is_subkind(a, b) && reg.is_subkind(b, c) {
                        assert!(reg.is_subkind(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn call_is_not_subkind_of_member_call() {
        let reg = KindRegistry::with_builtin();
        let mc = reg.id(kinds::MEMBER_CALL).unwrap();
        let call = reg.id(kinds::CALL).unwrap();
        assert!(!reg.is_subkind(call, mc));
    }

    #[test]
    fn registering_custom_kind_extends_taxonomy() {
        let mut reg = KindRegistry::with_builtin();
        let id = reg.register("LambdaExpression", Some(kinds::EXPRESSION)).unwrap();
        assert!(reg.is_subkind(id, reg.id(kinds::EXPRESSION).unwrap()));
        assert!(reg.register("LambdaExpression", None).is_err());
        assert!(matches!(reg.id("NoSuchKind"), Err(CpgError::UnknownKind(k)) if k == "NoSuchKind"));
    }

    #[test]
    fn ancestry_is_root_first() {
        let reg = KindRegistry::with_builtin();
        let mc = reg.id(kinds::MEMBER_CALL).unwrap();
        let names: Vec<&str> = reg.ancestry(mc).into_iter().map(|k| reg.name(k)).collect();
        assert_eq!(names, vec!["Expression", "CallExpression", "MemberCallExpression"]);
    }
}
