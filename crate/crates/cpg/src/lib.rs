//! A language-independent source-code analysis toolkit built on a code
//! property graph: one multi-graph unifying the AST, evaluation order,
//! data flow, reference, call and type views of a program.
//!
//! Source files are translated by language frontends (a built-in C-subset
//! parser and a generic JSON-AST ingester) into per-file AST trees plus
//! scope trees. A dependency-ordered pass pipeline then enriches the merged
//! graph with `REFERS_TO`, `EOG`, `DFG`, `INVOKES` and type information,
//! inferring declarations for missing code along the way. Query, check,
//! export, coverage and benchmark facilities sit on top, reachable both
//! from a CLI and an interactive console.

pub mod error;
pub mod frontend;
pub mod graph;
pub mod metrics;
pub mod passes;
pub mod pipeline;
pub mod scopes;

pub use error::{CpgError, Result};
