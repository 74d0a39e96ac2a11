//! Built-in frontend for a C subset: functions, globals, structs with
//! fields, the usual statements, and expressions over `int`/`char`/`void`/
//! struct/pointer types. No preprocessor, typedefs, arrays or varargs.

pub mod lexer;
pub mod parser;
mod translate;

pub use parser::{parse, ParseTree};
pub use translate::{insert_implicit_returns, translate, translate_tree};
