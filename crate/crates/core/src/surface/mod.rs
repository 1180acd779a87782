//! Concrete syntax: lexer, parser and printers.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod print;

pub use ast::*;
pub use parser::{parse, parse_expr, parse_type};
pub use print::*;
