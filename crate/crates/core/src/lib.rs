//! Host-core calculus: syntax, typing, equations, finite models and theory extraction.

pub mod congruence;
pub mod diag;
pub mod elab;
pub mod equations;
pub mod rewrite;
pub mod semantics;
pub mod surface;
pub mod syntax;
pub mod syntaxgen;
pub mod theories;
pub mod typing;
