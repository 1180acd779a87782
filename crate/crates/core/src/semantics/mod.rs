//! Finite models: a category of finite sets as host, a finite symmetric
//! monoidal category enriched over it as core, and the interpretation of
//! theories in them.

pub mod base_change;
pub mod ccc;
pub mod finrel;
pub mod interp;
pub mod lint;
pub mod smc;
pub mod table;

pub use finrel::{FinRel, Relation};
pub use interp::{circuit_interpretation, FiniteModel, Interpretation, SemError, Semantics, Value};
pub use lint::{model_lint, LintReport, LintResult};
pub use smc::Smc;
pub use table::{TableModel, TableSmc};
