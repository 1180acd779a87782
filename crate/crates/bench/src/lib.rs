//! Workloads shared by the `pipeline` benchmark.

use hc_core::elab::{load_program, CommandKind};
use hc_core::syntax::{MixedContext, Term};
use hc_core::theories::Theory;

/// A left-nested chain of `n` negations composed with `comp`.
pub fn negation_chain(n: usize) -> String {
    let not = "promote(core a:Bit. not(a))";
    let mut term = not.to_string();
    for _ in 1..n {
        term = format!("comp({term}, {not})");
    }
    format!("import circuit\nnorm |- {term}\n")
}

/// The parallel-composition program over the circuit theory.
pub const PARALLEL: &str =
    "import circuit\ncheck |- \\x0:Proof(Bit, Bit). \\x1:Proof(Bit, Bit). par(x0, x1)\n";

/// Load a program and return its theory with the first command's context and term.
pub fn first_command(source: &str) -> (Theory, MixedContext, Term) {
    let (theory, cmds) = load_program(source, &[], false)
        .expect("parses")
        .expect("loads");
    match cmds
        .into_iter()
        .next()
        .expect("one command")
        .kind
        .expect("elaborates")
    {
        CommandKind::Check { ctx, term, .. } | CommandKind::Norm { ctx, term } => {
            (theory, ctx, term)
        }
        CommandKind::Eq { ctx, lhs, .. } => (theory, ctx, lhs),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hc_core::equations::{normalize, NormConfig};

    #[test]
    fn chain_normalizes_to_nested_negations() {
        let (theory, ctx, term) = first_command(&negation_chain(3));
        let n = normalize(&theory.env(), &ctx, &term, &NormConfig::default()).unwrap();
        assert_eq!(
            hc_core::equations::print_term(&n.term),
            "promote(core a:Bit. not(not(not(a))))"
        );
    }
}
