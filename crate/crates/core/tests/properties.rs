mod common;

use common::{and_monoid, bit, TermGen};
use hc_core::elab::circuit_theory;
use hc_core::equations::{normalize, print_term, NormConfig};
use hc_core::semantics::base_change::{change_of_base, Relabel};
use hc_core::semantics::finrel::point;
use hc_core::semantics::{
    circuit_interpretation, FinRel, FiniteModel, Semantics, TableModel, TableSmc,
};
use hc_core::syntax::*;
use hc_core::syntaxgen::{syntax_gen, Caps};
use hc_core::theories::print_theory;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gen(seed: u64) -> TermGen {
    TermGen::new(ChaCha8Rng::seed_from_u64(seed))
}

/// Rename every bound core variable to a fresh primed name.
fn rename_bound(f: &CoreTerm) -> CoreTerm {
    match f {
        CoreTerm::Bullet | CoreTerm::Var(_) => f.clone(),
        CoreTerm::Tensor(g, h) => CoreTerm::tensor(rename_bound(g), rename_bound(h)),
        CoreTerm::LetUnit(g, h) => CoreTerm::let_unit(rename_bound(g), rename_bound(h)),
        CoreTerm::LetTensor(g, a, b, body) => {
            let (a2, b2) = (format!("{a}'"), format!("{b}'"));
            let body = subst_core(
                &subst_core(body, a, &CoreTerm::var(&a2)),
                b,
                &CoreTerm::var(&b2),
            );
            CoreTerm::let_tensor(rename_bound(g), &a2, &b2, rename_bound(&body))
        }
        CoreTerm::Derelict(h, arg) => CoreTerm::derelict((**h).clone(), rename_bound(arg)),
        CoreTerm::Const(k, args) => CoreTerm::constant(k, args.iter().map(rename_bound).collect()),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_step_preserves_type_and_meaning(seed in any::<u64>()) {
        let theory = circuit_theory();
        let env = theory.env();
        let fm = FiniteModel { core: FinRel::new(2).unwrap(), faithful: false };
        let interp = circuit_interpretation();
        let sem = Semantics::new(&fm, &interp, &env);
        let (ctx, t) = gen(seed).circuit_judgment(3);
        let ty = env.check_term(&ctx, &t, None).unwrap();
        let n = normalize(&env, &ctx, &t, &NormConfig::default()).unwrap();
        for s in &n.steps {
            prop_assert_eq!(env.check_term(&ctx, &s.after, Some(&ty)).map(|_| ()), Ok(()), "{}", s);
            prop_assert_eq!(sem.satisfies(&s.ctx, &s.redex, &s.contractum).unwrap(), None, "{}", s);
        }
        prop_assert_eq!(sem.satisfies(&ctx, &t, &n.term).unwrap(), None);
    }

    #[test]
    fn normalization_is_deterministic_and_idempotent(seed in any::<u64>()) {
        let theory = circuit_theory();
        let env = theory.env();
        let (ctx, t) = gen(seed).circuit_judgment(3);
        let cfg = NormConfig::default();
        let once = normalize(&env, &ctx, &t, &cfg).unwrap();
        let again = normalize(&env, &ctx, &t, &cfg).unwrap();
        prop_assert_eq!(&once.term, &again.term);
        prop_assert!(normalize(&env, &ctx, &once.term, &cfg).unwrap().steps.is_empty());
    }

    #[test]
    fn core_substitution_is_admissible(seed in any::<u64>()) {
        let theory = circuit_theory();
        let env = theory.env();
        let mut g = gen(seed);
        let (mut ctx, f) = g.core_judgment(3);
        let Some(pos) = ctx.core.entries().iter().position(|(_, t)| *t == bit()) else { return Ok(()) };
        let (a, _) = ctx.core.entries()[pos].clone();
        let ty = env.check_term(&ctx, &Term::Core(f.clone()), None).unwrap();
        let host: Vec<(Name, HostType)> = ctx.host.entries().to_vec();
        let extra = vec![("s0".to_string(), bit()), ("s1".to_string(), bit())];
        let arg = g.core(&host, extra.clone(), &bit(), 2);
        let mut entries: Vec<(Name, CoreType)> = ctx.core.entries().to_vec();
        entries.splice(pos..=pos, extra);
        ctx.core = CoreContext::from_entries(entries);
        let substituted = Term::Core(subst_core(&f, &a, &arg));
        prop_assert_eq!(env.check_term(&ctx, &substituted, Some(&ty)).map(|_| ()), Ok(()), "{}", print_term(&substituted));
    }

    #[test]
    fn renaming_bound_variables_is_alpha_equivalent(seed in any::<u64>()) {
        let theory = circuit_theory();
        let env = theory.env();
        let (ctx, f) = gen(seed).core_judgment(4);
        let renamed = rename_bound(&f);
        prop_assert!(alpha_eq_core(&f, &renamed));
        prop_assert_eq!(canonical_core(&f), canonical_core(&renamed));
        let ty = env.check_term(&ctx, &Term::Core(f), None).unwrap();
        prop_assert_eq!(env.check_term(&ctx, &Term::Core(renamed), None).unwrap(), ty);
    }

    #[test]
    fn table_models_survive_json(suffix in "[a-z#']{1,3}") {
        let objs = vec![Vec::new(), point()];
        let base = TableModel::from_smc(&FinRel::with_objects(objs.clone()), "finrel-01", &objs, 64).unwrap();
        for m in [base, and_monoid(), TableModel::trivial()] {
            let moved = change_of_base(&Relabel { suffix: suffix.clone() }, &m).unwrap();
            for model in [m, moved] {
                let back = TableModel::from_json(&model.to_json()).unwrap();
                prop_assert_eq!(&back, &model);
                prop_assert!(TableSmc::new(back).is_ok());
            }
        }
    }

    #[test]
    fn extraction_ignores_morphism_labels(suffix in "[a-z#']{1,3}") {
        for m in [and_monoid(), TableModel::trivial()] {
            let moved = change_of_base(&Relabel { suffix: suffix.clone() }, &m).unwrap();
            let before = syntax_gen(&TableSmc::new(m).unwrap(), &Caps::default()).unwrap();
            let mut after = syntax_gen(&TableSmc::new(moved).unwrap(), &Caps::default()).unwrap();
            after.theory.name = before.theory.name.clone();
            prop_assert_eq!(print_theory(&before.theory), print_theory(&after.theory));
            prop_assert_eq!(before.core_judgments, after.core_judgments);
        }
    }
}
