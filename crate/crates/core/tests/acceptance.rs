//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::time::{Duration, Instant};

use common::{and_monoid, duplicate_variable, occurrence_violations, TermGen};
use hc_core::elab::{circuit_theory, load_program, CommandKind};
use hc_core::equations::{
    decide_eq, normalize, print_term, NormConfig, Outcome, DEFAULT_MAX_STEPS,
};
use hc_core::semantics::base_change::{change_of_base, Identity, Relabel};
use hc_core::semantics::finrel::{bit, point, Relation};
use hc_core::semantics::lint::lint_table;
use hc_core::semantics::smc::Mutated;
use hc_core::semantics::{
    circuit_interpretation, model_lint, FinRel, FiniteModel, Semantics, Smc, TableModel, TableSmc,
    Value,
};
use hc_core::syntax::*;
use hc_core::syntaxgen::{round_trip_check, syntax_gen, Caps, RoundTripOutcome};
use hc_core::theories::Theory;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Load `source` over the circuit theory and return its commands.
fn program(source: &str, cartesian: bool) -> Result<(Theory, Vec<CommandKind>), String> {
    let (theory, cmds) = load_program(source, &["circuit"], cartesian)
        .map_err(|e| format!("parse: {e}"))?
        .map_err(|e| format!("load: {e}"))?;
    let kinds = cmds
        .into_iter()
        .map(|c| c.kind.map_err(|e| format!("line {}: {e}", c.span.line)))
        .collect::<Result<_, _>>()?;
    Ok((theory, kinds))
}

fn checked_type(theory: &Theory, cartesian: bool, cmd: &CommandKind) -> Result<String, String> {
    let env = hc_core::typing::TypeEnv::new(theory, cartesian);
    match cmd {
        CommandKind::Check {
            ctx,
            term,
            expected,
        } => env
            .check_term(ctx, term, expected.as_ref())
            .map(|t| t.to_string())
            .map_err(|e| e.message),
        _ => Err("expected a check command".into()),
    }
}

fn golden_typing() -> Verdict {
    let source = "\
core type A
core type B
core type C
core type A0
core type B0
core type A1
core type B1
check |- \\x0:Proof(A0, B0). \\x1:Proof(A1, B1). par(x0, x1)
check |- \\x:Proof(A, B). \\z:Proof(B, C). comp(x, z)
check x:Proof(A, B), z:Proof(B, C) |- comp(x, z)
check |- id[A]
check | a:Bit (x) Bit |- not(and(a))
check | a1:Bit, a2:Bit (x) Bit |- and(not(a1) (x) and(a2))
check |- IfCirc
";
    let expected = [
        "Proof(A0, B0) -> Proof(A1, B1) -> Proof(A0 (x) A1, B0 (x) B1)",
        "Proof(A, B) -> Proof(B, C) -> Proof(A, C)",
        "Proof(A, C)",
        "Proof(A, A)",
        "Bit",
        "Bit",
        "bool -> Proof(Bit (x) Bit, Bit (x) Bit) -> Proof(Bit (x) Bit, Bit (x) Bit) -> Proof(I, Bit (x) Bit)",
    ];
    let (theory, cmds) = program(source, false)?;
    ensure(cmds.len() == expected.len(), || {
        format!("{} commands", cmds.len())
    })?;
    for (cmd, want) in cmds.iter().zip(expected) {
        let got = checked_type(&theory, false, cmd)?;
        ensure(got == want, || format!("expected `{want}`, got `{got}`"))?;
    }
    Ok(format!("{} judgments byte-identical", expected.len()))
}

fn linearity_gate() -> Verdict {
    let source = "check | a0:Bit, a1:Bit |- a0 (x) (let a (x) b = a0 (x) a1 in and(a (x) b))\n";
    let (theory, cmds) = program(source, false)?;
    ensure(checked_type(&theory, false, &cmds[0]).is_err(), || {
        "non-linear term accepted in linear mode".into()
    })?;
    let (theory, cmds) = program(source, true)?;
    checked_type(&theory, true, &cmds[0])
        .map_err(|e| format!("rejected under cartesian core: {e}"))?;

    let circuit = circuit_theory();
    let linear = circuit.env();
    let cartesian = linear.with_cartesian(true);
    let mut gen = TermGen::new(ChaCha8Rng::seed_from_u64(0x11ea));
    let (mut accepted, mut mutants, mut violations) = (0, 0, Vec::new());
    while accepted < 500 {
        let (ctx, f) = gen.core_judgment(4);
        let term = Term::Core(f.clone());
        linear
            .check_term(&ctx, &term, None)
            .map_err(|e| format!("generated judgment rejected: {}: {e}", print_term(&term)))?;
        accepted += 1;
        violations.extend(occurrence_violations(&ctx.core, &f));
        if let Some(m) = duplicate_variable(&ctx.core, &f, &mut gen.rng) {
            let mutant = Term::Core(m);
            ensure(linear.check_term(&ctx, &mutant, None).is_err(), || {
                format!("duplicating mutant accepted: {}", print_term(&mutant))
            })?;
            ensure(cartesian.check_term(&ctx, &mutant, None).is_ok(), || {
                format!("cartesian mode rejects {}", print_term(&mutant))
            })?;
            mutants += 1;
        }
    }
    ensure(violations.is_empty(), || violations.join("; "))?;
    Ok(format!(
        "{accepted} accepted judgments audited, {mutants} duplicating mutants rejected"
    ))
}

fn equational_laws() -> Verdict {
    let source = "\
core type A
core type B
core type C
core type D
host const t : Proof(A, B)
host const s : Proof(B, C)
host const u : Proof(C, D)
core const k (a : A) : B
eq |- comp(comp(t, s), u) = comp(t, comp(s, u))
eq |- comp(id[A], t) = t
eq |- comp(t, id[B]) = t
eq | a:A |- derelict(promote(core b:A. k(b))) @ a = k(a)
eq |- promote(core a:A. derelict(t) @ a) = t
";
    let (theory, cmds) = program(source, false)?;
    let env = theory.env();
    let cfg = NormConfig {
        max_steps: DEFAULT_MAX_STEPS,
    };
    let mut steps = Vec::new();
    for cmd in &cmds {
        let CommandKind::Eq { ctx, lhs, rhs, .. } = cmd else {
            return Err("expected eq commands".into());
        };
        let ty = env.check_term(ctx, lhs, None).map_err(|e| e.message)?;
        env.check_term(ctx, rhs, Some(&ty)).map_err(|e| e.message)?;
        let v = decide_eq(&env, ctx, lhs, rhs, &ty, None, &cfg);
        ensure(v.outcome == Outcome::Equal, || {
            format!("{} = {}: {v}", print_term(lhs), print_term(rhs))
        })?;
        let n = normalize(&env, ctx, lhs, &cfg)
            .map_err(|e| e.to_string())?
            .steps
            .len()
            + normalize(&env, ctx, rhs, &cfg)
                .map_err(|e| e.to_string())?
                .steps
                .len();
        steps.push(n.to_string());
    }
    Ok(format!(
        "5 equalities proved by normalization, steps {}",
        steps.join("/")
    ))
}

fn soundness_fuzz() -> Verdict {
    let theory = circuit_theory();
    let env = theory.env();
    let fm = FiniteModel {
        core: FinRel::new(2).map_err(|e| e.to_string())?,
        faithful: false,
    };
    let interp = circuit_interpretation();
    let sem = Semantics::new(&fm, &interp, &env);
    let cfg = NormConfig::default();
    let mut gen = TermGen::new(ChaCha8Rng::seed_from_u64(0x50d));
    let (mut terms, mut steps, mut rules) = (0, 0, std::collections::BTreeSet::new());
    while terms < 250 {
        let (ctx, t) = gen.circuit_judgment(4);
        env.check_term(&ctx, &t, None)
            .map_err(|e| format!("generated term ill-typed: {}: {e}", print_term(&t)))?;
        let n = normalize(&env, &ctx, &t, &cfg).map_err(|e| format!("{}: {e}", print_term(&t)))?;
        for s in &n.steps {
            match sem.satisfies(&s.ctx, &s.redex, &s.contractum) {
                Ok(None) => {}
                Ok(Some(w)) => {
                    return Err(format!(
                        "{} changes the meaning of {}: {w}",
                        s.rule,
                        print_term(&s.redex)
                    ))
                }
                Err(e) => {
                    return Err(format!(
                        "cannot interpret {} step on {}: {e}",
                        s.rule,
                        print_term(&s.redex)
                    ))
                }
            }
            rules.insert(s.rule);
        }
        steps += n.steps.len();
        terms += 1;
    }
    ensure(steps > terms, || format!("only {steps} steps"))?;
    Ok(format!(
        "{terms} terms, {steps} steps over {} rules, 0 mismatches",
        rules.len()
    ))
}

fn model_lint_criterion() -> Verdict {
    let m = FinRel::new(2).map_err(|e| e.to_string())?;
    let report = model_lint(&m);
    ensure(report.passed(), || report.to_string())?;
    for check in [
        "pentagon",
        "triangle",
        "hexagon",
        "symmetry-involution",
        "enriched-assoc",
        "enriched-unit",
    ] {
        ensure(report.get(check).is_some(), || format!("no {check} check"))?;
    }
    let not = Relation::graph(2, 2, |i| 1 - i);
    let mutated = Mutated {
        inner: m.clone(),
        at: (bit(), bit(), bit(), not.clone(), not.clone()),
        result: not,
    };
    let bad = model_lint(&mutated);
    let witness = bad
        .failures()
        .find_map(|r| r.counterexample.clone())
        .ok_or("mutation not detected")?;
    let size = m.hom_size(&bit(), &bit());
    let enumerated = m.hom(&bit(), &bit(), 1 << 10).map(|h| h.len()).unwrap_or(0);
    let powerset = 1usize << (bit().len() * bit().len());
    ensure(size == 16 && enumerated == powerset, || {
        format!("|C(Bit,Bit)| = {size}, enumerated {enumerated}")
    })?;
    Ok(format!(
        "{} checks pass, mutation caught ({}), |C(Bit,Bit)| = 16",
        report.results.len(),
        witness.chars().take(60).collect::<String>()
    ))
}

fn circuit_oracle() -> Verdict {
    let (theory, cmds) = program(
        "check | a:Bit (x) Bit |- nand(a)\ncheck |- comp(promote(core a:Bit. not(a)), promote(core a:Bit. not(a)))\n",
        false,
    )?;
    let env = theory.env();
    let fm = FiniteModel {
        core: FinRel::new(2).map_err(|e| e.to_string())?,
        faithful: false,
    };
    let interp = circuit_interpretation();
    let sem = Semantics::new(&fm, &interp, &env);

    let CommandKind::Check {
        ctx,
        term: Term::Core(nand),
        ..
    } = &cmds[0]
    else {
        return Err("nand is not a core term".into());
    };
    let rows = sem.interpret_core(ctx, nand).map_err(|e| e.to_string())?;
    let arrow = &rows[0].1;
    for a in 0..2usize {
        for b in 0..2usize {
            let expected = usize::from(!(a == 1 && b == 1));
            let image = arrow.mor.image(a * 2 + b);
            ensure(image == vec![expected], || {
                format!("nand({a},{b}) gives {image:?}")
            })?;
        }
    }

    let CommandKind::Check {
        ctx,
        term: Term::Host(notnot),
        ..
    } = &cmds[1]
    else {
        return Err("comp is not a host term".into());
    };
    let rows = sem
        .interpret_host(&ctx.host, notnot)
        .map_err(|e| e.to_string())?;
    let Value::Hom(rel) = &rows[0].1 else {
        return Err("comp(not, not) is not a relation".into());
    };
    ensure(*rel == Relation::identity(2), || {
        format!("comp(not, not) = {:?}", rel.pairs())
    })?;
    Ok("nand matches its 4-row truth table, comp(not, not) is the identity".into())
}

/// Pairs of core terms on one hom: identity, generators and their composites.
fn hom_terms(theory: &Theory) -> Vec<(CoreType, CoreType, Vec<CoreTerm>)> {
    let env = theory.env();
    let objs: Vec<CoreType> = theory
        .core_types
        .iter()
        .map(|n| CoreType::base(n))
        .collect();
    let unary: Vec<(&Name, CoreType, CoreType)> = theory
        .core_consts
        .iter()
        .filter(|(_, s)| s.params.len() == 1)
        .map(|(k, s)| (k, s.params.entries()[0].1.clone(), s.result.clone()))
        .collect();
    let a = || CoreTerm::var("a");
    let mut out = Vec::new();
    for dom in &objs {
        for cod in &objs {
            let mut terms = Vec::new();
            if env.core_eq(dom, cod) {
                terms.push(a());
            }
            for (k, d, c) in &unary {
                if env.core_eq(d, dom) && env.core_eq(c, cod) {
                    terms.push(CoreTerm::constant(k, vec![a()]));
                }
            }
            for (k1, d1, c1) in &unary {
                for (k2, d2, c2) in &unary {
                    if env.core_eq(d1, dom) && env.core_eq(c1, d2) && env.core_eq(c2, cod) {
                        terms.push(CoreTerm::constant(
                            k2,
                            vec![CoreTerm::constant(k1, vec![a()])],
                        ));
                    }
                }
            }
            out.push((dom.clone(), cod.clone(), terms));
        }
    }
    out
}

fn extraction_agrees<S: Smc + Clone>(model: &S) -> Result<String, String> {
    let g = syntax_gen(model, &Caps::default()).map_err(|e| e.to_string())?;
    let (reloaded, cmds) = load_program(&g.to_source(), &[], false)
        .map_err(|e| e.to_string())?
        .map_err(|e| e.to_string())?;
    let renv = reloaded.env();
    for c in &cmds {
        let kind = c.kind.as_ref().map_err(|e| e.to_string())?;
        if let CommandKind::Check {
            ctx,
            term,
            expected,
        } = kind
        {
            renv.check_term(ctx, term, expected.as_ref())
                .map_err(|e| format!("emitted check fails: {e}"))?;
        }
    }
    let env = g.theory.env();
    let fm = FiniteModel {
        core: model.clone(),
        faithful: false,
    };
    let sem = Semantics::new(&fm, &g.interpretation, &env);
    for ax in g.equalities() {
        let w = sem
            .satisfies(&ax.ctx, &ax.lhs, &ax.rhs)
            .map_err(|e| e.to_string())?;
        ensure(w.is_none(), || {
            format!("emitted equality {} fails: {w:?}", print_term(&ax.lhs))
        })?;
    }
    let cfg = NormConfig::default();
    let mut pairs = 0;
    for (dom, cod, terms) in hom_terms(&g.theory) {
        let ctx = MixedContext::new(
            HostContext::new(),
            CoreContext::from_entries(vec![("a".into(), dom.clone())]),
        );
        let ty = Type::Core(cod.clone());
        for x in &terms {
            for y in &terms {
                let (x, y) = (Term::Core(x.clone()), Term::Core(y.clone()));
                let semantic = sem
                    .satisfies(&ctx, &x, &y)
                    .map_err(|e| e.to_string())?
                    .is_none();
                let v = decide_eq(&env, &ctx, &x, &y, &ty, None, &cfg);
                let syntactic = match v.outcome {
                    Outcome::Equal => true,
                    Outcome::Unequal => false,
                    Outcome::Unknown => {
                        return Err(format!(
                            "undecided: {} = {}",
                            print_term(&x),
                            print_term(&y)
                        ))
                    }
                };
                ensure(semantic == syntactic, || {
                    format!(
                        "{} = {}: theory says {syntactic}, model says {semantic}",
                        print_term(&x),
                        print_term(&y)
                    )
                })?;
                pairs += 1;
            }
        }
    }
    let r = round_trip_check(model, &Caps::default()).map_err(|e| e.to_string())?;
    ensure(r.outcome == RoundTripOutcome::Holds, || r.to_string())?;
    Ok(format!("{} homs, {pairs} pairs", r.homs.len()))
}

fn round_trip() -> Verdict {
    let trivial = TableSmc::new(TableModel::trivial()).map_err(|e| e.to_string())?;
    let a = extraction_agrees(&trivial)?;
    let two = FinRel::with_objects(vec![Vec::new(), point()]);
    let max_hom = two
        .objects()
        .iter()
        .flat_map(|x| two.objects().into_iter().map(move |y| (x.clone(), y)))
        .map(|(x, y)| two.hom_size(&x, &y))
        .max();
    ensure(max_hom == Some(2), || {
        format!("largest hom has {max_hom:?} elements")
    })?;
    let b = extraction_agrees(&two)?;
    Ok(format!("trivial: {a}; two objects: {b}"))
}

fn base_change() -> Verdict {
    let objs = vec![Vec::new(), point()];
    let models = [
        TableModel::from_smc(&FinRel::with_objects(objs.clone()), "finrel-01", &objs, 64)?,
        TableModel::trivial(),
        and_monoid(),
    ];
    let mut relabelled = 0;
    for m in &models {
        ensure(
            lint_table(&TableSmc::new(m.clone()).map_err(|e| e.to_string())?).passed(),
            || format!("{} does not lint", m.name),
        )?;
        let same = change_of_base(&Identity, m).map_err(|e| e.to_string())?;
        ensure(
            same.homs == m.homs
                && same.comp == m.comp
                && same.tensor_hom == m.tensor_hom
                && same.id == m.id
                && same.sym == m.sym,
            || format!("identity change of base altered {}", m.name),
        )?;
        let moved =
            change_of_base(&Relabel { suffix: "'".into() }, m).map_err(|e| e.to_string())?;
        for (k, v) in &m.homs {
            ensure(moved.homs[k].len() == v.len(), || {
                format!("hom {k} of {} changed size", m.name)
            })?;
        }
        if moved.homs != m.homs {
            relabelled += 1;
        }
        let report = lint_table(&TableSmc::new(moved).map_err(|e| e.to_string())?);
        ensure(report.passed(), || format!("{}: {report}", m.name))?;
    }
    ensure(relabelled >= 2, || {
        "relabelling left the labels unchanged".into()
    })?;
    Ok(format!(
        "{} models: identity is table-identical, relabelled models lint with equal hom sizes",
        models.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict, Duration); 8] = [
        (
            "golden typing corpus",
            golden_typing,
            Duration::from_secs(1),
        ),
        ("linearity gate", linearity_gate, Duration::from_secs(10)),
        ("equational laws", equational_laws, Duration::from_secs(5)),
        ("soundness fuzz", soundness_fuzz, Duration::from_secs(60)),
        ("model lint", model_lint_criterion, Duration::from_secs(30)),
        (
            "circuit semantics oracle",
            circuit_oracle,
            Duration::from_secs(5),
        ),
        (
            "internal-language round trip",
            round_trip,
            Duration::from_secs(30),
        ),
        ("change of base", base_change, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let elapsed = start.elapsed();
        let verdict = match verdict {
            Ok(detail) if elapsed > *budget => {
                Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}"))
            }
            other => other,
        };
        match verdict {
            Ok(detail) => println!("PASS {} {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({elapsed:.2?})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
