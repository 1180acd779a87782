//! Extraction of a theory from a finite model, the syntactic category of a
//! theory, and the round trip between the two at desk scale.

use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use rayon::prelude::*;

use crate::equations::{decide_eq, print_term, NormConfig, Outcome};
use crate::semantics::ccc::decode;
use crate::semantics::interp::{HostDenot, Interpretation, Value};
use crate::semantics::lint::model_lint;
use crate::semantics::Smc;
use crate::surface::print_mixed_context;
use crate::syntax::*;
use crate::theories::{print_theory, CoreConstSig, HostConstSig, TermAxiom, Theory, TypeAxiom};

/// Bounds that keep the enumeration finite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Host variables in a generated context.
    pub context_len: usize,
    /// Core objects named.
    pub objects: usize,
    /// Morphisms or equations enumerated per hom-set.
    pub morphisms: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            context_len: 1,
            objects: 8,
            morphisms: 1 << 12,
        }
    }
}

impl FromStr for Caps {
    type Err = String;

    /// `context=N,objects=N,morphisms=N`, any subset, in any order.
    fn from_str(s: &str) -> Result<Self, String> {
        let mut caps = Caps::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| format!("cap `{part}` is not of the form key=value"))?;
            let bad = |_| format!("cap `{k}` needs a number, got `{v}`");
            match k.trim() {
                "context" => caps.context_len = v.trim().parse().map_err(bad)?,
                "objects" => caps.objects = v.trim().parse().map_err(bad)?,
                "morphisms" => caps.morphisms = v.trim().parse().map_err(bad)?,
                other => {
                    return Err(format!(
                        "unknown cap `{other}` (expected context, objects or morphisms)"
                    ))
                }
            }
        }
        Ok(caps)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("model does not pass lint: {0}")]
    NotLinted(String),
    #[error("cap exceeded: {what} has {count} elements, cap is {cap}")]
    CapExceeded {
        what: String,
        count: u128,
        cap: u128,
    },
}

/// A typing judgment emitted by extraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgment {
    pub ctx: MixedContext,
    pub term: Term,
    pub ty: Type,
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} : {}",
            print_mixed_context(&self.ctx.host, &self.ctx.core),
            print_term(&self.term),
            self.ty
        )
    }
}

/// The extracted theory with the interpretation of its new symbols.
pub struct GeneratedTheory<S: Smc> {
    pub theory: Theory,
    pub interpretation: Interpretation<S>,
    /// Core type names with the objects they name, in model order.
    pub objects: Vec<(Name, S::Obj)>,
    pub labels: Vec<String>,
    pub core_judgments: Vec<Judgment>,
    pub host_judgments: Vec<Judgment>,
}

impl<S: Smc> GeneratedTheory<S> {
    pub fn equalities(&self) -> &[TermAxiom] {
        &self.theory.term_axioms
    }

    /// A loadable source file: the theory followed by its judgments as checks.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        for ((name, _), label) in self.objects.iter().zip(&self.labels) {
            out.push_str(&format!("-- {name} names {label}\n"));
        }
        out.push_str(&print_theory(&self.theory));
        for j in self.core_judgments.iter().chain(&self.host_judgments) {
            out.push_str(&format!("check {j}\n"));
        }
        out
    }
}

const RESERVED: &[&str] = &["I", "Proof"];

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic())
        && s.chars().all(|c| c.is_alphanumeric() || c == '_')
        && !crate::surface::lexer::KEYWORDS.contains(&s)
        && !RESERVED.contains(&s)
}

fn object_names<S: Smc>(model: &S, objs: &[S::Obj]) -> Vec<Name> {
    let labels: Vec<String> = objs.iter().map(|o| model.obj_label(o)).collect();
    labels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            if is_identifier(l)
                && labels.iter().filter(|m| *m == l).count() == 1
                && !l.starts_with('C')
            {
                l.clone()
            } else {
                format!("C{i}")
            }
        })
        .collect()
}

fn core_const(name: &str, arg: CoreTerm) -> CoreTerm {
    CoreTerm::Const(name.to_string(), vec![arg])
}

fn var(a: &str) -> CoreTerm {
    CoreTerm::Var(a.to_string())
}

fn single(a: &str, ty: CoreType) -> CoreContext {
    CoreContext::from_entries(vec![(a.to_string(), ty)])
}

fn check_cap(what: impl FnOnce() -> String, count: u128, cap: u128) -> Result<(), GenError> {
    if count > cap {
        return Err(GenError::CapExceeded {
            what: what(),
            count,
            cap,
        });
    }
    Ok(())
}

fn pow_saturating(base: u128, exp: u128) -> u128 {
    let mut n: u128 = 1;
    for _ in 0..exp {
        n = n.saturating_mul(base);
        if n == u128::MAX {
            break;
        }
    }
    n
}

/// First failing lint check, if any.
fn lint_gate<S: Smc>(model: &S) -> Result<(), GenError> {
    let report = model_lint(model);
    let failure = report.failures().next().map(|f| {
        format!(
            "{}: {}",
            f.check,
            f.counterexample.clone().unwrap_or_default()
        )
    });
    match failure {
        Some(why) => Err(GenError::NotLinted(why)),
        None => Ok(()),
    }
}

/// Extract the theory of a linted model within the given caps.
pub fn syntax_gen<S: Smc>(model: &S, caps: &Caps) -> Result<GeneratedTheory<S>, GenError> {
    lint_gate(model)?;
    let objs = model.objects();
    check_cap(
        || "the object list".into(),
        objs.len() as u128,
        caps.objects as u128,
    )?;
    let names = object_names(model, &objs);
    let ty = |i: usize| CoreType::base(&names[i]);

    let mut theory = Theory::empty(&format!("gen_{}", sanitize(&model.name())));
    let mut interp: Interpretation<S> = Interpretation::default();
    for (n, o) in names.iter().zip(&objs) {
        theory.core_types.insert(n.clone());
        interp.core_types.insert(n.clone(), o.clone());
    }

    // Types whose interpretations coincide are identified.
    let unit = model.unit();
    for (i, o) in objs.iter().enumerate() {
        if *o == unit {
            theory
                .type_axioms
                .push(TypeAxiom::Core(ty(i), CoreType::Unit));
        }
        for (j, p) in objs.iter().enumerate() {
            let t = model.tensor(o, p);
            if let Some(k) = objs.iter().position(|q| *q == t) {
                theory
                    .type_axioms
                    .push(TypeAxiom::Core(CoreType::tensor(ty(i), ty(j)), ty(k)));
            }
        }
    }

    // Hom-sets, one host type Proof(A, B) each.
    let n = objs.len();
    let mut homs: BTreeMap<(usize, usize), Vec<S::Mor>> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let size = model.hom_size(&objs[i], &objs[j]);
            check_cap(
                || format!("hom({}, {})", names[i], names[j]),
                size,
                caps.morphisms,
            )?;
            let ms = model
                .hom(&objs[i], &objs[j], caps.morphisms as usize)
                .expect("within the cap");
            homs.insert((i, j), ms);
        }
    }
    let host_types: Vec<(usize, usize)> = homs.keys().copied().collect();
    let proof = |(i, j): (usize, usize)| HostType::proof(ty(i), ty(j));

    let mut core_judgments = Vec::new();
    let mut host_judgments = Vec::new();
    let empty_host = HostContext::new();

    // Closed terms: a core constant and a host constant per morphism.
    for (&(i, j), ms) in &homs {
        for (m, mor) in ms.iter().enumerate() {
            let k = format!("k_{}_{}_{m}", names[i], names[j]);
            let h = format!("h_{}_{}_{m}", names[i], names[j]);
            theory.core_consts.insert(
                k.clone(),
                CoreConstSig {
                    params: single("a", ty(i)),
                    result: ty(j),
                },
            );
            interp.core_consts.insert(k.clone(), mor.clone());
            core_judgments.push(Judgment {
                ctx: MixedContext::new(empty_host.clone(), single("a", ty(i))),
                term: Term::Core(core_const(&k, var("a"))),
                ty: Type::Core(ty(j)),
            });
            theory.host_consts.insert(
                h.clone(),
                HostConstSig {
                    ty: proof((i, j)),
                    param: None,
                },
            );
            interp
                .host_consts
                .insert(h.clone(), HostDenot::Value(Value::Hom(mor.clone())));
            host_judgments.push(Judgment {
                ctx: MixedContext::default(),
                term: Term::Host(HostTerm::Const(h.clone(), None)),
                ty: Type::Host(proof((i, j))),
            });
            theory.term_axioms.push(TermAxiom {
                ctx: MixedContext::default(),
                lhs: Term::Host(HostTerm::Const(h, None)),
                rhs: Term::Host(HostTerm::promote(
                    single("a", ty(i)),
                    core_const(&k, var("a")),
                )),
                ty: Type::Host(proof((i, j))),
            });
        }
    }

    // Open terms: host constants of arrow type, one per morphism out of the context.
    for len in 1..=caps.context_len {
        for gamma in contexts(&host_types, len) {
            let dom: u128 = gamma
                .iter()
                .fold(1u128, |acc, &p| acc.saturating_mul(homs[&p].len() as u128));
            for &target in &host_types {
                let cod = homs[&target].len() as u128;
                let count = pow_saturating(cod, dom);
                let label = || {
                    let ctx: Vec<String> = gamma
                        .iter()
                        .map(|&p| Type::Host(proof(p)).to_string())
                        .collect();
                    format!(
                        "morphisms ({}) -> {}",
                        ctx.join(", "),
                        Type::Host(proof(target))
                    )
                };
                check_cap(label, count, caps.morphisms)?;
                let tag: Vec<String> = gamma
                    .iter()
                    .map(|&(a, b)| format!("{}{}", names[a], names[b]))
                    .collect();
                let hctx = HostContext::from_entries(
                    gamma
                        .iter()
                        .enumerate()
                        .map(|(v, &p)| (format!("x{v}"), proof(p)))
                        .collect(),
                );
                let fun_ty = gamma
                    .iter()
                    .rev()
                    .fold(proof(target), |acc, &p| HostType::arrow(proof(p), acc));
                for code in 0..count as usize {
                    let h = format!(
                        "h_{}_{}_{}_{code}",
                        tag.join("_"),
                        names[target.0],
                        names[target.1]
                    );
                    theory.host_consts.insert(
                        h.clone(),
                        HostConstSig {
                            ty: fun_ty.clone(),
                            param: None,
                        },
                    );
                    let table = decode(dom as usize, cod as usize, code);
                    let leaves: Vec<Value<S::Mor>> = table
                        .table
                        .iter()
                        .map(|&t| Value::Hom(homs[&target][t].clone()))
                        .collect();
                    interp.host_consts.insert(
                        h.clone(),
                        HostDenot::Value(curried(&gamma, &homs, &leaves, &proof)),
                    );
                    let applied = (0..gamma.len()).fold(HostTerm::Const(h, None), |f, v| {
                        HostTerm::app(f, HostTerm::var(&format!("x{v}")))
                    });
                    host_judgments.push(Judgment {
                        ctx: MixedContext::new(hctx.clone(), CoreContext::new()),
                        term: Term::Host(applied.clone()),
                        ty: Type::Host(proof(target)),
                    });
                    core_judgments.push(Judgment {
                        ctx: MixedContext::new(hctx.clone(), single("a", ty(target.0))),
                        term: Term::Core(CoreTerm::derelict(applied, var("a"))),
                        ty: Type::Core(ty(target.1)),
                    });
                }
            }
        }
    }

    // Equalities between composites and the constants naming their denotations.
    for i in 0..n {
        let id = model.id(&objs[i]);
        let m = homs[&(i, i)]
            .iter()
            .position(|x| *x == id)
            .expect("identity is in the hom-set");
        theory.term_axioms.push(TermAxiom {
            ctx: MixedContext::new(empty_host.clone(), single("a", ty(i))),
            lhs: Term::Core(core_const(
                &format!("k_{}_{}_{m}", names[i], names[i]),
                var("a"),
            )),
            rhs: Term::Core(var("a")),
            ty: Type::Core(ty(i)),
        });
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (fs, gs, out) = (&homs[&(a, b)], &homs[&(b, c)], &homs[&(a, c)]);
                let objs = &objs;
                let count = (fs.len() as u128).saturating_mul(gs.len() as u128);
                check_cap(
                    || format!("composites {} -> {} -> {}", names[a], names[b], names[c]),
                    count,
                    caps.morphisms,
                )?;
                let table: Vec<(usize, usize, usize)> = (0..fs.len())
                    .into_par_iter()
                    .flat_map_iter(|f| {
                        (0..gs.len()).map(move |g| {
                            let fg = model.comp(&objs[a], &objs[b], &objs[c], &fs[f], &gs[g]);
                            (
                                f,
                                g,
                                out.iter()
                                    .position(|x| *x == fg)
                                    .expect("composite is in the hom-set"),
                            )
                        })
                    })
                    .collect();
                for (f, g, fg) in table {
                    let kf = format!("k_{}_{}_{f}", names[a], names[b]);
                    let kg = format!("k_{}_{}_{g}", names[b], names[c]);
                    let kfg = format!("k_{}_{}_{fg}", names[a], names[c]);
                    theory.term_axioms.push(TermAxiom {
                        ctx: MixedContext::new(empty_host.clone(), single("a", ty(a))),
                        lhs: Term::Core(core_const(&kg, core_const(&kf, var("a")))),
                        rhs: Term::Core(core_const(&kfg, var("a"))),
                        ty: Type::Core(ty(c)),
                    });
                }
            }
        }
    }

    let labels = objs.iter().map(|o| model.obj_label(o)).collect();
    let objects = names.into_iter().zip(objs).collect();
    Ok(GeneratedTheory {
        theory,
        interpretation: interp,
        objects,
        labels,
        core_judgments,
        host_judgments,
    })
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_alphanumeric() { c } else { '_' })
        .collect()
}

/// Every list of `len` hom-types, in lexicographic order.
fn contexts(types: &[(usize, usize)], len: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                types
                    .iter()
                    .map(move |t| [prefix.clone(), vec![*t]].concat())
            })
            .collect();
    }
    out
}

/// Nest a flat table of results into curried function values.
fn curried<M: Clone>(
    gamma: &[(usize, usize)],
    homs: &BTreeMap<(usize, usize), Vec<M>>,
    leaves: &[Value<M>],
    proof: &dyn Fn((usize, usize)) -> HostType,
) -> Value<M> {
    let Some((&first, rest)) = gamma.split_first() else {
        return leaves[0].clone();
    };
    let args = &homs[&first];
    let stride = leaves.len() / args.len().max(1);
    let entries = args
        .iter()
        .enumerate()
        .map(|(i, m)| {
            (
                Value::Hom(m.clone()),
                curried(rest, homs, &leaves[i * stride..(i + 1) * stride], proof),
            )
        })
        .collect();
    Value::Table {
        dom: proof(first),
        entries: Rc::new(entries),
    }
}

// -- syntactic category ---------------------------------------------------------------

/// The term model of a theory: core base types as objects, classes of
/// closed terms of type `Proof(A, B)` as hom-sets.
#[derive(Clone, Debug)]
pub struct SyntacticModel {
    pub objects: Vec<CoreType>,
    /// Classes of closed terms, each listed by its members; the first is the representative.
    pub homs: BTreeMap<(usize, usize), Vec<Vec<HostTerm>>>,
    pub comp: BTreeMap<(usize, usize, usize), Vec<Vec<Option<usize>>>>,
    pub id: BTreeMap<usize, Option<usize>>,
    /// Comparisons the equality decision could not settle.
    pub unknown: usize,
    pub warnings: Vec<String>,
}

impl SyntacticModel {
    pub fn class_of(&self, dom: usize, cod: usize, t: &HostTerm) -> Option<usize> {
        self.homs
            .get(&(dom, cod))?
            .iter()
            .position(|c| c.iter().any(|m| alpha_eq_host(m, t)))
    }
}

/// `f` followed by `g`, as a promoted term.
pub fn compose(dom: &CoreType, f: &HostTerm, g: &HostTerm) -> HostTerm {
    HostTerm::promote(
        single("a", dom.clone()),
        CoreTerm::derelict(g.clone(), CoreTerm::derelict(f.clone(), var("a"))),
    )
}

pub fn identity(a: &CoreType) -> HostTerm {
    HostTerm::promote(single("a", a.clone()), var("a"))
}

/// Closed candidate terms of type `Proof(A, B)`: the identity, promoted
/// unary core constants, and host constants.
fn candidates(
    theory: &Theory,
    env: &crate::typing::TypeEnv,
    a: &CoreType,
    b: &CoreType,
) -> Vec<HostTerm> {
    let mut out = Vec::new();
    if env.core_eq(a, b) {
        out.push(identity(a));
    }
    for (k, sig) in &theory.core_consts {
        if sig.params.len() == 1
            && env.core_eq(&sig.params.entries()[0].1, a)
            && env.core_eq(&sig.result, b)
        {
            out.push(HostTerm::promote(
                single("a", a.clone()),
                core_const(k, var("a")),
            ));
        }
    }
    let target = HostType::proof(a.clone(), b.clone());
    for (h, sig) in &theory.host_consts {
        if sig.param.is_none() && env.host_eq(&sig.ty, &target) {
            out.push(HostTerm::Const(h.clone(), None));
        }
    }
    out
}

/// Build the term model, deciding hom-equality with the equational theory.
pub fn syntactic_category(theory: &Theory) -> SyntacticModel {
    let env = theory.env();
    let cfg = NormConfig::default();
    let ctx = MixedContext::default();
    let objects: Vec<CoreType> = theory
        .core_types
        .iter()
        .map(|n| CoreType::base(n))
        .collect();
    let n = objects.len();
    let mut unknown = 0;
    let mut warnings = Vec::new();
    let mut homs = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let ty = Type::Host(HostType::proof(objects[i].clone(), objects[j].clone()));
            let mut classes: Vec<Vec<HostTerm>> = Vec::new();
            for t in candidates(theory, &env, &objects[i], &objects[j]) {
                let term = Term::Host(t.clone());
                let mut home = None;
                for (c, members) in classes.iter().enumerate() {
                    let v = decide_eq(
                        &env,
                        &ctx,
                        &Term::Host(members[0].clone()),
                        &term,
                        &ty,
                        None,
                        &cfg,
                    );
                    match v.outcome {
                        Outcome::Equal => {
                            home = Some(c);
                            break;
                        }
                        Outcome::Unknown => {
                            unknown += 1;
                            warnings.push(format!(
                                "cannot decide {} = {}",
                                print_term(&Term::Host(members[0].clone())),
                                print_term(&term)
                            ));
                        }
                        Outcome::Unequal => {}
                    }
                }
                match home {
                    Some(c) => classes[c].push(t),
                    None => classes.push(vec![t]),
                }
            }
            homs.insert((i, j), classes);
        }
    }
    let lookup = |i: usize, j: usize, t: &HostTerm| -> (Option<usize>, usize) {
        let ty = Type::Host(HostType::proof(objects[i].clone(), objects[j].clone()));
        let mut unsure = 0;
        for (c, members) in homs[&(i, j)].iter().enumerate() {
            match decide_eq(
                &env,
                &ctx,
                &Term::Host(t.clone()),
                &Term::Host(members[0].clone()),
                &ty,
                None,
                &cfg,
            )
            .outcome
            {
                Outcome::Equal => return (Some(c), unsure),
                Outcome::Unknown => unsure += 1,
                Outcome::Unequal => {}
            }
        }
        (None, unsure)
    };
    let mut comp = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (fs, gs) = (&homs[&(a, b)], &homs[&(b, c)]);
                let rows: Vec<(Vec<Option<usize>>, usize)> = fs
                    .par_iter()
                    .map(|f| {
                        let mut unsure = 0;
                        let row = gs
                            .iter()
                            .map(|g| {
                                let (hit, u) = lookup(a, c, &compose(&objects[a], &f[0], &g[0]));
                                unsure += u;
                                hit
                            })
                            .collect();
                        (row, unsure)
                    })
                    .collect();
                unknown += rows.iter().map(|r| r.1).sum::<usize>();
                comp.insert((a, b, c), rows.into_iter().map(|r| r.0).collect());
            }
        }
    }
    let id = (0..n)
        .map(|i| (i, lookup(i, i, &identity(&objects[i])).0))
        .collect();
    SyntacticModel {
        objects,
        homs,
        comp,
        id,
        unknown,
        warnings,
    }
}

// -- round trip ---------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomCheck {
    pub dom: Name,
    pub cod: Name,
    pub model: usize,
    pub syntactic: usize,
    pub bijective: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundTripOutcome {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTripReport {
    pub objects: (usize, usize),
    pub homs: Vec<HomCheck>,
    pub composition_mismatches: Vec<String>,
    pub unknown: usize,
    pub outcome: RoundTripOutcome,
}

impl fmt::Display for RoundTripReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "objects: model {}, syntactic {}",
            self.objects.0, self.objects.1
        )?;
        for h in &self.homs {
            let mark = if h.bijective { "ok" } else { "MISMATCH" };
            writeln!(
                f,
                "hom({}, {}): model {}, syntactic {} {mark}",
                h.dom, h.cod, h.model, h.syntactic
            )?;
        }
        for m in &self.composition_mismatches {
            writeln!(f, "composition: {m}")?;
        }
        if self.unknown > 0 {
            writeln!(f, "undecided comparisons: {}", self.unknown)?;
        }
        let verdict = match self.outcome {
            RoundTripOutcome::Holds => "holds",
            RoundTripOutcome::Fails => "fails",
            RoundTripOutcome::Inconclusive => "inconclusive",
        };
        write!(f, "round trip {verdict}")
    }
}

/// Compare a model with the syntactic category of its extracted theory,
/// using closed terms only.
pub fn round_trip_check<S: Smc>(model: &S, caps: &Caps) -> Result<RoundTripReport, GenError> {
    let generated = syntax_gen(
        model,
        &Caps {
            context_len: 0,
            ..*caps
        },
    )?;
    let syn = syntactic_category(&generated.theory);
    let objs: Vec<&S::Obj> = generated.objects.iter().map(|(_, o)| o).collect();
    let names: Vec<&Name> = generated.objects.iter().map(|(n, _)| n).collect();
    // Syntactic objects are sorted by name; find each model object among them.
    let pos: Vec<usize> = names
        .iter()
        .map(|n| {
            syn.objects
                .iter()
                .position(|t| *t == CoreType::base(n))
                .expect("every object is named")
        })
        .collect();
    let n = objs.len();
    let mut naming: BTreeMap<(usize, usize), Vec<Option<usize>>> = BTreeMap::new();
    let mut homs = Vec::new();
    let mut fails = false;
    for i in 0..n {
        for j in 0..n {
            let ms = model
                .hom(objs[i], objs[j], caps.morphisms as usize)
                .expect("within the cap");
            let cls: Vec<Option<usize>> = (0..ms.len())
                .map(|m| {
                    let k = format!("k_{}_{}_{m}", names[i], names[j]);
                    let t = HostTerm::promote(
                        single("a", CoreType::base(names[i])),
                        core_const(&k, var("a")),
                    );
                    syn.class_of(pos[i], pos[j], &t)
                })
                .collect();
            let syntactic = syn.homs[&(pos[i], pos[j])].len();
            let mut hit: Vec<usize> = cls.iter().flatten().copied().collect();
            hit.sort_unstable();
            hit.dedup();
            let bijective =
                cls.iter().all(Option::is_some) && hit.len() == ms.len() && syntactic == ms.len();
            fails |= !bijective;
            homs.push(HomCheck {
                dom: names[i].clone(),
                cod: names[j].clone(),
                model: ms.len(),
                syntactic,
                bijective,
            });
            naming.insert((i, j), cls);
        }
    }
    let mut mismatches = Vec::new();
    if !fails {
        for a in 0..n {
            let id = model.id(objs[a]);
            let hom = model
                .hom(objs[a], objs[a], caps.morphisms as usize)
                .expect("within the cap");
            let m = hom
                .iter()
                .position(|x| *x == id)
                .expect("identity is in the hom-set");
            if syn.id[&pos[a]] != naming[&(a, a)][m] {
                mismatches.push(format!("identity on {}", names[a]));
            }
            for b in 0..n {
                for c in 0..n {
                    let fs = model
                        .hom(objs[a], objs[b], caps.morphisms as usize)
                        .expect("within the cap");
                    let gs = model
                        .hom(objs[b], objs[c], caps.morphisms as usize)
                        .expect("within the cap");
                    let out = model
                        .hom(objs[a], objs[c], caps.morphisms as usize)
                        .expect("within the cap");
                    let table = &syn.comp[&(pos[a], pos[b], pos[c])];
                    for (fi, f) in fs.iter().enumerate() {
                        for (gi, g) in gs.iter().enumerate() {
                            let fg = model.comp(objs[a], objs[b], objs[c], f, g);
                            let want = naming[&(a, c)][out
                                .iter()
                                .position(|x| *x == fg)
                                .expect("composite in hom-set")];
                            let (sf, sg) = (
                                naming[&(a, b)][fi].expect("named"),
                                naming[&(b, c)][gi].expect("named"),
                            );
                            if table[sf][sg] != want {
                                mismatches.push(format!(
                                    "{} -> {} -> {}: morphisms {fi} then {gi}",
                                    names[a], names[b], names[c]
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    let outcome = if fails || !mismatches.is_empty() {
        if syn.unknown > 0 {
            RoundTripOutcome::Inconclusive
        } else {
            RoundTripOutcome::Fails
        }
    } else {
        RoundTripOutcome::Holds
    };
    Ok(RoundTripReport {
        objects: (n, syn.objects.len()),
        homs,
        composition_mismatches: mismatches,
        unknown: syn.unknown,
        outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elab::load_program;
    use crate::semantics::finrel::{bit, point, FinRel, Relation};
    use crate::semantics::interp::{FiniteModel, Semantics};
    use crate::semantics::smc::Mutated;
    use crate::semantics::table::{TableModel, TableSmc};

    fn closed() -> Caps {
        Caps {
            context_len: 0,
            ..Caps::default()
        }
    }

    fn trivial() -> TableSmc {
        TableSmc::new(TableModel::trivial()).unwrap()
    }

    #[test]
    fn trivial_model_names_its_identity() {
        let g = syntax_gen(&trivial(), &closed()).unwrap();
        assert_eq!(g.theory.core_types.len(), 1);
        assert_eq!(g.core_judgments.len(), 1);
        assert_eq!(g.host_judgments.len(), 1);
        assert_eq!(g.host_judgments[0].ty.to_string(), "Proof(C0, C0)");
        let env = g.theory.env();
        let sm = syntactic_category(&g.theory);
        assert_eq!(sm.homs[&(0, 0)].len(), 1);
        assert!(sm
            .class_of(0, 0, &identity(&CoreType::base("C0")))
            .is_some());
        let _ = env;
    }

    #[test]
    fn identity_is_a_unit_in_the_term_model() {
        let sm = syntactic_category(&crate::elab::circuit_theory());
        let bit = sm
            .objects
            .iter()
            .position(|t| *t == CoreType::base("Bit"))
            .unwrap();
        let id = sm.id[&bit].unwrap();
        let not = HostTerm::promote(
            single("a", CoreType::base("Bit")),
            core_const("not", var("a")),
        );
        let not = sm.class_of(bit, bit, &not).unwrap();
        assert_ne!(id, not);
        let table = &sm.comp[&(bit, bit, bit)];
        assert_eq!(table[id][not], Some(not));
        assert_eq!(table[not][id], Some(not));
        assert_eq!(sm.unknown, 0);
    }

    #[test]
    fn finrel_on_empty_and_bits() {
        let m = FinRel::with_objects(vec![Vec::new(), bit()]);
        let g = syntax_gen(&m, &closed()).unwrap();
        assert_eq!(g.theory.core_types.len(), 2);
        let bits = HostType::proof(CoreType::base("C1"), CoreType::base("C1"));
        let named = g
            .theory
            .host_consts
            .values()
            .filter(|s| s.ty == bits)
            .count();
        assert_eq!(named, 16);
    }

    #[test]
    fn judgments_typecheck_and_equalities_are_exactly_the_equal_pairs() {
        let m = FinRel::with_objects(vec![Vec::new(), point()]);
        let g = syntax_gen(&m, &Caps::default()).unwrap();
        let env = g.theory.env();
        for j in g.core_judgments.iter().chain(&g.host_judgments) {
            env.check_term(&j.ctx, &j.term, Some(&j.ty))
                .unwrap_or_else(|e| panic!("{j}: {e:?}"));
        }
        let fm = FiniteModel {
            core: m,
            faithful: false,
        };
        let sem = Semantics::new(&fm, &g.interpretation, &env);
        for ax in g.equalities() {
            assert_eq!(
                sem.satisfies(&ax.ctx, &ax.lhs, &ax.rhs).unwrap(),
                None,
                "{}",
                print_term(&ax.lhs)
            );
        }
        let js = &g.host_judgments;
        for x in js {
            for y in js {
                if x.ty == y.ty && x.ctx == y.ctx && x.term != y.term {
                    assert!(sem.satisfies(&x.ctx, &x.term, &y.term).unwrap().is_some());
                }
            }
        }
    }

    #[test]
    fn emitted_source_reloads() {
        let g = syntax_gen(&trivial(), &Caps::default()).unwrap();
        let (t, cmds) = load_program(&g.to_source(), &[], false).unwrap().unwrap();
        assert_eq!(t.core_consts, g.theory.core_consts);
        assert!(cmds.iter().all(|c| c.kind.is_ok()));
    }

    #[test]
    fn overflowing_contexts_report_the_count() {
        let m = FinRel::with_objects(vec![Vec::new(), bit()]);
        let err = syntax_gen(&m, &Caps::default()).err().unwrap();
        assert!(
            matches!(err, GenError::CapExceeded { count, .. } if count > 1 << 12),
            "{err}"
        );
    }

    #[test]
    fn round_trip_on_small_models() {
        let r = round_trip_check(&trivial(), &Caps::default()).unwrap();
        assert_eq!(r.outcome, RoundTripOutcome::Holds, "{r}");
        let m = FinRel::with_objects(vec![Vec::new(), point()]);
        let r = round_trip_check(&m, &Caps::default()).unwrap();
        assert_eq!(r.outcome, RoundTripOutcome::Holds, "{r}");
        let pp = r
            .homs
            .iter()
            .find(|h| h.dom == "C1" && h.cod == "C1")
            .unwrap();
        assert_eq!((pp.model, pp.syntactic), (2, 2));
    }

    #[test]
    fn round_trip_with_sixteen_relations() {
        let m = FinRel::with_objects(vec![Vec::new(), bit()]);
        let r = round_trip_check(&m, &Caps::default()).unwrap();
        assert_eq!(r.outcome, RoundTripOutcome::Holds, "{r}");
    }

    #[test]
    fn mutated_models_are_refused() {
        let not = Relation::graph(2, 2, |i| 1 - i);
        let m = Mutated {
            inner: FinRel::with_objects(vec![bit()]),
            at: (bit(), bit(), bit(), not.clone(), not.clone()),
            result: not,
        };
        assert!(matches!(
            round_trip_check(&m, &Caps::default()),
            Err(GenError::NotLinted(_))
        ));
    }
}
