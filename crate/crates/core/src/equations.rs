//! The equational theory: oriented rewriting to normal form, congruence
//! closure over theory axioms, and an equality decision with an optional
//! semantic oracle.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::congruence::Congruence;
use crate::surface::{print_core_term, print_host_term};
use crate::syntax::*;
use crate::typing::TypeEnv;

pub const DEFAULT_MAX_STEPS: usize = 1000;

/// Every rule the normalizer can fire, by name.
pub const RULES: &[&str] = &[
    "beta-arrow",
    "beta-fst",
    "beta-snd",
    "eta-pair",
    "eta-arrow",
    "unit",
    "dual-prom-der",
    "el1",
    "el2",
    "el3",
    "el4",
    "dual-der-prom",
];

#[derive(Clone, Debug)]
pub struct NormConfig {
    pub max_steps: usize,
}

impl Default for NormConfig {
    fn default() -> Self {
        NormConfig {
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

/// One rewrite: the rule, the context at the redex, and the whole term before and after.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: &'static str,
    pub ctx: MixedContext,
    pub redex: Term,
    pub contractum: Term,
    pub before: Term,
    pub after: Term,
}

pub fn print_term(t: &Term) -> String {
    match t {
        Term::Host(h) => print_host_term(h),
        Term::Core(c) => print_core_term(c),
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ~> {}",
            self.rule,
            print_term(&self.before),
            print_term(&self.after)
        )
    }
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub term: Term,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug)]
pub struct BudgetExceeded {
    pub max_steps: usize,
    pub partial: Term,
    pub steps: Vec<Step>,
}

impl fmt::Display for BudgetExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step budget of {} exceeded", self.max_steps)
    }
}

struct Local {
    rule: &'static str,
    ctx: MixedContext,
    redex: Term,
    contractum: Term,
}

struct Rewriter<'a, 't> {
    env: &'a TypeEnv<'t>,
}

fn host_ctx_with(ctx: &MixedContext, x: &str, ty: &HostType) -> MixedContext {
    MixedContext::new(ctx.host.with(x, ty.clone()), ctx.core.clone())
}

impl Rewriter<'_, '_> {
    fn is_unit(&self, ctx: &MixedContext, t: &HostTerm) -> bool {
        match self.env.synth_lenient(ctx, &Term::Host(t.clone())) {
            Some(Type::Host(ty)) => self.env.host_eq(&ty, &HostType::Unit),
            _ => false,
        }
    }

    fn host_root(&self, ctx: &MixedContext, t: &HostTerm) -> Option<(&'static str, HostTerm)> {
        match t {
            HostTerm::App(f, a) => {
                if let HostTerm::Lam(x, _, body) = &**f {
                    return Some(("beta-arrow", subst_host(body, x, a)));
                }
            }
            HostTerm::Fst(p) => {
                if let HostTerm::Pair(a, _) = &**p {
                    return Some(("beta-fst", (**a).clone()));
                }
            }
            HostTerm::Snd(p) => {
                if let HostTerm::Pair(_, b) = &**p {
                    return Some(("beta-snd", (**b).clone()));
                }
            }
            HostTerm::Pair(a, b) => {
                if let (HostTerm::Fst(u), HostTerm::Snd(v)) = (&**a, &**b) {
                    if alpha_eq_host(u, v) {
                        return Some(("eta-pair", (**u).clone()));
                    }
                }
            }
            HostTerm::Lam(x, _, body) => {
                if let HostTerm::App(f, arg) = &**body {
                    if matches!(&**arg, HostTerm::Var(y) if y == x)
                        && !free_vars_host(f).host.contains(x)
                    {
                        return Some(("eta-arrow", (**f).clone()));
                    }
                }
            }
            HostTerm::Promote(octx, body) => {
                if let CoreTerm::Derelict(h, arg) = &**body {
                    let names: Vec<CoreTerm> =
                        octx.names().map(|n| CoreTerm::Var(n.clone())).collect();
                    if **arg == tensor_of(names) {
                        return Some(("dual-prom-der", (**h).clone()));
                    }
                }
            }
            _ => {}
        }
        if !matches!(t, HostTerm::Star) && self.is_unit(ctx, t) {
            return Some(("unit", HostTerm::Star));
        }
        None
    }

    fn host(&self, ctx: &MixedContext, t: &HostTerm) -> Option<(HostTerm, Local)> {
        if let Some((rule, c)) = self.host_root(ctx, t) {
            let local = Local {
                rule,
                ctx: ctx.clone(),
                redex: Term::Host(t.clone()),
                contractum: Term::Host(c.clone()),
            };
            return Some((c, local));
        }
        match t {
            HostTerm::Star | HostTerm::Var(_) | HostTerm::Const(..) => None,
            HostTerm::Pair(a, b) => {
                if let Some((a2, l)) = self.host(ctx, a) {
                    return Some((HostTerm::pair(a2, (**b).clone()), l));
                }
                self.host(ctx, b)
                    .map(|(b2, l)| (HostTerm::pair((**a).clone(), b2), l))
            }
            HostTerm::App(f, a) => {
                if let Some((f2, l)) = self.host(ctx, f) {
                    return Some((HostTerm::app(f2, (**a).clone()), l));
                }
                self.host(ctx, a)
                    .map(|(a2, l)| (HostTerm::app((**f).clone(), a2), l))
            }
            HostTerm::Fst(a) => self.host(ctx, a).map(|(a2, l)| (HostTerm::fst(a2), l)),
            HostTerm::Snd(a) => self.host(ctx, a).map(|(a2, l)| (HostTerm::snd(a2), l)),
            HostTerm::Lam(x, ty, body) => {
                let inner = host_ctx_with(ctx, x, ty);
                self.host(&inner, body)
                    .map(|(b2, l)| (HostTerm::lam(x, ty.clone(), b2), l))
            }
            HostTerm::Promote(octx, body) => {
                let inner = MixedContext::new(ctx.host.clone(), octx.clone());
                self.core(&inner, body)
                    .map(|(b2, l)| (HostTerm::promote(octx.clone(), b2), l))
            }
        }
    }

    fn core_root(&self, f: &CoreTerm) -> Option<(&'static str, CoreTerm)> {
        match f {
            CoreTerm::LetTensor(g, a, b, body) => {
                if let CoreTerm::Tensor(x, y) = &**g {
                    let mut s = Subst::default();
                    s.core.insert(a.clone(), (**x).clone());
                    s.core.insert(b.clone(), (**y).clone());
                    return Some(("el1", s.apply_core(body)));
                }
                let occ = core_occurrences(body);
                if occ.get(a) == Some(&1) && occ.get(b) == Some(&1) && a != b {
                    let fv = free_vars_core(g).core;
                    if let Some(r) = replace_pair(body, a, b, g, &fv, &mut Vec::new()) {
                        return Some(("el2", r));
                    }
                }
                None
            }
            CoreTerm::LetUnit(g, body) => {
                if **g == CoreTerm::Bullet {
                    return Some(("el3", (**body).clone()));
                }
                let fv = free_vars_core(g).core;
                replace_bullet(body, g, &fv, &mut Vec::new()).map(|r| ("el4", r))
            }
            CoreTerm::Derelict(h, arg) => {
                if let HostTerm::Promote(octx, body) = &**h {
                    return Some(("dual-der-prom", unfold_promote(octx, body, arg)));
                }
                None
            }
            _ => None,
        }
    }

    fn let_types(&self, ctx: &MixedContext, g: &CoreTerm) -> (CoreType, CoreType) {
        match self.env.synth_lenient(ctx, &Term::Core(g.clone())) {
            Some(Type::Core(ty)) => self
                .env
                .as_tensor(&ty)
                .unwrap_or((CoreType::Unit, CoreType::Unit)),
            _ => (CoreType::Unit, CoreType::Unit),
        }
    }

    fn core(&self, ctx: &MixedContext, f: &CoreTerm) -> Option<(CoreTerm, Local)> {
        if let Some((rule, c)) = self.core_root(f) {
            let local = Local {
                rule,
                ctx: consumed(ctx, f),
                redex: Term::Core(f.clone()),
                contractum: Term::Core(c.clone()),
            };
            return Some((c, local));
        }
        match f {
            CoreTerm::Bullet | CoreTerm::Var(_) => None,
            CoreTerm::Tensor(g, h) => {
                if let Some((g2, l)) = self.core(ctx, g) {
                    return Some((CoreTerm::tensor(g2, (**h).clone()), l));
                }
                self.core(ctx, h)
                    .map(|(h2, l)| (CoreTerm::tensor((**g).clone(), h2), l))
            }
            CoreTerm::LetTensor(g, a, b, body) => {
                if let Some((g2, l)) = self.core(ctx, g) {
                    return Some((
                        CoreTerm::LetTensor(Box::new(g2), a.clone(), b.clone(), body.clone()),
                        l,
                    ));
                }
                let (ta, tb) = self.let_types(ctx, g);
                let inner = MixedContext::new(ctx.host.clone(), ctx.core.with(a, ta).with(b, tb));
                self.core(&inner, body).map(|(b2, l)| {
                    (
                        CoreTerm::LetTensor(g.clone(), a.clone(), b.clone(), Box::new(b2)),
                        l,
                    )
                })
            }
            CoreTerm::LetUnit(g, body) => {
                if let Some((g2, l)) = self.core(ctx, g) {
                    return Some((CoreTerm::let_unit(g2, (**body).clone()), l));
                }
                self.core(ctx, body)
                    .map(|(b2, l)| (CoreTerm::let_unit((**g).clone(), b2), l))
            }
            CoreTerm::Derelict(h, arg) => {
                let host_only = MixedContext::new(ctx.host.clone(), CoreContext::new());
                if let Some((h2, l)) = self.host(&host_only, h) {
                    return Some((CoreTerm::derelict(h2, (**arg).clone()), l));
                }
                self.core(ctx, arg)
                    .map(|(a2, l)| (CoreTerm::derelict((**h).clone(), a2), l))
            }
            CoreTerm::Const(k, args) => {
                for (i, a) in args.iter().enumerate() {
                    if let Some((a2, l)) = self.core(ctx, a) {
                        let mut args = args.clone();
                        args[i] = a2;
                        return Some((CoreTerm::Const(k.clone(), args), l));
                    }
                }
                None
            }
        }
    }
}

/// Right-associated tensor of a list of terms, `bullet` when empty.
pub fn tensor_of(mut items: Vec<CoreTerm>) -> CoreTerm {
    let mut acc = match items.pop() {
        None => return CoreTerm::Bullet,
        Some(t) => t,
    };
    while let Some(t) = items.pop() {
        acc = CoreTerm::tensor(t, acc);
    }
    acc
}

/// `derelict(promote(core a1..an. body)) @ arg`: unpack `arg` into the binders.
fn unfold_promote(octx: &CoreContext, body: &CoreTerm, arg: &CoreTerm) -> CoreTerm {
    let entries = octx.entries();
    match entries.len() {
        0 => CoreTerm::let_unit(arg.clone(), body.clone()),
        1 => subst_core(body, &entries[0].0, arg),
        n => {
            let arg_fv = free_vars_core(arg).core;
            let body_fv = free_vars_core(body).core;
            let mut used: BTreeSet<Name> = arg_fv.union(&body_fv).cloned().collect();
            let mut s = Subst::default();
            let mut names = Vec::with_capacity(n);
            for (a, _) in entries {
                let a2 = fresh(a, |c| {
                    arg_fv.contains(c)
                        || (used.contains(c) && c != a)
                        || names.contains(&c.to_string())
                });
                used.insert(a2.clone());
                if &a2 != a {
                    s.core.insert(a.clone(), CoreTerm::Var(a2.clone()));
                }
                names.push(a2);
            }
            let body = s.apply_core(body);
            let mut rests = Vec::with_capacity(n - 2);
            for _ in 0..n - 2 {
                let r = fresh("r", |c| used.contains(c));
                used.insert(r.clone());
                rests.push(r);
            }
            // let a1 (x) r1 = arg in let a2 (x) r2 = r1 in ... let a_{n-1} (x) a_n = r_{n-2} in body
            let mut acc = body;
            for i in (0..n - 1).rev() {
                let right = if i == n - 2 {
                    names[n - 1].clone()
                } else {
                    rests[i].clone()
                };
                let scrut = if i == 0 {
                    arg.clone()
                } else {
                    CoreTerm::Var(rests[i - 1].clone())
                };
                acc = CoreTerm::let_tensor(scrut, &names[i], &right, acc);
            }
            acc
        }
    }
}

fn captured(bound: &[Name], fv: &BTreeSet<Name>) -> bool {
    bound.iter().any(|b| fv.contains(b))
}

fn replace_pair(
    f: &CoreTerm,
    a: &str,
    b: &str,
    g: &CoreTerm,
    fv: &BTreeSet<Name>,
    bound: &mut Vec<Name>,
) -> Option<CoreTerm> {
    match f {
        CoreTerm::Tensor(x, y) => {
            if matches!((&**x, &**y), (CoreTerm::Var(p), CoreTerm::Var(q)) if p == a && q == b) {
                return if captured(bound, fv) {
                    None
                } else {
                    Some(g.clone())
                };
            }
            if let Some(x2) = replace_pair(x, a, b, g, fv, bound) {
                return Some(CoreTerm::tensor(x2, (**y).clone()));
            }
            replace_pair(y, a, b, g, fv, bound).map(|y2| CoreTerm::tensor((**x).clone(), y2))
        }
        CoreTerm::LetTensor(s, x, y, body) => {
            if let Some(s2) = replace_pair(s, a, b, g, fv, bound) {
                return Some(CoreTerm::LetTensor(
                    Box::new(s2),
                    x.clone(),
                    y.clone(),
                    body.clone(),
                ));
            }
            if [x, y].iter().any(|n| n.as_str() == a || n.as_str() == b) {
                return None;
            }
            bound.push(x.clone());
            bound.push(y.clone());
            let r = replace_pair(body, a, b, g, fv, bound);
            bound.truncate(bound.len() - 2);
            r.map(|b2| CoreTerm::LetTensor(s.clone(), x.clone(), y.clone(), Box::new(b2)))
        }
        CoreTerm::LetUnit(s, body) => {
            if let Some(s2) = replace_pair(s, a, b, g, fv, bound) {
                return Some(CoreTerm::let_unit(s2, (**body).clone()));
            }
            replace_pair(body, a, b, g, fv, bound).map(|b2| CoreTerm::let_unit((**s).clone(), b2))
        }
        CoreTerm::Derelict(h, arg) => {
            replace_pair(arg, a, b, g, fv, bound).map(|a2| CoreTerm::derelict((**h).clone(), a2))
        }
        CoreTerm::Const(k, args) => {
            for (i, x) in args.iter().enumerate() {
                if let Some(x2) = replace_pair(x, a, b, g, fv, bound) {
                    let mut args = args.clone();
                    args[i] = x2;
                    return Some(CoreTerm::Const(k.clone(), args));
                }
            }
            None
        }
        CoreTerm::Bullet | CoreTerm::Var(_) => None,
    }
}

/// Replace the leftmost `bullet` of `f` (outside host terms) by `g`.
fn replace_bullet(
    f: &CoreTerm,
    g: &CoreTerm,
    fv: &BTreeSet<Name>,
    bound: &mut Vec<Name>,
) -> Option<CoreTerm> {
    match f {
        CoreTerm::Bullet => {
            if captured(bound, fv) {
                None
            } else {
                Some(g.clone())
            }
        }
        CoreTerm::Var(_) => None,
        CoreTerm::Tensor(x, y) => {
            if let Some(x2) = replace_bullet(x, g, fv, bound) {
                return Some(CoreTerm::tensor(x2, (**y).clone()));
            }
            replace_bullet(y, g, fv, bound).map(|y2| CoreTerm::tensor((**x).clone(), y2))
        }
        CoreTerm::LetTensor(s, x, y, body) => {
            if let Some(s2) = replace_bullet(s, g, fv, bound) {
                return Some(CoreTerm::LetTensor(
                    Box::new(s2),
                    x.clone(),
                    y.clone(),
                    body.clone(),
                ));
            }
            bound.push(x.clone());
            bound.push(y.clone());
            let r = replace_bullet(body, g, fv, bound);
            bound.truncate(bound.len() - 2);
            r.map(|b2| CoreTerm::LetTensor(s.clone(), x.clone(), y.clone(), Box::new(b2)))
        }
        CoreTerm::LetUnit(s, body) => {
            if let Some(s2) = replace_bullet(s, g, fv, bound) {
                return Some(CoreTerm::let_unit(s2, (**body).clone()));
            }
            replace_bullet(body, g, fv, bound).map(|b2| CoreTerm::let_unit((**s).clone(), b2))
        }
        CoreTerm::Derelict(h, arg) => {
            replace_bullet(arg, g, fv, bound).map(|a2| CoreTerm::derelict((**h).clone(), a2))
        }
        CoreTerm::Const(k, args) => {
            for (i, x) in args.iter().enumerate() {
                if let Some(x2) = replace_bullet(x, g, fv, bound) {
                    let mut args = args.clone();
                    args[i] = x2;
                    return Some(CoreTerm::Const(k.clone(), args));
                }
            }
            None
        }
    }
}

/// The context restricted to the core variables `f` consumes.
fn consumed(ctx: &MixedContext, f: &CoreTerm) -> MixedContext {
    let used = free_vars_core(f).core;
    let core = ctx
        .core
        .entries()
        .iter()
        .filter(|(a, _)| used.contains(a))
        .cloned()
        .collect();
    MixedContext::new(ctx.host.clone(), CoreContext::from_entries(core))
}

/// One leftmost-outermost rewrite step.
pub fn step(env: &TypeEnv, ctx: &MixedContext, t: &Term) -> Option<Step> {
    let rw = Rewriter { env };
    let (after, local) = match t {
        Term::Host(h) => {
            let (h2, l) = rw.host(ctx, h)?;
            (Term::Host(h2), l)
        }
        Term::Core(c) => {
            let (c2, l) = rw.core(ctx, c)?;
            (Term::Core(c2), l)
        }
    };
    Some(Step {
        rule: local.rule,
        ctx: local.ctx,
        redex: local.redex,
        contractum: local.contractum,
        before: t.clone(),
        after,
    })
}

/// Rewrite to normal form within the step budget.
pub fn normalize(
    env: &TypeEnv,
    ctx: &MixedContext,
    t: &Term,
    cfg: &NormConfig,
) -> Result<Normalized, BudgetExceeded> {
    let mut cur = t.clone();
    let mut steps = Vec::new();
    while let Some(s) = step(env, ctx, &cur) {
        if steps.len() == cfg.max_steps {
            return Err(BudgetExceeded {
                max_steps: cfg.max_steps,
                partial: cur,
                steps,
            });
        }
        cur = s.after.clone();
        steps.push(s);
    }
    Ok(Normalized { term: cur, steps })
}

// ---------------------------------------------------------------------------
// Congruence closure over theory axioms

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum TLabel {
    HStar,
    HFree(Name),
    HBound(usize),
    HConst(Name, Option<HostType>),
    HPair,
    HFst,
    HSnd,
    HLam(HostType),
    HApp,
    HPromote(Vec<CoreType>),
    CBullet,
    CFree(Name),
    CBound(usize),
    CTensor,
    CLetTensor,
    CLetUnit,
    CDerelict,
    CConst(Name),
}

#[derive(Default)]
struct Encoder {
    cc: Congruence<TLabel>,
}

#[derive(Clone, Default)]
struct Binders {
    host: Vec<Name>,
    core: Vec<Name>,
}

impl Encoder {
    fn host(&mut self, t: &HostTerm, b: &mut Binders) -> usize {
        match t {
            HostTerm::Star => self.cc.add(TLabel::HStar, vec![]),
            HostTerm::Var(x) => match b.host.iter().rposition(|n| n == x) {
                Some(i) => self.cc.add(TLabel::HBound(b.host.len() - 1 - i), vec![]),
                None => self.cc.add(TLabel::HFree(x.clone()), vec![]),
            },
            HostTerm::Const(n, ix) => self.cc.add(TLabel::HConst(n.clone(), ix.clone()), vec![]),
            HostTerm::Pair(x, y) => {
                let (x, y) = (self.host(x, b), self.host(y, b));
                self.cc.add(TLabel::HPair, vec![x, y])
            }
            HostTerm::App(x, y) => {
                let (x, y) = (self.host(x, b), self.host(y, b));
                self.cc.add(TLabel::HApp, vec![x, y])
            }
            HostTerm::Fst(x) => {
                let x = self.host(x, b);
                self.cc.add(TLabel::HFst, vec![x])
            }
            HostTerm::Snd(x) => {
                let x = self.host(x, b);
                self.cc.add(TLabel::HSnd, vec![x])
            }
            HostTerm::Lam(x, ty, body) => {
                b.host.push(x.clone());
                let body = self.host(body, b);
                b.host.pop();
                self.cc.add(TLabel::HLam(ty.clone()), vec![body])
            }
            HostTerm::Promote(octx, body) => {
                let mut inner = Binders {
                    host: b.host.clone(),
                    core: octx.names().cloned().collect(),
                };
                let body = self.core(body, &mut inner);
                self.cc.add(
                    TLabel::HPromote(octx.types().cloned().collect()),
                    vec![body],
                )
            }
        }
    }

    fn core(&mut self, f: &CoreTerm, b: &mut Binders) -> usize {
        match f {
            CoreTerm::Bullet => self.cc.add(TLabel::CBullet, vec![]),
            CoreTerm::Var(a) => match b.core.iter().rposition(|n| n == a) {
                Some(i) => self.cc.add(TLabel::CBound(b.core.len() - 1 - i), vec![]),
                None => self.cc.add(TLabel::CFree(a.clone()), vec![]),
            },
            CoreTerm::Tensor(x, y) => {
                let (x, y) = (self.core(x, b), self.core(y, b));
                self.cc.add(TLabel::CTensor, vec![x, y])
            }
            CoreTerm::LetUnit(x, y) => {
                let (x, y) = (self.core(x, b), self.core(y, b));
                self.cc.add(TLabel::CLetUnit, vec![x, y])
            }
            CoreTerm::LetTensor(s, x, y, body) => {
                let s = self.core(s, b);
                b.core.push(x.clone());
                b.core.push(y.clone());
                let body = self.core(body, b);
                b.core.truncate(b.core.len() - 2);
                self.cc.add(TLabel::CLetTensor, vec![s, body])
            }
            CoreTerm::Derelict(h, arg) => {
                let mut hb = Binders {
                    host: b.host.clone(),
                    core: Vec::new(),
                };
                let h = self.host(h, &mut hb);
                let arg = self.core(arg, b);
                self.cc.add(TLabel::CDerelict, vec![h, arg])
            }
            CoreTerm::Const(k, args) => {
                let ids = args.iter().map(|a| self.core(a, b)).collect();
                self.cc.add(TLabel::CConst(k.clone()), ids)
            }
        }
    }

    fn term(&mut self, t: &Term, b: &mut Binders) -> usize {
        match t {
            Term::Host(h) => self.host(h, b),
            Term::Core(c) => self.core(c, b),
        }
    }
}

/// Pattern matching of an axiom side against a subject term.
struct Matcher<'a> {
    host_vars: &'a BTreeSet<Name>,
    core_vars: &'a BTreeSet<Name>,
    subst: Subst,
    /// Subject binders entered on the way down; bound pattern variables may not mention them.
    inner: Vec<Name>,
}

impl Matcher<'_> {
    fn host(&mut self, p: &HostTerm, s: &HostTerm) -> bool {
        match (p, s) {
            (HostTerm::Var(x), _) if self.host_vars.contains(x) => {
                let fv = free_vars_host(s);
                if self
                    .inner
                    .iter()
                    .any(|n| fv.host.contains(n) || fv.core.contains(n))
                {
                    return false;
                }
                match self.subst.host.get(x) {
                    Some(prev) => alpha_eq_host(prev, s),
                    None => {
                        self.subst.host.insert(x.clone(), s.clone());
                        true
                    }
                }
            }
            (HostTerm::Var(x), HostTerm::Var(y)) => x == y,
            (HostTerm::Star, HostTerm::Star) => true,
            (HostTerm::Const(a, i), HostTerm::Const(b, j)) => a == b && i == j,
            (HostTerm::Pair(a, b), HostTerm::Pair(c, d))
            | (HostTerm::App(a, b), HostTerm::App(c, d)) => self.host(a, c) && self.host(b, d),
            (HostTerm::Fst(a), HostTerm::Fst(c)) | (HostTerm::Snd(a), HostTerm::Snd(c)) => {
                self.host(a, c)
            }
            (HostTerm::Lam(x, t1, b1), HostTerm::Lam(y, t2, b2)) => {
                if t1 != t2 || self.host_vars.contains(y) {
                    return false;
                }
                let b1 = subst_host(b1, x, &HostTerm::Var(y.clone()));
                self.inner.push(y.clone());
                let ok = self.host(&b1, b2);
                self.inner.pop();
                ok
            }
            (HostTerm::Promote(c1, b1), HostTerm::Promote(c2, b2)) => {
                if c1.len() != c2.len()
                    || c1.types().ne(c2.types())
                    || c2.names().any(|n| self.core_vars.contains(n))
                {
                    return false;
                }
                let mut s = Subst::default();
                for (a, b) in c1.names().zip(c2.names()) {
                    s.core.insert(a.clone(), CoreTerm::Var(b.clone()));
                }
                let b1 = s.apply_core(b1);
                let n = c2.len();
                self.inner.extend(c2.names().cloned());
                let ok = self.core(&b1, b2);
                self.inner.truncate(self.inner.len() - n);
                ok
            }
            _ => false,
        }
    }

    fn core(&mut self, p: &CoreTerm, s: &CoreTerm) -> bool {
        match (p, s) {
            (CoreTerm::Var(a), _) if self.core_vars.contains(a) => {
                let fv = free_vars_core(s);
                if self.inner.iter().any(|n| fv.core.contains(n)) {
                    return false;
                }
                match self.subst.core.get(a) {
                    Some(prev) => alpha_eq_core(prev, s),
                    None => {
                        self.subst.core.insert(a.clone(), s.clone());
                        true
                    }
                }
            }
            (CoreTerm::Var(a), CoreTerm::Var(b)) => a == b,
            (CoreTerm::Bullet, CoreTerm::Bullet) => true,
            (CoreTerm::Tensor(a, b), CoreTerm::Tensor(c, d))
            | (CoreTerm::LetUnit(a, b), CoreTerm::LetUnit(c, d)) => {
                self.core(a, c) && self.core(b, d)
            }
            (CoreTerm::Derelict(h1, a1), CoreTerm::Derelict(h2, a2)) => {
                self.host(h1, h2) && self.core(a1, a2)
            }
            (CoreTerm::Const(k1, x), CoreTerm::Const(k2, y)) => {
                k1 == k2 && x.len() == y.len() && x.iter().zip(y).all(|(p, s)| self.core(p, s))
            }
            (CoreTerm::LetTensor(s1, a1, b1, body1), CoreTerm::LetTensor(s2, a2, b2, body2)) => {
                if !self.core(s1, s2) || self.core_vars.contains(a2) || self.core_vars.contains(b2)
                {
                    return false;
                }
                let mut r = Subst::default();
                r.core.insert(a1.clone(), CoreTerm::Var(a2.clone()));
                r.core.insert(b1.clone(), CoreTerm::Var(b2.clone()));
                let body1 = r.apply_core(body1);
                self.inner.push(a2.clone());
                self.inner.push(b2.clone());
                let ok = self.core(&body1, body2);
                self.inner.truncate(self.inner.len() - 2);
                ok
            }
            _ => false,
        }
    }
}

/// Every subterm of `t` with the binders enclosing it.
fn subterms(t: &Term) -> Vec<(Term, Binders)> {
    fn host(t: &HostTerm, b: &mut Binders, out: &mut Vec<(Term, Binders)>) {
        out.push((Term::Host(t.clone()), b.clone()));
        match t {
            HostTerm::Pair(x, y) | HostTerm::App(x, y) => {
                host(x, b, out);
                host(y, b, out);
            }
            HostTerm::Fst(x) | HostTerm::Snd(x) => host(x, b, out),
            HostTerm::Lam(x, _, body) => {
                b.host.push(x.clone());
                host(body, b, out);
                b.host.pop();
            }
            HostTerm::Promote(octx, body) => {
                let mut inner = Binders {
                    host: b.host.clone(),
                    core: octx.names().cloned().collect(),
                };
                core(body, &mut inner, out);
            }
            _ => {}
        }
    }
    fn core(f: &CoreTerm, b: &mut Binders, out: &mut Vec<(Term, Binders)>) {
        out.push((Term::Core(f.clone()), b.clone()));
        match f {
            CoreTerm::Tensor(x, y) | CoreTerm::LetUnit(x, y) => {
                core(x, b, out);
                core(y, b, out);
            }
            CoreTerm::LetTensor(s, x, y, body) => {
                core(s, b, out);
                b.core.push(x.clone());
                b.core.push(y.clone());
                core(body, b, out);
                b.core.truncate(b.core.len() - 2);
            }
            CoreTerm::Derelict(h, arg) => {
                let mut hb = Binders {
                    host: b.host.clone(),
                    core: Vec::new(),
                };
                host(h, &mut hb, out);
                core(arg, b, out);
            }
            CoreTerm::Const(_, args) => {
                for a in args {
                    core(a, b, out);
                }
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    let mut b = Binders::default();
    match t {
        Term::Host(h) => host(h, &mut b, &mut out),
        Term::Core(c) => core(c, &mut b, &mut out),
    }
    out
}

const CLOSURE_ROUNDS: usize = 3;

/// Decide `lhs = rhs` (already normalized) by congruence closure over axiom instances.
fn axiom_closure(
    env: &TypeEnv,
    ctx: &MixedContext,
    lhs: &Term,
    rhs: &Term,
    cfg: &NormConfig,
) -> bool {
    let axioms = &env.theory.term_axioms;
    if axioms.is_empty() {
        return false;
    }
    let mut enc = Encoder::default();
    let l = enc.term(lhs, &mut Binders::default());
    let r = enc.term(rhs, &mut Binders::default());
    let mut frontier = vec![lhs.clone(), rhs.clone()];
    let mut seen: BTreeSet<Term> = BTreeSet::new();
    for _ in 0..CLOSURE_ROUNDS {
        let mut next = Vec::new();
        for t in &frontier {
            for (sub, binders) in subterms(t) {
                for ax in axioms {
                    for (pat, other) in [(&ax.lhs, &ax.rhs), (&ax.rhs, &ax.lhs)] {
                        let host_vars: BTreeSet<Name> = ax.ctx.host.names().cloned().collect();
                        let core_vars: BTreeSet<Name> = ax.ctx.core.names().cloned().collect();
                        let mut m = Matcher {
                            host_vars: &host_vars,
                            core_vars: &core_vars,
                            subst: Subst::default(),
                            inner: Vec::new(),
                        };
                        let ok = match (pat, &sub) {
                            (Term::Host(p), Term::Host(s)) => m.host(p, s),
                            (Term::Core(p), Term::Core(s)) => m.core(p, s),
                            _ => false,
                        };
                        if !ok {
                            continue;
                        }
                        if host_vars.iter().any(|v| !m.subst.host.contains_key(v))
                            || core_vars.iter().any(|v| !m.subst.core.contains_key(v))
                        {
                            continue;
                        }
                        let inst = match other {
                            Term::Host(h) => Term::Host(m.subst.apply_host(h)),
                            Term::Core(c) => Term::Core(m.subst.apply_core(c)),
                        };
                        let local = MixedContext::new(ctx.host.clone(), ctx.core.clone());
                        let inst = normalize(env, &local, &inst, cfg)
                            .map(|n| n.term)
                            .unwrap_or(inst);
                        let mut b1 = binders.clone();
                        let mut b2 = binders.clone();
                        let a = enc.term(&sub, &mut b1);
                        let c = enc.term(&inst, &mut b2);
                        enc.cc.union(a, c);
                        if binders.host.is_empty()
                            && binders.core.is_empty()
                            && seen.insert(inst.clone())
                        {
                            next.push(inst);
                        }
                    }
                }
            }
        }
        if enc.cc.equiv(l, r) {
            return true;
        }
        if next.is_empty() {
            break;
        }
        for t in &next {
            enc.term(t, &mut Binders::default());
        }
        frontier = next;
    }
    enc.cc.equiv(l, r)
}

// ---------------------------------------------------------------------------
// Decision procedure

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Equal,
    Unequal,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Normalization,
    AxiomClosure,
    SemanticOracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Normalization => "normalization",
            Method::AxiomClosure => "axiom-closure",
            Method::SemanticOracle => "semantic-oracle",
        })
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Equal => "equal",
            Outcome::Unequal => "unequal",
            Outcome::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleAnswer {
    Same,
    Differ(String),
    Unsupported(String),
}

/// A finite model able to compare the denotations of two terms.
pub trait Oracle {
    fn compare(&self, env: &TypeEnv, ctx: &MixedContext, lhs: &Term, rhs: &Term) -> OracleAnswer;
    /// Whether equal denotations imply provable equality in the theory.
    fn faithful(&self) -> bool;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqVerdict {
    pub outcome: Outcome,
    pub method: Method,
    /// Syntactic finding: equal normal forms, or provably distinct ones.
    pub syntactic: Option<bool>,
    /// Whether the oracle model gives both sides the same denotation.
    pub semantic: Option<bool>,
    pub normal_forms: Option<(Term, Term)>,
    pub witness: Option<String>,
    pub note: Option<String>,
}

impl EqVerdict {
    pub fn equal(&self) -> bool {
        self.outcome == Outcome::Equal
    }

    fn new(outcome: Outcome, method: Method) -> Self {
        EqVerdict {
            outcome,
            method,
            syntactic: None,
            semantic: None,
            normal_forms: None,
            witness: None,
            note: None,
        }
    }
}

impl fmt::Display for EqVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.outcome, self.method)?;
        if let Some(w) = &self.witness {
            write!(f, ", witness {w}")?;
        }
        if let Some(n) = &self.note {
            write!(f, "; {n}")?;
        }
        Ok(())
    }
}

/// First-order normal forms: no binders except a promotion of a
/// first-order core term, no dereliction.
fn first_order(t: &Term) -> bool {
    fn host(t: &HostTerm) -> bool {
        match t {
            HostTerm::Star | HostTerm::Var(_) | HostTerm::Const(..) => true,
            HostTerm::Pair(a, b) | HostTerm::App(a, b) => host(a) && host(b),
            HostTerm::Fst(a) | HostTerm::Snd(a) => host(a),
            HostTerm::Promote(_, body) => core(body),
            HostTerm::Lam(..) => false,
        }
    }
    fn core(f: &CoreTerm) -> bool {
        match f {
            CoreTerm::Bullet | CoreTerm::Var(_) => true,
            CoreTerm::Tensor(a, b) => core(a) && core(b),
            CoreTerm::Const(_, args) => args.iter().all(core),
            _ => false,
        }
    }
    match t {
        Term::Host(h) => host(h),
        Term::Core(c) => core(c),
    }
}

/// Decide `Γ | Ω ⊢ lhs = rhs : ty`.
pub fn decide_eq(
    env: &TypeEnv,
    ctx: &MixedContext,
    lhs: &Term,
    rhs: &Term,
    _ty: &Type,
    oracle: Option<&dyn Oracle>,
    cfg: &NormConfig,
) -> EqVerdict {
    let (nl, nr) = match (normalize(env, ctx, lhs, cfg), normalize(env, ctx, rhs, cfg)) {
        (Ok(a), Ok(b)) => (a.term, b.term),
        (Err(e), _) | (_, Err(e)) => {
            let mut v = EqVerdict::new(Outcome::Unknown, Method::Normalization);
            v.note = Some(e.to_string());
            return v;
        }
    };
    if alpha_eq(&nl, &nr) {
        let mut v = EqVerdict::new(Outcome::Equal, Method::Normalization);
        v.syntactic = Some(true);
        v.normal_forms = Some((nl, nr));
        return v;
    }
    let rewritten = env.rewrite_system().and_then(|sys| {
        Some((
            sys.normal_form(env, ctx, &nl, cfg)?,
            sys.normal_form(env, ctx, &nr, cfg)?,
        ))
    });
    if let Some((a, b)) = &rewritten {
        if alpha_eq(a, b) {
            let mut v = EqVerdict::new(Outcome::Equal, Method::AxiomClosure);
            v.syntactic = Some(true);
            v.normal_forms = Some((a.clone(), b.clone()));
            v.note = Some("axioms used as a convergent rewrite system".into());
            return v;
        }
    } else if axiom_closure(env, ctx, &nl, &nr, cfg) {
        let mut v = EqVerdict::new(Outcome::Equal, Method::AxiomClosure);
        v.syntactic = Some(true);
        v.normal_forms = Some((nl, nr));
        return v;
    }
    let (nl, nr) = rewritten.unwrap_or((nl, nr));
    let apart = (env.theory.term_axioms.is_empty() || env.rewrite_system().is_some())
        && first_order(&nl)
        && first_order(&nr);
    let syntactic = if apart { Some(false) } else { None };
    let normal_forms = Some((nl.clone(), nr.clone()));
    if let Some(o) = oracle {
        match o.compare(env, ctx, &nl, &nr) {
            OracleAnswer::Differ(w) => {
                let mut v = EqVerdict::new(Outcome::Unequal, Method::SemanticOracle);
                v.syntactic = syntactic;
                v.semantic = Some(false);
                v.witness = Some(w);
                v.normal_forms = normal_forms;
                return v;
            }
            OracleAnswer::Same => {
                let outcome = if o.faithful() {
                    Outcome::Equal
                } else {
                    Outcome::Unknown
                };
                let mut v = EqVerdict::new(outcome, Method::SemanticOracle);
                v.syntactic = syntactic;
                v.semantic = Some(true);
                v.normal_forms = normal_forms;
                if !o.faithful() {
                    v.note = Some("normal forms differ but the model identifies them; the model is not marked faithful".into());
                }
                return v;
            }
            OracleAnswer::Unsupported(why) => {
                let mut v = EqVerdict::new(
                    if apart {
                        Outcome::Unequal
                    } else {
                        Outcome::Unknown
                    },
                    Method::Normalization,
                );
                v.syntactic = syntactic;
                v.normal_forms = normal_forms;
                v.note = Some(format!("oracle unavailable: {why}"));
                return v;
            }
        }
    }
    let mut v = EqVerdict::new(
        if apart {
            Outcome::Unequal
        } else {
            Outcome::Unknown
        },
        Method::Normalization,
    );
    v.syntactic = syntactic;
    v.normal_forms = normal_forms;
    if !apart {
        v.note = Some("normal forms differ; no axiom or model settles the question".into());
    }
    v
}

/// Surface definitions of the derived combinators.
pub fn derived_combinators() -> BTreeMap<&'static str, crate::surface::Expr> {
    use crate::surface::{parse_expr, Expr};
    let src: [(&str, &str); 3] = [
        (
            "comp",
            "promote(core a:A. derelict(g) @ b [derelict(f) @ a / b])",
        ),
        ("id", "promote(core a:A. a)"),
        (
            "par",
            "promote(core a0:A0, a1:A1. derelict(f) @ a0 (x) derelict(g) @ a1)",
        ),
    ];
    src.iter()
        .map(|(n, s)| {
            let e: Expr = parse_expr(s).expect("combinator source parses");
            (*n, e)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elab::{circuit_theory, Elaborator};
    use crate::surface::{parse_expr, print_expr};
    use crate::theories::Theory;

    fn theory_abcd() -> Theory {
        let mut t = Theory::empty("abcd");
        for n in ["A", "B", "C", "D"] {
            t.core_types.insert(n.into());
        }
        t
    }

    fn elab(env: &TypeEnv, ctx: &MixedContext, src: &str) -> Term {
        Elaborator::new(env)
            .term(ctx, &parse_expr(src).unwrap())
            .unwrap()
    }

    fn hctx(entries: &[(&str, &str)]) -> MixedContext {
        let mut h = HostContext::new();
        for (x, t) in entries {
            h.push(
                x,
                crate::elab::host_type(&crate::surface::parse_type(t).unwrap()).unwrap(),
            );
        }
        MixedContext::new(h, CoreContext::new())
    }

    #[test]
    fn let_unit_of_bullet_collapses() {
        let t = circuit_theory();
        let env = TypeEnv::linear(&t);
        let ctx = MixedContext::new(
            HostContext::new(),
            Context::from_entries(vec![("a".into(), CoreType::base("Bit"))]),
        );
        let f = elab(&env, &ctx, "let bullet = bullet in not(a)");
        let n = normalize(&env, &ctx, &f, &NormConfig::default()).unwrap();
        assert_eq!(n.steps[0].rule, "el3");
        assert_eq!(
            n.term,
            Term::Core(CoreTerm::constant("not", vec![CoreTerm::var("a")]))
        );
    }

    #[test]
    fn let_tensor_of_tensor_substitutes() {
        let t = circuit_theory();
        let env = TypeEnv::linear(&t);
        let bit = CoreType::base("Bit");
        let ctx = MixedContext::new(
            HostContext::new(),
            Context::from_entries(vec![("c".into(), bit.clone()), ("d".into(), bit)]),
        );
        let f = elab(&env, &ctx, "let a (x) b = not(c) (x) d in and(b (x) a)");
        let n = normalize(&env, &ctx, &f, &NormConfig::default()).unwrap();
        assert_eq!(n.steps[0].rule, "el1");
        assert_eq!(print_term(&n.term), "and(d (x) not(c))");
    }

    #[test]
    fn promote_of_derelict_contracts() {
        let t = theory_abcd();
        let env = TypeEnv::linear(&t);
        let ctx = hctx(&[("f", "Proof(A, B)")]);
        let p = elab(&env, &ctx, "promote(core a:A. derelict(f) @ a)");
        let n = normalize(&env, &ctx, &p, &NormConfig::default()).unwrap();
        assert_eq!(n.term, Term::Host(HostTerm::var("f")));
        assert_eq!(n.steps[0].rule, "dual-prom-der");
    }

    #[test]
    fn associativity_and_identity_laws() {
        let t = theory_abcd();
        let env = TypeEnv::linear(&t);
        let ctx = hctx(&[
            ("t", "Proof(A, B)"),
            ("s", "Proof(B, C)"),
            ("u", "Proof(C, D)"),
        ]);
        for (l, r) in [
            ("comp(comp(t, s), u)", "comp(t, comp(s, u))"),
            ("comp(id[A], t)", "t"),
            ("comp(t, id[B])", "t"),
        ] {
            let (l, r) = (elab(&env, &ctx, l), elab(&env, &ctx, r));
            let ty = env.check_term(&ctx, &l, None).unwrap();
            let v = decide_eq(&env, &ctx, &l, &r, &ty, None, &NormConfig::default());
            assert_eq!(v.outcome, Outcome::Equal, "{v}");
            assert_eq!(v.method, Method::Normalization);
        }
    }

    #[test]
    fn multi_variable_duality_unpacks_with_lets() {
        let mut t = theory_abcd();
        t.core_consts.insert(
            "k".into(),
            crate::theories::CoreConstSig {
                params: Context::from_entries(vec![
                    ("x".into(), CoreType::base("A")),
                    ("y".into(), CoreType::base("B")),
                    ("z".into(), CoreType::base("C")),
                ]),
                result: CoreType::base("D"),
            },
        );
        let env = TypeEnv::linear(&t);
        let ctx = MixedContext::new(
            HostContext::new(),
            Context::from_entries(vec![
                ("a".into(), CoreType::base("A")),
                ("b".into(), CoreType::base("B")),
                ("c".into(), CoreType::base("C")),
            ]),
        );
        let f = elab(
            &env,
            &ctx,
            "derelict(promote(core a:A, b:B, c:C. k(a, b, c))) @ (a (x) b (x) c)",
        );
        let n = normalize(&env, &ctx, &f, &NormConfig::default()).unwrap();
        assert_eq!(print_term(&n.term), "k(a, b, c)");
        for s in &n.steps {
            assert!(env.check_term(&ctx, &s.after, None).is_ok(), "{s}");
        }
    }

    #[test]
    fn el2_reassembles_pairs() {
        let t = circuit_theory();
        let env = TypeEnv::linear(&t);
        let bb = CoreType::tensor(CoreType::base("Bit"), CoreType::base("Bit"));
        let ctx = MixedContext::new(
            HostContext::new(),
            Context::from_entries(vec![("c".into(), bb)]),
        );
        let f = elab(&env, &ctx, "let a (x) b = c in and(a (x) b)");
        let n = normalize(&env, &ctx, &f, &NormConfig::default()).unwrap();
        assert_eq!(n.steps[0].rule, "el2");
        assert_eq!(print_term(&n.term), "and(c)");
    }

    #[test]
    fn budget_is_reported() {
        let t = theory_abcd();
        let env = TypeEnv::linear(&t);
        let ctx = hctx(&[("t", "Proof(A, B)")]);
        let l = elab(&env, &ctx, "comp(id[A], comp(id[A], t))");
        let err = normalize(&env, &ctx, &l, &NormConfig { max_steps: 1 }).unwrap_err();
        assert_eq!(err.steps.len(), 1);
    }

    #[test]
    fn axioms_close_under_congruence() {
        let src = "import circuit\naxiom | a : Bit |- not(not(a)) = a";
        let (theory, _) = crate::elab::load_program(src, &[], false).unwrap().unwrap();
        let env = TypeEnv::linear(&theory);
        let bit = CoreType::base("Bit");
        let ctx = MixedContext::new(
            HostContext::new(),
            Context::from_entries(vec![("b".into(), bit.clone()), ("c".into(), bit)]),
        );
        let l = elab(&env, &ctx, "and(not(not(b)) (x) c)");
        let r = elab(&env, &ctx, "and(b (x) c)");
        let v = decide_eq(
            &env,
            &ctx,
            &l,
            &r,
            &Type::Core(CoreType::base("Bit")),
            None,
            &NormConfig::default(),
        );
        assert_eq!(v.outcome, Outcome::Equal);
        assert_eq!(v.method, Method::AxiomClosure);
    }

    #[test]
    fn distinct_constants_are_unequal() {
        let t = circuit_theory();
        let env = TypeEnv::linear(&t);
        let ctx = MixedContext::new(
            HostContext::new(),
            Context::from_entries(vec![("a".into(), CoreType::base("Bit"))]),
        );
        let l = elab(&env, &ctx, "not(a)");
        let r = elab(&env, &ctx, "a");
        let v = decide_eq(
            &env,
            &ctx,
            &l,
            &r,
            &Type::Core(CoreType::base("Bit")),
            None,
            &NormConfig::default(),
        );
        assert_eq!(v.outcome, Outcome::Unequal);
        assert_eq!(v.syntactic, Some(false));
    }

    #[test]
    fn comp_definition_prints_in_substitution_shape() {
        let c = &derived_combinators()["comp"];
        assert!(print_expr(c).contains("promote(core a:A. derelict(g) @ b [derelict(f) @ a / b])"));
    }
}
