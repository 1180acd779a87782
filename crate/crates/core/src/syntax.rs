//! Abstract syntax for both levels of the calculus: types, terms, contexts,
//! free variables, capture-avoiding substitution and alpha-equivalence.
//!
//! Host and core variables live in separate namespaces, so a host variable
//! `x` and a core variable `x` never interfere.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub type Name = String;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoreType {
    Unit,
    Base(Name),
    Tensor(Box<CoreType>, Box<CoreType>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HostType {
    Unit,
    Base(Name),
    Prod(Box<HostType>, Box<HostType>),
    Arrow(Box<HostType>, Box<HostType>),
    Proof(CoreType, CoreType),
}

impl CoreType {
    pub fn base(name: &str) -> Self {
        CoreType::Base(name.to_string())
    }

    pub fn tensor(a: CoreType, b: CoreType) -> Self {
        CoreType::Tensor(Box::new(a), Box::new(b))
    }

    /// Right-associated tensor of a list, `I` when empty.
    pub fn tensor_all(mut types: Vec<CoreType>) -> Self {
        let mut acc = match types.pop() {
            None => return CoreType::Unit,
            Some(t) => t,
        };
        while let Some(t) = types.pop() {
            acc = CoreType::tensor(t, acc);
        }
        acc
    }
}

impl HostType {
    pub fn base(name: &str) -> Self {
        HostType::Base(name.to_string())
    }

    pub fn prod(a: HostType, b: HostType) -> Self {
        HostType::Prod(Box::new(a), Box::new(b))
    }

    pub fn arrow(a: HostType, b: HostType) -> Self {
        HostType::Arrow(Box::new(a), Box::new(b))
    }

    pub fn proof(a: CoreType, b: CoreType) -> Self {
        HostType::Proof(a, b)
    }

    /// Replace the base type `param` by `with`; used to instantiate constant families.
    pub fn instantiate(&self, param: &str, with: &HostType) -> HostType {
        match self {
            HostType::Base(n) if n == param => with.clone(),
            HostType::Prod(a, b) => {
                HostType::prod(a.instantiate(param, with), b.instantiate(param, with))
            }
            HostType::Arrow(a, b) => {
                HostType::arrow(a.instantiate(param, with), b.instantiate(param, with))
            }
            other => other.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HostTerm {
    Star,
    Var(Name),
    Pair(Box<HostTerm>, Box<HostTerm>),
    Fst(Box<HostTerm>),
    Snd(Box<HostTerm>),
    Lam(Name, HostType, Box<HostTerm>),
    App(Box<HostTerm>, Box<HostTerm>),
    /// `promote(core a1:A1, ..., an:An. body)`; the context is bound in the body.
    Promote(CoreContext, Box<CoreTerm>),
    /// A host constant; family members carry their type index.
    Const(Name, Option<HostType>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoreTerm {
    Bullet,
    Var(Name),
    Tensor(Box<CoreTerm>, Box<CoreTerm>),
    /// `let a (x) b = scrutinee in body`
    LetTensor(Box<CoreTerm>, Name, Name, Box<CoreTerm>),
    /// `let bullet = scrutinee in body`
    LetUnit(Box<CoreTerm>, Box<CoreTerm>),
    /// `derelict(host) @ arg`; in normal position `arg` is the consumed variable.
    Derelict(Box<HostTerm>, Box<CoreTerm>),
    Const(Name, Vec<CoreTerm>),
}

impl HostTerm {
    pub fn var(x: &str) -> Self {
        HostTerm::Var(x.to_string())
    }

    pub fn constant(x: &str) -> Self {
        HostTerm::Const(x.to_string(), None)
    }

    pub fn pair(a: HostTerm, b: HostTerm) -> Self {
        HostTerm::Pair(Box::new(a), Box::new(b))
    }

    pub fn fst(a: HostTerm) -> Self {
        HostTerm::Fst(Box::new(a))
    }

    pub fn snd(a: HostTerm) -> Self {
        HostTerm::Snd(Box::new(a))
    }

    pub fn lam(x: &str, ty: HostType, body: HostTerm) -> Self {
        HostTerm::Lam(x.to_string(), ty, Box::new(body))
    }

    pub fn app(f: HostTerm, a: HostTerm) -> Self {
        HostTerm::App(Box::new(f), Box::new(a))
    }

    pub fn promote(ctx: CoreContext, body: CoreTerm) -> Self {
        HostTerm::Promote(ctx, Box::new(body))
    }

    pub fn size(&self) -> usize {
        match self {
            HostTerm::Star | HostTerm::Var(_) | HostTerm::Const(..) => 1,
            HostTerm::Pair(a, b) | HostTerm::App(a, b) => 1 + a.size() + b.size(),
            HostTerm::Fst(a) | HostTerm::Snd(a) | HostTerm::Lam(_, _, a) => 1 + a.size(),
            HostTerm::Promote(_, f) => 1 + f.size(),
        }
    }
}

impl CoreTerm {
    pub fn var(a: &str) -> Self {
        CoreTerm::Var(a.to_string())
    }

    pub fn tensor(f: CoreTerm, g: CoreTerm) -> Self {
        CoreTerm::Tensor(Box::new(f), Box::new(g))
    }

    pub fn let_tensor(scrutinee: CoreTerm, a: &str, b: &str, body: CoreTerm) -> Self {
        CoreTerm::LetTensor(
            Box::new(scrutinee),
            a.to_string(),
            b.to_string(),
            Box::new(body),
        )
    }

    pub fn let_unit(scrutinee: CoreTerm, body: CoreTerm) -> Self {
        CoreTerm::LetUnit(Box::new(scrutinee), Box::new(body))
    }

    pub fn derelict(h: HostTerm, arg: CoreTerm) -> Self {
        CoreTerm::Derelict(Box::new(h), Box::new(arg))
    }

    pub fn constant(name: &str, args: Vec<CoreTerm>) -> Self {
        CoreTerm::Const(name.to_string(), args)
    }

    pub fn size(&self) -> usize {
        match self {
            CoreTerm::Bullet | CoreTerm::Var(_) => 1,
            CoreTerm::Tensor(f, g) | CoreTerm::LetUnit(f, g) => 1 + f.size() + g.size(),
            CoreTerm::LetTensor(f, _, _, g) => 1 + f.size() + g.size(),
            CoreTerm::Derelict(h, g) => 1 + h.size() + g.size(),
            CoreTerm::Const(_, args) => 1 + args.iter().map(CoreTerm::size).sum::<usize>(),
        }
    }
}

/// An ordered context; later entries shadow earlier ones on lookup.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Context<T> {
    entries: Vec<(Name, T)>,
}

impl<T> Default for Context<T> {
    fn default() -> Self {
        Context {
            entries: Vec::new(),
        }
    }
}

pub type HostContext = Context<HostType>;
pub type CoreContext = Context<CoreType>;

impl<T: Clone> Context<T> {
    pub fn new() -> Self {
        Context {
            entries: Vec::new(),
        }
    }

    pub fn from_entries(entries: Vec<(Name, T)>) -> Self {
        Context { entries }
    }

    pub fn entries(&self) -> &[(Name, T)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, name: &str) -> Option<&T> {
        self.entries
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.iter().any(|(n, _)| n == name)
    }

    pub fn push(&mut self, name: &str, ty: T) {
        self.entries.push((name.to_string(), ty));
    }

    pub fn with(&self, name: &str, ty: T) -> Self {
        let mut c = self.clone();
        c.push(name, ty);
        c
    }

    /// Remove the last binding of `name`, returning its type.
    pub fn remove(&mut self, name: &str) -> Option<T> {
        let pos = self.entries.iter().rposition(|(n, _)| n == name)?;
        Some(self.entries.remove(pos).1)
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.entries.iter().map(|(n, _)| n)
    }

    pub fn types(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().map(|(_, t)| t)
    }

    pub fn has_duplicates(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.entries.iter().any(|(n, _)| !seen.insert(n))
    }
}

impl CoreContext {
    /// The tensor of the context types in declared order.
    pub fn tensor(&self) -> CoreType {
        CoreType::tensor_all(self.types().cloned().collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MixedContext {
    pub host: HostContext,
    pub core: CoreContext,
}

impl MixedContext {
    pub fn new(host: HostContext, core: CoreContext) -> Self {
        MixedContext { host, core }
    }

    /// Host and core namespaces must be disjoint and duplicate-free.
    pub fn well_formed(&self) -> bool {
        !self.host.has_duplicates()
            && !self.core.has_duplicates()
            && !self.host.names().any(|n| self.core.contains(n))
    }
}

/// A term at either level.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Host(HostTerm),
    Core(CoreTerm),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Host(HostType),
    Core(CoreType),
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Host(t) => write!(f, "{}", crate::surface::print_host_type(t)),
            Type::Core(t) => write!(f, "{}", crate::surface::print_core_type(t)),
        }
    }
}

// ---------------------------------------------------------------------------
// Free variables

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeVars {
    pub host: BTreeSet<Name>,
    pub core: BTreeSet<Name>,
}

impl FreeVars {
    fn union(&mut self, other: FreeVars) {
        self.host.extend(other.host);
        self.core.extend(other.core);
    }
}

pub fn free_vars_host(t: &HostTerm) -> FreeVars {
    let mut fv = FreeVars::default();
    collect_host(t, &mut fv);
    fv
}

pub fn free_vars_core(f: &CoreTerm) -> FreeVars {
    let mut fv = FreeVars::default();
    collect_core(f, &mut fv);
    fv
}

fn collect_host(t: &HostTerm, fv: &mut FreeVars) {
    match t {
        HostTerm::Star | HostTerm::Const(..) => {}
        HostTerm::Var(x) => {
            fv.host.insert(x.clone());
        }
        HostTerm::Pair(a, b) | HostTerm::App(a, b) => {
            collect_host(a, fv);
            collect_host(b, fv);
        }
        HostTerm::Fst(a) | HostTerm::Snd(a) => collect_host(a, fv),
        HostTerm::Lam(x, _, body) => {
            let mut inner = free_vars_host(body);
            inner.host.remove(x);
            fv.union(inner);
        }
        HostTerm::Promote(ctx, body) => {
            let mut inner = free_vars_core(body);
            for n in ctx.names() {
                inner.core.remove(n);
            }
            fv.union(inner);
        }
    }
}

fn collect_core(f: &CoreTerm, fv: &mut FreeVars) {
    match f {
        CoreTerm::Bullet => {}
        CoreTerm::Var(a) => {
            fv.core.insert(a.clone());
        }
        CoreTerm::Tensor(g, h) | CoreTerm::LetUnit(g, h) => {
            collect_core(g, fv);
            collect_core(h, fv);
        }
        CoreTerm::LetTensor(g, a, b, body) => {
            collect_core(g, fv);
            let mut inner = free_vars_core(body);
            inner.core.remove(a);
            inner.core.remove(b);
            fv.union(inner);
        }
        CoreTerm::Derelict(h, arg) => {
            collect_host(h, fv);
            collect_core(arg, fv);
        }
        CoreTerm::Const(_, args) => {
            for a in args {
                collect_core(a, fv);
            }
        }
    }
}

/// Number of free occurrences of each core variable.
pub fn core_occurrences(f: &CoreTerm) -> BTreeMap<Name, usize> {
    fn go(f: &CoreTerm, bound: &mut Vec<Name>, out: &mut BTreeMap<Name, usize>) {
        match f {
            CoreTerm::Bullet => {}
            CoreTerm::Var(a) => {
                if !bound.contains(a) {
                    *out.entry(a.clone()).or_insert(0) += 1;
                }
            }
            CoreTerm::Tensor(g, h) | CoreTerm::LetUnit(g, h) => {
                go(g, bound, out);
                go(h, bound, out);
            }
            CoreTerm::LetTensor(g, a, b, body) => {
                go(g, bound, out);
                bound.push(a.clone());
                bound.push(b.clone());
                go(body, bound, out);
                bound.pop();
                bound.pop();
            }
            CoreTerm::Derelict(_, arg) => go(arg, bound, out),
            CoreTerm::Const(_, args) => {
                for a in args {
                    go(a, bound, out);
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    go(f, &mut Vec::new(), &mut out);
    out
}

/// A name derived from `base` for which `taken` is false.
pub fn fresh(base: &str, taken: impl Fn(&str) -> bool) -> Name {
    if !taken(base) {
        return base.to_string();
    }
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !taken(n))
        .expect("unbounded search")
}

// ---------------------------------------------------------------------------
// Simultaneous capture-avoiding substitution

#[derive(Clone, Debug, Default)]
pub struct Subst {
    pub host: BTreeMap<Name, HostTerm>,
    pub core: BTreeMap<Name, CoreTerm>,
}

impl Subst {
    pub fn host(x: &str, s: HostTerm) -> Self {
        let mut m = Subst::default();
        m.host.insert(x.to_string(), s);
        m
    }

    pub fn core(a: &str, g: CoreTerm) -> Self {
        let mut m = Subst::default();
        m.core.insert(a.to_string(), g);
        m
    }

    fn is_empty(&self) -> bool {
        self.host.is_empty() && self.core.is_empty()
    }

    fn range_fv(&self) -> FreeVars {
        let mut fv = FreeVars::default();
        for t in self.host.values() {
            fv.union(free_vars_host(t));
        }
        for f in self.core.values() {
            fv.union(free_vars_core(f));
        }
        fv
    }

    pub fn apply_host(&self, t: &HostTerm) -> HostTerm {
        if self.is_empty() {
            return t.clone();
        }
        match t {
            HostTerm::Star | HostTerm::Const(..) => t.clone(),
            HostTerm::Var(x) => self.host.get(x).cloned().unwrap_or_else(|| t.clone()),
            HostTerm::Pair(a, b) => HostTerm::pair(self.apply_host(a), self.apply_host(b)),
            HostTerm::App(a, b) => HostTerm::app(self.apply_host(a), self.apply_host(b)),
            HostTerm::Fst(a) => HostTerm::fst(self.apply_host(a)),
            HostTerm::Snd(a) => HostTerm::snd(self.apply_host(a)),
            HostTerm::Lam(x, ty, body) => {
                let mut inner = self.clone();
                inner.host.remove(x);
                if inner.is_empty() {
                    return t.clone();
                }
                let range = inner.range_fv();
                if range.host.contains(x) {
                    let body_fv = free_vars_host(body);
                    let y = fresh(x, |n| {
                        range.host.contains(n)
                            || body_fv.host.contains(n)
                            || inner.host.contains_key(n)
                    });
                    inner.host.insert(x.clone(), HostTerm::Var(y.clone()));
                    HostTerm::Lam(y, ty.clone(), Box::new(inner.apply_host(body)))
                } else {
                    HostTerm::Lam(x.clone(), ty.clone(), Box::new(inner.apply_host(body)))
                }
            }
            HostTerm::Promote(ctx, body) => {
                let (ctx, body) = self.under_core_binders(ctx.entries(), body);
                HostTerm::Promote(Context::from_entries(ctx), Box::new(body))
            }
        }
    }

    pub fn apply_core(&self, f: &CoreTerm) -> CoreTerm {
        if self.is_empty() {
            return f.clone();
        }
        match f {
            CoreTerm::Bullet => CoreTerm::Bullet,
            CoreTerm::Var(a) => self.core.get(a).cloned().unwrap_or_else(|| f.clone()),
            CoreTerm::Tensor(g, h) => CoreTerm::tensor(self.apply_core(g), self.apply_core(h)),
            CoreTerm::LetUnit(g, h) => CoreTerm::let_unit(self.apply_core(g), self.apply_core(h)),
            CoreTerm::Derelict(h, arg) => {
                CoreTerm::derelict(self.apply_host(h), self.apply_core(arg))
            }
            CoreTerm::Const(k, args) => {
                CoreTerm::Const(k.clone(), args.iter().map(|a| self.apply_core(a)).collect())
            }
            CoreTerm::LetTensor(g, a, b, body) => {
                let scrut = self.apply_core(g);
                let binders = vec![(a.clone(), CoreType::Unit), (b.clone(), CoreType::Unit)];
                let (binders, body) = self.under_core_binders(&binders, body);
                CoreTerm::LetTensor(
                    Box::new(scrut),
                    binders[0].0.clone(),
                    binders[1].0.clone(),
                    Box::new(body),
                )
            }
        }
    }

    /// Push the substitution under a list of core binders, renaming any that
    /// would capture a free variable of the range.
    fn under_core_binders(
        &self,
        binders: &[(Name, CoreType)],
        body: &CoreTerm,
    ) -> (Vec<(Name, CoreType)>, CoreTerm) {
        let mut inner = self.clone();
        for (n, _) in binders {
            inner.core.remove(n);
        }
        if inner.is_empty() {
            return (binders.to_vec(), body.clone());
        }
        let range = inner.range_fv();
        let body_fv = free_vars_core(body);
        let mut out = Vec::with_capacity(binders.len());
        let mut used: BTreeSet<Name> = binders.iter().map(|(n, _)| n.clone()).collect();
        for (n, ty) in binders {
            if range.core.contains(n) {
                let m = fresh(n, |c| {
                    range.core.contains(c)
                        || body_fv.core.contains(c)
                        || used.contains(c)
                        || inner.core.contains_key(c)
                });
                used.insert(m.clone());
                inner.core.insert(n.clone(), CoreTerm::Var(m.clone()));
                out.push((m, ty.clone()));
            } else {
                out.push((n.clone(), ty.clone()));
            }
        }
        (out, inner.apply_core(body))
    }
}

/// `t[s/x]` for host terms.
pub fn subst_host(t: &HostTerm, x: &str, s: &HostTerm) -> HostTerm {
    Subst::host(x, s.clone()).apply_host(t)
}

/// `f[s/x]`: a host term substituted into a core term.
pub fn subst_host_in_core(f: &CoreTerm, x: &str, s: &HostTerm) -> CoreTerm {
    Subst::host(x, s.clone()).apply_core(f)
}

/// `f[g/a]` for core terms. At `derelict(h) @ a` the consumed variable is
/// rewired when `g` is a variable and otherwise `g` becomes the argument,
/// leaving a redex for the equations module when `h` is a promotion.
pub fn subst_core(f: &CoreTerm, a: &str, g: &CoreTerm) -> CoreTerm {
    Subst::core(a, g.clone()).apply_core(f)
}

// ---------------------------------------------------------------------------
// Alpha-equivalence via canonical renaming of bound variables

#[derive(Default)]
struct Canon {
    host: Vec<(Name, Name)>,
    core: Vec<(Name, Name)>,
}

impl Canon {
    fn host_name(&self, x: &str) -> Name {
        self.host
            .iter()
            .rev()
            .find(|(n, _)| n == x)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| x.to_string())
    }

    fn core_name(&self, a: &str) -> Name {
        self.core
            .iter()
            .rev()
            .find(|(n, _)| n == a)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| a.to_string())
    }

    fn host(&mut self, t: &HostTerm) -> HostTerm {
        match t {
            HostTerm::Star | HostTerm::Const(..) => t.clone(),
            HostTerm::Var(x) => HostTerm::Var(self.host_name(x)),
            HostTerm::Pair(a, b) => HostTerm::pair(self.host(a), self.host(b)),
            HostTerm::App(a, b) => HostTerm::app(self.host(a), self.host(b)),
            HostTerm::Fst(a) => HostTerm::fst(self.host(a)),
            HostTerm::Snd(a) => HostTerm::snd(self.host(a)),
            HostTerm::Lam(x, ty, body) => {
                let c = format!("#h{}", self.host.len());
                self.host.push((x.clone(), c.clone()));
                let body = self.host(body);
                self.host.pop();
                HostTerm::Lam(c, ty.clone(), Box::new(body))
            }
            HostTerm::Promote(ctx, body) => {
                let mut entries = Vec::new();
                for (n, ty) in ctx.entries() {
                    let c = format!("#c{}", self.core.len());
                    self.core.push((n.clone(), c.clone()));
                    entries.push((c, ty.clone()));
                }
                let body = self.core(body);
                for _ in ctx.entries() {
                    self.core.pop();
                }
                HostTerm::Promote(Context::from_entries(entries), Box::new(body))
            }
        }
    }

    fn core(&mut self, f: &CoreTerm) -> CoreTerm {
        match f {
            CoreTerm::Bullet => CoreTerm::Bullet,
            CoreTerm::Var(a) => CoreTerm::Var(self.core_name(a)),
            CoreTerm::Tensor(g, h) => CoreTerm::tensor(self.core(g), self.core(h)),
            CoreTerm::LetUnit(g, h) => CoreTerm::let_unit(self.core(g), self.core(h)),
            CoreTerm::Derelict(h, arg) => CoreTerm::derelict(self.host(h), self.core(arg)),
            CoreTerm::Const(k, args) => {
                CoreTerm::Const(k.clone(), args.iter().map(|a| self.core(a)).collect())
            }
            CoreTerm::LetTensor(g, a, b, body) => {
                let scrut = self.core(g);
                let ca = format!("#c{}", self.core.len());
                self.core.push((a.clone(), ca.clone()));
                let cb = format!("#c{}", self.core.len());
                self.core.push((b.clone(), cb.clone()));
                let body = self.core(body);
                self.core.pop();
                self.core.pop();
                CoreTerm::LetTensor(Box::new(scrut), ca, cb, Box::new(body))
            }
        }
    }
}

/// Canonical representative of the alpha-class of a host term.
pub fn canonical_host(t: &HostTerm) -> HostTerm {
    Canon::default().host(t)
}

/// Canonical representative of the alpha-class of a core term.
pub fn canonical_core(f: &CoreTerm) -> CoreTerm {
    Canon::default().core(f)
}

pub fn canonical(t: &Term) -> Term {
    match t {
        Term::Host(h) => Term::Host(canonical_host(h)),
        Term::Core(c) => Term::Core(canonical_core(c)),
    }
}

pub fn alpha_eq_host(u: &HostTerm, v: &HostTerm) -> bool {
    canonical_host(u) == canonical_host(v)
}

pub fn alpha_eq_core(u: &CoreTerm, v: &CoreTerm) -> bool {
    canonical_core(u) == canonical_core(v)
}

pub fn alpha_eq(u: &Term, v: &Term) -> bool {
    canonical(u) == canonical(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bit() -> CoreType {
        CoreType::base("Bit")
    }

    #[test]
    fn host_substitution_base_case() {
        assert_eq!(
            subst_host(&HostTerm::var("x"), "x", &HostTerm::Star),
            HostTerm::Star
        );
    }

    #[test]
    fn host_substitution_avoids_capture() {
        let t = HostTerm::lam("y", HostType::Unit, HostTerm::var("x"));
        let r = subst_host(&t, "x", &HostTerm::var("y"));
        match &r {
            HostTerm::Lam(y2, _, body) => {
                assert_ne!(y2, "y");
                assert_eq!(**body, HostTerm::var("y"));
            }
            _ => panic!("expected lambda, got {r:?}"),
        }
    }

    #[test]
    fn host_substitution_keeps_multiplicity() {
        let t = HostTerm::app(HostTerm::var("x"), HostTerm::var("x"));
        assert_eq!(
            subst_host(&t, "x", &HostTerm::Star),
            HostTerm::app(HostTerm::Star, HostTerm::Star)
        );
    }

    #[test]
    fn core_substitution_replaces_single_occurrence() {
        let f = CoreTerm::tensor(CoreTerm::var("a"), CoreTerm::var("b"));
        let g = CoreTerm::constant("not", vec![CoreTerm::var("c")]);
        let r = subst_core(&f, "a", &g);
        assert_eq!(r, CoreTerm::tensor(g, CoreTerm::var("b")));
        assert_eq!(
            subst_core(&CoreTerm::var("a"), "a", &CoreTerm::Bullet),
            CoreTerm::Bullet
        );
    }

    #[test]
    fn derelict_consumed_variable_is_rewired() {
        let f = CoreTerm::derelict(HostTerm::var("h"), CoreTerm::var("a"));
        assert_eq!(
            subst_core(&f, "a", &CoreTerm::var("b")),
            CoreTerm::derelict(HostTerm::var("h"), CoreTerm::var("b"))
        );
        let g = CoreTerm::tensor(CoreTerm::var("c"), CoreTerm::var("d"));
        assert_eq!(
            subst_core(&f, "a", &g),
            CoreTerm::derelict(HostTerm::var("h"), g.clone())
        );
    }

    #[test]
    fn host_into_core_substitution() {
        let f = CoreTerm::derelict(HostTerm::var("x"), CoreTerm::var("a"));
        assert_eq!(
            subst_host_in_core(&f, "x", &HostTerm::Star),
            CoreTerm::derelict(HostTerm::Star, CoreTerm::var("a"))
        );
        assert_eq!(
            subst_host_in_core(&CoreTerm::Bullet, "x", &HostTerm::Star),
            CoreTerm::Bullet
        );
        let l = CoreTerm::let_tensor(CoreTerm::var("c"), "a", "b", f);
        let t = HostTerm::var("t");
        assert_eq!(
            subst_host_in_core(&l, "x", &t),
            CoreTerm::let_tensor(
                CoreTerm::var("c"),
                "a",
                "b",
                CoreTerm::derelict(t, CoreTerm::var("a"))
            )
        );
    }

    #[test]
    fn let_binders_are_renamed_to_avoid_capture() {
        let body = CoreTerm::tensor(CoreTerm::var("a"), CoreTerm::var("z"));
        let f = CoreTerm::let_tensor(CoreTerm::var("c"), "a", "b", body);
        let r = subst_core(&f, "z", &CoreTerm::var("a"));
        match r {
            CoreTerm::LetTensor(_, a2, _, body) => {
                assert_ne!(a2, "a");
                assert_eq!(
                    *body,
                    CoreTerm::tensor(CoreTerm::Var(a2), CoreTerm::var("a"))
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn alpha_equivalence_examples() {
        let x = HostTerm::lam("x", HostType::base("X"), HostTerm::var("x"));
        let y = HostTerm::lam("y", HostType::base("X"), HostTerm::var("y"));
        let z = HostTerm::lam("x", HostType::base("Y"), HostTerm::var("x"));
        assert!(alpha_eq_host(&x, &y));
        assert!(!alpha_eq_host(&x, &z));
        let da = CoreTerm::derelict(HostTerm::var("f"), CoreTerm::var("a"));
        let db = CoreTerm::derelict(HostTerm::var("f"), CoreTerm::var("b"));
        assert!(!alpha_eq_core(&da, &db));
        let pa = HostTerm::promote(Context::from_entries(vec![("a".into(), bit())]), da);
        let pb = HostTerm::promote(Context::from_entries(vec![("b".into(), bit())]), db);
        assert!(alpha_eq_host(&pa, &pb));
    }

    #[test]
    fn tensor_of_context_is_right_associated() {
        let ctx: CoreContext = Context::from_entries(vec![
            ("a".into(), CoreType::base("A")),
            ("b".into(), CoreType::base("B")),
            ("c".into(), CoreType::base("C")),
        ]);
        assert_eq!(
            ctx.tensor(),
            CoreType::tensor(
                CoreType::base("A"),
                CoreType::tensor(CoreType::base("B"), CoreType::base("C"))
            )
        );
        assert_eq!(CoreContext::new().tensor(), CoreType::Unit);
    }

    #[test]
    fn occurrences_ignore_bound_names() {
        let f = CoreTerm::tensor(
            CoreTerm::var("a"),
            CoreTerm::let_tensor(
                CoreTerm::var("c"),
                "a",
                "b",
                CoreTerm::tensor(CoreTerm::var("a"), CoreTerm::var("b")),
            ),
        );
        let occ = core_occurrences(&f);
        assert_eq!(occ.get("a"), Some(&1));
        assert_eq!(occ.get("c"), Some(&1));
        assert_eq!(occ.get("b"), None);
    }
}
