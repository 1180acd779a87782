//! Seeded generators of well-typed circuit terms, shared by the integration suites.
#![allow(dead_code)]

use hc_core::syntax::*;
use hc_core::syntaxgen::compose;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn bit() -> CoreType {
    CoreType::base("Bit")
}

pub fn bits() -> CoreType {
    CoreType::tensor(bit(), bit())
}

pub fn boolean() -> HostType {
    HostType::base("bool")
}

/// Host types small enough to enumerate in the bit model.
pub fn small_host_types() -> Vec<HostType> {
    vec![
        boolean(),
        HostType::Proof(bit(), bit()),
        HostType::Proof(CoreType::Unit, bit()),
    ]
}

fn proof_types() -> Vec<HostType> {
    vec![
        HostType::Proof(bit(), bit()),
        HostType::Proof(bits(), bit()),
        HostType::Proof(bit(), bits()),
        HostType::Proof(CoreType::Unit, bit()),
        HostType::Proof(bits(), bits()),
    ]
}

pub struct TermGen {
    pub rng: ChaCha8Rng,
    next: usize,
}

type Vars = Vec<(Name, CoreType)>;
type HostVars = Vec<(Name, HostType)>;

impl TermGen {
    pub fn new(rng: ChaCha8Rng) -> Self {
        TermGen { rng, next: 0 }
    }

    fn fresh(&mut self, base: &str) -> Name {
        self.next += 1;
        format!("{base}{}", self.next)
    }

    fn split(&mut self, vars: &Vars) -> (Vars, Vars) {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for v in vars {
            if self.rng.gen_bool(0.5) {
                left.push(v.clone());
            } else {
                right.push(v.clone());
            }
        }
        (left, right)
    }

    /// A core term of type `target` using every variable of `vars` exactly once.
    pub fn core(
        &mut self,
        host: &HostVars,
        vars: Vars,
        target: &CoreType,
        depth: usize,
    ) -> CoreTerm {
        let discardable = vars.iter().all(|(_, t)| *t == CoreType::Unit);
        assert!(
            *target != CoreType::Unit || discardable,
            "cannot reach I from {vars:?}"
        );
        if depth == 0 {
            return self.close(vars, target);
        }
        let d = depth - 1;
        let mut options: Vec<u8> = vec![0, 5];
        if vars.len() == 1 && vars[0].1 == *target {
            options.extend([1, 1]);
        }
        if *target != CoreType::Unit {
            options.push(6);
        }
        if vars.iter().any(|(_, t)| *t == CoreType::Unit) {
            options.push(7);
        }
        if *target == bit() {
            options.extend([2, 3]);
        }
        if *target == bits() {
            options.extend([4, 4, 8]);
        }
        match *options.choose(&mut self.rng).unwrap() {
            1 => CoreTerm::Var(vars[0].0.clone()),
            2 => CoreTerm::constant("not", vec![self.core(host, vars, &bit(), d)]),
            3 => CoreTerm::constant("and", vec![self.core(host, vars, &bits(), d)]),
            4 => {
                let (l, r) = self.split(&vars);
                CoreTerm::tensor(self.core(host, l, &bit(), d), self.core(host, r, &bit(), d))
            }
            8 => CoreTerm::constant("cnot", vec![self.core(host, vars, &bits(), d)]),
            5 => {
                let mut doms = vec![bit(), bits()];
                if discardable {
                    doms.push(CoreType::Unit);
                }
                if *target == CoreType::Unit {
                    doms = vec![CoreType::Unit];
                }
                let dom = doms.choose(&mut self.rng).unwrap().clone();
                let h = self.host(host, &HostType::Proof(dom.clone(), target.clone()), d);
                CoreTerm::derelict(h, self.core(host, vars, &dom, d))
            }
            6 => {
                let (l, mut r) = self.split(&vars);
                let (a, b) = (self.fresh("a"), self.fresh("b"));
                let scrutinee = self.core(host, l, &bits(), d);
                r.push((a.clone(), bit()));
                r.push((b.clone(), bit()));
                r.shuffle(&mut self.rng);
                CoreTerm::let_tensor(scrutinee, &a, &b, self.core(host, r, target, d))
            }
            7 => {
                let i = vars.iter().position(|(_, t)| *t == CoreType::Unit).unwrap();
                let mut rest = vars.clone();
                let (u, _) = rest.remove(i);
                CoreTerm::let_unit(CoreTerm::Var(u), self.core(host, rest, target, d))
            }
            _ => {
                if vars.is_empty() && self.rng.gen_bool(0.3) {
                    CoreTerm::let_unit(CoreTerm::Bullet, self.core(host, vars, target, d))
                } else {
                    self.close(vars, target)
                }
            }
        }
    }

    /// A small term eliminating `vars` into `target`.
    fn close(&mut self, vars: Vars, target: &CoreType) -> CoreTerm {
        if let Some(i) = vars.iter().position(|(_, t)| *t == CoreType::Unit) {
            let mut rest = vars.clone();
            let (u, _) = rest.remove(i);
            return CoreTerm::let_unit(CoreTerm::Var(u), self.close(rest, target));
        }
        if let Some(i) = vars.iter().position(|(_, t)| *t != bit()) {
            let mut rest = vars.clone();
            let (p, ty) = rest.remove(i);
            assert_eq!(ty, bits(), "generator only uses Bit, Bit (x) Bit and I");
            let (a, b) = (self.fresh("a"), self.fresh("b"));
            rest.push((a.clone(), bit()));
            rest.push((b.clone(), bit()));
            return CoreTerm::let_tensor(CoreTerm::Var(p), &a, &b, self.close(rest, target));
        }
        let names: Vec<Name> = vars.into_iter().map(|(n, _)| n).collect();
        let constant = |rng: &mut ChaCha8Rng| {
            CoreTerm::constant(if rng.gen_bool(0.5) { "0" } else { "1" }, vec![])
        };
        let fold = |names: &[Name], rng: &mut ChaCha8Rng| -> CoreTerm {
            match names.split_first() {
                None => constant(rng),
                Some((first, rest)) => rest.iter().fold(CoreTerm::var(first), |acc, n| {
                    CoreTerm::constant("and", vec![CoreTerm::tensor(acc, CoreTerm::var(n))])
                }),
            }
        };
        if *target == CoreType::Unit {
            assert!(names.is_empty());
            CoreTerm::Bullet
        } else if *target == bit() {
            fold(&names, &mut self.rng)
        } else {
            assert_eq!(*target, bits());
            match names.split_last() {
                None => CoreTerm::tensor(constant(&mut self.rng), constant(&mut self.rng)),
                Some((last, init)) if init.is_empty() => {
                    CoreTerm::tensor(CoreTerm::var(last), constant(&mut self.rng))
                }
                Some((last, init)) => {
                    CoreTerm::tensor(fold(init, &mut self.rng), CoreTerm::var(last))
                }
            }
        }
    }

    fn promote(
        &mut self,
        host: &HostVars,
        dom: &CoreType,
        cod: &CoreType,
        depth: usize,
    ) -> HostTerm {
        let binders: Vars = if *dom == CoreType::Unit {
            Vec::new()
        } else if *dom == bits() && self.rng.gen_bool(0.5) {
            vec![(self.fresh("a"), bit()), (self.fresh("b"), bit())]
        } else {
            vec![(self.fresh("a"), dom.clone())]
        };
        let ctx = CoreContext::from_entries(binders.clone());
        HostTerm::promote(ctx, self.core(host, binders, cod, depth))
    }

    /// A host term of type `target`.
    pub fn host(&mut self, host: &HostVars, target: &HostType, depth: usize) -> HostTerm {
        let vars: Vec<&Name> = host
            .iter()
            .filter(|(_, t)| t == target)
            .map(|(n, _)| n)
            .collect();
        if depth == 0 {
            if let Some(x) = vars.choose(&mut self.rng) {
                return HostTerm::Var((*x).clone());
            }
            return self.leaf(host, target);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..8) {
            0 if !vars.is_empty() => HostTerm::Var((*vars.choose(&mut self.rng).unwrap()).clone()),
            1 => {
                let ty = small_host_types().choose(&mut self.rng).unwrap().clone();
                let x = self.fresh("x");
                let mut inner = host.clone();
                inner.push((x.clone(), ty.clone()));
                let body = self.host(&inner, target, d);
                let arg = self.host(host, &ty, d);
                HostTerm::app(HostTerm::lam(&x, ty, body), arg)
            }
            2 => {
                let other = small_host_types().choose(&mut self.rng).unwrap().clone();
                let (t, o) = (self.host(host, target, d), self.host(host, &other, d));
                if self.rng.gen_bool(0.5) {
                    HostTerm::fst(HostTerm::pair(t, o))
                } else {
                    HostTerm::snd(HostTerm::pair(o, t))
                }
            }
            3 => {
                let guard = self.host(host, &boolean(), d);
                let (s, t) = (self.host(host, target, d), self.host(host, target, d));
                let head = HostTerm::Const("if".into(), Some(target.clone()));
                HostTerm::app(HostTerm::app(HostTerm::app(head, guard), s), t)
            }
            4 | 5 => match target {
                HostType::Proof(dom, cod) => {
                    let mid = if *cod == CoreType::Unit {
                        CoreType::Unit
                    } else {
                        [bit(), bits()].choose(&mut self.rng).unwrap().clone()
                    };
                    let f = self.host(host, &HostType::Proof(dom.clone(), mid.clone()), d);
                    let g = self.host(host, &HostType::Proof(mid, cod.clone()), d);
                    compose(dom, &f, &g)
                }
                _ => self.leaf(host, target),
            },
            6 => match target {
                HostType::Proof(dom, cod) => self.promote(host, dom, cod, d),
                _ => self.leaf(host, target),
            },
            _ => self.leaf(host, target),
        }
    }

    fn leaf(&mut self, host: &HostVars, target: &HostType) -> HostTerm {
        match target {
            HostType::Unit => HostTerm::Star,
            HostType::Base(b) if b == "bool" => HostTerm::constant(if self.rng.gen_bool(0.5) {
                "true"
            } else {
                "false"
            }),
            HostType::Proof(dom, cod) => self.promote(host, dom, cod, 1),
            HostType::Prod(a, b) => HostTerm::pair(self.leaf(host, a), self.leaf(host, b)),
            HostType::Arrow(a, b) => {
                let x = self.fresh("x");
                let mut inner = host.clone();
                inner.push((x.clone(), (**a).clone()));
                HostTerm::lam(&x, (**a).clone(), self.leaf(&inner, b))
            }
            other => panic!("no leaf for {other:?}"),
        }
    }

    /// A random host context of at most two enumerable variables.
    pub fn host_context(&mut self) -> HostVars {
        let n = self.rng.gen_range(0..=2);
        let types = [boolean(), HostType::Proof(bit(), bit())];
        (0..n)
            .map(|_| {
                (
                    self.fresh("y"),
                    types.choose(&mut self.rng).unwrap().clone(),
                )
            })
            .collect()
    }

    /// A random circuit judgment: a core term over a Bit context or a host term
    /// of Proof type, of the given depth.
    pub fn circuit_judgment(&mut self, depth: usize) -> (MixedContext, Term) {
        let host = self.host_context();
        let hctx = HostContext::from_entries(host.clone());
        if self.rng.gen_bool(0.5) {
            let n = self.rng.gen_range(0..=2);
            let core: Vars = (0..n).map(|_| (self.fresh("c"), bit())).collect();
            let target = if self.rng.gen_bool(0.5) {
                bit()
            } else {
                bits()
            };
            let t = self.core(&host, core.clone(), &target, depth);
            (
                MixedContext::new(hctx, CoreContext::from_entries(core)),
                Term::Core(t),
            )
        } else {
            let target = proof_types().choose(&mut self.rng).unwrap().clone();
            let t = self.host(&host, &target, depth);
            (MixedContext::new(hctx, CoreContext::new()), Term::Host(t))
        }
    }

    /// A core judgment over a context of Bit, Bit (x) Bit and I variables.
    pub fn core_judgment(&mut self, depth: usize) -> (MixedContext, CoreTerm) {
        let n = self.rng.gen_range(0..=4);
        let types = [bit(), bit(), bits(), CoreType::Unit];
        let core: Vars = (0..n)
            .map(|_| {
                (
                    self.fresh("c"),
                    types.choose(&mut self.rng).unwrap().clone(),
                )
            })
            .collect();
        let target = if self.rng.gen_bool(0.5) {
            bit()
        } else {
            bits()
        };
        let host = self.host_context();
        let t = self.core(&host, core.clone(), &target, depth);
        (
            MixedContext::new(
                HostContext::from_entries(host),
                CoreContext::from_entries(core),
            ),
            t,
        )
    }
}

/// Linear variables bound anywhere in `f` (context, let, promote) that are
/// not used exactly once in their scope.
pub fn occurrence_violations(ctx: &CoreContext, f: &CoreTerm) -> Vec<String> {
    let mut bad = Vec::new();
    let occ = core_occurrences(f);
    for a in ctx.names() {
        let n = occ.get(a).copied().unwrap_or(0);
        if n != 1 {
            bad.push(format!("{a} used {n} times"));
        }
    }
    audit_core(f, &mut bad);
    bad
}

fn audit_core(f: &CoreTerm, bad: &mut Vec<String>) {
    match f {
        CoreTerm::Bullet | CoreTerm::Var(_) => {}
        CoreTerm::Tensor(g, h) | CoreTerm::LetUnit(g, h) => {
            audit_core(g, bad);
            audit_core(h, bad);
        }
        CoreTerm::LetTensor(g, a, b, body) => {
            let occ = core_occurrences(body);
            for v in [a, b] {
                let n = occ.get(v).copied().unwrap_or(0);
                if n != 1 {
                    bad.push(format!("let-bound {v} used {n} times"));
                }
            }
            audit_core(g, bad);
            audit_core(body, bad);
        }
        CoreTerm::Derelict(h, arg) => {
            audit_host(h, bad);
            audit_core(arg, bad);
        }
        CoreTerm::Const(_, args) => args.iter().for_each(|a| audit_core(a, bad)),
    }
}

fn audit_host(t: &HostTerm, bad: &mut Vec<String>) {
    match t {
        HostTerm::Star | HostTerm::Var(_) | HostTerm::Const(..) => {}
        HostTerm::Pair(a, b) | HostTerm::App(a, b) => {
            audit_host(a, bad);
            audit_host(b, bad);
        }
        HostTerm::Fst(a) | HostTerm::Snd(a) | HostTerm::Lam(_, _, a) => audit_host(a, bad),
        HostTerm::Promote(ctx, body) => bad.extend(occurrence_violations(ctx, body)),
    }
}

/// Replace one occurrence of a context variable by another of the same type.
pub fn duplicate_variable(
    ctx: &CoreContext,
    f: &CoreTerm,
    rng: &mut ChaCha8Rng,
) -> Option<CoreTerm> {
    let entries = ctx.entries();
    let pairs: Vec<(&Name, &Name)> = entries
        .iter()
        .flat_map(|(a, ta)| {
            entries
                .iter()
                .filter(move |(b, tb)| a != b && ta == tb)
                .map(move |(b, _)| (a, b))
        })
        .collect();
    let (from, to) = *pairs.choose(rng)?;
    Some(subst_core(f, from, &CoreTerm::var(to)))
}

/// One object whose endomorphisms are the monoid `({0,1}, and)`, used as both
/// composition and tensor.
pub fn and_monoid() -> hc_core::semantics::TableModel {
    let mut m = hc_core::semantics::TableModel::trivial();
    m.name = "and-monoid".into();
    let table = vec![vec![0, 0], vec![0, 1]];
    for labels in m.homs.values_mut() {
        *labels = vec!["0".into(), "1".into()];
    }
    for t in m.comp.values_mut().chain(m.tensor_hom.values_mut()) {
        *t = table.clone();
    }
    for i in m.id.values_mut().chain(m.sym.values_mut()) {
        *i = 1;
    }
    m
}
