//! Term axioms read as a convergent rewrite system. Host constants defined
//! by a closed term are unfolded; first-order core equations are oriented
//! from the larger side to the smaller and accepted when every critical pair
//! joins.

use std::collections::BTreeMap;

use crate::equations::{normalize, NormConfig};
use crate::syntax::*;
use crate::theories::Theory;

/// Critical pairs examined before the system is declared unusable.
const MAX_CRITICAL_PAIRS: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: CoreTerm,
    pub rhs: CoreTerm,
}

#[derive(Clone, Debug, Default)]
pub struct RewriteSystem {
    pub unfold: BTreeMap<Name, HostTerm>,
    pub rules: Vec<Rule>,
    by_root: BTreeMap<String, Vec<usize>>,
}

type Bindings = BTreeMap<Name, CoreTerm>;

fn first_order(f: &CoreTerm) -> bool {
    match f {
        CoreTerm::Var(_) | CoreTerm::Bullet => true,
        CoreTerm::Tensor(a, b) => first_order(a) && first_order(b),
        CoreTerm::Const(_, args) => args.iter().all(first_order),
        _ => false,
    }
}

fn size(f: &CoreTerm) -> usize {
    match f {
        CoreTerm::Tensor(a, b) => 1 + size(a) + size(b),
        CoreTerm::Const(_, args) => 1 + args.iter().map(size).sum::<usize>(),
        _ => 1,
    }
}

fn var_counts(f: &CoreTerm, out: &mut BTreeMap<Name, usize>) {
    match f {
        CoreTerm::Var(x) => *out.entry(x.clone()).or_default() += 1,
        CoreTerm::Tensor(a, b) => {
            var_counts(a, out);
            var_counts(b, out);
        }
        CoreTerm::Const(_, args) => args.iter().for_each(|a| var_counts(a, out)),
        _ => {}
    }
}

fn root_key(f: &CoreTerm) -> Option<String> {
    match f {
        CoreTerm::Const(k, _) => Some(format!("k:{k}")),
        CoreTerm::Tensor(..) => Some("tensor".into()),
        CoreTerm::Bullet => Some("bullet".into()),
        _ => None,
    }
}

fn host_mentions(t: &HostTerm, name: &str) -> bool {
    match t {
        HostTerm::Const(n, _) => n == name,
        HostTerm::Var(_) | HostTerm::Star => false,
        HostTerm::Pair(a, b) | HostTerm::App(a, b) => {
            host_mentions(a, name) || host_mentions(b, name)
        }
        HostTerm::Fst(a) | HostTerm::Snd(a) | HostTerm::Lam(_, _, a) => host_mentions(a, name),
        HostTerm::Promote(_, body) => core_mentions(body, name),
    }
}

fn core_mentions(f: &CoreTerm, name: &str) -> bool {
    match f {
        CoreTerm::Var(_) | CoreTerm::Bullet => false,
        CoreTerm::Tensor(a, b) | CoreTerm::LetUnit(a, b) | CoreTerm::LetTensor(a, _, _, b) => {
            core_mentions(a, name) || core_mentions(b, name)
        }
        CoreTerm::Derelict(h, a) => host_mentions(h, name) || core_mentions(a, name),
        CoreTerm::Const(_, args) => args.iter().any(|a| core_mentions(a, name)),
    }
}

fn matches(p: &CoreTerm, s: &CoreTerm, b: &mut Bindings) -> bool {
    match (p, s) {
        (CoreTerm::Var(x), _) => match b.get(x) {
            Some(prev) => alpha_eq_core(prev, s),
            None => {
                b.insert(x.clone(), s.clone());
                true
            }
        },
        (CoreTerm::Bullet, CoreTerm::Bullet) => true,
        (CoreTerm::Tensor(a, c), CoreTerm::Tensor(d, e)) => matches(a, d, b) && matches(c, e, b),
        (CoreTerm::Const(k, xs), CoreTerm::Const(j, ys)) => {
            k == j && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| matches(x, y, b))
        }
        _ => false,
    }
}

/// Substitute into a first-order term, following chains of bindings.
fn instantiate(f: &CoreTerm, b: &Bindings) -> CoreTerm {
    match f {
        CoreTerm::Var(x) => match b.get(x) {
            Some(t) if t != f => instantiate(t, b),
            _ => f.clone(),
        },
        CoreTerm::Tensor(x, y) => {
            CoreTerm::Tensor(Box::new(instantiate(x, b)), Box::new(instantiate(y, b)))
        }
        CoreTerm::Const(k, args) => {
            CoreTerm::Const(k.clone(), args.iter().map(|a| instantiate(a, b)).collect())
        }
        _ => f.clone(),
    }
}

/// Substitute a matcher's bindings once; subject variables are left alone.
fn apply_match(f: &CoreTerm, b: &Bindings) -> CoreTerm {
    match f {
        CoreTerm::Var(x) => b.get(x).cloned().unwrap_or_else(|| f.clone()),
        CoreTerm::Tensor(x, y) => {
            CoreTerm::Tensor(Box::new(apply_match(x, b)), Box::new(apply_match(y, b)))
        }
        CoreTerm::Const(k, args) => {
            CoreTerm::Const(k.clone(), args.iter().map(|a| apply_match(a, b)).collect())
        }
        _ => f.clone(),
    }
}

fn resolve<'a>(f: &'a CoreTerm, b: &'a Bindings) -> &'a CoreTerm {
    match f {
        CoreTerm::Var(x) => b.get(x).map(|t| resolve(t, b)).unwrap_or(f),
        _ => f,
    }
}

fn occurs(x: &str, f: &CoreTerm, b: &Bindings) -> bool {
    match resolve(f, b) {
        CoreTerm::Var(y) => x == y,
        CoreTerm::Tensor(p, q) => occurs(x, p, b) || occurs(x, q, b),
        CoreTerm::Const(_, args) => args.iter().any(|a| occurs(x, a, b)),
        _ => false,
    }
}

fn unify(s: &CoreTerm, t: &CoreTerm, b: &mut Bindings) -> bool {
    let (s, t) = (resolve(s, b).clone(), resolve(t, b).clone());
    match (&s, &t) {
        (CoreTerm::Var(x), CoreTerm::Var(y)) if x == y => true,
        (CoreTerm::Var(x), other) | (other, CoreTerm::Var(x)) => {
            if occurs(x, other, b) {
                return false;
            }
            b.insert(x.clone(), other.clone());
            true
        }
        (CoreTerm::Bullet, CoreTerm::Bullet) => true,
        (CoreTerm::Tensor(a, c), CoreTerm::Tensor(d, e)) => unify(a, d, b) && unify(c, e, b),
        (CoreTerm::Const(k, xs), CoreTerm::Const(j, ys)) => {
            k == j && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| unify(x, y, b))
        }
        _ => false,
    }
}

fn rename_vars(f: &CoreTerm, suffix: &str) -> CoreTerm {
    match f {
        CoreTerm::Var(x) => CoreTerm::Var(format!("{x}{suffix}")),
        CoreTerm::Tensor(a, b) => CoreTerm::Tensor(
            Box::new(rename_vars(a, suffix)),
            Box::new(rename_vars(b, suffix)),
        ),
        CoreTerm::Const(k, args) => CoreTerm::Const(
            k.clone(),
            args.iter().map(|a| rename_vars(a, suffix)).collect(),
        ),
        _ => f.clone(),
    }
}

/// Paths to the non-variable subterms of a first-order term.
fn positions(f: &CoreTerm, here: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if matches!(f, CoreTerm::Var(_)) {
        return;
    }
    out.push(here.clone());
    let children: Vec<&CoreTerm> = match f {
        CoreTerm::Tensor(a, b) => vec![a, b],
        CoreTerm::Const(_, args) => args.iter().collect(),
        _ => Vec::new(),
    };
    for (i, c) in children.into_iter().enumerate() {
        here.push(i);
        positions(c, here, out);
        here.pop();
    }
}

fn at<'a>(f: &'a CoreTerm, path: &[usize]) -> &'a CoreTerm {
    match (path.split_first(), f) {
        (None, _) => f,
        (Some((0, rest)), CoreTerm::Tensor(a, _)) => at(a, rest),
        (Some((_, rest)), CoreTerm::Tensor(_, b)) => at(b, rest),
        (Some((&i, rest)), CoreTerm::Const(_, args)) => at(&args[i], rest),
        _ => f,
    }
}

fn replace_at(f: &CoreTerm, path: &[usize], by: &CoreTerm) -> CoreTerm {
    match (path.split_first(), f) {
        (None, _) => by.clone(),
        (Some((0, rest)), CoreTerm::Tensor(a, b)) => {
            CoreTerm::Tensor(Box::new(replace_at(a, rest, by)), b.clone())
        }
        (Some((_, rest)), CoreTerm::Tensor(a, b)) => {
            CoreTerm::Tensor(a.clone(), Box::new(replace_at(b, rest, by)))
        }
        (Some((&i, rest)), CoreTerm::Const(k, args)) => {
            let mut args = args.clone();
            args[i] = replace_at(&args[i], rest, by);
            CoreTerm::Const(k.clone(), args)
        }
        _ => f.clone(),
    }
}

impl RewriteSystem {
    /// `None` unless every term axiom is a definition of a host constant or
    /// a first-order core equation, and the oriented equations are confluent.
    pub fn from_theory(theory: &Theory) -> Option<Self> {
        if theory.term_axioms.is_empty() {
            return None;
        }
        let mut sys = RewriteSystem::default();
        for ax in &theory.term_axioms {
            if !ax.ctx.host.is_empty() {
                return None;
            }
            match (&ax.lhs, &ax.rhs) {
                (Term::Host(l), Term::Host(r)) => {
                    if !ax.ctx.core.is_empty() {
                        return None;
                    }
                    let (name, body) = match (l, r) {
                        (HostTerm::Const(n, None), other) if !host_mentions(other, n) => (n, other),
                        (other, HostTerm::Const(n, None)) if !host_mentions(other, n) => (n, other),
                        _ => return None,
                    };
                    if sys.unfold.insert(name.clone(), body.clone()).is_some() {
                        return None;
                    }
                }
                (Term::Core(l), Term::Core(r)) => {
                    if !first_order(l) || !first_order(r) {
                        return None;
                    }
                    let (lhs, rhs) = match size(l).cmp(&size(r)) {
                        std::cmp::Ordering::Greater => (l, r),
                        std::cmp::Ordering::Less => (r, l),
                        std::cmp::Ordering::Equal => return None,
                    };
                    let (mut big, mut small) = (BTreeMap::new(), BTreeMap::new());
                    var_counts(lhs, &mut big);
                    var_counts(rhs, &mut small);
                    if small.iter().any(|(x, n)| big.get(x).is_none_or(|m| m < n)) {
                        return None;
                    }
                    sys.rules.push(Rule {
                        lhs: lhs.clone(),
                        rhs: rhs.clone(),
                    });
                }
                _ => return None,
            }
        }
        let names: Vec<&Name> = sys.unfold.keys().collect();
        if sys
            .unfold
            .values()
            .any(|body| names.iter().any(|n| host_mentions(body, n)))
        {
            return None;
        }
        for (i, r) in sys.rules.iter().enumerate() {
            sys.by_root.entry(root_key(&r.lhs)?).or_default().push(i);
        }
        sys.confluent().then_some(sys)
    }

    fn confluent(&self) -> bool {
        let mut seen = 0;
        for (i, r1) in self.rules.iter().enumerate() {
            let mut paths = Vec::new();
            positions(&r1.lhs, &mut Vec::new(), &mut paths);
            for path in paths {
                let sub = at(&r1.lhs, &path);
                let Some(key) = root_key(sub) else { continue };
                for &j in self.by_root.get(&key).map(Vec::as_slice).unwrap_or(&[]) {
                    if i == j && path.is_empty() {
                        continue;
                    }
                    let r2 = Rule {
                        lhs: rename_vars(&self.rules[j].lhs, "'"),
                        rhs: rename_vars(&self.rules[j].rhs, "'"),
                    };
                    let mut b = Bindings::new();
                    if !unify(sub, &r2.lhs, &mut b) {
                        continue;
                    }
                    seen += 1;
                    if seen > MAX_CRITICAL_PAIRS {
                        return false;
                    }
                    let left = self.rewrite_core(&instantiate(&r1.rhs, &b));
                    let right =
                        self.rewrite_core(&instantiate(&replace_at(&r1.lhs, &path, &r2.rhs), &b));
                    if !alpha_eq_core(&left, &right) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn at_root(&self, f: CoreTerm) -> CoreTerm {
        let Some(key) = root_key(&f) else { return f };
        for &i in self.by_root.get(&key).map(Vec::as_slice).unwrap_or(&[]) {
            let rule = &self.rules[i];
            let mut b = Bindings::new();
            if matches(&rule.lhs, &f, &mut b) {
                return self.rewrite_core(&apply_match(&rule.rhs, &b));
            }
        }
        f
    }

    /// Innermost rewriting of every core subterm.
    pub fn rewrite_core(&self, f: &CoreTerm) -> CoreTerm {
        let inner = match f {
            CoreTerm::Var(_) | CoreTerm::Bullet => f.clone(),
            CoreTerm::Tensor(a, b) => CoreTerm::Tensor(
                Box::new(self.rewrite_core(a)),
                Box::new(self.rewrite_core(b)),
            ),
            CoreTerm::LetUnit(a, b) => CoreTerm::LetUnit(
                Box::new(self.rewrite_core(a)),
                Box::new(self.rewrite_core(b)),
            ),
            CoreTerm::LetTensor(s, x, y, body) => CoreTerm::LetTensor(
                Box::new(self.rewrite_core(s)),
                x.clone(),
                y.clone(),
                Box::new(self.rewrite_core(body)),
            ),
            CoreTerm::Derelict(h, a) => CoreTerm::Derelict(
                Box::new(self.rewrite_host(h)),
                Box::new(self.rewrite_core(a)),
            ),
            CoreTerm::Const(k, args) => CoreTerm::Const(
                k.clone(),
                args.iter().map(|a| self.rewrite_core(a)).collect(),
            ),
        };
        self.at_root(inner)
    }

    pub fn rewrite_host(&self, t: &HostTerm) -> HostTerm {
        let h = |x: &HostTerm| Box::new(self.rewrite_host(x));
        match t {
            HostTerm::Var(_) | HostTerm::Star => t.clone(),
            HostTerm::Const(n, _) => match self.unfold.get(n) {
                Some(body) => body.clone(),
                None => t.clone(),
            },
            HostTerm::Pair(a, b) => HostTerm::Pair(h(a), h(b)),
            HostTerm::App(a, b) => HostTerm::App(h(a), h(b)),
            HostTerm::Fst(a) => HostTerm::Fst(h(a)),
            HostTerm::Snd(a) => HostTerm::Snd(h(a)),
            HostTerm::Lam(x, ty, body) => HostTerm::Lam(x.clone(), ty.clone(), h(body)),
            HostTerm::Promote(ctx, body) => {
                HostTerm::Promote(ctx.clone(), Box::new(self.rewrite_core(body)))
            }
        }
    }

    pub fn rewrite(&self, t: &Term) -> Term {
        match t {
            Term::Host(h) => Term::Host(self.rewrite_host(h)),
            Term::Core(c) => Term::Core(self.rewrite_core(c)),
        }
    }

    /// Alternate unfolding and rewriting with ordinary normalization until stable.
    pub fn normal_form(
        &self,
        env: &crate::typing::TypeEnv,
        ctx: &MixedContext,
        t: &Term,
        cfg: &NormConfig,
    ) -> Option<Term> {
        let mut cur = t.clone();
        for _ in 0..cfg.max_steps.max(1) {
            let next = self.rewrite(&cur);
            let next = normalize(env, ctx, &next, cfg).ok()?.term;
            if alpha_eq(&next, &cur) {
                return Some(next);
            }
            cur = next;
        }
        None
    }
}
