//! Algorithmic type checking with a leftover discipline for the linear core.
//!
//! `check_core` threads the available linear context through a term and
//! returns what was not consumed, so context splitting is deterministic.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use crate::congruence::Congruence;
use crate::diag::Diagnostic;
use crate::rewrite::RewriteSystem;
use crate::surface::{print_core_type, print_host_type};
use crate::syntax::*;
use crate::theories::{Theory, TypeAxiom};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum TyLabel {
    HUnit,
    HBase(Name),
    HProd,
    HArrow,
    HProof,
    CUnit,
    CBase(Name),
    CTensor,
}

#[derive(Clone, Debug, Default)]
struct TypeClosure {
    cc: Congruence<TyLabel>,
    types: Vec<Type>,
}

impl TypeClosure {
    fn add_core(&mut self, t: &CoreType) -> usize {
        let id = match t {
            CoreType::Unit => self.cc.add(TyLabel::CUnit, vec![]),
            CoreType::Base(n) => self.cc.add(TyLabel::CBase(n.clone()), vec![]),
            CoreType::Tensor(a, b) => {
                let (a, b) = (self.add_core(a), self.add_core(b));
                self.cc.add(TyLabel::CTensor, vec![a, b])
            }
        };
        self.record(id, Type::Core(t.clone()));
        id
    }

    fn add_host(&mut self, t: &HostType) -> usize {
        let id = match t {
            HostType::Unit => self.cc.add(TyLabel::HUnit, vec![]),
            HostType::Base(n) => self.cc.add(TyLabel::HBase(n.clone()), vec![]),
            HostType::Prod(a, b) => {
                let (a, b) = (self.add_host(a), self.add_host(b));
                self.cc.add(TyLabel::HProd, vec![a, b])
            }
            HostType::Arrow(a, b) => {
                let (a, b) = (self.add_host(a), self.add_host(b));
                self.cc.add(TyLabel::HArrow, vec![a, b])
            }
            HostType::Proof(a, b) => {
                let (a, b) = (self.add_core(a), self.add_core(b));
                self.cc.add(TyLabel::HProof, vec![a, b])
            }
        };
        self.record(id, Type::Host(t.clone()));
        id
    }

    fn record(&mut self, id: usize, t: Type) {
        if id == self.types.len() {
            self.types.push(t);
        }
    }

    fn add(&mut self, t: &Type) -> usize {
        match t {
            Type::Host(h) => self.add_host(h),
            Type::Core(c) => self.add_core(c),
        }
    }

    /// A member of the class of `id` built with `label`, as its child types.
    fn view(&mut self, id: usize, label: &TyLabel) -> Option<Vec<Type>> {
        let class = self.cc.class_of(id);
        class
            .into_iter()
            .find(|&n| self.cc.label(n) == label)
            .map(|n| {
                self.cc
                    .children(n)
                    .iter()
                    .map(|&c| self.types[c].clone())
                    .collect()
            })
    }
}

/// The typing environment: the active theory and the core discipline.
#[derive(Clone, Debug)]
pub struct TypeEnv<'t> {
    pub theory: &'t Theory,
    pub cartesian_core: bool,
    closure: Option<TypeClosure>,
    rules: OnceLock<Option<Arc<RewriteSystem>>>,
}

impl<'t> TypeEnv<'t> {
    pub fn new(theory: &'t Theory, cartesian_core: bool) -> Self {
        let closure = if theory.type_axioms.is_empty() {
            None
        } else {
            let mut tc = TypeClosure::default();
            for ax in &theory.type_axioms {
                let (a, b) = match ax {
                    TypeAxiom::Host(x, y) => (tc.add_host(x), tc.add_host(y)),
                    TypeAxiom::Core(x, y) => (tc.add_core(x), tc.add_core(y)),
                };
                tc.cc.union(a, b);
            }
            tc.cc.close();
            Some(tc)
        };
        TypeEnv {
            theory,
            cartesian_core,
            closure,
            rules: OnceLock::new(),
        }
    }

    pub fn linear(theory: &'t Theory) -> Self {
        Self::new(theory, false)
    }

    pub fn cartesian(theory: &'t Theory) -> Self {
        Self::new(theory, true)
    }

    /// Same theory, other core discipline.
    pub fn with_cartesian(&self, cartesian_core: bool) -> Self {
        TypeEnv {
            theory: self.theory,
            cartesian_core,
            closure: self.closure.clone(),
            rules: self.rules.clone(),
        }
    }

    /// The term axioms read as a convergent rewrite system, when they are one.
    pub fn rewrite_system(&self) -> Option<&RewriteSystem> {
        self.rules
            .get_or_init(|| RewriteSystem::from_theory(self.theory).map(Arc::new))
            .as_deref()
    }

    pub fn type_eq(&self, a: &Type, b: &Type) -> bool {
        match (a, b, &self.closure) {
            (Type::Host(_), Type::Core(_), _) | (Type::Core(_), Type::Host(_), _) => false,
            (_, _, None) => a == b,
            (_, _, Some(tc)) => {
                if a == b {
                    return true;
                }
                let mut tc = tc.clone();
                let (x, y) = (tc.add(a), tc.add(b));
                tc.cc.equiv(x, y)
            }
        }
    }

    pub fn host_eq(&self, a: &HostType, b: &HostType) -> bool {
        a == b || self.type_eq(&Type::Host(a.clone()), &Type::Host(b.clone()))
    }

    pub fn core_eq(&self, a: &CoreType, b: &CoreType) -> bool {
        a == b || self.type_eq(&Type::Core(a.clone()), &Type::Core(b.clone()))
    }

    fn view(&self, t: &Type, label: TyLabel) -> Option<Vec<Type>> {
        let mut tc = self.closure.clone()?;
        let id = tc.add(t);
        tc.view(id, &label)
    }

    pub fn as_proof(&self, t: &HostType) -> Option<(CoreType, CoreType)> {
        if let HostType::Proof(a, b) = t {
            return Some((a.clone(), b.clone()));
        }
        match self
            .view(&Type::Host(t.clone()), TyLabel::HProof)?
            .as_slice()
        {
            [Type::Core(a), Type::Core(b)] => Some((a.clone(), b.clone())),
            _ => None,
        }
    }

    pub fn as_arrow(&self, t: &HostType) -> Option<(HostType, HostType)> {
        if let HostType::Arrow(a, b) = t {
            return Some(((**a).clone(), (**b).clone()));
        }
        match self
            .view(&Type::Host(t.clone()), TyLabel::HArrow)?
            .as_slice()
        {
            [Type::Host(a), Type::Host(b)] => Some((a.clone(), b.clone())),
            _ => None,
        }
    }

    pub fn as_prod(&self, t: &HostType) -> Option<(HostType, HostType)> {
        if let HostType::Prod(a, b) = t {
            return Some(((**a).clone(), (**b).clone()));
        }
        match self
            .view(&Type::Host(t.clone()), TyLabel::HProd)?
            .as_slice()
        {
            [Type::Host(a), Type::Host(b)] => Some((a.clone(), b.clone())),
            _ => None,
        }
    }

    pub fn as_tensor(&self, t: &CoreType) -> Option<(CoreType, CoreType)> {
        if let CoreType::Tensor(a, b) = t {
            return Some(((**a).clone(), (**b).clone()));
        }
        match self
            .view(&Type::Core(t.clone()), TyLabel::CTensor)?
            .as_slice()
        {
            [Type::Core(a), Type::Core(b)] => Some((a.clone(), b.clone())),
            _ => None,
        }
    }

    // -- well-formedness -----------------------------------------------------

    pub fn check_core_type(&self, t: &CoreType) -> Result<(), Diagnostic> {
        match t {
            CoreType::Unit => Ok(()),
            CoreType::Base(n) if self.theory.core_types.contains(n) => Ok(()),
            CoreType::Base(n) => Err(Diagnostic::rule("t0c", format!("unknown core type `{n}`"))),
            CoreType::Tensor(a, b) => {
                self.check_core_type(a)?;
                self.check_core_type(b)
            }
        }
    }

    pub fn check_host_type(&self, t: &HostType) -> Result<(), Diagnostic> {
        match t {
            HostType::Unit => Ok(()),
            HostType::Base(n) if self.theory.host_types.contains(n) => Ok(()),
            HostType::Base(n) => Err(Diagnostic::rule("t0v", format!("unknown host type `{n}`"))),
            HostType::Prod(a, b) | HostType::Arrow(a, b) => {
                self.check_host_type(a)?;
                self.check_host_type(b)
            }
            HostType::Proof(a, b) => {
                self.check_core_type(a)?;
                self.check_core_type(b)
            }
        }
    }

    pub fn check_context(&self, ctx: &MixedContext) -> Result<(), Diagnostic> {
        if !ctx.well_formed() {
            return Err(Diagnostic::error("context repeats a variable name"));
        }
        for t in ctx.host.types() {
            self.check_host_type(t)?;
        }
        for t in ctx.core.types() {
            self.check_core_type(t)?;
        }
        Ok(())
    }

    // -- host judgments --------------------------------------------------------

    /// Synthesize the type of a host term.
    pub fn check_host(&self, ctx: &HostContext, t: &HostTerm) -> Result<HostType, Diagnostic> {
        match t {
            HostTerm::Star => Ok(HostType::Unit),
            HostTerm::Var(x) => ctx
                .lookup(x)
                .cloned()
                .ok_or_else(|| Diagnostic::rule("av", format!("unbound host variable `{x}`"))),
            HostTerm::Pair(s, u) => Ok(HostType::prod(
                self.check_host(ctx, s)?,
                self.check_host(ctx, u)?,
            )),
            HostTerm::Fst(v) => {
                let ty = self.check_host(ctx, v)?;
                self.as_prod(&ty).map(|(a, _)| a).ok_or_else(|| {
                    Diagnostic::rule(
                        "π1v",
                        format!("fst expects a product, found {}", print_host_type(&ty)),
                    )
                })
            }
            HostTerm::Snd(v) => {
                let ty = self.check_host(ctx, v)?;
                self.as_prod(&ty).map(|(_, b)| b).ok_or_else(|| {
                    Diagnostic::rule(
                        "π2v",
                        format!("snd expects a product, found {}", print_host_type(&ty)),
                    )
                })
            }
            HostTerm::Lam(x, ann, body) => {
                self.check_host_type(ann).map_err(|d| Diagnostic {
                    rule: Some("aiv".into()),
                    ..d
                })?;
                let cod = self.check_host(&ctx.with(x, ann.clone()), body)?;
                Ok(HostType::arrow(ann.clone(), cod))
            }
            HostTerm::App(f, a) => {
                let fty = self.check_host(ctx, f)?;
                let (dom, cod) = self.as_arrow(&fty).ok_or_else(|| {
                    Diagnostic::rule(
                        "aev",
                        format!(
                            "applying a term of non-function type {}",
                            print_host_type(&fty)
                        ),
                    )
                })?;
                let aty = self.check_host(ctx, a)?;
                if !self.host_eq(&dom, &aty) {
                    return Err(Diagnostic::rule(
                        "aev",
                        format!(
                            "argument has type {}, expected {}",
                            print_host_type(&aty),
                            print_host_type(&dom)
                        ),
                    ));
                }
                Ok(cod)
            }
            HostTerm::Promote(octx, body) => {
                if octx.has_duplicates() {
                    return Err(Diagnostic::rule(
                        "prom",
                        "promote binds a core variable twice",
                    ));
                }
                for ty in octx.types() {
                    self.check_core_type(ty)?;
                }
                let (ty, left) = self.check_core(ctx, octx, body)?;
                if !self.cartesian_core && !left.is_empty() {
                    return Err(Diagnostic::rule(
                        "prom",
                        format!("unused linear variable `{}`", left.entries()[0].0),
                    ));
                }
                Ok(HostType::Proof(octx.tensor(), ty))
            }
            HostTerm::Const(n, index) => {
                let sig = self.theory.host_consts.get(n).ok_or_else(|| {
                    Diagnostic::rule("av", format!("unknown host constant `{n}`"))
                })?;
                match (&sig.param, index) {
                    (None, None) => Ok(sig.ty.clone()),
                    (Some(p), Some(ix)) => {
                        self.check_host_type(ix)?;
                        Ok(sig.ty.instantiate(p, ix))
                    }
                    (Some(_), None) => Err(Diagnostic::rule(
                        "const",
                        format!("constant family `{n}` needs a type index"),
                    )),
                    (None, Some(_)) => Err(Diagnostic::rule(
                        "const",
                        format!("constant `{n}` takes no type index"),
                    )),
                }
            }
        }
    }

    // -- core judgments ----------------------------------------------------------

    /// Check `f` against the available linear context, returning its type and
    /// the part of the context it did not consume.
    pub fn check_core(
        &self,
        host: &HostContext,
        core_in: &CoreContext,
        f: &CoreTerm,
    ) -> Result<(CoreType, CoreContext), Diagnostic> {
        let scope: BTreeSet<Name> = core_in.names().cloned().collect();
        self.core(host, core_in.clone(), &scope, f, "ac")
    }

    /// `Γ | Ω ⊢ f : A` with the whole of Ω consumed in linear mode.
    pub fn check_core_closed(
        &self,
        host: &HostContext,
        core: &CoreContext,
        f: &CoreTerm,
    ) -> Result<CoreType, Diagnostic> {
        let (ty, left) = self.check_core(host, core, f)?;
        if !self.cartesian_core && !left.is_empty() {
            return Err(Diagnostic::rule(
                "ac",
                format!("unused linear variable `{}`", left.entries()[0].0),
            ));
        }
        Ok(ty)
    }

    fn core(
        &self,
        host: &HostContext,
        mut avail: CoreContext,
        scope: &BTreeSet<Name>,
        f: &CoreTerm,
        blame: &str,
    ) -> Result<(CoreType, CoreContext), Diagnostic> {
        match f {
            CoreTerm::Bullet => Ok((CoreType::Unit, avail)),
            CoreTerm::Var(a) => {
                if let Some(ty) = avail.lookup(a).cloned() {
                    if !self.cartesian_core {
                        avail.remove(a);
                    }
                    Ok((ty, avail))
                } else if scope.contains(a) {
                    Err(Diagnostic::rule(
                        blame,
                        format!("linear variable `{a}` is used more than once"),
                    ))
                } else {
                    Err(Diagnostic::rule(
                        "ac",
                        format!("unbound core variable `{a}`"),
                    ))
                }
            }
            CoreTerm::Tensor(g, h) => {
                let (ta, rest) = self.core(host, avail, scope, g, "tc")?;
                let (tb, rest) = self.core(host, rest, scope, h, "tc")?;
                Ok((CoreType::tensor(ta, tb), rest))
            }
            CoreTerm::LetTensor(g, a, b, body) => {
                let (ty, rest) = self.core(host, avail, scope, g, "let1c")?;
                let (ta, tb) = self.as_tensor(&ty).ok_or_else(|| {
                    Diagnostic::rule(
                        "let1c",
                        format!("let-tensor scrutinee has type {}", print_core_type(&ty)),
                    )
                })?;
                if a == b {
                    return Err(Diagnostic::rule(
                        "let1c",
                        format!("let-tensor binds `{a}` twice"),
                    ));
                }
                let mut inner_scope = scope.clone();
                inner_scope.extend(rest.names().cloned());
                let taken = |n: &str| inner_scope.contains(n) || n == a || n == b;
                let (a2, b2, body) = if inner_scope.contains(a) || inner_scope.contains(b) {
                    let a2 = fresh(a, |n| taken(n));
                    let b2 = fresh(b, |n| taken(n) || n == a2);
                    let mut s = Subst::default();
                    s.core.insert(a.clone(), CoreTerm::Var(a2.clone()));
                    s.core.insert(b.clone(), CoreTerm::Var(b2.clone()));
                    (a2, b2, s.apply_core(body))
                } else {
                    (a.clone(), b.clone(), (**body).clone())
                };
                inner_scope.insert(a2.clone());
                inner_scope.insert(b2.clone());
                let mut ctx = rest;
                ctx.push(&a2, ta);
                ctx.push(&b2, tb);
                let (tc, mut left) = self.core(host, ctx, &inner_scope, &body, "let1c")?;
                for v in [&a2, &b2] {
                    if left.contains(v) {
                        if !self.cartesian_core {
                            let shown = if v == &a2 { a } else { b };
                            return Err(Diagnostic::rule(
                                "let1c",
                                format!("let-bound linear variable `{shown}` is unused"),
                            ));
                        }
                        left.remove(v);
                    }
                }
                Ok((tc, left))
            }
            CoreTerm::LetUnit(g, body) => {
                let (ty, rest) = self.core(host, avail, scope, g, "let2c")?;
                if !self.core_eq(&ty, &CoreType::Unit) {
                    return Err(Diagnostic::rule(
                        "let2c",
                        format!(
                            "let-unit scrutinee has type {}, expected I",
                            print_core_type(&ty)
                        ),
                    ));
                }
                self.core(host, rest, scope, body, "let2c")
            }
            CoreTerm::Derelict(h, arg) => {
                let hty = self.check_host(host, h)?;
                let (dom, cod) = self.as_proof(&hty).ok_or_else(|| {
                    Diagnostic::rule(
                        "der",
                        format!(
                            "derelict expects a Proof type, found {}",
                            print_host_type(&hty)
                        ),
                    )
                })?;
                let (aty, rest) = self.core(host, avail, scope, arg, "der")?;
                if !self.core_eq(&aty, &dom) {
                    return Err(Diagnostic::rule(
                        "der",
                        format!(
                            "derelict consumes {}, expected {}",
                            print_core_type(&aty),
                            print_core_type(&dom)
                        ),
                    ));
                }
                Ok((cod, rest))
            }
            CoreTerm::Const(k, args) => {
                let sig = self.theory.core_consts.get(k).ok_or_else(|| {
                    Diagnostic::rule("const", format!("unknown core constant `{k}`"))
                })?;
                if sig.params.len() != args.len() {
                    return Err(Diagnostic::rule(
                        "const",
                        format!(
                            "`{k}` takes {} argument(s), given {}",
                            sig.params.len(),
                            args.len()
                        ),
                    ));
                }
                let mut rest = avail;
                for ((_, pty), arg) in sig.params.entries().iter().zip(args) {
                    let (aty, r) = self.core(host, rest, scope, arg, "const")?;
                    if !self.core_eq(&aty, pty) {
                        return Err(Diagnostic::rule(
                            "const",
                            format!(
                                "`{k}` expects {}, given {}",
                                print_core_type(pty),
                                print_core_type(&aty)
                            ),
                        ));
                    }
                    rest = r;
                }
                Ok((sig.result.clone(), rest))
            }
        }
    }

    // -- whole judgments -----------------------------------------------------------

    /// Check a term in a mixed context, optionally against an expected type.
    /// A mismatch is blamed on the rule that introduced the term's head.
    pub fn check_term(
        &self,
        ctx: &MixedContext,
        t: &Term,
        expected: Option<&Type>,
    ) -> Result<Type, Diagnostic> {
        self.check_context(ctx)?;
        if let Some(e) = expected {
            match e {
                Type::Host(h) => self.check_host_type(h)?,
                Type::Core(c) => self.check_core_type(c)?,
            }
        }
        let ty = match t {
            Term::Host(h) => {
                if !ctx.core.is_empty() && !self.cartesian_core {
                    return Err(Diagnostic::rule(
                        "ac",
                        format!(
                            "unused linear variable `{}` in a host judgment",
                            ctx.core.entries()[0].0
                        ),
                    ));
                }
                Type::Host(self.check_host(&ctx.host, h)?)
            }
            Term::Core(c) => Type::Core(self.check_core_closed(&ctx.host, &ctx.core, c)?),
        };
        if let Some(e) = expected {
            if !self.type_eq(&ty, e) {
                return Err(Diagnostic::rule(
                    intro_rule(t),
                    format!("term has type {ty}, expected {e}"),
                ));
            }
        }
        Ok(ty)
    }

    /// The type of a term without enforcing linearity; used by rewriting.
    pub fn synth_lenient(&self, ctx: &MixedContext, t: &Term) -> Option<Type> {
        let env = self.with_cartesian(true);
        match t {
            Term::Host(h) => env.check_host(&ctx.host, h).ok().map(Type::Host),
            Term::Core(c) => env
                .check_core(&ctx.host, &ctx.core, c)
                .ok()
                .map(|(ty, _)| Type::Core(ty)),
        }
    }
}

/// The typing rule that introduces the head constructor of a term.
pub fn intro_rule(t: &Term) -> &'static str {
    match t {
        Term::Host(h) => match h {
            HostTerm::Star => "uv",
            HostTerm::Var(_) | HostTerm::Const(..) => "av",
            HostTerm::Pair(..) => "pv",
            HostTerm::Fst(_) => "π1v",
            HostTerm::Snd(_) => "π2v",
            HostTerm::Lam(..) => "aiv",
            HostTerm::App(..) => "aev",
            HostTerm::Promote(..) => "prom",
        },
        Term::Core(c) => match c {
            CoreTerm::Bullet => "uc",
            CoreTerm::Var(_) => "ac",
            CoreTerm::Tensor(..) => "tc",
            CoreTerm::LetTensor(..) => "let1c",
            CoreTerm::LetUnit(..) => "let2c",
            CoreTerm::Derelict(..) => "der",
            CoreTerm::Const(..) => "const",
        },
    }
}

/// A derivable judgment together with its synthesized type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgment {
    pub ctx: MixedContext,
    pub term: Term,
    pub ty: Type,
}

impl Judgment {
    pub fn check(env: &TypeEnv, ctx: MixedContext, term: Term) -> Result<Self, Diagnostic> {
        let ty = env.check_term(&ctx, &term, None)?;
        Ok(Judgment { ctx, term, ty })
    }
}

impl std::fmt::Display for Judgment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use crate::surface::{print_core_term, print_host_term, print_mixed_context};
        let body = match &self.term {
            Term::Host(h) => print_host_term(h),
            Term::Core(c) => print_core_term(c),
        };
        write!(
            f,
            "{} {} : {}",
            print_mixed_context(&self.ctx.host, &self.ctx.core),
            body,
            self.ty
        )
    }
}

/// Check `Γ ⊢ lhs = rhs` and decide it; both sides must check at one type.
pub fn check_equality_judgment(
    env: &TypeEnv,
    ctx: &MixedContext,
    lhs: &Term,
    rhs: &Term,
    expected: Option<&Type>,
    oracle: Option<&dyn crate::equations::Oracle>,
) -> Result<crate::equations::EqVerdict, Diagnostic> {
    let lt = env.check_term(ctx, lhs, expected)?;
    let rt = env.check_term(ctx, rhs, Some(&lt))?;
    let _ = rt;
    Ok(crate::equations::decide_eq(
        env,
        ctx,
        lhs,
        rhs,
        &lt,
        oracle,
        &Default::default(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bit() -> CoreType {
        CoreType::base("Bit")
    }

    fn circuit_like() -> Theory {
        let mut t = Theory::empty("t");
        t.core_types.insert("Bit".into());
        t.core_types.insert("A".into());
        t.core_types.insert("B".into());
        t.core_types.insert("C".into());
        t.core_types.insert("D".into());
        t
    }

    #[test]
    fn proof_respects_type_axioms() {
        let mut t = circuit_like();
        t.type_axioms
            .push(TypeAxiom::Core(CoreType::base("A"), CoreType::base("B")));
        t.type_axioms
            .push(TypeAxiom::Core(CoreType::base("C"), CoreType::base("D")));
        let env = TypeEnv::linear(&t);
        assert!(env.host_eq(
            &HostType::proof(CoreType::base("A"), CoreType::base("C")),
            &HostType::proof(CoreType::base("B"), CoreType::base("D"))
        ));
        let plain = circuit_like();
        let env = TypeEnv::linear(&plain);
        assert!(env.host_eq(&HostType::base("X"), &HostType::base("X")));
        assert!(!env.core_eq(&CoreType::base("A"), &CoreType::base("B")));
    }

    #[test]
    fn views_search_the_equivalence_class() {
        let mut t = circuit_like();
        t.host_types.insert("P".into());
        t.type_axioms.push(TypeAxiom::Host(
            HostType::base("P"),
            HostType::proof(bit(), bit()),
        ));
        let env = TypeEnv::linear(&t);
        assert_eq!(env.as_proof(&HostType::base("P")), Some((bit(), bit())));
        assert_eq!(env.as_arrow(&HostType::base("P")), None);
    }

    #[test]
    fn tensor_splits_context_and_blames_reuse() {
        let t = circuit_like();
        let env = TypeEnv::linear(&t);
        let core = Context::from_entries(vec![("a".into(), bit()), ("b".into(), bit())]);
        let ok = CoreTerm::tensor(CoreTerm::var("b"), CoreTerm::var("a"));
        assert_eq!(
            env.check_core_closed(&HostContext::new(), &core, &ok)
                .unwrap(),
            CoreType::tensor(bit(), bit())
        );
        let dup = CoreTerm::tensor(CoreTerm::var("a"), CoreTerm::var("a"));
        let err = env
            .check_core_closed(&HostContext::new(), &core, &dup)
            .unwrap_err();
        assert_eq!(err.rule.as_deref(), Some("tc"));
        let cart = TypeEnv::cartesian(&t);
        assert!(cart
            .check_core_closed(&HostContext::new(), &core, &dup)
            .is_ok());
    }

    #[test]
    fn promote_types_over_the_tensor_of_its_context() {
        let t = circuit_like();
        let env = TypeEnv::linear(&t);
        let octx = Context::from_entries(vec![("a".into(), CoreType::base("A"))]);
        let p = HostTerm::promote(octx, CoreTerm::var("a"));
        assert_eq!(
            env.check_host(&HostContext::new(), &p).unwrap(),
            HostType::proof(CoreType::base("A"), CoreType::base("A"))
        );
        let empty = HostTerm::promote(CoreContext::new(), CoreTerm::Bullet);
        assert_eq!(
            env.check_host(&HostContext::new(), &empty).unwrap(),
            HostType::proof(CoreType::Unit, CoreType::Unit)
        );
    }

    #[test]
    fn let_binders_shadowing_scope_are_renamed() {
        let t = circuit_like();
        let env = TypeEnv::linear(&t);
        let core = Context::from_entries(vec![
            ("a".into(), CoreType::tensor(bit(), bit())),
            ("b".into(), bit()),
        ]);
        let f = CoreTerm::tensor(
            CoreTerm::var("b"),
            CoreTerm::let_tensor(
                CoreTerm::var("a"),
                "a",
                "b",
                CoreTerm::tensor(CoreTerm::var("b"), CoreTerm::var("a")),
            ),
        );
        assert!(env
            .check_core_closed(&HostContext::new(), &core, &f)
            .is_ok());
    }

    #[test]
    fn unused_let_binder_is_let1c() {
        let t = circuit_like();
        let env = TypeEnv::linear(&t);
        let core = Context::from_entries(vec![("c".into(), CoreType::tensor(bit(), bit()))]);
        let f = CoreTerm::let_tensor(CoreTerm::var("c"), "a", "b", CoreTerm::var("a"));
        let err = env
            .check_core_closed(&HostContext::new(), &core, &f)
            .unwrap_err();
        assert_eq!(err.rule.as_deref(), Some("let1c"));
    }
}
