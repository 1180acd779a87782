//! Elaboration of surface trees into kernel terms, and loading of `.hc` files.
//!
//! Identifiers are resolved against the local scope first and the theory
//! second. Definitions are inlined, `comp`, `par` and `id[A]` are expanded,
//! and `if` receives its type index from the type of its first branch.

use std::collections::BTreeSet;
use std::path::PathBuf;

use crate::diag::{Diagnostic, Span};
use crate::surface::{parse, CtxExpr, Decl, DeclKind, Expr, LetPattern, Level, SourceFile, TyExpr};
use crate::syntax::*;
use crate::theories::{CoreConstSig, Definition, HostConstSig, TermAxiom, Theory, TypeAxiom};
use crate::typing::TypeEnv;

pub const CIRCUIT_SOURCE: &str = include_str!("../theories/circuit.hc");

const MACROS: &[&str] = &["comp", "par", "id"];

// -- types -------------------------------------------------------------------------

pub fn host_type(t: &TyExpr) -> Result<HostType, Diagnostic> {
    Ok(match t {
        TyExpr::One => HostType::Unit,
        TyExpr::Name(n) => HostType::Base(n.clone()),
        TyExpr::Prod(a, b) => HostType::prod(host_type(a)?, host_type(b)?),
        TyExpr::Arrow(a, b) => HostType::arrow(host_type(a)?, host_type(b)?),
        TyExpr::Proof(a, b) => HostType::Proof(core_type(a)?, core_type(b)?),
        TyExpr::UnitI => {
            return Err(Diagnostic::rule(
                "t0v",
                "`I` is a core type, expected a host type",
            ))
        }
        TyExpr::Tensor(..) => {
            return Err(Diagnostic::rule(
                "t0v",
                "`(x)` builds core types, expected a host type",
            ))
        }
    })
}

pub fn core_type(t: &TyExpr) -> Result<CoreType, Diagnostic> {
    Ok(match t {
        TyExpr::UnitI => CoreType::Unit,
        TyExpr::Name(n) => CoreType::Base(n.clone()),
        TyExpr::Tensor(a, b) => CoreType::tensor(core_type(a)?, core_type(b)?),
        TyExpr::One => {
            return Err(Diagnostic::rule(
                "t0c",
                "`1` is a host type, expected a core type",
            ))
        }
        _ => return Err(Diagnostic::rule("t0c", "expected a core type")),
    })
}

fn level_type(level: Level, t: &TyExpr) -> Result<Type, Diagnostic> {
    match level {
        Level::Host => host_type(t).map(Type::Host),
        Level::Core => core_type(t).map(Type::Core),
    }
}

pub fn mixed_context(c: &CtxExpr) -> Result<MixedContext, Diagnostic> {
    let mut host = HostContext::new();
    for (x, t) in &c.host {
        host.push(x, host_type(t)?);
    }
    let mut core = CoreContext::new();
    for (a, t) in &c.core {
        core.push(a, core_type(t)?);
    }
    Ok(MixedContext::new(host, core))
}

// -- terms ---------------------------------------------------------------------------

#[derive(Clone, Debug, Default)]
struct Scope {
    host: HostContext,
    core: Vec<Name>,
}

pub struct Elaborator<'a, 't> {
    env: &'a TypeEnv<'t>,
}

impl<'a, 't> Elaborator<'a, 't> {
    pub fn new(env: &'a TypeEnv<'t>) -> Self {
        Elaborator { env }
    }

    fn theory(&self) -> &Theory {
        self.env.theory
    }

    fn is_macro(&self, n: &str) -> bool {
        MACROS.contains(&n) && !self.theory().declares(n)
    }

    /// Which level a surface expression lives at, given the names in scope.
    pub fn guess_level(&self, ctx: &MixedContext, e: &Expr) -> Level {
        let th = self.theory();
        match e {
            Expr::Bullet | Expr::Tensor(..) | Expr::Derelict(..) => Level::Core,
            Expr::Let(LetPattern::Pair(..) | LetPattern::Unit, ..) => Level::Core,
            Expr::Let(LetPattern::Var(a), g, body) => {
                let inner = match self.guess_level(ctx, g) {
                    Level::Core => {
                        MixedContext::new(ctx.host.clone(), ctx.core.with(a, CoreType::Unit))
                    }
                    Level::Host => {
                        MixedContext::new(ctx.host.with(a, HostType::Unit), ctx.core.clone())
                    }
                };
                self.guess_level(&inner, body)
            }
            Expr::Subst(inner, ..) => self.guess_level(ctx, inner),
            Expr::Ident(n) => {
                if ctx.host.contains(n) {
                    Level::Host
                } else if ctx.core.contains(n)
                    || th.core_consts.contains_key(n)
                    || matches!(th.defs.get(n), Some(Definition::Core { .. }))
                {
                    Level::Core
                } else {
                    Level::Host
                }
            }
            Expr::Call(n, _) => {
                if th.core_consts.contains_key(n)
                    || matches!(th.defs.get(n), Some(Definition::Core { .. }))
                {
                    Level::Core
                } else {
                    Level::Host
                }
            }
            _ => Level::Host,
        }
    }

    /// Elaborate an expression in a mixed context at the guessed level.
    pub fn term(&self, ctx: &MixedContext, e: &Expr) -> Result<Term, Diagnostic> {
        match self.guess_level(ctx, e) {
            Level::Host => self.host_term(&ctx.host, e).map(Term::Host),
            Level::Core => self.core_term(&ctx.host, &ctx.core, e).map(Term::Core),
        }
    }

    pub fn host_term(&self, host: &HostContext, e: &Expr) -> Result<HostTerm, Diagnostic> {
        self.host(
            &Scope {
                host: host.clone(),
                core: Vec::new(),
            },
            e,
        )
    }

    pub fn core_term(
        &self,
        host: &HostContext,
        core: &CoreContext,
        e: &Expr,
    ) -> Result<CoreTerm, Diagnostic> {
        self.core(
            &Scope {
                host: host.clone(),
                core: core.names().cloned().collect(),
            },
            e,
        )
    }

    fn host_type_of(&self, sc: &Scope, t: &HostTerm) -> Result<HostType, Diagnostic> {
        self.env.check_host(&sc.host, t)
    }

    fn proof_of(
        &self,
        sc: &Scope,
        t: &HostTerm,
        what: &str,
    ) -> Result<(CoreType, CoreType), Diagnostic> {
        let ty = self.host_type_of(sc, t)?;
        self.env.as_proof(&ty).ok_or_else(|| {
            Diagnostic::rule(
                "der",
                format!(
                    "{what} expects Proof arguments, found {}",
                    crate::surface::print_host_type(&ty)
                ),
            )
        })
    }

    fn host(&self, sc: &Scope, e: &Expr) -> Result<HostTerm, Diagnostic> {
        let th = self.theory();
        match e {
            Expr::Star => Ok(HostTerm::Star),
            Expr::Ident(n) => {
                if sc.host.contains(n) {
                    Ok(HostTerm::Var(n.clone()))
                } else if sc.core.contains(n) {
                    Err(Diagnostic::rule(
                        "av",
                        format!("core variable `{n}` used as a host term"),
                    ))
                } else if let Some(sig) = th.host_consts.get(n) {
                    if sig.param.is_some() {
                        return Err(Diagnostic::rule(
                            "const",
                            format!("constant family `{n}` needs a type index `{n}[T]`"),
                        ));
                    }
                    Ok(HostTerm::Const(n.clone(), None))
                } else if let Some(Definition::Host { term, .. }) = th.defs.get(n) {
                    Ok(term.clone())
                } else {
                    Err(Diagnostic::rule(
                        "av",
                        format!("unbound host variable `{n}`"),
                    ))
                }
            }
            Expr::Indexed(n, t) => {
                if n == "id" && self.is_macro(n) {
                    let a = core_type(t)?;
                    return Ok(HostTerm::promote(
                        Context::from_entries(vec![("a".into(), a)]),
                        CoreTerm::var("a"),
                    ));
                }
                match th.host_consts.get(n) {
                    Some(sig) if sig.param.is_some() => {
                        Ok(HostTerm::Const(n.clone(), Some(host_type(t)?)))
                    }
                    Some(_) => Err(Diagnostic::rule(
                        "const",
                        format!("constant `{n}` takes no type index"),
                    )),
                    None => Err(Diagnostic::rule(
                        "av",
                        format!("unknown constant family `{n}`"),
                    )),
                }
            }
            Expr::Call(n, args) if self.is_macro(n) && n != "id" => {
                if args.len() != 2 {
                    return Err(Diagnostic::error(format!("`{n}` takes two arguments")));
                }
                let f = self.host(sc, &args[0])?;
                let g = self.host(sc, &args[1])?;
                let (a0, _) = self.proof_of(sc, &f, n)?;
                if n == "comp" {
                    let ctx = Context::from_entries(vec![("a".into(), a0)]);
                    let inner = CoreTerm::derelict(f, CoreTerm::var("a"));
                    Ok(HostTerm::promote(ctx, CoreTerm::derelict(g, inner)))
                } else {
                    let (a1, _) = self.proof_of(sc, &g, n)?;
                    let ctx = Context::from_entries(vec![("a0".into(), a0), ("a1".into(), a1)]);
                    let body = CoreTerm::tensor(
                        CoreTerm::derelict(f, CoreTerm::var("a0")),
                        CoreTerm::derelict(g, CoreTerm::var("a1")),
                    );
                    Ok(HostTerm::promote(ctx, body))
                }
            }
            Expr::Call(n, args) => {
                if th.core_consts.contains_key(n)
                    || matches!(th.defs.get(n), Some(Definition::Core { .. }))
                {
                    return Err(Diagnostic::rule(
                        "prom",
                        format!("core term `{n}(..)` used where a host term is expected"),
                    ));
                }
                let mut acc = self.host(sc, &Expr::Ident(n.clone()))?;
                for a in args {
                    acc = HostTerm::app(acc, self.host(sc, a)?);
                }
                Ok(acc)
            }
            Expr::Pair(a, b) => Ok(HostTerm::pair(self.host(sc, a)?, self.host(sc, b)?)),
            Expr::Fst(a) => Ok(HostTerm::fst(self.host(sc, a)?)),
            Expr::Snd(a) => Ok(HostTerm::snd(self.host(sc, a)?)),
            Expr::Lam(x, t, body) => {
                let ty = host_type(t)?;
                let mut inner = sc.clone();
                inner.host.push(x, ty.clone());
                Ok(HostTerm::lam(x, ty, self.host(&inner, body)?))
            }
            Expr::App(f, a) => Ok(HostTerm::app(self.host(sc, f)?, self.host(sc, a)?)),
            Expr::Promote(binders, body) => {
                let mut ctx = CoreContext::new();
                for (a, t) in binders {
                    ctx.push(a, core_type(t)?);
                }
                let inner = Scope {
                    host: sc.host.clone(),
                    core: ctx.names().cloned().collect(),
                };
                Ok(HostTerm::promote(ctx, self.core(&inner, body)?))
            }
            Expr::If(c, s, t) => {
                match th.host_consts.get("if") {
                    Some(sig) if sig.param.is_some() => {}
                    _ => {
                        return Err(Diagnostic::rule(
                            "av",
                            "`if` needs a theory declaring the `if` family",
                        ))
                    }
                }
                let c = self.host(sc, c)?;
                let s = self.host(sc, s)?;
                let t = self.host(sc, t)?;
                let ix = self.host_type_of(sc, &s)?;
                let head = HostTerm::Const("if".into(), Some(ix));
                Ok(HostTerm::app(HostTerm::app(HostTerm::app(head, c), s), t))
            }
            Expr::Let(LetPattern::Var(x), g, body) => {
                let g = self.host(sc, g)?;
                let ty = self.host_type_of(sc, &g)?;
                let mut inner = sc.clone();
                inner.host.push(x, ty);
                Ok(subst_host(&self.host(&inner, body)?, x, &g))
            }
            Expr::Subst(body, g, x) => {
                let g = self.host(sc, g)?;
                let ty = self.host_type_of(sc, &g)?;
                let mut inner = sc.clone();
                inner.host.push(x, ty);
                Ok(subst_host(&self.host(&inner, body)?, x, &g))
            }
            Expr::Bullet | Expr::Tensor(..) | Expr::Derelict(..) | Expr::Let(..) => {
                Err(Diagnostic::rule(
                    "prom",
                    "core term used where a host term is expected; wrap it in promote(..)",
                ))
            }
        }
    }

    fn core(&self, sc: &Scope, e: &Expr) -> Result<CoreTerm, Diagnostic> {
        let th = self.theory();
        match e {
            Expr::Bullet => Ok(CoreTerm::Bullet),
            Expr::Ident(n) => {
                if sc.core.contains(n) {
                    Ok(CoreTerm::Var(n.clone()))
                } else if sc.host.contains(n) {
                    Err(Diagnostic::rule(
                        "der",
                        format!("host variable `{n}` used as a core term; use derelict({n}) @ a"),
                    ))
                } else if let Some(sig) = th.core_consts.get(n) {
                    if !sig.params.is_empty() {
                        return Err(Diagnostic::rule(
                            "const",
                            format!("`{n}` takes {} argument(s)", sig.params.len()),
                        ));
                    }
                    Ok(CoreTerm::Const(n.clone(), Vec::new()))
                } else if let Some(Definition::Core { params, term, .. }) = th.defs.get(n) {
                    if !params.is_empty() {
                        return Err(Diagnostic::rule(
                            "const",
                            format!("`{n}` takes {} argument(s)", params.len()),
                        ));
                    }
                    Ok(term.clone())
                } else {
                    Err(Diagnostic::rule(
                        "ac",
                        format!("unbound core variable `{n}`"),
                    ))
                }
            }
            Expr::Call(n, args) => {
                let args = args
                    .iter()
                    .map(|a| self.core(sc, a))
                    .collect::<Result<Vec<_>, _>>()?;
                if th.core_consts.contains_key(n) {
                    return Ok(CoreTerm::Const(n.clone(), args));
                }
                if let Some(Definition::Core { params, term, .. }) = th.defs.get(n) {
                    if params.len() != args.len() {
                        return Err(Diagnostic::rule(
                            "const",
                            format!(
                                "`{n}` takes {} argument(s), given {}",
                                params.len(),
                                args.len()
                            ),
                        ));
                    }
                    let mut s = Subst::default();
                    for ((p, _), a) in params.entries().iter().zip(args) {
                        s.core.insert(p.clone(), a);
                    }
                    return Ok(s.apply_core(term));
                }
                Err(Diagnostic::rule(
                    "const",
                    format!("unknown core constant `{n}`"),
                ))
            }
            Expr::Tensor(a, b) => Ok(CoreTerm::tensor(self.core(sc, a)?, self.core(sc, b)?)),
            Expr::Let(LetPattern::Pair(a, b), g, body) => {
                let g = self.core(sc, g)?;
                let mut inner = sc.clone();
                inner.core.push(a.clone());
                inner.core.push(b.clone());
                Ok(CoreTerm::let_tensor(g, a, b, self.core(&inner, body)?))
            }
            Expr::Let(LetPattern::Unit, g, body) => {
                Ok(CoreTerm::let_unit(self.core(sc, g)?, self.core(sc, body)?))
            }
            Expr::Let(LetPattern::Var(a), g, body) | Expr::Subst(body, g, a) => {
                let g = self.core(sc, g)?;
                let mut inner = sc.clone();
                inner.core.push(a.clone());
                Ok(subst_core(&self.core(&inner, body)?, a, &g))
            }
            Expr::Derelict(h, arg) => {
                let h = self.host(
                    &Scope {
                        host: sc.host.clone(),
                        core: Vec::new(),
                    },
                    h,
                )?;
                let arg = match arg {
                    Some(a) => self.core(sc, a)?,
                    None if sc.core.len() == 1 => CoreTerm::Var(sc.core[0].clone()),
                    None => {
                        return Err(Diagnostic::rule(
                            "der",
                            format!("derelict needs `@ a` to name its variable ({} core variables in scope)", sc.core.len()),
                        ))
                    }
                };
                Ok(CoreTerm::derelict(h, arg))
            }
            _ => Err(Diagnostic::rule(
                "der",
                "host term used where a core term is expected; use derelict(..)",
            )),
        }
    }
}

// -- loading -----------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Check {
        ctx: MixedContext,
        term: Term,
        expected: Option<Type>,
    },
    Eq {
        ctx: MixedContext,
        lhs: Term,
        rhs: Term,
        expected: Option<Type>,
    },
    Norm {
        ctx: MixedContext,
        term: Term,
    },
}

/// A command from a source file; elaboration failures are kept for reporting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Command {
    pub span: Span,
    pub kind: Result<CommandKind, Diagnostic>,
}

pub struct Loader {
    pub theory: Theory,
    pub cartesian_core: bool,
    pub search_path: Vec<PathBuf>,
    imported: BTreeSet<Name>,
}

impl Loader {
    pub fn new(cartesian_core: bool) -> Self {
        let search_path = std::env::var("HC_THEORY_PATH")
            .map(|v| std::env::split_paths(&v).collect())
            .unwrap_or_default();
        let mut theory = Theory::empty("main");
        theory.cartesian_core = cartesian_core;
        Loader {
            theory,
            cartesian_core,
            search_path,
            imported: BTreeSet::new(),
        }
    }

    pub fn from_theory(mut theory: Theory, cartesian_core: bool) -> Self {
        theory.cartesian_core = cartesian_core;
        let mut l = Loader::new(cartesian_core);
        l.theory = theory;
        l
    }

    pub fn import(&mut self, name: &str) -> Result<(), Diagnostic> {
        if !self.imported.insert(name.to_string()) {
            return Ok(());
        }
        let text = if name == "circuit" {
            CIRCUIT_SOURCE.to_string()
        } else {
            let path = self
                .search_path
                .iter()
                .map(|d| d.join(format!("{name}.hc")))
                .find(|p| p.is_file())
                .ok_or_else(|| {
                    Diagnostic::error(format!(
                        "theory `{name}` not found (searched HC_THEORY_PATH)"
                    ))
                })?;
            std::fs::read_to_string(&path)
                .map_err(|e| Diagnostic::error(format!("{}: {e}", path.display())))?
        };
        let file = parse(&text).map_err(|d| Diagnostic {
            message: format!("in theory `{name}`: {}", d.message),
            ..d
        })?;
        let own_name = std::mem::take(&mut self.theory.name);
        for d in &file.decls {
            if !matches!(
                d.kind,
                DeclKind::Check { .. } | DeclKind::Eq { .. } | DeclKind::Norm { .. }
            ) {
                self.decl(d)?;
            }
        }
        self.theory.name = own_name;
        Ok(())
    }

    /// Apply every declaration of a file; commands are returned in order.
    pub fn load(&mut self, file: &SourceFile) -> Result<Vec<Command>, Diagnostic> {
        let mut out = Vec::new();
        for d in &file.decls {
            if let Some(c) = self.decl(d)? {
                out.push(c);
            }
        }
        Ok(out)
    }

    fn fresh_symbol(&self, name: &str) -> Result<(), Diagnostic> {
        if self.theory.declares(name) {
            Err(Diagnostic::error(format!("duplicate symbol `{name}`")))
        } else {
            Ok(())
        }
    }

    fn judgment_sides(
        &self,
        ctx: &CtxExpr,
        exprs: &[&Expr],
    ) -> Result<(MixedContext, Vec<Term>), Diagnostic> {
        let ctx = mixed_context(ctx)?;
        let env = TypeEnv::new(&self.theory, self.cartesian_core);
        env.check_context(&ctx)?;
        let el = Elaborator::new(&env);
        let terms = exprs
            .iter()
            .map(|e| el.term(&ctx, e))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((ctx, terms))
    }

    fn expected(ty: &Option<TyExpr>, term: &Term) -> Result<Option<Type>, Diagnostic> {
        let level = match term {
            Term::Host(_) => Level::Host,
            Term::Core(_) => Level::Core,
        };
        ty.as_ref().map(|t| level_type(level, t)).transpose()
    }

    pub fn decl(&mut self, d: &Decl) -> Result<Option<Command>, Diagnostic> {
        let at = |e: Diagnostic| e.at(d.span);
        match &d.kind {
            DeclKind::Theory(n) => self.theory.name = n.clone(),
            DeclKind::Import(n) => self.import(n).map_err(at)?,
            DeclKind::BaseTypes(level, names) => {
                for n in names {
                    self.fresh_symbol(n).map_err(at)?;
                    match level {
                        Level::Host => self.theory.host_types.insert(n.clone()),
                        Level::Core => self.theory.core_types.insert(n.clone()),
                    };
                }
            }
            DeclKind::HostConst { name, param, ty } => {
                self.fresh_symbol(name).map_err(at)?;
                let ty = host_type(ty).map_err(at)?;
                let mut scratch = self.theory.clone();
                if let Some(p) = param {
                    scratch.host_types.insert(p.clone());
                }
                TypeEnv::linear(&scratch).check_host_type(&ty).map_err(at)?;
                self.theory.host_consts.insert(
                    name.clone(),
                    HostConstSig {
                        ty,
                        param: param.clone(),
                    },
                );
            }
            DeclKind::CoreConst {
                name,
                params,
                result,
            } => {
                self.fresh_symbol(name).map_err(at)?;
                let mut ctx = CoreContext::new();
                for (a, t) in params {
                    ctx.push(a, core_type(t).map_err(at)?);
                }
                let result = core_type(result).map_err(at)?;
                let env = TypeEnv::linear(&self.theory);
                for t in ctx.types() {
                    env.check_core_type(t).map_err(at)?;
                }
                env.check_core_type(&result).map_err(at)?;
                if ctx.has_duplicates() {
                    return Err(at(Diagnostic::rule(
                        "const",
                        format!("`{name}` repeats a parameter name"),
                    )));
                }
                self.theory.core_consts.insert(
                    name.clone(),
                    CoreConstSig {
                        params: ctx,
                        result,
                    },
                );
            }
            DeclKind::TypeAxiom(level, a, b) => {
                let (a, b) = (
                    level_type(*level, a).map_err(at)?,
                    level_type(*level, b).map_err(at)?,
                );
                let env = TypeEnv::linear(&self.theory);
                let wf = |t: &Type| match t {
                    Type::Host(h) => env.check_host_type(h),
                    Type::Core(c) => env.check_core_type(c),
                };
                for t in [&a, &b] {
                    wf(t).map_err(|e| {
                        at(Diagnostic {
                            rule: Some("eqT".into()),
                            ..e
                        })
                    })?;
                }
                let ax = match (a, b) {
                    (Type::Host(x), Type::Host(y)) => TypeAxiom::Host(x, y),
                    (Type::Core(x), Type::Core(y)) => TypeAxiom::Core(x, y),
                    _ => unreachable!("both sides share a level"),
                };
                self.theory.type_axioms.push(ax);
            }
            DeclKind::Axiom { ctx, lhs, rhs, ty } => {
                let (ctx, terms) = self.judgment_sides(ctx, &[lhs, rhs]).map_err(at)?;
                let expected = Self::expected(ty, &terms[0]).map_err(at)?;
                let env = TypeEnv::new(&self.theory, self.cartesian_core);
                let lt = env
                    .check_term(&ctx, &terms[0], expected.as_ref())
                    .map_err(at)?;
                env.check_term(&ctx, &terms[1], Some(&lt)).map_err(at)?;
                let mut it = terms.into_iter();
                let (lhs, rhs) = (it.next().unwrap(), it.next().unwrap());
                self.theory.term_axioms.push(TermAxiom {
                    ctx,
                    lhs,
                    rhs,
                    ty: lt,
                });
            }
            DeclKind::Term {
                name,
                level: _,
                params,
                ty,
                body,
            } => {
                self.fresh_symbol(name).map_err(at)?;
                let def = self.definition(params, ty, body).map_err(at)?;
                self.theory.defs.insert(name.clone(), def);
            }
            DeclKind::Check { ctx, expr, ty } => {
                let kind = self
                    .judgment_sides(ctx, &[expr])
                    .and_then(|(ctx, mut terms)| {
                        let term = terms.remove(0);
                        let expected = Self::expected(ty, &term)?;
                        Ok(CommandKind::Check {
                            ctx,
                            term,
                            expected,
                        })
                    });
                return Ok(Some(Command {
                    span: d.span,
                    kind: kind.map_err(at),
                }));
            }
            DeclKind::Eq { ctx, lhs, rhs, ty } => {
                let kind = self
                    .judgment_sides(ctx, &[lhs, rhs])
                    .and_then(|(ctx, mut terms)| {
                        let rhs = terms.remove(1);
                        let lhs = terms.remove(0);
                        let expected = Self::expected(ty, &lhs)?;
                        Ok(CommandKind::Eq {
                            ctx,
                            lhs,
                            rhs,
                            expected,
                        })
                    });
                return Ok(Some(Command {
                    span: d.span,
                    kind: kind.map_err(at),
                }));
            }
            DeclKind::Norm { ctx, expr } => {
                let kind =
                    self.judgment_sides(ctx, &[expr])
                        .map(|(ctx, mut terms)| CommandKind::Norm {
                            ctx,
                            term: terms.remove(0),
                        });
                return Ok(Some(Command {
                    span: d.span,
                    kind: kind.map_err(at),
                }));
            }
        }
        Ok(None)
    }

    fn definition(
        &self,
        params: &Option<Vec<(Name, TyExpr)>>,
        ty: &Option<TyExpr>,
        body: &Expr,
    ) -> Result<Definition, Diagnostic> {
        let env = TypeEnv::new(&self.theory, self.cartesian_core);
        let el = Elaborator::new(&env);
        let mut core = CoreContext::new();
        for (a, t) in params.iter().flatten() {
            core.push(a, core_type(t)?);
        }
        let ctx = MixedContext::new(HostContext::new(), core.clone());
        env.check_context(&ctx)?;
        let level = if params.is_some() {
            Level::Core
        } else {
            el.guess_level(&ctx, body)
        };
        match level {
            Level::Host => {
                let term = el.host_term(&HostContext::new(), body)?;
                let expected = ty.as_ref().map(host_type).transpose()?.map(Type::Host);
                match env.check_term(&ctx, &Term::Host(term.clone()), expected.as_ref())? {
                    Type::Host(ty) => Ok(Definition::Host { term, ty }),
                    Type::Core(_) => unreachable!("host term"),
                }
            }
            Level::Core => {
                let term = el.core_term(&HostContext::new(), &core, body)?;
                let expected = ty.as_ref().map(core_type).transpose()?.map(Type::Core);
                match env.check_term(&ctx, &Term::Core(term.clone()), expected.as_ref())? {
                    Type::Core(ty) => Ok(Definition::Core {
                        params: core,
                        term,
                        ty,
                    }),
                    Type::Host(_) => unreachable!("core term"),
                }
            }
        }
    }
}

/// Load a program: optional preloaded theory names, then the file itself.
pub fn load_program(
    text: &str,
    theories: &[&str],
    cartesian_core: bool,
) -> Result<Result<(Theory, Vec<Command>), Diagnostic>, Diagnostic> {
    let file = parse(text)?;
    let mut loader = Loader::new(cartesian_core);
    let run = (|| {
        for t in theories {
            loader.import(t)?;
        }
        let cmds = loader.load(&file)?;
        Ok((loader.theory.clone(), cmds))
    })();
    Ok(run)
}

/// Extend a theory by a list of declarations, re-validating each.
pub fn extend(base: &Theory, delta: &[Decl]) -> Result<Theory, Diagnostic> {
    let mut loader = Loader::from_theory(base.clone(), base.cartesian_core);
    for d in delta {
        loader.decl(d)?;
    }
    Ok(loader.theory)
}

/// The bundled circuit theory.
pub fn circuit_theory() -> Theory {
    let mut loader = Loader::new(false);
    loader
        .import("circuit")
        .expect("bundled circuit theory loads");
    loader.theory.name = "circuit".into();
    loader.theory
}

/// Load a theory by name from the bundled set or `HC_THEORY_PATH`.
pub fn load_theory(name: &str) -> Result<Theory, Diagnostic> {
    let mut loader = Loader::new(false);
    loader.import(name)?;
    loader.theory.name = name.to_string();
    Ok(loader.theory)
}
