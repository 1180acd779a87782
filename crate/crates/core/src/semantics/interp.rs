//! Interpretation of types and terms in a finite model, and the semantic
//! equality oracle built on it.
//!
//! Host terms denote functions from the points of their context to values;
//! values of arrow type are evaluated lazily and compared extensionally.
//! Core terms denote, at each host point, a morphism from the tensor of the
//! variables they consume.

use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

use super::finrel::{bit, point, FinRel, Relation, Set};
use super::smc::{permute, split, tensor_list, Arrow, Smc};
use super::table::{TableInterpretation, TableSmc};
use crate::equations::{Oracle, OracleAnswer};
use crate::syntax::*;
use crate::theories::Theory;
use crate::typing::TypeEnv;

/// Largest number of host points or elements enumerated by a comparison.
pub const ENUM_LIMIT: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemError {
    #[error("no interpretation for `{0}`")]
    Unmapped(String),
    #[error("{0} is too large to enumerate")]
    TooLarge(String),
    #[error("linear variable `{0}` is not used exactly once")]
    NonLinear(String),
    #[error("ill-typed term: {0}")]
    IllTyped(String),
}

type Scope<M> = Rc<(HostContext, BTreeMap<Name, Value<M>>)>;

#[derive(Clone)]
pub enum Value<M> {
    Unit,
    Elem(usize),
    Pair(Box<Value<M>>, Box<Value<M>>),
    Closure {
        param: Name,
        ty: HostType,
        body: Rc<HostTerm>,
        scope: Scope<M>,
    },
    Table {
        dom: HostType,
        entries: Rc<Vec<(Value<M>, Value<M>)>>,
    },
    Constant(Box<Value<M>>),
    Cond {
        then_when: usize,
        args: Vec<Value<M>>,
    },
    Hom(M),
}

impl<M: fmt::Debug> fmt::Debug for Value<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => write!(f, "*"),
            Value::Elem(i) => write!(f, "#{i}"),
            Value::Pair(a, b) => write!(f, "({a:?}, {b:?})"),
            Value::Closure { param, .. } => write!(f, "<fun {param}>"),
            Value::Table { entries, .. } => write!(f, "<table of {}>", entries.len()),
            Value::Constant(v) => write!(f, "<const {v:?}>"),
            Value::Cond { args, .. } => write!(f, "<if/{}>", args.len()),
            Value::Hom(m) => write!(f, "{m:?}"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum HostDenot<M> {
    Value(Value<M>),
    /// `if`: the guard element selecting the first branch.
    Conditional {
        then_when: usize,
    },
}

/// Base types and constants mapped into a model.
pub struct Interpretation<S: Smc> {
    pub host_types: BTreeMap<Name, Set>,
    pub core_types: BTreeMap<Name, S::Obj>,
    pub host_consts: BTreeMap<Name, HostDenot<S::Mor>>,
    pub core_consts: BTreeMap<Name, S::Mor>,
}

impl<S: Smc> Default for Interpretation<S> {
    fn default() -> Self {
        Interpretation {
            host_types: BTreeMap::new(),
            core_types: BTreeMap::new(),
            host_consts: BTreeMap::new(),
            core_consts: BTreeMap::new(),
        }
    }
}

/// A model together with the user's claim that it is faithful.
pub struct FiniteModel<S: Smc> {
    pub core: S,
    pub faithful: bool,
}

/// Everything needed to interpret the terms of one theory.
pub struct Semantics<'a, 't, S: Smc> {
    pub model: &'a S,
    pub interp: &'a Interpretation<S>,
    pub env: &'a TypeEnv<'t>,
    pub faithful: bool,
}

/// A core denotation: a morphism out of the tensor of the consumed variables.
pub struct CoreDen<S: Smc> {
    pub arrow: Arrow<S>,
    pub vars: Vec<Name>,
}

impl<'a, 't, S: Smc> Semantics<'a, 't, S> {
    pub fn new(
        model: &'a FiniteModel<S>,
        interp: &'a Interpretation<S>,
        env: &'a TypeEnv<'t>,
    ) -> Self {
        Semantics {
            model: &model.core,
            interp,
            env,
            faithful: model.faithful,
        }
    }

    fn theory(&self) -> &Theory {
        self.env.theory
    }

    // -- types -------------------------------------------------------------------

    pub fn core_obj(&self, t: &CoreType) -> Result<S::Obj, SemError> {
        match t {
            CoreType::Unit => Ok(self.model.unit()),
            CoreType::Base(n) => self
                .interp
                .core_types
                .get(n)
                .cloned()
                .ok_or_else(|| SemError::Unmapped(n.clone())),
            CoreType::Tensor(a, b) => Ok(self.model.tensor(&self.core_obj(a)?, &self.core_obj(b)?)),
        }
    }

    /// The elements of a host type, labelled, when there are at most `limit`.
    pub fn host_set(&self, t: &HostType, limit: usize) -> Result<Set, SemError> {
        let too_large = || {
            SemError::TooLarge(format!(
                "the interpretation of {t}",
                t = Type::Host(t.clone())
            ))
        };
        match t {
            HostType::Unit => Ok(point()),
            HostType::Base(n) => self
                .interp
                .host_types
                .get(n)
                .cloned()
                .ok_or_else(|| SemError::Unmapped(n.clone())),
            HostType::Prod(a, b) => {
                let (a, b) = (self.host_set(a, limit)?, self.host_set(b, limit)?);
                if a.len().saturating_mul(b.len()) > limit {
                    return Err(too_large());
                }
                Ok(super::ccc::product(&a, &b))
            }
            HostType::Arrow(a, b) => {
                let (a, b) = (self.host_set(a, limit)?, self.host_set(b, limit)?);
                super::ccc::exponential(&a, &b, limit).ok_or_else(too_large)
            }
            HostType::Proof(a, b) => {
                let (a, b) = (self.core_obj(a)?, self.core_obj(b)?);
                let homs = self.model.hom(&a, &b, limit).ok_or_else(too_large)?;
                Ok(homs
                    .iter()
                    .map(|m| self.model.mor_label(&a, &b, m))
                    .collect())
            }
        }
    }

    /// Every value of a host type, for extensional comparison.
    pub fn enumerate(&self, t: &HostType) -> Result<Vec<Value<S::Mor>>, SemError> {
        let too_large =
            || SemError::TooLarge(format!("the interpretation of {}", Type::Host(t.clone())));
        match t {
            HostType::Unit => Ok(vec![Value::Unit]),
            HostType::Base(n) => {
                let set = self
                    .interp
                    .host_types
                    .get(n)
                    .ok_or_else(|| SemError::Unmapped(n.clone()))?;
                Ok((0..set.len()).map(Value::Elem).collect())
            }
            HostType::Prod(a, b) => {
                let (xs, ys) = (self.enumerate(a)?, self.enumerate(b)?);
                if xs.len().saturating_mul(ys.len()) > ENUM_LIMIT {
                    return Err(too_large());
                }
                Ok(xs
                    .iter()
                    .flat_map(|x| {
                        ys.iter()
                            .map(move |y| Value::Pair(Box::new(x.clone()), Box::new(y.clone())))
                    })
                    .collect())
            }
            HostType::Arrow(a, b) => {
                let (xs, ys) = (self.enumerate(a)?, self.enumerate(b)?);
                let n =
                    super::ccc::exp_size(xs.len(), ys.len(), ENUM_LIMIT).ok_or_else(too_large)?;
                Ok((0..n)
                    .map(|code| {
                        let f = super::ccc::decode(xs.len(), ys.len(), code);
                        let entries = xs
                            .iter()
                            .cloned()
                            .zip(f.table.iter().map(|&j| ys[j].clone()))
                            .collect();
                        Value::Table {
                            dom: (**a).clone(),
                            entries: Rc::new(entries),
                        }
                    })
                    .collect())
            }
            HostType::Proof(a, b) => {
                let (a, b) = (self.core_obj(a)?, self.core_obj(b)?);
                Ok(self
                    .model
                    .hom(&a, &b, ENUM_LIMIT)
                    .ok_or_else(too_large)?
                    .into_iter()
                    .map(Value::Hom)
                    .collect())
            }
        }
    }

    pub fn value_eq(
        &self,
        t: &HostType,
        x: &Value<S::Mor>,
        y: &Value<S::Mor>,
    ) -> Result<bool, SemError> {
        match (t, x, y) {
            (HostType::Unit, _, _) => Ok(true),
            (HostType::Base(_), Value::Elem(i), Value::Elem(j)) => Ok(i == j),
            (HostType::Prod(a, b), Value::Pair(x1, x2), Value::Pair(y1, y2)) => {
                Ok(self.value_eq(a, x1, y1)? && self.value_eq(b, x2, y2)?)
            }
            (HostType::Proof(..), Value::Hom(m), Value::Hom(n)) => Ok(m == n),
            (HostType::Arrow(a, b), _, _) => {
                for arg in self.enumerate(a)? {
                    if !self.value_eq(b, &self.apply(x, arg.clone())?, &self.apply(y, arg)?)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Err(SemError::IllTyped(format!(
                "value {x:?} compared at {}",
                Type::Host(t.clone())
            ))),
        }
    }

    pub fn show(&self, t: &HostType, v: &Value<S::Mor>) -> String {
        match (t, v) {
            (HostType::Unit, _) => "*".into(),
            (HostType::Base(n), Value::Elem(i)) => self
                .interp
                .host_types
                .get(n)
                .and_then(|s| s.get(*i))
                .cloned()
                .unwrap_or_else(|| format!("#{i}")),
            (HostType::Prod(a, b), Value::Pair(x, y)) => {
                format!("({}, {})", self.show(a, x), self.show(b, y))
            }
            (HostType::Proof(a, b), Value::Hom(m)) => match (self.core_obj(a), self.core_obj(b)) {
                (Ok(a), Ok(b)) => self.model.mor_label(&a, &b, m),
                _ => format!("{m:?}"),
            },
            (HostType::Arrow(a, b), _) => match self.enumerate(a) {
                Ok(xs) if xs.len() <= 16 => {
                    let parts: Vec<String> = xs
                        .into_iter()
                        .map(|x| match self.apply(v, x.clone()) {
                            Ok(y) => format!("{} -> {}", self.show(a, &x), self.show(b, &y)),
                            Err(e) => format!("{} -> <{e}>", self.show(a, &x)),
                        })
                        .collect();
                    format!("[{}]", parts.join(", "))
                }
                _ => "<function>".into(),
            },
            _ => format!("{v:?}"),
        }
    }

    // -- host terms ----------------------------------------------------------------

    pub fn apply(&self, f: &Value<S::Mor>, arg: Value<S::Mor>) -> Result<Value<S::Mor>, SemError> {
        match f {
            Value::Closure {
                param,
                ty,
                body,
                scope,
            } => {
                let hctx = scope.0.with(param, ty.clone());
                let mut env = scope.1.clone();
                env.insert(param.clone(), arg);
                self.eval_host(&hctx, &env, body)
            }
            Value::Table { dom, entries } => {
                for (k, v) in entries.iter() {
                    if self.value_eq(dom, k, &arg)? {
                        return Ok(v.clone());
                    }
                }
                Err(SemError::IllTyped(
                    "argument outside a function table".into(),
                ))
            }
            Value::Constant(v) => Ok((**v).clone()),
            Value::Cond { then_when, args } => {
                let mut args = args.clone();
                args.push(arg);
                if args.len() < 3 {
                    return Ok(Value::Cond {
                        then_when: *then_when,
                        args,
                    });
                }
                let pick = matches!(args[0], Value::Elem(i) if i == *then_when);
                Ok(if pick {
                    args[1].clone()
                } else {
                    args[2].clone()
                })
            }
            other => Err(SemError::IllTyped(format!(
                "{other:?} applied as a function"
            ))),
        }
    }

    pub fn eval_host(
        &self,
        hctx: &HostContext,
        env: &BTreeMap<Name, Value<S::Mor>>,
        t: &HostTerm,
    ) -> Result<Value<S::Mor>, SemError> {
        match t {
            HostTerm::Star => Ok(Value::Unit),
            HostTerm::Var(x) => env
                .get(x)
                .cloned()
                .ok_or_else(|| SemError::IllTyped(format!("unbound `{x}`"))),
            HostTerm::Const(n, _) => match self.interp.host_consts.get(n) {
                Some(HostDenot::Value(v)) => Ok(v.clone()),
                Some(HostDenot::Conditional { then_when }) => Ok(Value::Cond {
                    then_when: *then_when,
                    args: Vec::new(),
                }),
                None => Err(SemError::Unmapped(n.clone())),
            },
            HostTerm::Pair(a, b) => Ok(Value::Pair(
                Box::new(self.eval_host(hctx, env, a)?),
                Box::new(self.eval_host(hctx, env, b)?),
            )),
            HostTerm::Fst(p) => match self.eval_host(hctx, env, p)? {
                Value::Pair(a, _) => Ok(*a),
                v => Err(SemError::IllTyped(format!("first projection of {v:?}"))),
            },
            HostTerm::Snd(p) => match self.eval_host(hctx, env, p)? {
                Value::Pair(_, b) => Ok(*b),
                v => Err(SemError::IllTyped(format!("second projection of {v:?}"))),
            },
            HostTerm::Lam(x, ty, body) => Ok(Value::Closure {
                param: x.clone(),
                ty: ty.clone(),
                body: Rc::new((**body).clone()),
                scope: Rc::new((hctx.clone(), env.clone())),
            }),
            HostTerm::App(f, a) => {
                let f = self.eval_host(hctx, env, f)?;
                let a = self.eval_host(hctx, env, a)?;
                self.apply(&f, a)
            }
            HostTerm::Promote(octx, body) => {
                let den = self.eval_core(hctx, env, octx, body)?;
                Ok(Value::Hom(self.align(octx, den)?.mor))
            }
        }
    }

    /// Precompose a denotation with the symmetry taking `ctx` order to its variable order.
    pub fn align(&self, ctx: &CoreContext, den: CoreDen<S>) -> Result<Arrow<S>, SemError> {
        let names: Vec<&Name> = ctx.names().collect();
        if den.vars.len() != names.len() {
            let missing = names
                .iter()
                .find(|n| !den.vars.contains(n))
                .map(|n| n.to_string());
            return Err(SemError::NonLinear(
                missing.unwrap_or_else(|| den.vars.join(", ")),
            ));
        }
        let mut order = Vec::with_capacity(names.len());
        for v in &den.vars {
            let i = names
                .iter()
                .position(|n| *n == v)
                .ok_or_else(|| SemError::NonLinear(v.clone()))?;
            if order.contains(&i) {
                return Err(SemError::NonLinear(v.clone()));
            }
            order.push(i);
        }
        let objs = ctx
            .types()
            .map(|t| self.core_obj(t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(permute(self.model, &objs, &order).then(self.model, &den.arrow))
    }

    // -- core terms ----------------------------------------------------------------

    fn var_objs(&self, cctx: &CoreContext, vars: &[Name]) -> Result<Vec<S::Obj>, SemError> {
        vars.iter()
            .map(|v| {
                let t = cctx
                    .lookup(v)
                    .ok_or_else(|| SemError::IllTyped(format!("unbound `{v}`")))?;
                self.core_obj(t)
            })
            .collect()
    }

    fn disjoint(xs: &[Name], ys: &[Name]) -> Result<(), SemError> {
        match xs.iter().find(|x| ys.contains(x)) {
            Some(x) => Err(SemError::NonLinear(x.clone())),
            None => Ok(()),
        }
    }

    pub fn eval_core(
        &self,
        hctx: &HostContext,
        env: &BTreeMap<Name, Value<S::Mor>>,
        cctx: &CoreContext,
        f: &CoreTerm,
    ) -> Result<CoreDen<S>, SemError> {
        let s = self.model;
        match f {
            CoreTerm::Bullet => Ok(CoreDen {
                arrow: Arrow::id(s, &s.unit()),
                vars: Vec::new(),
            }),
            CoreTerm::Var(a) => {
                let t = cctx
                    .lookup(a)
                    .ok_or_else(|| SemError::IllTyped(format!("unbound `{a}`")))?;
                Ok(CoreDen {
                    arrow: Arrow::id(s, &self.core_obj(t)?),
                    vars: vec![a.clone()],
                })
            }
            CoreTerm::Tensor(g, h) => {
                let (dg, dh) = (
                    self.eval_core(hctx, env, cctx, g)?,
                    self.eval_core(hctx, env, cctx, h)?,
                );
                Self::disjoint(&dg.vars, &dh.vars)?;
                let (xs, ys) = (
                    self.var_objs(cctx, &dg.vars)?,
                    self.var_objs(cctx, &dh.vars)?,
                );
                let arrow = split(s, &xs, &ys).then(s, &dg.arrow.tensor(s, &dh.arrow));
                Ok(CoreDen {
                    arrow,
                    vars: [dg.vars, dh.vars].concat(),
                })
            }
            CoreTerm::LetUnit(g, body) => {
                let (dg, db) = (
                    self.eval_core(hctx, env, cctx, g)?,
                    self.eval_core(hctx, env, cctx, body)?,
                );
                Self::disjoint(&dg.vars, &db.vars)?;
                let (xs, ys) = (
                    self.var_objs(cctx, &dg.vars)?,
                    self.var_objs(cctx, &db.vars)?,
                );
                let rest = tensor_list(s, &ys);
                let arrow = split(s, &xs, &ys)
                    .then(s, &dg.arrow.tensor(s, &Arrow::id(s, &rest)))
                    .then(s, &super::smc::lunit(s, &rest))
                    .then(s, &db.arrow);
                Ok(CoreDen {
                    arrow,
                    vars: [dg.vars, db.vars].concat(),
                })
            }
            CoreTerm::LetTensor(g, a, b, body) => {
                let dg = self.eval_core(hctx, env, cctx, g)?;
                let mixed = MixedContext::new(hctx.clone(), cctx.clone());
                let gty = match self.env.synth_lenient(&mixed, &Term::Core((**g).clone())) {
                    Some(Type::Core(t)) => t,
                    _ => return Err(SemError::IllTyped("let scrutinee has no type".into())),
                };
                let (ta, tb) = self
                    .env
                    .as_tensor(&gty)
                    .ok_or_else(|| SemError::IllTyped("let scrutinee is not a tensor".into()))?;
                let inner = cctx.with(a, ta).with(b, tb);
                let db = self.eval_core(hctx, env, &inner, body)?;
                for v in [a, b] {
                    if db.vars.iter().filter(|x| *x == v).count() != 1 {
                        return Err(SemError::NonLinear(v.clone()));
                    }
                }
                let rest: Vec<Name> = db
                    .vars
                    .iter()
                    .filter(|x| *x != a && *x != b)
                    .cloned()
                    .collect();
                Self::disjoint(&dg.vars, &rest)?;
                let mut wanted = vec![a.clone(), b.clone()];
                wanted.extend(rest.iter().cloned());
                let wanted_objs = self.var_objs(&inner, &wanted)?;
                let order: Vec<usize> = db
                    .vars
                    .iter()
                    .map(|v| wanted.iter().position(|w| w == v).unwrap())
                    .collect();
                let body_arrow = permute(s, &wanted_objs, &order).then(s, &db.arrow);
                let arrow = if rest.is_empty() {
                    dg.arrow.then(s, &body_arrow)
                } else {
                    let xs = self.var_objs(cctx, &dg.vars)?;
                    let rs = self.var_objs(cctx, &rest)?;
                    let r = tensor_list(s, &rs);
                    let (oa, ob) = (&wanted_objs[0], &wanted_objs[1]);
                    split(s, &xs, &rs)
                        .then(s, &dg.arrow.tensor(s, &Arrow::id(s, &r)))
                        .then(s, &super::smc::assoc(s, oa, ob, &r))
                        .then(s, &body_arrow)
                };
                Ok(CoreDen {
                    arrow,
                    vars: [dg.vars, rest].concat(),
                })
            }
            CoreTerm::Derelict(h, arg) => {
                let hty = self
                    .env
                    .check_host(hctx, h)
                    .or_else(|_| self.env.with_cartesian(true).check_host(hctx, h))
                    .map_err(|e| SemError::IllTyped(e.message))?;
                let (ta, tb) = self
                    .env
                    .as_proof(&hty)
                    .ok_or_else(|| SemError::IllTyped("derelict of a non-proof".into()))?;
                let m = match self.eval_host(hctx, env, h)? {
                    Value::Hom(m) => m,
                    v => return Err(SemError::IllTyped(format!("derelict of {v:?}"))),
                };
                let da = self.eval_core(hctx, env, cctx, arg)?;
                let (oa, ob) = (self.core_obj(&ta)?, self.core_obj(&tb)?);
                let arrow = da.arrow.then(s, &Arrow::new(oa, ob, m));
                Ok(CoreDen {
                    arrow,
                    vars: da.vars,
                })
            }
            CoreTerm::Const(k, args) => {
                let sig = self
                    .theory()
                    .core_consts
                    .get(k)
                    .ok_or_else(|| SemError::Unmapped(k.clone()))?;
                let m = self
                    .interp
                    .core_consts
                    .get(k)
                    .ok_or_else(|| SemError::Unmapped(k.clone()))?;
                let dom = self.core_obj(&sig.params.tensor())?;
                let cod = self.core_obj(&sig.result)?;
                let konst = Arrow::new(dom, cod, m.clone());
                if args.is_empty() {
                    return Ok(CoreDen {
                        arrow: konst,
                        vars: Vec::new(),
                    });
                }
                let packed = crate::equations::tensor_of(args.clone());
                let da = self.eval_core(hctx, env, cctx, &packed)?;
                Ok(CoreDen {
                    arrow: da.arrow.then(s, &konst),
                    vars: da.vars,
                })
            }
        }
    }

    // -- whole judgments -----------------------------------------------------------

    /// Every point of the host context, as environments.
    pub fn points(
        &self,
        hctx: &HostContext,
    ) -> Result<Vec<BTreeMap<Name, Value<S::Mor>>>, SemError> {
        let mut out = vec![BTreeMap::new()];
        for (x, t) in hctx.entries() {
            let vals = self.enumerate(t)?;
            if out.len().saturating_mul(vals.len()) > ENUM_LIMIT {
                return Err(SemError::TooLarge("the host context".into()));
            }
            out = out
                .into_iter()
                .flat_map(|env| {
                    vals.iter().map(move |v| {
                        let mut e = env.clone();
                        e.insert(x.clone(), v.clone());
                        e
                    })
                })
                .collect();
        }
        Ok(out)
    }

    pub fn show_point(&self, hctx: &HostContext, env: &BTreeMap<Name, Value<S::Mor>>) -> String {
        hctx.entries()
            .iter()
            .map(|(x, t)| format!("{x} = {}", self.show(t, &env[x])))
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// The table of a host judgment: one value per point of the context.
    pub fn interpret_host(
        &self,
        ctx: &HostContext,
        t: &HostTerm,
    ) -> Result<Vec<(BTreeMap<Name, Value<S::Mor>>, Value<S::Mor>)>, SemError> {
        self.points(ctx)?
            .into_iter()
            .map(|env| Ok((env.clone(), self.eval_host(ctx, &env, t)?)))
            .collect()
    }

    /// The table of a core judgment: one morphism `T(core ctx) -> A` per host point.
    pub fn interpret_core(
        &self,
        ctx: &MixedContext,
        f: &CoreTerm,
    ) -> Result<Vec<(BTreeMap<Name, Value<S::Mor>>, Arrow<S>)>, SemError> {
        self.points(&ctx.host)?
            .into_iter()
            .map(|env| {
                let den = self.eval_core(&ctx.host, &env, &ctx.core, f)?;
                Ok((env.clone(), self.align(&ctx.core, den)?))
            })
            .collect()
    }

    /// `None` when both sides agree at every point, else a witness.
    pub fn satisfies(
        &self,
        ctx: &MixedContext,
        lhs: &Term,
        rhs: &Term,
    ) -> Result<Option<String>, SemError> {
        match (lhs, rhs) {
            (Term::Host(l), Term::Host(r)) => {
                let ty = self
                    .env
                    .with_cartesian(true)
                    .check_host(&ctx.host, l)
                    .map_err(|e| SemError::IllTyped(e.message))?;
                for env in self.points(&ctx.host)? {
                    let (x, y) = (
                        self.eval_host(&ctx.host, &env, l)?,
                        self.eval_host(&ctx.host, &env, r)?,
                    );
                    if !self.value_eq(&ty, &x, &y)? {
                        let at = self.show_point(&ctx.host, &env);
                        let prefix = if at.is_empty() {
                            String::new()
                        } else {
                            format!("at {at}: ")
                        };
                        return Ok(Some(format!(
                            "{prefix}left is {}, right is {}",
                            self.show(&ty, &x),
                            self.show(&ty, &y)
                        )));
                    }
                }
                Ok(None)
            }
            (Term::Core(l), Term::Core(r)) => {
                for env in self.points(&ctx.host)? {
                    let x =
                        self.align(&ctx.core, self.eval_core(&ctx.host, &env, &ctx.core, l)?)?;
                    let y =
                        self.align(&ctx.core, self.eval_core(&ctx.host, &env, &ctx.core, r)?)?;
                    if x.cod != y.cod {
                        return Err(SemError::IllTyped("sides have different codomains".into()));
                    }
                    if x.mor != y.mor {
                        let at = self.show_point(&ctx.host, &env);
                        let prefix = if at.is_empty() {
                            String::new()
                        } else {
                            format!("at {at}: ")
                        };
                        return Ok(Some(format!(
                            "{prefix}{}",
                            self.model
                                .describe_difference(&x.dom, &x.cod, &x.mor, &y.mor)
                        )));
                    }
                }
                Ok(None)
            }
            _ => Err(SemError::IllTyped("sides live at different levels".into())),
        }
    }
}

impl<S: Smc> Oracle for Semantics<'_, '_, S> {
    fn compare(&self, _env: &TypeEnv, ctx: &MixedContext, lhs: &Term, rhs: &Term) -> OracleAnswer {
        match self.satisfies(ctx, lhs, rhs) {
            Ok(None) => OracleAnswer::Same,
            Ok(Some(w)) => OracleAnswer::Differ(w),
            Err(e) => OracleAnswer::Unsupported(e.to_string()),
        }
    }

    fn faithful(&self) -> bool {
        self.faithful
    }
}

// -- bundled interpretations ------------------------------------------------------------

/// The circuit theory in finite relations: gates as the graphs of their truth tables,
/// `cnot` as `(a, b) |-> (a, a xor b)`.
pub fn circuit_interpretation() -> Interpretation<FinRel> {
    let mut i = Interpretation::default();
    i.core_types.insert("Bit".into(), bit());
    i.host_types
        .insert("bool".into(), vec!["false".into(), "true".into()]);
    i.host_consts
        .insert("false".into(), HostDenot::Value(Value::Elem(0)));
    i.host_consts
        .insert("true".into(), HostDenot::Value(Value::Elem(1)));
    i.host_consts
        .insert("if".into(), HostDenot::Conditional { then_when: 1 });
    i.core_consts
        .insert("0".into(), Relation::from_pairs(1, 2, &[(0, 0)]));
    i.core_consts
        .insert("1".into(), Relation::from_pairs(1, 2, &[(0, 1)]));
    i.core_consts
        .insert("not".into(), Relation::graph(2, 2, |a| 1 - a));
    i.core_consts
        .insert("and".into(), Relation::graph(4, 2, |ab| (ab == 3) as usize));
    i.core_consts.insert(
        "cnot".into(),
        Relation::graph(4, 4, |ab| {
            let (a, b) = (ab / 2, ab % 2);
            a * 2 + (a ^ b)
        }),
    );
    i
}

fn default_value<S: Smc>(
    model: &S,
    interp: &Interpretation<S>,
    t: &HostType,
) -> Option<Value<S::Mor>> {
    match t {
        HostType::Unit => Some(Value::Unit),
        HostType::Base(_) => Some(Value::Elem(0)),
        HostType::Prod(a, b) => Some(Value::Pair(
            Box::new(default_value(model, interp, a)?),
            Box::new(default_value(model, interp, b)?),
        )),
        HostType::Arrow(_, b) => Some(Value::Constant(Box::new(default_value(model, interp, b)?))),
        HostType::Proof(a, b) => {
            let obj = |t: &CoreType| -> Option<S::Obj> {
                fn go<S: Smc>(m: &S, i: &Interpretation<S>, t: &CoreType) -> Option<S::Obj> {
                    match t {
                        CoreType::Unit => Some(m.unit()),
                        CoreType::Base(n) => i.core_types.get(n).cloned(),
                        CoreType::Tensor(a, b) => Some(m.tensor(&go(m, i, a)?, &go(m, i, b)?)),
                    }
                }
                go(model, interp, t)
            };
            model
                .hom(&obj(a)?, &obj(b)?, ENUM_LIMIT)?
                .into_iter()
                .next()
                .map(Value::Hom)
        }
    }
}

/// Send every symbol of a theory into a one-object, one-morphism model.
pub fn trivial_interpretation(model: &TableSmc, theory: &Theory) -> Interpretation<TableSmc> {
    let mut i = Interpretation::default();
    let obj = model.unit();
    for n in &theory.core_types {
        i.core_types.insert(n.clone(), obj.clone());
    }
    for n in &theory.host_types {
        i.host_types.insert(n.clone(), point());
    }
    for k in theory.core_consts.keys() {
        i.core_consts.insert(k.clone(), model.id(&obj));
    }
    for (n, sig) in &theory.host_consts {
        if let Some(v) = default_value(model, &i, &sig.ty) {
            i.host_consts.insert(n.clone(), HostDenot::Value(v));
        }
    }
    i
}

/// Resolve the labels of a table model's interpretation section.
pub fn table_interpretation(
    model: &TableSmc,
    spec: &TableInterpretation,
    theory: &Theory,
) -> Result<Interpretation<TableSmc>, SemError> {
    let mut i = Interpretation::default();
    for (n, o) in &spec.core_types {
        if !model.model.objects.contains(o) {
            return Err(SemError::Unmapped(format!("object {o}")));
        }
        i.core_types.insert(n.clone(), o.clone());
    }
    i.host_types = spec.host_types.clone();
    for (n, label) in &spec.host_consts {
        let sig = theory
            .host_consts
            .get(n)
            .ok_or_else(|| SemError::Unmapped(n.clone()))?;
        let HostType::Base(b) = &sig.ty else {
            return Err(SemError::Unmapped(format!(
                "{n} (only base-type host constants can be given by label)"
            )));
        };
        let set = i
            .host_types
            .get(b)
            .ok_or_else(|| SemError::Unmapped(b.clone()))?;
        let idx = set
            .iter()
            .position(|x| x == label)
            .ok_or_else(|| SemError::Unmapped(format!("{n} = {label}")))?;
        i.host_consts
            .insert(n.clone(), HostDenot::Value(Value::Elem(idx)));
    }
    for (k, label) in &spec.core_consts {
        let sig = theory
            .core_consts
            .get(k)
            .ok_or_else(|| SemError::Unmapped(k.clone()))?;
        let obj = |t: &CoreType| -> Result<String, SemError> {
            fn go(
                m: &TableSmc,
                i: &Interpretation<TableSmc>,
                t: &CoreType,
            ) -> Result<String, SemError> {
                match t {
                    CoreType::Unit => Ok(m.unit()),
                    CoreType::Base(n) => i
                        .core_types
                        .get(n)
                        .cloned()
                        .ok_or_else(|| SemError::Unmapped(n.clone())),
                    CoreType::Tensor(a, b) => Ok(m.tensor(&go(m, i, a)?, &go(m, i, b)?)),
                }
            }
            go(model, &i, t)
        };
        let (a, b) = (obj(&sig.params.tensor())?, obj(&sig.result)?);
        let labels = model
            .model
            .hom_labels(&a, &b)
            .ok_or_else(|| SemError::Unmapped(format!("hom {a};{b}")))?;
        let idx = labels
            .iter()
            .position(|x| x == label)
            .ok_or_else(|| SemError::Unmapped(format!("{k} = {label}")))?;
        i.core_consts.insert(k.clone(), idx);
    }
    Ok(i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elab::{circuit_theory, Elaborator};
    use crate::surface::parse_expr;

    fn with_circuit<R>(f: impl FnOnce(&Semantics<FinRel>, &TypeEnv) -> R) -> R {
        let t = circuit_theory();
        let env = TypeEnv::linear(&t);
        let model = FiniteModel {
            core: FinRel::new(2).unwrap(),
            faithful: false,
        };
        let interp = circuit_interpretation();
        let sem = Semantics::new(&model, &interp, &env);
        f(&sem, &env)
    }

    fn elab(env: &TypeEnv, ctx: &MixedContext, src: &str) -> Term {
        Elaborator::new(env)
            .term(ctx, &parse_expr(src).unwrap())
            .unwrap()
    }

    fn core_ctx(entries: &[(&str, CoreType)]) -> MixedContext {
        MixedContext::new(
            HostContext::new(),
            Context::from_entries(
                entries
                    .iter()
                    .map(|(n, t)| (n.to_string(), t.clone()))
                    .collect(),
            ),
        )
    }

    #[test]
    fn nand_is_the_negated_conjunction() {
        with_circuit(|sem, env| {
            let bb = CoreType::tensor(CoreType::base("Bit"), CoreType::base("Bit"));
            let ctx = core_ctx(&[("a", bb)]);
            let Term::Core(f) = elab(env, &ctx, "nand(a)") else {
                panic!()
            };
            let table = sem.interpret_core(&ctx, &f).unwrap();
            let a = &table[0].1;
            assert_eq!(
                sem.model.mor_label(&a.dom, &a.cod, &a.mor),
                "{((0,0),1),((0,1),1),((1,0),1),((1,1),0)}"
            );
        });
    }

    #[test]
    fn negation_differs_from_identity_at_zero() {
        with_circuit(|sem, env| {
            let ctx = core_ctx(&[("a", CoreType::base("Bit"))]);
            let (l, r) = (elab(env, &ctx, "not(a)"), elab(env, &ctx, "a"));
            let w = sem.satisfies(&ctx, &l, &r).unwrap().unwrap();
            assert!(w.starts_with("at input 0:"), "{w}");
        });
    }

    #[test]
    fn swapping_through_a_let_matches_symmetry() {
        with_circuit(|sem, env| {
            let ctx = core_ctx(&[("x", CoreType::base("Bit")), ("y", CoreType::base("Bit"))]);
            let l = elab(env, &ctx, "let a (x) b = x (x) y in and(b (x) not(a))");
            let r = elab(env, &ctx, "and(y (x) not(x))");
            assert_eq!(sem.satisfies(&ctx, &l, &r).unwrap(), None);
            let l = elab(env, &ctx, "cnot(y (x) x)");
            let r = elab(env, &ctx, "cnot(x (x) y)");
            assert!(sem.satisfies(&ctx, &l, &r).unwrap().is_some());
        });
    }

    #[test]
    fn proof_types_count_relations() {
        with_circuit(|sem, _| {
            let p = HostType::proof(CoreType::base("Bit"), CoreType::base("Bit"));
            assert_eq!(sem.host_set(&p, ENUM_LIMIT).unwrap().len(), 16);
            let bb = CoreType::tensor(CoreType::base("Bit"), CoreType::base("Bit"));
            assert_eq!(sem.core_obj(&bb).unwrap().len(), 4);
            assert_eq!(sem.core_obj(&CoreType::Unit).unwrap(), point());
        });
    }

    #[test]
    fn conditional_selects_a_branch() {
        with_circuit(|sem, env| {
            let ctx = MixedContext::default();
            let l = elab(
                env,
                &ctx,
                "if true then promote(0 (x) 0) else promote(1 (x) 1)",
            );
            let r = elab(env, &ctx, "promote(0 (x) 0)");
            assert_eq!(sem.satisfies(&ctx, &l, &r).unwrap(), None);
        });
    }
}
