//! Theories as values: signatures, axioms, definitions and translations.

use std::collections::{BTreeMap, BTreeSet};

use crate::diag::Diagnostic;
use crate::syntax::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HostConstSig {
    pub ty: HostType,
    /// Family parameter: a base type name in `ty` that each use instantiates.
    pub param: Option<Name>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreConstSig {
    pub params: CoreContext,
    pub result: CoreType,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeAxiom {
    Host(HostType, HostType),
    Core(CoreType, CoreType),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermAxiom {
    pub ctx: MixedContext,
    pub lhs: Term,
    pub rhs: Term,
    pub ty: Type,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Definition {
    Host {
        term: HostTerm,
        ty: HostType,
    },
    Core {
        params: CoreContext,
        term: CoreTerm,
        ty: CoreType,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Theory {
    pub name: Name,
    pub host_types: BTreeSet<Name>,
    pub core_types: BTreeSet<Name>,
    pub host_consts: BTreeMap<Name, HostConstSig>,
    pub core_consts: BTreeMap<Name, CoreConstSig>,
    pub type_axioms: Vec<TypeAxiom>,
    pub term_axioms: Vec<TermAxiom>,
    pub defs: BTreeMap<Name, Definition>,
    /// Core variables may be duplicated and discarded.
    pub cartesian_core: bool,
}

impl Theory {
    pub fn empty(name: &str) -> Self {
        Theory {
            name: name.to_string(),
            ..Default::default()
        }
    }

    /// Whether `name` is already used by a type, constant or definition.
    pub fn declares(&self, name: &str) -> bool {
        self.host_types.contains(name)
            || self.core_types.contains(name)
            || self.host_consts.contains_key(name)
            || self.core_consts.contains_key(name)
            || self.defs.contains_key(name)
    }
}

impl Theory {
    pub fn env(&self) -> crate::typing::TypeEnv<'_> {
        crate::typing::TypeEnv::new(self, self.cartesian_core)
    }
}

// -- translations ------------------------------------------------------------------

/// A translation between theories, given on generators and extended homomorphically.
/// Symbols without an entry map to the same name in the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Translation {
    pub source: Theory,
    pub target: Theory,
    pub host_types: BTreeMap<Name, HostType>,
    pub core_types: BTreeMap<Name, CoreType>,
    /// Closed host terms; a family constant's parameter appears as a base type.
    pub host_consts: BTreeMap<Name, HostTerm>,
    /// Core terms over the constant's declared parameter names.
    pub core_consts: BTreeMap<Name, CoreTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TranslationCheck {
    Valid,
    Invalid(Diagnostic),
    /// Some equality could neither be derived nor refuted.
    Unknown(Diagnostic),
}

impl TranslationCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, TranslationCheck::Valid)
    }
}

impl Translation {
    pub fn identity(theory: &Theory) -> Self {
        Translation {
            source: theory.clone(),
            target: theory.clone(),
            host_types: BTreeMap::new(),
            core_types: BTreeMap::new(),
            host_consts: BTreeMap::new(),
            core_consts: BTreeMap::new(),
        }
    }

    pub fn core_type(&self, t: &CoreType) -> CoreType {
        match t {
            CoreType::Unit => CoreType::Unit,
            CoreType::Base(n) => self.core_types.get(n).cloned().unwrap_or_else(|| t.clone()),
            CoreType::Tensor(a, b) => CoreType::tensor(self.core_type(a), self.core_type(b)),
        }
    }

    pub fn host_type(&self, t: &HostType) -> HostType {
        match t {
            HostType::Unit => HostType::Unit,
            HostType::Base(n) => self.host_types.get(n).cloned().unwrap_or_else(|| t.clone()),
            HostType::Prod(a, b) => HostType::prod(self.host_type(a), self.host_type(b)),
            HostType::Arrow(a, b) => HostType::arrow(self.host_type(a), self.host_type(b)),
            HostType::Proof(a, b) => HostType::proof(self.core_type(a), self.core_type(b)),
        }
    }

    pub fn core_context(&self, ctx: &CoreContext) -> CoreContext {
        Context::from_entries(
            ctx.entries()
                .iter()
                .map(|(a, t)| (a.clone(), self.core_type(t)))
                .collect(),
        )
    }

    pub fn host_context(&self, ctx: &HostContext) -> HostContext {
        Context::from_entries(
            ctx.entries()
                .iter()
                .map(|(x, t)| (x.clone(), self.host_type(t)))
                .collect(),
        )
    }

    pub fn context(&self, ctx: &MixedContext) -> MixedContext {
        MixedContext::new(self.host_context(&ctx.host), self.core_context(&ctx.core))
    }

    pub fn ty(&self, t: &Type) -> Type {
        match t {
            Type::Host(h) => Type::Host(self.host_type(h)),
            Type::Core(c) => Type::Core(self.core_type(c)),
        }
    }

    pub fn host_term(&self, t: &HostTerm) -> HostTerm {
        match t {
            HostTerm::Star | HostTerm::Var(_) => t.clone(),
            HostTerm::Const(n, ix) => {
                let ix = ix.as_ref().map(|i| self.host_type(i));
                match self.host_consts.get(n) {
                    None => HostTerm::Const(n.clone(), ix),
                    Some(image) => match (
                        &ix,
                        self.source
                            .host_consts
                            .get(n)
                            .and_then(|s| s.param.as_ref()),
                    ) {
                        (Some(i), Some(p)) => instantiate_host_term(image, p, i),
                        _ => image.clone(),
                    },
                }
            }
            HostTerm::Pair(a, b) => HostTerm::pair(self.host_term(a), self.host_term(b)),
            HostTerm::Fst(a) => HostTerm::fst(self.host_term(a)),
            HostTerm::Snd(a) => HostTerm::snd(self.host_term(a)),
            HostTerm::Lam(x, ty, body) => {
                HostTerm::lam(x, self.host_type(ty), self.host_term(body))
            }
            HostTerm::App(f, a) => HostTerm::app(self.host_term(f), self.host_term(a)),
            HostTerm::Promote(ctx, body) => {
                HostTerm::promote(self.core_context(ctx), self.core_term(body))
            }
        }
    }

    pub fn core_term(&self, f: &CoreTerm) -> CoreTerm {
        match f {
            CoreTerm::Bullet | CoreTerm::Var(_) => f.clone(),
            CoreTerm::Tensor(a, b) => CoreTerm::tensor(self.core_term(a), self.core_term(b)),
            CoreTerm::LetTensor(g, a, b, body) => {
                CoreTerm::let_tensor(self.core_term(g), a, b, self.core_term(body))
            }
            CoreTerm::LetUnit(g, body) => {
                CoreTerm::let_unit(self.core_term(g), self.core_term(body))
            }
            CoreTerm::Derelict(h, arg) => {
                CoreTerm::derelict(self.host_term(h), self.core_term(arg))
            }
            CoreTerm::Const(k, args) => {
                let args: Vec<CoreTerm> = args.iter().map(|a| self.core_term(a)).collect();
                match (self.core_consts.get(k), self.source.core_consts.get(k)) {
                    (Some(image), Some(sig)) => {
                        let mut s = Subst::default();
                        for (p, a) in sig.params.names().zip(args) {
                            s.core.insert(p.clone(), a);
                        }
                        s.apply_core(image)
                    }
                    _ => CoreTerm::Const(k.clone(), args),
                }
            }
        }
    }

    pub fn term(&self, t: &Term) -> Term {
        match t {
            Term::Host(h) => Term::Host(self.host_term(h)),
            Term::Core(c) => Term::Core(self.core_term(c)),
        }
    }
}

/// Replace the base type `param` by `with` in every annotation of a host term.
pub fn instantiate_host_term(t: &HostTerm, param: &str, with: &HostType) -> HostTerm {
    let go = |t: &HostTerm| instantiate_host_term(t, param, with);
    match t {
        HostTerm::Star | HostTerm::Var(_) => t.clone(),
        HostTerm::Const(n, ix) => {
            HostTerm::Const(n.clone(), ix.as_ref().map(|i| i.instantiate(param, with)))
        }
        HostTerm::Pair(a, b) => HostTerm::pair(go(a), go(b)),
        HostTerm::Fst(a) => HostTerm::fst(go(a)),
        HostTerm::Snd(a) => HostTerm::snd(go(a)),
        HostTerm::Lam(x, ty, body) => HostTerm::lam(x, ty.instantiate(param, with), go(body)),
        HostTerm::App(f, a) => HostTerm::app(go(f), go(a)),
        HostTerm::Promote(..) => t.clone(),
    }
}

fn failed(what: String, source: String, target: String, why: &Diagnostic) -> Diagnostic {
    Diagnostic::error(format!(
        "{what}: source `{source}` translates to `{target}`, which fails: {}",
        why.message
    ))
}

/// Check that every generator and axiom of the source survives translation.
pub fn check_translation(m: &Translation) -> TranslationCheck {
    use crate::equations::{decide_eq, NormConfig, Outcome};
    use crate::surface::{print_core_type, print_host_type, print_mixed_context};

    let target_env = m.target.env();
    for (n, t) in &m.host_types {
        if !m.source.host_types.contains(n) {
            return TranslationCheck::Invalid(Diagnostic::error(format!(
                "`{n}` is not a host type of the source"
            )));
        }
        if let Err(e) = target_env.check_host_type(t) {
            return TranslationCheck::Invalid(e);
        }
    }
    for (n, t) in &m.core_types {
        if !m.source.core_types.contains(n) {
            return TranslationCheck::Invalid(Diagnostic::error(format!(
                "`{n}` is not a core type of the source"
            )));
        }
        if let Err(e) = target_env.check_core_type(t) {
            return TranslationCheck::Invalid(e);
        }
    }
    for n in m.source.host_types.iter() {
        if let Err(e) = target_env.check_host_type(&m.host_type(&HostType::base(n))) {
            return TranslationCheck::Invalid(failed(
                "host type".into(),
                n.clone(),
                print_host_type(&m.host_type(&HostType::base(n))),
                &e,
            ));
        }
    }
    for n in m.source.core_types.iter() {
        if let Err(e) = target_env.check_core_type(&m.core_type(&CoreType::base(n))) {
            return TranslationCheck::Invalid(failed(
                "core type".into(),
                n.clone(),
                print_core_type(&m.core_type(&CoreType::base(n))),
                &e,
            ));
        }
    }

    // Constant signatures.
    for (n, sig) in &m.source.host_consts {
        let probe = match &sig.param {
            Some(p) => {
                let mut scratch = m.target.clone();
                scratch.host_types.insert(p.clone());
                let mut mm = m.clone();
                mm.target = scratch;
                mm.host_types.insert(p.clone(), HostType::base(p));
                let image = mm.host_term(&HostTerm::Const(n.clone(), Some(HostType::base(p))));
                let env = mm.target.env();
                env.check_term(
                    &MixedContext::default(),
                    &Term::Host(image.clone()),
                    Some(&Type::Host(mm.host_type(&sig.ty))),
                )
                .map(|_| ())
                .map_err(|e| (crate::surface::print_host_term(&image), e))
            }
            None => {
                let image = m.host_term(&HostTerm::Const(n.clone(), None));
                target_env
                    .check_term(
                        &MixedContext::default(),
                        &Term::Host(image.clone()),
                        Some(&Type::Host(m.host_type(&sig.ty))),
                    )
                    .map(|_| ())
                    .map_err(|e| (crate::surface::print_host_term(&image), e))
            }
        };
        if let Err((img, e)) = probe {
            return TranslationCheck::Invalid(failed("host constant".into(), n.clone(), img, &e));
        }
    }
    for (k, sig) in &m.source.core_consts {
        let args = sig
            .params
            .names()
            .map(|p| CoreTerm::Var(p.clone()))
            .collect();
        let image = m.core_term(&CoreTerm::Const(k.clone(), args));
        let ctx = MixedContext::new(HostContext::new(), m.core_context(&sig.params));
        if let Err(e) = target_env.check_term(
            &ctx,
            &Term::Core(image.clone()),
            Some(&Type::Core(m.core_type(&sig.result))),
        ) {
            return TranslationCheck::Invalid(failed(
                "core constant".into(),
                k.clone(),
                crate::surface::print_core_term(&image),
                &e,
            ));
        }
    }

    // Type equalities.
    for ax in &m.source.type_axioms {
        let (l, r) = match ax {
            TypeAxiom::Host(a, b) => (Type::Host(m.host_type(a)), Type::Host(m.host_type(b))),
            TypeAxiom::Core(a, b) => (Type::Core(m.core_type(a)), Type::Core(m.core_type(b))),
        };
        if !target_env.type_eq(&l, &r) {
            return TranslationCheck::Invalid(Diagnostic::rule(
                "eqT",
                format!("type axiom image {l} = {r} is not derivable"),
            ));
        }
    }

    // Term equalities.
    let mut unknown = None;
    for ax in &m.source.term_axioms {
        let ctx = m.context(&ax.ctx);
        let (l, r, ty) = (m.term(&ax.lhs), m.term(&ax.rhs), m.ty(&ax.ty));
        let shown = format!(
            "{} {} = {}",
            print_mixed_context(&ctx.host, &ctx.core),
            crate::equations::print_term(&l),
            crate::equations::print_term(&r)
        );
        let source = format!(
            "{} {} = {}",
            print_mixed_context(&ax.ctx.host, &ax.ctx.core),
            crate::equations::print_term(&ax.lhs),
            crate::equations::print_term(&ax.rhs)
        );
        for side in [&l, &r] {
            if let Err(e) = target_env.check_term(&ctx, side, Some(&ty)) {
                return TranslationCheck::Invalid(failed("axiom".into(), source, shown, &e));
            }
        }
        let v = decide_eq(&target_env, &ctx, &l, &r, &ty, None, &NormConfig::default());
        match v.outcome {
            Outcome::Equal => {}
            Outcome::Unequal => {
                return TranslationCheck::Invalid(Diagnostic::error(format!(
                    "axiom `{source}` translates to `{shown}`, which is refuted"
                )))
            }
            Outcome::Unknown => {
                unknown.get_or_insert_with(|| {
                    Diagnostic::error(format!(
                        "axiom `{source}` translates to `{shown}`, which is not decided"
                    ))
                });
            }
        }
    }
    match unknown {
        Some(d) => TranslationCheck::Unknown(d),
        None => TranslationCheck::Valid,
    }
}

/// `second ∘ first`: translate along `first`, then along `second`.
pub fn compose_translations(
    second: &Translation,
    first: &Translation,
) -> Result<Translation, Diagnostic> {
    if first.target != second.source {
        return Err(Diagnostic::error(format!(
            "cannot compose: `{}` does not match `{}`",
            first.target.name, second.source.name
        )));
    }
    let src = &first.source;
    let mut out = Translation {
        source: src.clone(),
        target: second.target.clone(),
        host_types: BTreeMap::new(),
        core_types: BTreeMap::new(),
        host_consts: BTreeMap::new(),
        core_consts: BTreeMap::new(),
    };
    for n in &src.host_types {
        out.host_types.insert(
            n.clone(),
            second.host_type(&first.host_type(&HostType::base(n))),
        );
    }
    for n in &src.core_types {
        out.core_types.insert(
            n.clone(),
            second.core_type(&first.core_type(&CoreType::base(n))),
        );
    }
    for (n, sig) in &src.host_consts {
        let ix = sig.param.as_ref().map(|p| HostType::base(p));
        let mut first = first.clone();
        let mut second = second.clone();
        if let Some(p) = &sig.param {
            first.host_types.insert(p.clone(), HostType::base(p));
            second.host_types.insert(p.clone(), HostType::base(p));
        }
        let image = first.host_term(&HostTerm::Const(n.clone(), ix));
        out.host_consts.insert(n.clone(), second.host_term(&image));
    }
    for (k, sig) in &src.core_consts {
        let args = sig
            .params
            .names()
            .map(|p| CoreTerm::Var(p.clone()))
            .collect();
        let image = first.core_term(&CoreTerm::Const(k.clone(), args));
        out.core_consts.insert(k.clone(), second.core_term(&image));
    }
    Ok(out)
}

// -- printing ------------------------------------------------------------------------

/// Render a theory as a loadable `.hc` file.
pub fn print_theory(t: &Theory) -> String {
    use crate::surface::{
        print_core_context, print_core_term, print_core_type, print_host_term, print_host_type,
        print_mixed_context,
    };
    use std::fmt::Write;

    let mut out = String::new();
    let _ = writeln!(out, "theory {}", t.name);
    if !t.core_types.is_empty() {
        let names: Vec<&str> = t.core_types.iter().map(|s| s.as_str()).collect();
        let _ = writeln!(out, "core type {}", names.join(", "));
    }
    if !t.host_types.is_empty() {
        let names: Vec<&str> = t.host_types.iter().map(|s| s.as_str()).collect();
        let _ = writeln!(out, "host type {}", names.join(", "));
    }
    for (k, sig) in &t.core_consts {
        let params = if sig.params.is_empty() {
            String::new()
        } else {
            format!(
                " ({})",
                sig.params
                    .entries()
                    .iter()
                    .map(|(a, ty)| format!("{a} : {}", print_core_type(ty)))
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        };
        let _ = writeln!(
            out,
            "core const {k}{params} : {}",
            print_core_type(&sig.result)
        );
    }
    for (n, sig) in &t.host_consts {
        let param = sig
            .param
            .as_ref()
            .map(|p| format!(" [{p}]"))
            .unwrap_or_default();
        let _ = writeln!(out, "host const {n}{param} : {}", print_host_type(&sig.ty));
    }
    for ax in &t.type_axioms {
        match ax {
            TypeAxiom::Host(a, b) => writeln!(
                out,
                "type axiom host {} = {}",
                print_host_type(a),
                print_host_type(b)
            ),
            TypeAxiom::Core(a, b) => writeln!(
                out,
                "type axiom core {} = {}",
                print_core_type(a),
                print_core_type(b)
            ),
        }
        .unwrap();
    }
    for (n, d) in &t.defs {
        match d {
            Definition::Host { term, ty } => writeln!(
                out,
                "host term {n} : {} = {}",
                print_host_type(ty),
                print_host_term(term)
            )
            .unwrap(),
            Definition::Core { params, term, ty } => {
                let ps = print_core_context(params).replace(':', " : ");
                writeln!(
                    out,
                    "core term {n}({ps}) : {} = {}",
                    print_core_type(ty),
                    print_core_term(term)
                )
                .unwrap()
            }
        }
    }
    for ax in &t.term_axioms {
        let _ = writeln!(
            out,
            "axiom {} {} = {} : {}",
            print_mixed_context(&ax.ctx.host, &ax.ctx.core),
            crate::equations::print_term(&ax.lhs),
            crate::equations::print_term(&ax.rhs),
            ax.ty
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elab::{circuit_theory, load_program};

    fn not3() -> Translation {
        let t = circuit_theory();
        let mut m = Translation::identity(&t);
        let a = CoreTerm::var("a");
        let not = |x| CoreTerm::constant("not", vec![x]);
        m.core_consts.insert("not".into(), not(not(not(a))));
        m
    }

    #[test]
    fn identity_translation_is_valid() {
        assert!(check_translation(&Translation::identity(&circuit_theory())).is_valid());
    }

    #[test]
    fn triple_negation_translation_is_valid() {
        let m = not3();
        assert!(check_translation(&m).is_valid());
        let image = m.core_term(&CoreTerm::constant(
            "not",
            vec![CoreTerm::constant("0", vec![])],
        ));
        assert_eq!(crate::surface::print_core_term(&image), "not(not(not(0)))");
    }

    fn dup_theory(cartesian: bool) -> Theory {
        let src = "theory dup\ncore type A\ncore const m (a : A (x) A) : A\naxiom | a : A |- m(a (x) a) = a : A";
        let (mut t, _) = load_program(src, &[], true).unwrap().unwrap();
        t.cartesian_core = cartesian;
        t
    }

    #[test]
    fn linearity_can_be_dropped_but_not_added() {
        let linear_src = "theory lin\ncore type A\ncore const m (a : A (x) A) : A";
        let (linear, _) = load_program(linear_src, &[], false).unwrap().unwrap();
        let mut cart = linear.clone();
        cart.cartesian_core = true;
        cart.name = "lin-cartesian".into();
        let mut down = Translation::identity(&linear);
        down.target = cart;
        assert!(check_translation(&down).is_valid());

        let mut up = Translation::identity(&dup_theory(true));
        up.target = dup_theory(false);
        match check_translation(&up) {
            TranslationCheck::Invalid(d) => assert!(d.message.contains("m(a (x) a)"), "{d}"),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn composition_has_identities_and_associates() {
        let t = circuit_theory();
        let id = Translation::identity(&t);
        let m = not3();
        let left = compose_translations(&id, &m).unwrap();
        let right = compose_translations(&m, &id).unwrap();
        let probe = CoreTerm::constant(
            "and",
            vec![CoreTerm::tensor(
                CoreTerm::constant("not", vec![CoreTerm::var("b")]),
                CoreTerm::var("c"),
            )],
        );
        assert_eq!(left.core_term(&probe), m.core_term(&probe));
        assert_eq!(right.core_term(&probe), m.core_term(&probe));
        let a = compose_translations(&compose_translations(&m, &m).unwrap(), &m).unwrap();
        let b = compose_translations(&m, &compose_translations(&m, &m).unwrap()).unwrap();
        assert_eq!(a.core_consts, b.core_consts);
        assert_eq!(a.host_consts, b.host_consts);
        assert!(check_translation(&a).is_valid());
    }

    #[test]
    fn printed_theory_reloads() {
        let t = circuit_theory();
        let text = print_theory(&t);
        let (back, _) = load_program(&text, &[], false).unwrap().unwrap();
        assert_eq!(back.core_consts, t.core_consts);
        assert_eq!(back.host_consts, t.host_consts);
        assert_eq!(back.defs, t.defs);
    }
}
