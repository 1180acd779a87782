//! Surface syntax trees, before name resolution and elaboration.

use crate::diag::Span;
use crate::syntax::Name;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TyExpr {
    /// `1`
    One,
    /// `I`
    UnitI,
    Name(Name),
    Prod(Box<TyExpr>, Box<TyExpr>),
    Arrow(Box<TyExpr>, Box<TyExpr>),
    Tensor(Box<TyExpr>, Box<TyExpr>),
    Proof(Box<TyExpr>, Box<TyExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LetPattern {
    Pair(Name, Name),
    Unit,
    Var(Name),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Star,
    Bullet,
    Ident(Name),
    /// `name[T]`: a family member or the `id[A]` combinator
    Indexed(Name, TyExpr),
    /// `name(e1, ..., en)` written without a space before the parenthesis
    Call(Name, Vec<Expr>),
    Pair(Box<Expr>, Box<Expr>),
    Fst(Box<Expr>),
    Snd(Box<Expr>),
    Lam(Name, TyExpr, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    Promote(Vec<(Name, TyExpr)>, Box<Expr>),
    Derelict(Box<Expr>, Option<Box<Expr>>),
    Tensor(Box<Expr>, Box<Expr>),
    Let(LetPattern, Box<Expr>, Box<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
    /// `e [g / a]`
    Subst(Box<Expr>, Box<Expr>, Name),
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CtxExpr {
    pub host: Vec<(Name, TyExpr)>,
    pub core: Vec<(Name, TyExpr)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Host,
    Core,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeclKind {
    Theory(Name),
    Import(Name),
    BaseTypes(Level, Vec<Name>),
    HostConst {
        name: Name,
        param: Option<Name>,
        ty: TyExpr,
    },
    CoreConst {
        name: Name,
        params: Vec<(Name, TyExpr)>,
        result: TyExpr,
    },
    TypeAxiom(Level, TyExpr, TyExpr),
    Axiom {
        ctx: CtxExpr,
        lhs: Expr,
        rhs: Expr,
        ty: Option<TyExpr>,
    },
    Term {
        name: Name,
        level: Option<Level>,
        params: Option<Vec<(Name, TyExpr)>>,
        ty: Option<TyExpr>,
        body: Expr,
    },
    Check {
        ctx: CtxExpr,
        expr: Expr,
        ty: Option<TyExpr>,
    },
    Eq {
        ctx: CtxExpr,
        lhs: Expr,
        rhs: Expr,
        ty: Option<TyExpr>,
    },
    Norm {
        ctx: CtxExpr,
        expr: Expr,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decl {
    pub kind: DeclKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SourceFile {
    pub decls: Vec<Decl>,
}
