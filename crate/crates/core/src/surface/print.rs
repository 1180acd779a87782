use super::ast::*;
use crate::syntax::{CoreContext, CoreTerm, CoreType, HostContext, HostTerm, HostType};

const OPEN: u8 = 0;
const TENSOR: u8 = 1;
const APP: u8 = 2;
const POSTFIX: u8 = 3;
const ATOM: u8 = 4;

fn wrap(s: String, level: u8, ctx: u8) -> String {
    if level < ctx {
        format!("({s})")
    } else {
        s
    }
}

pub fn print_core_type(t: &CoreType) -> String {
    match t {
        CoreType::Unit => "I".to_string(),
        CoreType::Base(n) => n.clone(),
        CoreType::Tensor(a, b) => {
            let left = match **a {
                CoreType::Tensor(..) => format!("({})", print_core_type(a)),
                _ => print_core_type(a),
            };
            format!("{left} (x) {}", print_core_type(b))
        }
    }
}

pub fn print_host_type(t: &HostType) -> String {
    match t {
        HostType::Unit => "1".to_string(),
        HostType::Base(n) => n.clone(),
        HostType::Proof(a, b) => format!("Proof({}, {})", print_core_type(a), print_core_type(b)),
        HostType::Prod(a, b) => {
            let left = match **a {
                HostType::Prod(..) | HostType::Arrow(..) => format!("({})", print_host_type(a)),
                _ => print_host_type(a),
            };
            let right = match **b {
                HostType::Arrow(..) => format!("({})", print_host_type(b)),
                _ => print_host_type(b),
            };
            format!("{left} * {right}")
        }
        HostType::Arrow(a, b) => {
            let left = match **a {
                HostType::Arrow(..) => format!("({})", print_host_type(a)),
                _ => print_host_type(a),
            };
            format!("{left} -> {}", print_host_type(b))
        }
    }
}

fn if_spine(t: &HostTerm) -> Option<(&HostTerm, &HostTerm, &HostTerm)> {
    if let HostTerm::App(f, e) = t {
        if let HostTerm::App(f, s) = &**f {
            if let HostTerm::App(f, c) = &**f {
                if matches!(&**f, HostTerm::Const(n, Some(_)) if n == "if") {
                    return Some((c, s, e));
                }
            }
        }
    }
    None
}

fn host_at(t: &HostTerm, ctx: u8) -> String {
    let (s, level) = match t {
        HostTerm::Star => ("*".to_string(), ATOM),
        HostTerm::Var(x) => (x.clone(), ATOM),
        HostTerm::Const(n, None) => (n.clone(), ATOM),
        HostTerm::Const(n, Some(ty)) => (format!("{n}[{}]", print_host_type(ty)), ATOM),
        HostTerm::Pair(a, b) => (
            format!("<{}, {}>", host_at(a, OPEN), host_at(b, OPEN)),
            ATOM,
        ),
        HostTerm::Fst(a) => (format!("fst {}", host_at(a, ATOM)), POSTFIX),
        HostTerm::Snd(a) => (format!("snd {}", host_at(a, ATOM)), POSTFIX),
        HostTerm::Lam(x, ty, body) => (
            format!("\\{x}:{}. {}", print_host_type(ty), host_at(body, OPEN)),
            OPEN,
        ),
        HostTerm::App(f, a) => match if_spine(t) {
            Some((c, s, e)) => (
                format!(
                    "if {} then {} else {}",
                    host_at(c, OPEN),
                    host_at(s, OPEN),
                    host_at(e, OPEN)
                ),
                OPEN,
            ),
            None => (format!("{} {}", host_at(f, APP), host_at(a, POSTFIX)), APP),
        },
        HostTerm::Promote(ctx, body) => {
            if ctx.is_empty() {
                (format!("promote({})", core_at(body, OPEN)), ATOM)
            } else {
                (
                    format!(
                        "promote(core {}. {})",
                        print_core_context(ctx),
                        core_at(body, OPEN)
                    ),
                    ATOM,
                )
            }
        }
    };
    wrap(s, level, ctx)
}

fn core_at(f: &CoreTerm, ctx: u8) -> String {
    let (s, level) = match f {
        CoreTerm::Bullet => ("bullet".to_string(), ATOM),
        CoreTerm::Var(a) => (a.clone(), ATOM),
        CoreTerm::Const(k, args) if args.is_empty() => (k.clone(), ATOM),
        CoreTerm::Const(k, args) => {
            let args: Vec<String> = args.iter().map(|a| core_at(a, OPEN)).collect();
            (format!("{k}({})", args.join(", ")), ATOM)
        }
        CoreTerm::Tensor(g, h) => (
            format!("{} (x) {}", core_at(g, APP), core_at(h, OPEN)),
            TENSOR,
        ),
        CoreTerm::LetTensor(g, a, b, body) => (
            format!(
                "let {a} (x) {b} = {} in {}",
                core_at(g, OPEN),
                core_at(body, OPEN)
            ),
            OPEN,
        ),
        CoreTerm::LetUnit(g, body) => (
            format!(
                "let bullet = {} in {}",
                core_at(g, OPEN),
                core_at(body, OPEN)
            ),
            OPEN,
        ),
        CoreTerm::Derelict(h, arg) => (
            format!("derelict({}) @ {}", host_at(h, OPEN), core_at(arg, ATOM)),
            ATOM,
        ),
    };
    wrap(s, level, ctx)
}

pub fn print_host_term(t: &HostTerm) -> String {
    host_at(t, OPEN)
}

pub fn print_core_term(f: &CoreTerm) -> String {
    core_at(f, OPEN)
}

pub fn print_host_context(ctx: &HostContext) -> String {
    ctx.entries()
        .iter()
        .map(|(x, t)| format!("{x} : {}", print_host_type(t)))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn print_core_context(ctx: &CoreContext) -> String {
    ctx.entries()
        .iter()
        .map(|(a, t)| format!("{a}:{}", print_core_type(t)))
        .collect::<Vec<_>>()
        .join(", ")
}

/// `x : X | a : A |-`, with the bar omitted when the core part is empty.
pub fn print_mixed_context(host: &HostContext, core: &CoreContext) -> String {
    let h = print_host_context(host);
    if core.is_empty() {
        return if h.is_empty() {
            "|-".to_string()
        } else {
            format!("{h} |-")
        };
    }
    let c = core
        .entries()
        .iter()
        .map(|(a, t)| format!("{a} : {}", print_core_type(t)))
        .collect::<Vec<_>>()
        .join(", ");
    if h.is_empty() {
        format!("| {c} |-")
    } else {
        format!("{h} | {c} |-")
    }
}

pub fn print_host_judgment(ctx: &HostContext, t: &HostTerm, ty: &HostType) -> String {
    format!(
        "{} {} : {}",
        print_mixed_context(ctx, &CoreContext::new()),
        print_host_term(t),
        print_host_type(ty)
    )
}

pub fn print_core_judgment(
    host: &HostContext,
    core: &CoreContext,
    f: &CoreTerm,
    ty: &CoreType,
) -> String {
    format!(
        "{} {} : {}",
        print_mixed_context(host, core),
        print_core_term(f),
        print_core_type(ty)
    )
}

// -- surface trees ---------------------------------------------------------------

pub fn print_ty_expr(t: &TyExpr) -> String {
    fn go(t: &TyExpr, ctx: u8) -> String {
        // 0: arrow, 1: product/tensor, 2: atom
        let (s, level) = match t {
            TyExpr::One => ("1".to_string(), 2),
            TyExpr::UnitI => ("I".to_string(), 2),
            TyExpr::Name(n) => (n.clone(), 2),
            TyExpr::Proof(a, b) => (format!("Proof({}, {})", go(a, 0), go(b, 0)), 2),
            TyExpr::Prod(a, b) => (format!("{} * {}", go(a, 2), go(b, 1)), 1),
            TyExpr::Tensor(a, b) => (format!("{} (x) {}", go(a, 2), go(b, 1)), 1),
            TyExpr::Arrow(a, b) => (format!("{} -> {}", go(a, 1), go(b, 0)), 0),
        };
        wrap(s, level, ctx)
    }
    go(t, 0)
}

fn expr_at(e: &Expr, ctx: u8) -> String {
    let (s, level) = match e {
        Expr::Star => ("*".to_string(), ATOM),
        Expr::Bullet => ("bullet".to_string(), ATOM),
        Expr::Ident(n) => (n.clone(), ATOM),
        Expr::Indexed(n, t) => (format!("{n}[{}]", print_ty_expr(t)), ATOM),
        Expr::Call(n, args) => {
            let args: Vec<String> = args.iter().map(|a| expr_at(a, OPEN)).collect();
            (format!("{n}({})", args.join(", ")), ATOM)
        }
        Expr::Pair(a, b) => (
            format!("<{}, {}>", expr_at(a, OPEN), expr_at(b, OPEN)),
            ATOM,
        ),
        Expr::Fst(a) => (format!("fst {}", expr_at(a, ATOM)), POSTFIX),
        Expr::Snd(a) => (format!("snd {}", expr_at(a, ATOM)), POSTFIX),
        Expr::Lam(x, t, body) => (
            format!("\\{x}:{}. {}", print_ty_expr(t), expr_at(body, OPEN)),
            OPEN,
        ),
        Expr::App(f, a) => (format!("{} {}", expr_at(f, APP), expr_at(a, POSTFIX)), APP),
        Expr::Promote(binders, body) => {
            if binders.is_empty() {
                (format!("promote({})", expr_at(body, OPEN)), ATOM)
            } else {
                let bs: Vec<String> = binders
                    .iter()
                    .map(|(a, t)| format!("{a}:{}", print_ty_expr(t)))
                    .collect();
                (
                    format!("promote(core {}. {})", bs.join(", "), expr_at(body, OPEN)),
                    ATOM,
                )
            }
        }
        Expr::Derelict(h, None) => (format!("derelict({})", expr_at(h, OPEN)), ATOM),
        Expr::Derelict(h, Some(arg)) => (
            format!("derelict({}) @ {}", expr_at(h, OPEN), expr_at(arg, ATOM)),
            ATOM,
        ),
        Expr::Tensor(a, b) => (
            format!("{} (x) {}", expr_at(a, APP), expr_at(b, OPEN)),
            TENSOR,
        ),
        Expr::Let(pat, g, body) => {
            let p = match pat {
                LetPattern::Pair(a, b) => format!("{a} (x) {b}"),
                LetPattern::Unit => "bullet".to_string(),
                LetPattern::Var(a) => a.clone(),
            };
            (
                format!("let {p} = {} in {}", expr_at(g, OPEN), expr_at(body, OPEN)),
                OPEN,
            )
        }
        Expr::If(c, s, t) => (
            format!(
                "if {} then {} else {}",
                expr_at(c, OPEN),
                expr_at(s, OPEN),
                expr_at(t, OPEN)
            ),
            OPEN,
        ),
        Expr::Subst(inner, g, a) => (
            format!("{} [{} / {a}]", expr_at(inner, POSTFIX), expr_at(g, OPEN)),
            POSTFIX,
        ),
    };
    wrap(s, level, ctx)
}

pub fn print_expr(e: &Expr) -> String {
    expr_at(e, OPEN)
}
