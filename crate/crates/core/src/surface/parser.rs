use super::ast::*;
use super::lexer::{lex, Tok, Token};
use crate::diag::{Diagnostic, Span};
use crate::syntax::Name;

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    pub fn new(text: &str) -> PResult<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn next_is_unspaced(&self) -> bool {
        !self.toks[self.pos].spaced
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, what: &str) -> PResult<T> {
        let found = match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Kw(k) => format!("keyword `{k}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("{other:?}"),
        };
        Err(Diagnostic::error(format!("expected {what}, found {found}")).at(self.span()))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> PResult<()> {
        if self.eat(t) {
            Ok(())
        } else {
            self.error(what)
        }
    }

    fn eat_kw(&mut self, k: &str) -> bool {
        if matches!(self.peek(), Tok::Kw(x) if *x == k) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, k: &str) -> PResult<()> {
        if self.eat_kw(k) {
            Ok(())
        } else {
            self.error(&format!("`{k}`"))
        }
    }

    fn ident(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error("identifier"),
        }
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    // -- types ---------------------------------------------------------------

    pub fn ty(&mut self) -> PResult<TyExpr> {
        let lhs = self.ty_prod()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.ty()?;
            return Ok(TyExpr::Arrow(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn ty_prod(&mut self) -> PResult<TyExpr> {
        let lhs = self.ty_atom()?;
        if self.eat(&Tok::Star) {
            let rhs = self.ty_prod()?;
            return Ok(TyExpr::Prod(Box::new(lhs), Box::new(rhs)));
        }
        if self.eat(&Tok::Otimes) {
            let rhs = self.ty_prod()?;
            return Ok(TyExpr::Tensor(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn ty_atom(&mut self) -> PResult<TyExpr> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(match s.as_str() {
                    "1" => TyExpr::One,
                    "I" => TyExpr::UnitI,
                    _ => TyExpr::Name(s),
                })
            }
            Tok::Kw("Proof") => {
                self.bump();
                self.expect(&Tok::LParen, "`(` after Proof")?;
                let a = self.ty()?;
                self.expect(&Tok::Comma, "`,` in Proof(A, B)")?;
                let b = self.ty()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(TyExpr::Proof(Box::new(a), Box::new(b)))
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => self.error("a type"),
        }
    }

    // -- expressions -----------------------------------------------------------

    pub fn expr(&mut self) -> PResult<Expr> {
        match self.peek() {
            Tok::Backslash => {
                self.bump();
                let x = self.ident()?;
                self.expect(&Tok::Colon, "`:` in lambda binder")?;
                let ty = self.ty()?;
                self.expect(&Tok::Dot, "`.` after lambda binder")?;
                let body = self.expr()?;
                Ok(Expr::Lam(x, ty, Box::new(body)))
            }
            Tok::Kw("let") => {
                self.bump();
                let pat = if self.eat_kw("bullet") {
                    LetPattern::Unit
                } else {
                    let a = self.ident()?;
                    if self.eat(&Tok::Otimes) {
                        LetPattern::Pair(a, self.ident()?)
                    } else {
                        LetPattern::Var(a)
                    }
                };
                self.expect(&Tok::Equals, "`=` in let")?;
                let scrut = self.expr()?;
                self.expect_kw("in")?;
                let body = self.expr()?;
                Ok(Expr::Let(pat, Box::new(scrut), Box::new(body)))
            }
            Tok::Kw("if") if !self.at_indexed_if() => {
                self.bump();
                let c = self.expr()?;
                self.expect_kw("then")?;
                let s = self.expr()?;
                self.expect_kw("else")?;
                let t = self.expr()?;
                Ok(Expr::If(Box::new(c), Box::new(s), Box::new(t)))
            }
            _ => {
                let lhs = self.app()?;
                if self.eat(&Tok::Otimes) {
                    let rhs = self.expr()?;
                    return Ok(Expr::Tensor(Box::new(lhs), Box::new(rhs)));
                }
                Ok(lhs)
            }
        }
    }

    /// `if[T]`, the conditional family member written as a constant.
    fn at_indexed_if(&self) -> bool {
        matches!(self.peek(), Tok::Kw("if"))
            && matches!(self.toks.get(self.pos + 1), Some(t) if t.tok == Tok::LBracket && !t.spaced)
    }

    fn starts_atom(&self) -> bool {
        self.at_indexed_if()
            || matches!(
                self.peek(),
                Tok::Ident(_)
                    | Tok::Star
                    | Tok::LParen
                    | Tok::LAngle
                    | Tok::Kw("bullet")
                    | Tok::Kw("promote")
                    | Tok::Kw("derelict")
                    | Tok::Kw("fst")
                    | Tok::Kw("snd")
            )
    }

    fn app(&mut self) -> PResult<Expr> {
        let mut e = self.postfix()?;
        while self.starts_atom() {
            let arg = self.postfix()?;
            e = Expr::App(Box::new(e), Box::new(arg));
        }
        Ok(e)
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut e = self.atom()?;
        while matches!(self.peek(), Tok::LBracket) {
            self.bump();
            let g = self.expr()?;
            self.expect(&Tok::Slash, "`/` in substitution")?;
            let a = self.ident()?;
            self.expect(&Tok::RBracket, "`]`")?;
            e = Expr::Subst(Box::new(e), Box::new(g), a);
        }
        Ok(e)
    }

    fn atom(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Star => {
                self.bump();
                Ok(Expr::Star)
            }
            Tok::Kw("bullet") => {
                self.bump();
                Ok(Expr::Bullet)
            }
            Tok::Ident(s) => {
                self.bump();
                if matches!(self.peek(), Tok::LParen) && self.next_is_unspaced() {
                    self.bump();
                    let mut args = Vec::new();
                    if !self.eat(&Tok::RParen) {
                        loop {
                            args.push(self.expr()?);
                            if self.eat(&Tok::RParen) {
                                break;
                            }
                            self.expect(&Tok::Comma, "`,` or `)`")?;
                        }
                    }
                    return Ok(Expr::Call(s, args));
                }
                if matches!(self.peek(), Tok::LBracket) && self.next_is_unspaced() {
                    self.bump();
                    let t = self.ty()?;
                    self.expect(&Tok::RBracket, "`]`")?;
                    return Ok(Expr::Indexed(s, t));
                }
                Ok(Expr::Ident(s))
            }
            Tok::Kw("if") if self.at_indexed_if() => {
                self.bump();
                self.bump();
                let t = self.ty()?;
                self.expect(&Tok::RBracket, "`]`")?;
                Ok(Expr::Indexed("if".into(), t))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::LAngle => {
                self.bump();
                let a = self.expr()?;
                self.expect(&Tok::Comma, "`,` in pair")?;
                let b = self.expr()?;
                self.expect(&Tok::RAngle, "`>`")?;
                Ok(Expr::Pair(Box::new(a), Box::new(b)))
            }
            Tok::Kw("fst") => {
                self.bump();
                Ok(Expr::Fst(Box::new(self.atom()?)))
            }
            Tok::Kw("snd") => {
                self.bump();
                Ok(Expr::Snd(Box::new(self.atom()?)))
            }
            Tok::Kw("promote") => {
                self.bump();
                self.expect(&Tok::LParen, "`(` after promote")?;
                let mut binders = Vec::new();
                if self.eat_kw("core") {
                    if !self.eat(&Tok::Dot) {
                        loop {
                            let a = self.ident()?;
                            self.expect(&Tok::Colon, "`:` in core binder")?;
                            binders.push((a, self.ty()?));
                            if self.eat(&Tok::Dot) {
                                break;
                            }
                            self.expect(&Tok::Comma, "`,` or `.` in core binders")?;
                        }
                    }
                }
                let body = self.expr()?;
                self.expect(&Tok::RParen, "`)` closing promote")?;
                Ok(Expr::Promote(binders, Box::new(body)))
            }
            Tok::Kw("derelict") => {
                self.bump();
                self.expect(&Tok::LParen, "`(` after derelict")?;
                let h = self.expr()?;
                self.expect(&Tok::RParen, "`)` closing derelict")?;
                let arg = if self.eat(&Tok::At) {
                    Some(Box::new(self.atom()?))
                } else {
                    None
                };
                Ok(Expr::Derelict(Box::new(h), arg))
            }
            _ => self.error("an expression"),
        }
    }

    // -- declarations ------------------------------------------------------------

    fn entries(&mut self, stop: &[Tok]) -> PResult<Vec<(Name, TyExpr)>> {
        let mut out = Vec::new();
        if stop.contains(self.peek()) {
            return Ok(out);
        }
        loop {
            let n = self.ident()?;
            self.expect(&Tok::Colon, "`:` in context entry")?;
            out.push((n, self.ty()?));
            if !self.eat(&Tok::Comma) {
                return Ok(out);
            }
        }
    }

    pub fn ctx(&mut self) -> PResult<CtxExpr> {
        let host = self.entries(&[Tok::Bar, Tok::Turnstile])?;
        let core = if self.eat(&Tok::Bar) {
            self.entries(&[Tok::Turnstile])?
        } else {
            Vec::new()
        };
        self.expect(&Tok::Turnstile, "`|-`")?;
        Ok(CtxExpr { host, core })
    }

    fn opt_ty(&mut self) -> PResult<Option<TyExpr>> {
        if self.eat(&Tok::Colon) {
            Ok(Some(self.ty()?))
        } else {
            Ok(None)
        }
    }

    fn level(&mut self) -> PResult<Level> {
        if self.eat_kw("host") {
            Ok(Level::Host)
        } else if self.eat_kw("core") {
            Ok(Level::Core)
        } else {
            self.error("`host` or `core`")
        }
    }

    pub fn decl(&mut self) -> PResult<Decl> {
        let span = self.span();
        let kind = match self.peek().clone() {
            Tok::Kw("theory") => {
                self.bump();
                DeclKind::Theory(self.ident()?)
            }
            Tok::Kw("import") => {
                self.bump();
                DeclKind::Import(self.ident()?)
            }
            Tok::Kw("type") => {
                self.bump();
                self.expect_kw("axiom")?;
                let level = self.level()?;
                let a = self.ty()?;
                self.expect(&Tok::Equals, "`=` in type axiom")?;
                let b = self.ty()?;
                DeclKind::TypeAxiom(level, a, b)
            }
            Tok::Kw("axiom") => {
                self.bump();
                let ctx = self.ctx()?;
                let lhs = self.expr()?;
                self.expect(&Tok::Equals, "`=` in axiom")?;
                let rhs = self.expr()?;
                let ty = self.opt_ty()?;
                DeclKind::Axiom { ctx, lhs, rhs, ty }
            }
            Tok::Kw("check") => {
                self.bump();
                let ctx = self.ctx()?;
                let expr = self.expr()?;
                let ty = self.opt_ty()?;
                DeclKind::Check { ctx, expr, ty }
            }
            Tok::Kw("eq") => {
                self.bump();
                let ctx = self.ctx()?;
                let lhs = self.expr()?;
                self.expect(&Tok::Equals, "`=` in equality")?;
                let rhs = self.expr()?;
                let ty = self.opt_ty()?;
                DeclKind::Eq { ctx, lhs, rhs, ty }
            }
            Tok::Kw("norm") => {
                self.bump();
                let ctx = self.ctx()?;
                DeclKind::Norm {
                    ctx,
                    expr: self.expr()?,
                }
            }
            Tok::Kw("term") => self.term_decl(None)?,
            Tok::Kw("host") | Tok::Kw("core") => {
                let level = self.level()?;
                match self.peek() {
                    Tok::Kw("type") => {
                        self.bump();
                        let mut names = vec![self.ident()?];
                        while self.eat(&Tok::Comma) {
                            names.push(self.ident()?);
                        }
                        DeclKind::BaseTypes(level, names)
                    }
                    Tok::Kw("const") => {
                        self.bump();
                        let name = if self.eat_kw("if") {
                            "if".to_string()
                        } else {
                            self.ident()?
                        };
                        match level {
                            Level::Host => {
                                let param = if self.eat(&Tok::LBracket) {
                                    let p = self.ident()?;
                                    self.expect(&Tok::RBracket, "`]`")?;
                                    Some(p)
                                } else {
                                    None
                                };
                                self.expect(&Tok::Colon, "`:` in constant declaration")?;
                                DeclKind::HostConst {
                                    name,
                                    param,
                                    ty: self.ty()?,
                                }
                            }
                            Level::Core => {
                                let params = if self.eat(&Tok::LParen) {
                                    let ps = self.entries(&[Tok::RParen])?;
                                    self.expect(&Tok::RParen, "`)`")?;
                                    ps
                                } else {
                                    Vec::new()
                                };
                                self.expect(&Tok::Colon, "`:` in constant declaration")?;
                                DeclKind::CoreConst {
                                    name,
                                    params,
                                    result: self.ty()?,
                                }
                            }
                        }
                    }
                    Tok::Kw("term") => self.term_decl(Some(level))?,
                    _ => return self.error("`type`, `const` or `term`"),
                }
            }
            _ => return self.error("a declaration"),
        };
        Ok(Decl { kind, span })
    }

    fn term_decl(&mut self, level: Option<Level>) -> PResult<DeclKind> {
        self.expect_kw("term")?;
        let name = self.ident()?;
        let params = if matches!(self.peek(), Tok::LParen) {
            self.bump();
            let ps = self.entries(&[Tok::RParen])?;
            self.expect(&Tok::RParen, "`)`")?;
            Some(ps)
        } else {
            None
        };
        let ty = self.opt_ty()?;
        self.expect(&Tok::Equals, "`=` in term definition")?;
        let body = self.expr()?;
        Ok(DeclKind::Term {
            name,
            level,
            params,
            ty,
            body,
        })
    }
}

pub fn parse(text: &str) -> Result<SourceFile, Diagnostic> {
    let mut p = Parser::new(text)?;
    let mut decls = Vec::new();
    while !p.at_eof() {
        decls.push(p.decl()?);
    }
    Ok(SourceFile { decls })
}

pub fn parse_expr(text: &str) -> Result<Expr, Diagnostic> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    if !p.at_eof() {
        return p.error("end of input");
    }
    Ok(e)
}

pub fn parse_type(text: &str) -> Result<TyExpr, Diagnostic> {
    let mut p = Parser::new(text)?;
    let t = p.ty()?;
    if !p.at_eof() {
        return p.error("end of input");
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn promote_over_variable() {
        let f = parse("core term id = promote(core a:A. a)").unwrap();
        match &f.decls[0].kind {
            DeclKind::Term { name, body, .. } => {
                assert_eq!(name, "id");
                assert_eq!(
                    body,
                    &Expr::Promote(
                        vec![("a".into(), TyExpr::Name("A".into()))],
                        Box::new(Expr::Ident("a".into()))
                    )
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn let_tensor_form() {
        let e = parse_expr("let a (x) b = f in h").unwrap();
        assert_eq!(
            e,
            Expr::Let(
                LetPattern::Pair("a".into(), "b".into()),
                Box::new(Expr::Ident("f".into())),
                Box::new(Expr::Ident("h".into()))
            )
        );
    }

    #[test]
    fn calls_need_adjacent_parenthesis() {
        assert_eq!(
            parse_expr("not(a)").unwrap(),
            Expr::Call("not".into(), vec![Expr::Ident("a".into())])
        );
        assert_eq!(
            parse_expr("f (a)").unwrap(),
            Expr::App(
                Box::new(Expr::Ident("f".into())),
                Box::new(Expr::Ident("a".into()))
            )
        );
    }

    #[test]
    fn types_associate_to_the_right() {
        let t = parse_type("A -> B -> Proof(Bit (x) Bit, Bit)").unwrap();
        match t {
            TyExpr::Arrow(_, rest) => assert!(matches!(*rest, TyExpr::Arrow(..))),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_spans() {
        let err = parse("check |- \\x:1 x").unwrap_err();
        assert!(err.span.is_some());
        assert!(err.message.contains("`.`"));
    }
}
