use crate::diag::{Diagnostic, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Kw(&'static str),
    /// `(x)`, the tensor symbol
    Otimes,
    LParen,
    RParen,
    LAngle,
    RAngle,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Colon,
    Backslash,
    Arrow,
    Star,
    Equals,
    Bar,
    Turnstile,
    At,
    Slash,
    Eof,
}

pub const KEYWORDS: &[&str] = &[
    "let", "in", "if", "then", "else", "promote", "derelict", "core", "host", "type", "const",
    "term", "check", "eq", "axiom", "import", "theory", "fst", "snd", "bullet", "Proof", "norm",
];

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
    /// Whether whitespace or a comment separates this token from the previous one.
    pub spaced: bool,
}

fn is_ident_char(c: char) -> bool {
    (c.is_alphanumeric() && c != 'λ') || c == '_' || c == '\''
}

pub fn lex(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut spaced = true;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            spaced = true;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            spaced = true;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            spaced = true;
            continue;
        }
        let start = col;
        let (tok, len) = if is_ident_char(c) {
            let mut j = i;
            while j < chars.len() && is_ident_char(chars[j]) {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let tok = match KEYWORDS.iter().find(|k| **k == word) {
                Some(k) => Tok::Kw(k),
                None => Tok::Ident(word),
            };
            (tok, j - i)
        } else {
            let next = chars.get(i + 1).copied();
            match c {
                // `f(x)` directly after a name or `)` is an application
                '(' if next == Some('x') && chars.get(i + 2) == Some(&')') && !glued(&chars, i) => {
                    (Tok::Otimes, 3)
                }
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '<' => (Tok::LAngle, 1),
                '>' => (Tok::RAngle, 1),
                '[' => (Tok::LBracket, 1),
                ']' => (Tok::RBracket, 1),
                ',' => (Tok::Comma, 1),
                '.' => (Tok::Dot, 1),
                ':' => (Tok::Colon, 1),
                '\\' | 'λ' => (Tok::Backslash, 1),
                '-' if next == Some('>') => (Tok::Arrow, 2),
                '*' => (Tok::Star, 1),
                '=' => (Tok::Equals, 1),
                '|' if next == Some('-') => (Tok::Turnstile, 2),
                '|' => (Tok::Bar, 1),
                '@' => (Tok::At, 1),
                '/' => (Tok::Slash, 1),
                other => {
                    return Err(
                        Diagnostic::error(format!("unexpected character `{other}`")).at(Span {
                            line,
                            col_start: col,
                            col_end: col + 1,
                        }),
                    )
                }
            }
        };
        out.push(Token {
            tok,
            span: Span {
                line,
                col_start: start,
                col_end: start + len,
            },
            spaced,
        });
        spaced = false;
        i += len;
        col += len;
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span {
            line,
            col_start: col,
            col_end: col,
        },
        spaced: true,
    });
    Ok(out)
}

fn glued(chars: &[char], i: usize) -> bool {
    i > 0 && (is_ident_char(chars[i - 1]) || matches!(chars[i - 1], ')' | ']' | '>'))
}
