//! Tokenizer and affine-expression parser shared by every text format
//! the toolkit reads (programs, measure lists, invariant files).

use std::fmt;

use thiserror::Error;

use crate::affine::Affine;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl SyntaxError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        SyntaxError {
            line,
            col,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    /// Identifier, possibly primed (`x'`).
    Ident { name: String, primed: bool },
    Int(i64),
    Colon,
    Assign,
    Gt,
    Ge,
    Lt,
    Le,
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    Comma,
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident { name, primed } => {
                write!(f, "`{name}{}`", if *primed { "'" } else { "" })
            }
            Tok::Int(v) => write!(f, "`{v}`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Assign => f.write_str("`:=`"),
            Tok::Gt => f.write_str("`>`"),
            Tok::Ge => f.write_str("`>=`"),
            Tok::Lt => f.write_str("`<`"),
            Tok::Le => f.write_str("`<=`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Newline => f.write_str("end of line"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// Splits ASCII text into tokens. `#` starts a comment running to end of
/// line. Newlines are kept as tokens, consecutive ones collapsed.
pub fn tokenize(text: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut out: Vec<Token> = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut line = 1;
    let mut line_start = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let col = i - line_start + 1;
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line, col });
        match b {
            b'\n' => {
                if !matches!(out.last().map(|t| &t.tok), Some(Tok::Newline) | None) {
                    push(&mut out, Tok::Newline);
                }
                i += 1;
                line += 1;
                line_start = i;
            }
            b' ' | b'\t' | b'\r' => i += 1,
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v: i64 = text[start..i]
                    .parse()
                    .map_err(|_| SyntaxError::new(line, col, "integer literal out of range"))?;
                push(&mut out, Tok::Int(v));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let name = text[start..i].to_string();
                let primed = i < bytes.len() && bytes[i] == b'\'';
                if primed {
                    i += 1;
                }
                push(&mut out, Tok::Ident { name, primed });
            }
            _ => {
                let two = bytes.get(i + 1).copied();
                let (tok, len) = match (b, two) {
                    (b':', Some(b'=')) => (Tok::Assign, 2),
                    (b'>', Some(b'=')) => (Tok::Ge, 2),
                    (b'<', Some(b'=')) => (Tok::Le, 2),
                    (b':', _) => (Tok::Colon, 1),
                    (b'>', _) => (Tok::Gt, 1),
                    (b'<', _) => (Tok::Lt, 1),
                    (b'+', _) => (Tok::Plus, 1),
                    (b'-', _) => (Tok::Minus, 1),
                    (b'*', _) => (Tok::Star, 1),
                    (b'(', _) => (Tok::LParen, 1),
                    (b')', _) => (Tok::RParen, 1),
                    (b',', _) => (Tok::Comma, 1),
                    _ => {
                        let ch = text[i..].chars().next().unwrap_or('?');
                        return Err(SyntaxError::new(
                            line,
                            col,
                            format!("unexpected character {ch:?}"),
                        ));
                    }
                };
                push(&mut out, tok);
                i += len;
            }
        }
    }
    let col = i - line_start + 1;
    if !matches!(out.last().map(|t| &t.tok), Some(Tok::Newline) | None) {
        out.push(Token {
            tok: Tok::Newline,
            line,
            col,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// Cursor over a token vector.
pub struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

impl Cursor {
    pub fn new(toks: Vec<Token>) -> Self {
        Cursor { toks, pos: 0 }
    }

    pub fn peek(&self) -> &Token {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    pub fn peek_at(&self, ahead: usize) -> &Tok {
        &self.toks[(self.pos + ahead).min(self.toks.len() - 1)].tok
    }

    pub fn next(&mut self) -> Token {
        let t = self.peek().clone();
        if self.pos < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn error(&self, message: impl Into<String>) -> SyntaxError {
        let t = self.peek();
        SyntaxError::new(t.line, t.col, message)
    }

    pub fn expect(&mut self, tok: &Tok, what: &str) -> Result<Token, SyntaxError> {
        if &self.peek().tok == tok {
            Ok(self.next())
        } else {
            Err(self.error(format!("expected {what}, found {}", self.peek().tok)))
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<Token, SyntaxError> {
        match &self.peek().tok {
            Tok::Ident { name, primed: false } if name == kw => Ok(self.next()),
            other => Err(self.error(format!("expected `{kw}`, found {other}"))),
        }
    }

    pub fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident { name, primed: false } if name == kw)
    }

    pub fn expect_ident(&mut self) -> Result<(String, Token), SyntaxError> {
        match &self.peek().tok {
            Tok::Ident {
                name,
                primed: false,
            } => {
                let name = name.clone();
                Ok((name, self.next()))
            }
            other => Err(self.error(format!("expected identifier, found {other}"))),
        }
    }

    /// Integer literal with an optional leading minus.
    pub fn expect_int(&mut self) -> Result<i64, SyntaxError> {
        let neg = self.eat(&Tok::Minus);
        match self.peek().tok {
            Tok::Int(v) => {
                self.next();
                Ok(if neg { -v } else { v })
            }
            ref other => Err(self.error(format!("expected integer, found {other}"))),
        }
    }

    pub fn skip_newlines(&mut self) {
        while self.eat(&Tok::Newline) {}
    }
}

/// Maps an identifier occurrence to a variable slot.
pub trait Resolve {
    fn arity(&self) -> usize;
    fn resolve(&self, name: &str, primed: bool) -> Option<usize>;
}

/// Plain variable list, no primes.
pub struct Vars<'a>(pub &'a [String]);

impl Resolve for Vars<'_> {
    fn arity(&self) -> usize {
        self.0.len()
    }
    fn resolve(&self, name: &str, primed: bool) -> Option<usize> {
        if primed {
            return None;
        }
        self.0.iter().position(|v| v == name)
    }
}

/// Pre-state slots `0..n`, post-state (primed) slots `n..2n`.
pub struct PrePost<'a>(pub &'a [String]);

impl Resolve for PrePost<'_> {
    fn arity(&self) -> usize {
        2 * self.0.len()
    }
    fn resolve(&self, name: &str, primed: bool) -> Option<usize> {
        let v = self.0.iter().position(|v| v == name)?;
        Some(if primed { v + self.0.len() } else { v })
    }
}

/// `affine := ["-"] term (("+"|"-") term)*`, `term := INT | IDENT | INT "*" IDENT`.
pub fn parse_affine(cur: &mut Cursor, vars: &dyn Resolve) -> Result<Affine, SyntaxError> {
    let mut acc = Affine::zero(vars.arity());
    let mut sign = if cur.eat(&Tok::Minus) { -1 } else { 1 };
    loop {
        parse_term(cur, vars, sign, &mut acc)?;
        if cur.eat(&Tok::Plus) {
            sign = 1;
        } else if cur.eat(&Tok::Minus) {
            sign = -1;
        } else {
            return Ok(acc);
        }
    }
}

fn parse_term(
    cur: &mut Cursor,
    vars: &dyn Resolve,
    sign: i64,
    acc: &mut Affine,
) -> Result<(), SyntaxError> {
    let t = cur.next();
    match t.tok {
        Tok::Int(k) => {
            if cur.eat(&Tok::Star) {
                let v = resolve_ident(cur, vars)?;
                acc.coeffs[v] += sign * k;
            } else {
                acc.constant += sign * k;
            }
            Ok(())
        }
        Tok::Ident { ref name, primed } => {
            let v = vars.resolve(name, primed).ok_or_else(|| {
                SyntaxError::new(t.line, t.col, format!("undeclared variable {}", t.tok))
            })?;
            acc.coeffs[v] += sign;
            Ok(())
        }
        other => Err(SyntaxError::new(
            t.line,
            t.col,
            format!("expected term, found {other}"),
        )),
    }
}

fn resolve_ident(cur: &mut Cursor, vars: &dyn Resolve) -> Result<usize, SyntaxError> {
    let t = cur.next();
    match t.tok {
        Tok::Ident { ref name, primed } => vars.resolve(name, primed).ok_or_else(|| {
            SyntaxError::new(t.line, t.col, format!("undeclared variable {}", t.tok))
        }),
        other => Err(SyntaxError::new(
            t.line,
            t.col,
            format!("expected identifier, found {other}"),
        )),
    }
}

/// Comma-separated affine expressions over `vars`, e.g. `"x, y, x+y"`.
pub fn parse_affine_list(text: &str, vars: &[String]) -> Result<Vec<Affine>, SyntaxError> {
    let mut cur = Cursor::new(tokenize(text)?);
    cur.skip_newlines();
    let mut out = vec![parse_affine(&mut cur, &Vars(vars))?];
    while cur.eat(&Tok::Comma) {
        out.push(parse_affine(&mut cur, &Vars(vars))?);
    }
    cur.skip_newlines();
    if cur.peek().tok != Tok::Eof {
        return Err(cur.error(format!("unexpected {}", cur.peek().tok)));
    }
    Ok(out)
}
