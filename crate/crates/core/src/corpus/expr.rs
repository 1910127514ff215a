//! Polynomial expressions: integers, rationals `a/b`, variables, `+ - * ^`,
//! parentheses and unary minus. `^` binds tightest, so `-x^2` is `-(x^2)`.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::poly::{LocalPolynomial, RingContext};

use super::ParseError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("`{n}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Open => "`(`".into(),
            Tok::Close => "`)`".into(),
            Tok::End => "end of expression".into(),
        }
    }
}

/// Position of the first character of the expression in the source file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Origin {
    pub line: usize,
    pub column: usize,
}

impl Default for Origin {
    fn default() -> Self {
        Origin { line: 1, column: 1 }
    }
}

fn lex(src: &str, origin: Origin) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::Open,
            ')' => Tok::Close,
            '0'..='9' => {
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..=i].iter().collect();
                Tok::Int(digits.parse().expect("ascii digits"))
            }
            c if c.is_alphabetic() || c == '_' => {
                while i + 1 < chars.len() && (chars[i + 1].is_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                Tok::Ident(chars[start..=i].iter().collect())
            }
            other => return Err(error_at(origin, start, format!("unexpected character `{other}`"))),
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

fn error_at(origin: Origin, offset: usize, message: String) -> ParseError {
    ParseError {
        line: origin.line,
        column: origin.column + offset,
        message,
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    /// Index of the most recently consumed token.
    last: usize,
    ctx: &'a Arc<RingContext>,
    origin: Origin,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        self.last = self.pos;
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: String) -> ParseError {
        error_at(self.origin, self.toks[self.pos].1, message)
    }

    fn error_prev(&self, message: String) -> ParseError {
        error_at(self.origin, self.toks[self.last].1, message)
    }

    fn lift(&self, r: crate::error::Result<LocalPolynomial>) -> Result<LocalPolynomial, ParseError> {
        r.map_err(|e| self.error_prev(e.to_string()))
    }

    fn expr(&mut self) -> Result<LocalPolynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.next();
                    let rhs = self.term()?;
                    acc = self.lift(acc.add(&rhs))?;
                }
                Tok::Minus => {
                    self.next();
                    let rhs = self.term()?;
                    acc = self.lift(acc.sub(&rhs))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LocalPolynomial, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.next();
            let rhs = self.unary()?;
            acc = self.lift(acc.mul(&rhs))?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<LocalPolynomial, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.next();
                Ok(self.unary()?.neg())
            }
            Tok::Plus => {
                self.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<LocalPolynomial, ParseError> {
        let mut base = self.primary()?;
        while *self.peek() == Tok::Caret {
            self.next();
            match self.next() {
                Tok::Int(n) => {
                    let e: u32 = u32::try_from(&n)
                        .ok()
                        .filter(|&e| e <= u16::MAX as u32)
                        .ok_or_else(|| self.error_prev(format!("exponent {n} is too large")))?;
                    base = base.pow(e);
                }
                Tok::Minus => return Err(self.error_prev("negative exponents are not allowed".into())),
                other => {
                    return Err(self.error_prev(format!(
                        "expected a non-negative integer exponent, found {}",
                        other.describe()
                    )))
                }
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<LocalPolynomial, ParseError> {
        match self.next() {
            Tok::Int(n) => {
                let field = self.ctx.field();
                let c = if *self.peek() == Tok::Slash {
                    self.next();
                    let Tok::Int(d) = self.next() else {
                        return Err(self.error_prev("expected an integer denominator after `/`".into()));
                    };
                    field.from_ratio(&n, &d).map_err(|e| self.error_prev(e.to_string()))?
                } else {
                    field.from_bigint(&n)
                };
                Ok(LocalPolynomial::constant(self.ctx, c))
            }
            Tok::Ident(name) => match self.ctx.var_index(&name) {
                Some(i) => self.lift(LocalPolynomial::variable(self.ctx, i)),
                None => Err(self.error_prev(format!("unknown variable `{name}`"))),
            },
            Tok::Open => {
                let inner = self.expr()?;
                match self.next() {
                    Tok::Close => Ok(inner),
                    other => Err(self.error_prev(format!("expected `)`, found {}", other.describe()))),
                }
            }
            Tok::Slash => Err(self.error_prev("`/` is only allowed inside a rational literal `a/b`".into())),
            other => Err(self.error_prev(format!(
                "expected a number, variable or `(`, found {}",
                other.describe()
            ))),
        }
    }
}

/// Parses `src` into a polynomial over `ctx`; `origin` locates it for diagnostics.
pub fn parse_polynomial_at(src: &str, ctx: &Arc<RingContext>, origin: Origin) -> Result<LocalPolynomial, ParseError> {
    let toks = lex(src, origin)?;
    let mut p = Parser {
        toks,
        pos: 0,
        last: 0,
        ctx,
        origin,
    };
    let value = p.expr()?;
    match p.peek() {
        Tok::End => Ok(value),
        Tok::Slash => Err(p.error("`/` is only allowed inside a rational literal `a/b`".into())),
        Tok::Ident(_) | Tok::Int(_) | Tok::Open => Err(p.error(format!(
            "expected an operator, found {} (write `*` for products)",
            p.peek().describe()
        ))),
        other => Err(p.error(format!("unexpected {}", other.describe()))),
    }
}

pub fn parse_polynomial(src: &str, ctx: &Arc<RingContext>) -> Result<LocalPolynomial, ParseError> {
    parse_polynomial_at(src, ctx, Origin::default())
}
