//! Text syntax for trace polynomials.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := ["-"] power
//! power  := primary ("^" INT)*
//! primary:= NUMBER | "i" | "tr" "(" word ")" | "X" INT | "(" expr ")"
//! word   := atom ("*" atom)*
//! atom   := "X" INT ("^" INT)*
//! ```
//!
//! Generators are written 1-based (`X1` is the first). Bare `X` atoms outside a trace are only
//! accepted by [`parse_operator_expression`]. `i` is the imaginary unit, so the coefficient form
//! `(0.5-2*i)` produced by `Display` parses back.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ncpoly::GenWord;
use crate::tracepoly::{OperatorTracePoly, ScalarTracePoly};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Number(f64),
    Imag,
    /// 0-based generator index.
    Gen(usize),
    Trace(GenWord),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    /// Whether a bare generator occurs outside every trace.
    pub fn has_operator_part(&self) -> bool {
        match self {
            Expr::Gen(_) => true,
            Expr::Number(_) | Expr::Imag | Expr::Trace(_) => false,
            Expr::Neg(a) | Expr::Pow(a, _) => a.has_operator_part(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.has_operator_part() || b.has_operator_part(),
        }
    }

    pub fn to_operator(&self, m: usize) -> Result<OperatorTracePoly> {
        Ok(match self {
            Expr::Number(x) => OperatorTracePoly::constant(m, *x),
            Expr::Imag => OperatorTracePoly::constant(m, Complex64::i()),
            Expr::Gen(j) => OperatorTracePoly::generator(m, *j)?,
            Expr::Trace(w) => OperatorTracePoly::from_scalar(&ScalarTracePoly::trace_word(m, w)?),
            Expr::Neg(a) => a.to_operator(m)?.scale(-1.0),
            Expr::Add(a, b) => a.to_operator(m)?.try_add(&b.to_operator(m)?)?,
            Expr::Sub(a, b) => a.to_operator(m)?.try_sub(&b.to_operator(m)?)?,
            Expr::Mul(a, b) => a.to_operator(m)?.try_mul(&b.to_operator(m)?)?,
            Expr::Pow(a, k) => {
                let base = a.to_operator(m)?;
                let mut acc = OperatorTracePoly::constant(m, 1.0);
                for _ in 0..*k {
                    acc = acc.try_mul(&base)?;
                }
                acc
            }
        })
    }

    pub fn to_scalar(&self, m: usize) -> Result<ScalarTracePoly> {
        Ok(match self {
            Expr::Number(x) => ScalarTracePoly::constant(m, *x),
            Expr::Imag => ScalarTracePoly::constant(m, Complex64::i()),
            Expr::Gen(_) => {
                return Err(Error::InvalidParameter("generator outside a trace in a scalar expression".into()))
            }
            Expr::Trace(w) => ScalarTracePoly::trace_word(m, w)?,
            Expr::Neg(a) => a.to_scalar(m)?.scale(-1.0),
            Expr::Add(a, b) => a.to_scalar(m)?.try_add(&b.to_scalar(m)?)?,
            Expr::Sub(a, b) => a.to_scalar(m)?.try_sub(&b.to_scalar(m)?)?,
            Expr::Mul(a, b) => a.to_scalar(m)?.try_mul(&b.to_scalar(m)?)?,
            Expr::Pow(a, k) => a.to_scalar(m)?.pow(*k),
        })
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    m: usize,
    allow_bare: bool,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self.describe_here();
            self.err(self.pos, format!("expected `{}`, found {found}", c as char))
        }
    }

    fn describe_here(&mut self) -> String {
        match self.peek() {
            Some(c) => format!("`{}`", c as char),
            None => "end of input".into(),
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let end = self.pos + kw.len();
        if self.src.get(self.pos..end) == Some(kw.as_bytes())
            && !self.src.get(end).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos = end;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<(usize, u64)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            let found = self.describe_here();
            return self.err(start, format!("expected an integer, found {found}"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        match text.parse::<u64>() {
            Ok(v) => Ok((start, v)),
            Err(_) => self.err(start, "integer too large"),
        }
    }

    fn exponent(&mut self) -> Result<u32> {
        let (pos, k) = self.integer()?;
        if k == 0 || k > 64 {
            return self.err(pos, format!("exponent must be between 1 and 64, got {k}"));
        }
        Ok(k as u32)
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            return self.err(start, "malformed number");
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
                return self.err(save, "malformed exponent");
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<f64>().or_else(|_| self.err(start, "malformed number"))
    }

    /// `X<k>`, returning the 0-based index.
    fn generator(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) != Some(&b'X') {
            let found = self.describe_here();
            return self.err(start, format!("expected a generator `X<k>`, found {found}"));
        }
        self.pos += 1;
        if !self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            return self.err(self.pos, "generator index must follow `X` directly");
        }
        let (_, k) = self.integer()?;
        if k == 0 || k as usize > self.m {
            return Err(Error::GeneratorOutOfRange { index: k as usize, m: self.m });
        }
        Ok(k as usize - 1)
    }

    fn word(&mut self) -> Result<GenWord> {
        let mut letters = Vec::new();
        loop {
            let j = self.generator()?;
            let mut reps = 1usize;
            while self.eat(b'^') {
                reps *= self.exponent()? as usize;
            }
            letters.extend(std::iter::repeat(j as u8).take(reps));
            if !self.eat(b'*') {
                break;
            }
        }
        Ok(GenWord::new(letters))
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'.' => Ok(Expr::Number(self.number()?)),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'X') => {
                let at = self.pos;
                let j = self.generator()?;
                if !self.allow_bare {
                    return self.err(at, "generators must appear inside tr(...) in a scalar expression");
                }
                Ok(Expr::Gen(j))
            }
            _ => {
                if self.keyword("tr") {
                    self.expect(b'(')?;
                    if self.peek() == Some(b')') {
                        return self.err(self.pos, "empty trace");
                    }
                    let w = self.word()?;
                    self.expect(b')')?;
                    Ok(Expr::Trace(w))
                } else if self.keyword("i") {
                    Ok(Expr::Imag)
                } else {
                    let found = self.describe_here();
                    self.err(self.pos, format!("expected a number, `tr(`, `i` or `(`, found {found}"))
                }
            }
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let mut e = self.primary()?;
        while self.eat(b'^') {
            e = Expr::Pow(Box::new(e), self.exponent()?);
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            Ok(Expr::Neg(Box::new(self.factor()?)))
        } else {
            self.power()
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.factor()?;
        while self.eat(b'*') {
            e = Expr::Mul(Box::new(e), Box::new(self.factor()?));
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        loop {
            if self.eat(b'+') {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat(b'-') {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }
}

/// Syntax tree of a scalar (`allow_bare = false`) or operator expression.
pub fn parse_ast(src: &str, m: usize, allow_bare: bool) -> Result<Expr> {
    if m == 0 || m > 255 {
        return Err(Error::InvalidParameter(format!("generator count must be in 1..=255, got {m}")));
    }
    let mut p = Parser { src: src.as_bytes(), pos: 0, m, allow_bare };
    let e = p.expr()?;
    if p.peek().is_some() {
        let found = p.describe_here();
        return p.err(p.pos, format!("unexpected {found}"));
    }
    Ok(e)
}

pub fn parse_expression(src: &str, m: usize) -> Result<ScalarTracePoly> {
    parse_ast(src, m, false)?.to_scalar(m)
}

pub fn parse_operator_expression(src: &str, m: usize) -> Result<OperatorTracePoly> {
    parse_ast(src, m, true)?.to_operator(m)
}

/// A single word such as `X1*X2^2`, as used for moment requests.
pub fn parse_word(src: &str, m: usize) -> Result<GenWord> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, m, allow_bare: true };
    let w = p.word()?;
    if p.peek().is_some() {
        let found = p.describe_here();
        return p.err(p.pos, format!("unexpected {found}"));
    }
    Ok(w)
}
