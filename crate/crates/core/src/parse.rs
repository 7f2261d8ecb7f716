//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := ('+' | '-') factor | power
//! power  := atom ('^' INT)?
//! atom   := INT ('/' INT)? | 'x' INT | '(' expr ')'
//! ```
//!
//! Implicit multiplication is rejected. Vector fields additionally accept the
//! derivation atoms `∂k` / `dk`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};
use crate::rational::Rational;

/// Syntax error with a 0-based character position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at column {}", self.message, self.position + 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Deriv(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(v) => write!(f, "number {v}"),
            Tok::Var(i) => write!(f, "variable x{i}"),
            Tok::Deriv(i) => write!(f, "derivation ∂{i}"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str, derivations: bool) -> std::result::Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut pos = 0;
    let digits_at = |start: usize| -> (usize, String) {
        let mut end = start;
        while end < chars.len() && chars[end].is_ascii_digit() {
            end += 1;
        }
        (end, chars[start..end].iter().collect())
    };
    while pos < chars.len() {
        let c = chars[pos];
        if c.is_whitespace() {
            pos += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((pos, tok));
            pos += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let (end, s) = digits_at(pos);
            out.push((pos, Tok::Int(BigInt::from_str(&s).unwrap())));
            pos = end;
            continue;
        }
        let is_deriv = c == '∂' || c == 'd';
        if c == 'x' || (derivations && is_deriv) {
            let (end, s) = digits_at(pos + 1);
            if s.is_empty() {
                return Err(ParseError::new(pos, format!("expected index after '{c}'")));
            }
            let index = s
                .parse::<usize>()
                .map_err(|_| ParseError::new(pos, "index too large"))?;
            out.push((pos, if c == 'x' { Tok::Var(index) } else { Tok::Deriv(index) }));
            pos = end;
            continue;
        }
        return Err(ParseError::new(pos, format!("unexpected character '{c}'")));
    }
    out.push((chars.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    n: usize,
    /// Dimension of the polynomial ring being built (`n`, or `2n` when
    /// derivations are admitted as extra variables).
    ring: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> std::result::Result<T, ParseError> {
        Err(ParseError::new(self.pos(), msg))
    }

    fn expr(&mut self) -> std::result::Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc += &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc -= &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> std::result::Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> std::result::Result<Poly, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-self.factor()?)
            }
            Tok::Plus => {
                self.bump();
                self.factor()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> std::result::Result<Poly, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        match self.bump() {
            Tok::Int(k) => {
                let k = k
                    .to_u32()
                    .ok_or_else(|| ParseError::new(pos, "exponent too large"))?;
                Ok(base.pow(k))
            }
            other => Err(ParseError::new(
                pos,
                format!("expected non-negative integer exponent, found {other}"),
            )),
        }
    }

    fn atom(&mut self) -> std::result::Result<Poly, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(p) => {
                let mut value = Rational::from_integer(p);
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let qpos = self.pos();
                    match self.bump() {
                        Tok::Int(q) if !q.is_zero() => {
                            value /= Rational::from_integer(q);
                        }
                        Tok::Int(_) => {
                            return Err(ParseError::new(qpos, "malformed rational: zero denominator"))
                        }
                        other => {
                            return Err(ParseError::new(
                                qpos,
                                format!("malformed rational: expected denominator, found {other}"),
                            ))
                        }
                    }
                }
                Ok(Poly::constant(self.ring, value))
            }
            Tok::Var(i) => {
                if i == 0 || i > self.n {
                    return Err(ParseError::new(
                        pos,
                        format!("variable x{i} out of range for n={}", self.n),
                    ));
                }
                Ok(Poly::monomial(
                    self.ring,
                    Monomial::var(self.ring, i - 1),
                    Rational::one(),
                ))
            }
            Tok::Deriv(i) => {
                if i == 0 || i > self.n {
                    return Err(ParseError::new(
                        pos,
                        format!("derivation ∂{i} out of range for n={}", self.n),
                    ));
                }
                Ok(Poly::monomial(
                    self.ring,
                    Monomial::var(self.ring, self.n + i - 1),
                    Rational::one(),
                ))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.err(format!("expected ')', found {}", self.peek()));
                }
                self.bump();
                Ok(inner)
            }
            other => Err(ParseError::new(pos, format!("unexpected {other}"))),
        }
    }

    fn finish(&mut self) -> std::result::Result<(), ParseError> {
        match self.peek() {
            Tok::End => Ok(()),
            Tok::Slash => self.err("division is only allowed inside a rational literal"),
            Tok::Int(_) | Tok::Var(_) | Tok::Deriv(_) | Tok::LParen => {
                self.err("implicit multiplication is not allowed; use '*'")
            }
            other => self.err(format!("unexpected {other}")),
        }
    }
}

fn parse_in_ring(text: &str, n: usize, derivations: bool) -> std::result::Result<Poly, ParseError> {
    let toks = lex(text, derivations)?;
    let ring = if derivations { 2 * n } else { n };
    let mut parser = Parser {
        toks,
        at: 0,
        n,
        ring,
    };
    if *parser.peek() == Tok::End {
        return parser.err("empty expression");
    }
    let poly = parser.expr()?;
    parser.finish()?;
    Ok(poly)
}

/// Parses a polynomial in `x1..xn`.
pub fn parse_poly(text: &str, n: usize) -> std::result::Result<Poly, ParseError> {
    parse_in_ring(text, n, false)
}

/// Parses a vector field written as `Σ coefficient * ∂k` (or `dk`), returning
/// its `n` component polynomials.
pub fn parse_vector_field(text: &str, n: usize) -> Result<Vec<Poly>> {
    let poly = parse_in_ring(text, n, true)?;
    let mut components = vec![Poly::zero(n); n];
    for (m, c) in poly.terms() {
        let (coords, derivs) = m.exponents().split_at(n);
        let order: u32 = derivs.iter().sum();
        if order != 1 {
            return Err(Error::NotAVectorField(format!(
                "term of order {order} in the derivations in {text:?}"
            )));
        }
        let k = derivs.iter().position(|&e| e == 1).unwrap();
        components[k] += &Poly::monomial(n, Monomial::from_exponents(coords), c.clone());
    }
    Ok(components)
}
