//! Shared `+ - * / ^` layer for the grammars. Each grammar supplies its
//! value type and its own primaries.

use num_bigint::BigInt;

use super::lexer::{Cursor, Tok};
use crate::error::{Error, Result, Span};

pub trait Grammar {
    type Value: Clone;

    fn from_int(&self, n: &BigInt) -> Self::Value;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn neg(&self, a: &Self::Value) -> Self::Value;
    fn div(&self, a: &Self::Value, b: &Self::Value, at: Span) -> Result<Self::Value>;
    fn pow(&self, a: &Self::Value, k: i64, at: Span) -> Result<Self::Value>;

    /// Grammar-specific primary; `None` if the next token does not start one.
    fn primary(&mut self, c: &mut Cursor) -> Result<Option<Self::Value>>;

    /// Whether `^` after a primary is an exponent (tensors consume their own).
    fn caret_is_power(&self) -> bool {
        true
    }
}

pub fn sum<G: Grammar>(g: &mut G, c: &mut Cursor) -> Result<G::Value> {
    let mut acc = product(g, c)?;
    loop {
        if c.eat(&Tok::Plus) {
            let rhs = product(g, c)?;
            acc = g.add(&acc, &rhs)?;
        } else if c.eat(&Tok::Minus) {
            let rhs = product(g, c)?;
            acc = g.add(&acc, &g.neg(&rhs))?;
        } else {
            return Ok(acc);
        }
    }
}

fn starts_primary(t: &Tok) -> bool {
    matches!(t, Tok::Int(_) | Tok::Ident(_) | Tok::LParen | Tok::LBrace | Tok::LBrack)
}

pub fn product<G: Grammar>(g: &mut G, c: &mut Cursor) -> Result<G::Value> {
    let mut acc = unary(g, c)?;
    loop {
        if c.eat(&Tok::Star) {
            let rhs = unary(g, c)?;
            acc = g.mul(&acc, &rhs)?;
        } else if *c.peek() == Tok::Slash {
            let at = c.span();
            c.next();
            let rhs = unary(g, c)?;
            acc = g.div(&acc, &rhs, at)?;
        } else if starts_primary(c.peek()) {
            let rhs = power(g, c)?;
            acc = g.mul(&acc, &rhs)?;
        } else {
            return Ok(acc);
        }
    }
}

pub fn unary<G: Grammar>(g: &mut G, c: &mut Cursor) -> Result<G::Value> {
    if c.eat(&Tok::Minus) {
        let v = unary(g, c)?;
        return Ok(g.neg(&v));
    }
    if c.eat(&Tok::Plus) {
        return unary(g, c);
    }
    power(g, c)
}

pub fn power<G: Grammar>(g: &mut G, c: &mut Cursor) -> Result<G::Value> {
    let base = atom(g, c)?;
    if g.caret_is_power() && *c.peek() == Tok::Caret {
        let at = c.span();
        c.next();
        let k = exponent(c)?;
        return g.pow(&base, k, at);
    }
    Ok(base)
}

pub fn exponent(c: &mut Cursor) -> Result<i64> {
    let neg = c.eat(&Tok::Minus);
    match c.next() {
        Tok::Int(n) => {
            let k: i64 = n.try_into().map_err(|_| c.error("exponent too large"))?;
            Ok(if neg { -k } else { k })
        }
        other => Err(c.error(format!("expected an integer exponent, found {other}"))),
    }
}

pub fn atom<G: Grammar>(g: &mut G, c: &mut Cursor) -> Result<G::Value> {
    match c.peek().clone() {
        Tok::Int(n) => {
            c.next();
            Ok(g.from_int(&n))
        }
        Tok::LParen => {
            c.next();
            let v = sum(g, c)?;
            c.expect(&Tok::RParen)?;
            Ok(v)
        }
        _ => match g.primary(c)? {
            Some(v) => Ok(v),
            None => Err(c.error(format!("unexpected {}", c.peek()))),
        },
    }
}

/// Parses a complete source string with grammar `g`.
pub fn parse_all<G: Grammar>(g: &mut G, src: &str) -> Result<G::Value> {
    let mut c = Cursor::new(src)?;
    let v = sum(g, &mut c)?;
    c.finish()?;
    Ok(v)
}

pub fn syntax(at: Span, message: impl Into<String>) -> Error {
    Error::Syntax { span: at, message: message.into() }
}
