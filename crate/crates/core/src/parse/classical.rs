//! `3*q^2*p - 1/2*p^3`, with `{f, g}` for the Poisson bracket.

use num_bigint::BigInt;

use super::arith::{parse_all, sum, syntax, Grammar};
use super::lexer::{Cursor, Tok};
use crate::error::{Result, Span};
use crate::kernel::Rational;
use crate::weyl::{poisson_bracket, ClassicalPoly};

struct Classical;

impl Grammar for Classical {
    type Value = ClassicalPoly;

    fn from_int(&self, n: &BigInt) -> ClassicalPoly {
        ClassicalPoly::one().scale(&Rational::from_integer(n.clone()))
    }

    fn add(&self, a: &ClassicalPoly, b: &ClassicalPoly) -> Result<ClassicalPoly> {
        Ok(a.add(b))
    }

    fn mul(&self, a: &ClassicalPoly, b: &ClassicalPoly) -> Result<ClassicalPoly> {
        Ok(a.mul(b))
    }

    fn neg(&self, a: &ClassicalPoly) -> ClassicalPoly {
        a.scale(&Rational::from_integer((-1).into()))
    }

    fn div(&self, a: &ClassicalPoly, b: &ClassicalPoly, at: Span) -> Result<ClassicalPoly> {
        match b.as_monomial() {
            Some(((0, 0), c)) => Ok(a.scale(&c.recip())),
            _ => Err(syntax(at, "can only divide by a nonzero number")),
        }
    }

    fn pow(&self, a: &ClassicalPoly, k: i64, at: Span) -> Result<ClassicalPoly> {
        let k = u32::try_from(k).map_err(|_| syntax(at, "negative exponent"))?;
        Ok(a.pow(k))
    }

    fn primary(&mut self, c: &mut Cursor) -> Result<Option<ClassicalPoly>> {
        match c.peek().clone() {
            Tok::Ident(s) if s == "q" => {
                c.next();
                Ok(Some(ClassicalPoly::q()))
            }
            Tok::Ident(s) if s == "p" => {
                c.next();
                Ok(Some(ClassicalPoly::p()))
            }
            Tok::Ident(s) => Err(c.error(format!("unknown variable `{s}` (expected q or p)"))),
            Tok::LBrace => {
                c.next();
                let f = sum(self, c)?;
                c.expect(&Tok::Comma)?;
                let g = sum(self, c)?;
                c.expect(&Tok::RBrace)?;
                Ok(Some(poisson_bracket(&f, &g)))
            }
            _ => Ok(None),
        }
    }
}

pub fn parse_classical(src: &str) -> Result<ClassicalPoly> {
    parse_all(&mut Classical, src)
}
