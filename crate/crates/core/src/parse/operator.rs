//! `qh^2*ph + i*qh`; `I` is the identity and a bare number is a multiple
//! of it. `[A, B]` is the commutator.

use num_bigint::BigInt;

use super::arith::{parse_all, sum, syntax, Grammar};
use super::lexer::{Cursor, Tok};
use crate::error::{Result, Span};
use crate::kernel::{Coefficient, GaussianRational, Rational};
use crate::weyl::{commutator, WeylElement};

struct Operator;

impl Grammar for Operator {
    type Value = WeylElement;

    fn from_int(&self, n: &BigInt) -> WeylElement {
        WeylElement::identity().scale_real(&Rational::from_integer(n.clone()))
    }

    fn add(&self, a: &WeylElement, b: &WeylElement) -> Result<WeylElement> {
        Ok(a.add(b))
    }

    fn mul(&self, a: &WeylElement, b: &WeylElement) -> Result<WeylElement> {
        Ok(a.mul(b))
    }

    fn neg(&self, a: &WeylElement) -> WeylElement {
        a.scale_real(&Rational::from_integer((-1).into()))
    }

    fn div(&self, a: &WeylElement, b: &WeylElement, at: Span) -> Result<WeylElement> {
        let c = b.as_scalar().ok_or_else(|| syntax(at, "can only divide by a scalar"))?;
        let inv = c.try_inv().map_err(|_| syntax(at, "division by zero"))?;
        Ok(a.scale(&inv))
    }

    fn pow(&self, a: &WeylElement, k: i64, at: Span) -> Result<WeylElement> {
        let k = u32::try_from(k).map_err(|_| syntax(at, "negative exponent"))?;
        Ok(a.pow(k))
    }

    fn primary(&mut self, c: &mut Cursor) -> Result<Option<WeylElement>> {
        let v = match c.peek().clone() {
            Tok::Ident(s) => match s.as_str() {
                "qh" => WeylElement::q(),
                "ph" => WeylElement::p(),
                "i" => WeylElement::scalar(GaussianRational::i()),
                "I" => WeylElement::identity(),
                _ => return Err(c.error(format!("unknown operator `{s}` (expected qh, ph, i or I)"))),
            },
            Tok::LBrack => {
                c.next();
                let a = sum(self, c)?;
                c.expect(&Tok::Comma)?;
                let b = sum(self, c)?;
                c.expect(&Tok::RBrack)?;
                return Ok(Some(commutator(&a, &b)));
            }
            _ => return Ok(None),
        };
        c.next();
        Ok(Some(v))
    }
}

pub fn parse_operator(src: &str) -> Result<WeylElement> {
    parse_all(&mut Operator, src)
}
