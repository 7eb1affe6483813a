//! Rational functions in named coordinates, e.g. `1 + x^2` or `1/(1+x^2)`.

use std::sync::Arc;

use num_bigint::BigInt;

use super::arith::{parse_all, syntax, Grammar};
use super::lexer::{Cursor, Tok};
use crate::error::{Result, Span};
use crate::kernel::{Polynomial, RationalFunction, Rational};

struct RatFun {
    vars: Arc<[String]>,
}

impl Grammar for RatFun {
    type Value = RationalFunction;

    fn from_int(&self, n: &BigInt) -> RationalFunction {
        RationalFunction::constant(self.vars.clone(), Rational::from_integer(n.clone()))
    }

    fn add(&self, a: &RationalFunction, b: &RationalFunction) -> Result<RationalFunction> {
        Ok(a.add(b))
    }

    fn mul(&self, a: &RationalFunction, b: &RationalFunction) -> Result<RationalFunction> {
        Ok(a.mul(b))
    }

    fn neg(&self, a: &RationalFunction) -> RationalFunction {
        a.neg()
    }

    fn div(&self, a: &RationalFunction, b: &RationalFunction, at: Span) -> Result<RationalFunction> {
        a.div(b).map_err(|_| syntax(at, "division by zero"))
    }

    fn pow(&self, a: &RationalFunction, k: i64, at: Span) -> Result<RationalFunction> {
        let base = if k < 0 { a.inv().map_err(|_| syntax(at, "zero to a negative power"))? } else { a.clone() };
        let mut out = RationalFunction::constant(self.vars.clone(), Rational::from_integer(1.into()));
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    fn primary(&mut self, c: &mut Cursor) -> Result<Option<RationalFunction>> {
        match c.peek().clone() {
            Tok::Ident(s) => {
                if !self.vars.contains(&s) {
                    return Err(c.error(format!("unknown coordinate `{s}`")));
                }
                c.next();
                Ok(Some(RationalFunction::from_poly(Polynomial::var(self.vars.clone(), &s)?)))
            }
            _ => Ok(None),
        }
    }
}

pub fn parse_rational_function(src: &str, vars: Arc<[String]>) -> Result<RationalFunction> {
    parse_all(&mut RatFun { vars }, src)
}

/// A plain rational such as `-3/2`.
pub fn parse_rational(src: &str) -> Result<Rational> {
    let f = parse_rational_function(src, Arc::from(Vec::<String>::new()))?;
    if f.denominator().is_constant() && f.numerator().is_constant() {
        Ok(f.numerator().constant_term() / f.denominator().constant_term())
    } else {
        Err(crate::Error::Format(format!("`{src}` is not a number")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;

    #[test]
    fn parses_and_evaluates() {
        let vars: Arc<[String]> = Arc::from(vec!["x".to_string()]);
        let f = parse_rational_function("1/(1 + x^2)", vars).unwrap();
        assert_eq!(f.eval(&[rat(1, 1)]).unwrap(), rat(1, 2));
    }

    #[test]
    fn plain_rationals() {
        assert_eq!(parse_rational("-3/2").unwrap(), rat(-3, 2));
        assert!(parse_rational("x").is_err());
    }
}
