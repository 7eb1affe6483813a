use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::poly::dense;
use super::{Polynomial, Rational};
use crate::error::{Error, Result};

/// Quotient of two polynomials over the same variables.
///
/// Denominators are kept monic. Common factors are cancelled only when the
/// denominator involves at most one variable (a univariate content gcd);
/// equality never relies on reduction and is decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        num.same_variables(&den)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(num: Polynomial) -> Self {
        let den = Polynomial::one(num.variables().clone());
        Self { num, den }
    }

    pub fn zero(vars: Arc<[String]>) -> Self {
        Self::from_poly(Polynomial::zero(vars))
    }

    pub fn constant(vars: Arc<[String]>, c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(vars, c))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn variables(&self) -> &Arc<[String]> {
        self.num.variables()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalized(num: Polynomial, den: Polynomial) -> Self {
        let vars = num.variables().clone();
        if num.is_zero() {
            return Self::zero(vars);
        }
        if den.is_constant() {
            let c = den.constant_term();
            return Self { num: num.scale(&c.recip()), den: Polynomial::one(vars) };
        }
        let (num, den) = cancel(num, den);
        let (den, lc) = den.monic();
        Self { num: num.scale(&lc.recip()), den }
    }

    pub fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        if self.den == other.den {
            return Self::normalized(self.num.add(&other.num), self.den.clone());
        }
        if let Some(q) = self.den.div_exact(&other.den) {
            return Self::normalized(self.num.add(&other.num.mul(&q)), self.den.clone());
        }
        if let Some(q) = other.den.div_exact(&self.den) {
            return Self::normalized(self.num.mul(&q).add(&other.num), other.den.clone());
        }
        Self::normalized(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> Self {
        Self { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.variables().clone());
        }
        Self::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(self.variables().clone());
        }
        Self { num: self.num.scale(k), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Partial derivative by the quotient rule.
    pub fn diff(&self, var: &str) -> Result<Self> {
        let idx = super::poly::index_of(self.variables(), var)?;
        Ok(self.diff_index(idx))
    }

    pub fn diff_index(&self, idx: usize) -> Self {
        let dn = self.num.diff_index(idx);
        if self.den.is_constant() {
            return Self::normalized(dn, self.den.clone());
        }
        let dd = self.den.diff_index(idx);
        Self::normalized(
            dn.mul(&self.den).sub(&self.num.mul(&dd)),
            self.den.mul(&self.den),
        )
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(point) / d)
    }

    /// `f == g` iff `num(f)·den(g) − num(g)·den(f)` is the zero polynomial.
    pub fn rf_equal(&self, other: &Self) -> bool {
        self.num.mul(&other.den).sub(&other.num.mul(&self.den)).is_zero()
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.rf_equal(other)
    }
}

/// Cancel the gcd of numerator and denominator when the denominator is
/// univariate (or when it divides the numerator outright).
fn cancel(num: Polynomial, den: Polynomial) -> (Polynomial, Polynomial) {
    let support = den.support();
    if support.len() == 1 {
        let v = support[0];
        let vars = num.variables().clone();
        let to_dense = |terms: Vec<(u32, Rational)>| {
            let deg = terms.iter().map(|(k, _)| *k).max().unwrap_or(0) as usize;
            let mut d = vec![Rational::zero(); deg + 1];
            for (k, c) in terms {
                d[k as usize] = d[k as usize].clone() + c;
            }
            dense::trim(&mut d);
            d
        };
        let mut g = to_dense(den.terms().map(|(e, c)| (e[v], c.clone())).collect());
        let mut groups: BTreeMap<Vec<u32>, Vec<(u32, Rational)>> = BTreeMap::new();
        for (e, c) in num.terms() {
            let mut rest = e.clone();
            rest[v] = 0;
            groups.entry(rest).or_default().push((e[v], c.clone()));
        }
        for (_, terms) in groups {
            if g.len() <= 1 {
                break;
            }
            g = dense::gcd(&g, &to_dense(terms));
        }
        if g.len() > 1 {
            let n = vars.len();
            let gp = Polynomial::from_terms(
                vars,
                g.iter().enumerate().map(|(k, c)| {
                    let mut e = vec![0; n];
                    e[v] = k as u32;
                    (e, c.clone())
                }),
            );
            if let (Some(nq), Some(dq)) = (num.div_exact(&gp), den.div_exact(&gp)) {
                return (nq, dq);
            }
        }
        (num, den)
    } else {
        match num.div_exact(&den) {
            Some(q) => {
                let vars = q.variables().clone();
                (q, Polynomial::one(vars))
            }
            None => (num, den),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.constant_term().is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;

    fn x_vars() -> (Arc<[String]>, Polynomial) {
        let v: Arc<[String]> = vec!["x".to_string()].into();
        let x = Polynomial::var(v.clone(), "x").unwrap();
        (v, x)
    }

    #[test]
    fn quotient_rule() {
        let (v, x) = x_vars();
        let one = Polynomial::one(v.clone());
        let base = one.add(&x.pow(2));
        let f = RationalFunction::new(one.clone(), base.clone()).unwrap();
        let expected = RationalFunction::new(x.scale(&rat(-2, 1)), base.pow(2)).unwrap();
        assert_eq!(f.diff("x").unwrap(), expected);
    }

    #[test]
    fn equality_examples() {
        let (v, x) = x_vars();
        let one = Polynomial::one(v.clone());
        let a = RationalFunction::new(x.pow(2).sub(&one), x.sub(&one)).unwrap();
        let b = RationalFunction::from_poly(x.add(&one));
        assert!(a.rf_equal(&b));
        // the gcd step reduces this one outright
        assert_eq!(a.denominator(), &one);
        let c = RationalFunction::new(one.clone(), one.add(&x.pow(2))).unwrap();
        let d = RationalFunction::new(one.clone(), one.add(&x)).unwrap();
        assert!(!c.rf_equal(&d));
        let z1 = RationalFunction::zero(v.clone());
        let z2 = RationalFunction::new(Polynomial::zero(v.clone()), one.add(&x.pow(2))).unwrap();
        assert!(z1.rf_equal(&z2));
    }

    #[test]
    fn zero_denominator_rejected() {
        let (v, x) = x_vars();
        assert_eq!(
            RationalFunction::new(x, Polynomial::zero(v)).unwrap_err(),
            Error::DivisionByZero
        );
    }
}
