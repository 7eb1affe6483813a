use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{Coefficient, Rational};
use crate::error::{Error, Result};

/// Exponent vector, one entry per declared variable.
pub type Monomial = Vec<u32>;

/// Sparse multivariate polynomial over named variables.
///
/// Terms are keyed by exponent vector in lexicographic order, so the last key
/// is the lex-leading monomial. Zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct Polynomial<C = Rational> {
    vars: Arc<[String]>,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> PartialEq for Polynomial<C> {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.terms == other.terms
    }
}

impl<C: Coefficient> Polynomial<C> {
    pub fn zero(vars: Arc<[String]>) -> Self {
        Self { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Arc<[String]>, c: C) -> Self {
        let mut p = Self::zero(vars);
        let n = p.vars.len();
        p.add_term(vec![0; n], c);
        p
    }

    pub fn one(vars: Arc<[String]>) -> Self {
        Self::constant(vars, C::one())
    }

    pub fn var(vars: Arc<[String]>, name: &str) -> Result<Self> {
        let idx = index_of(&vars, name)?;
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        let mut p = Self::zero(vars);
        p.add_term(e, C::one());
        Ok(p)
    }

    pub fn from_terms(vars: Arc<[String]>, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.vars.len(), "exponent arity mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub fn variables(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn constant_term(&self) -> C {
        self.terms.get(&vec![0; self.vars.len()]).cloned().unwrap_or_else(C::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn coefficient(&self, e: &[u32]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    /// Indices of variables that occur with nonzero exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .collect()
    }

    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, e: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    fn check_vars(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomial variable sets differ: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    pub fn same_variables(&self, other: &Self) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VariableMismatch(self.vars.to_vec(), other.vars.to_vec()))
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero(self.vars.clone());
        }
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.clone() * k.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut out = Self::zero(self.vars.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Monomial = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.vars.clone());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative with respect to the named variable.
    pub fn diff(&self, var: &str) -> Result<Self> {
        let idx = index_of(&self.vars, var)?;
        Ok(self.diff_index(idx))
    }

    pub fn diff_index(&self, idx: usize) -> Self {
        let mut out = Self::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e[idx] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[idx] -= 1;
            out.add_term(e2, c.clone() * C::from_i64(e[idx] as i64));
        }
        out
    }

    /// Evaluate at a point given one value per variable.
    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = C::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Replace the variable at `idx` by a polynomial over the same variables.
    pub fn substitute(&self, idx: usize, value: &Self) -> Self {
        self.check_vars(value);
        let mut out = Self::zero(self.vars.clone());
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            rest[idx] = 0;
            let mono = Self::from_terms(self.vars.clone(), [(rest, c.clone())]);
            out = out.add(&mono.mul(&value.pow(e[idx])));
        }
        out
    }

    /// Exact quotient `self / d` if `d` divides `self`, using the
    /// lexicographic division algorithm (a single divisor is its own Gröbner
    /// basis, so a nonzero remainder means `d` does not divide).
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        self.check_vars(d);
        let (ld, lc) = d.leading()?;
        let lc_inv = lc.try_inv().ok()?;
        let ld = ld.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.vars.clone());
        while let Some((lr, cr)) = rem.leading() {
            if !lr.iter().zip(&ld).all(|(a, b)| a >= b) {
                return None;
            }
            let e: Monomial = lr.iter().zip(&ld).map(|(a, b)| a - b).collect();
            let c = cr.clone() * lc_inv.clone();
            let t = Self::from_terms(self.vars.clone(), [(e, c)]);
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Rename into a new variable list; every variable in use must exist there.
    pub fn embed(&self, vars: Arc<[String]>) -> Result<Self> {
        let used = self.support();
        let mut map = vec![usize::MAX; self.vars.len()];
        for &i in &used {
            map[i] = index_of(&vars, &self.vars[i])?;
        }
        let n = vars.len();
        let mut out = Self::zero(vars);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; n];
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    e2[map[i]] += k;
                }
            }
            out.add_term(e2, c.clone());
        }
        Ok(out)
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        let mut out = Polynomial::<D>::zero(self.vars.clone());
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }
}

impl Polynomial<Rational> {
    /// Scale so that the lex-leading coefficient is one.
    pub fn monic(&self) -> (Self, Rational) {
        match self.leading() {
            Some((_, c)) => {
                let c = c.clone();
                (self.scale(&c.recip()), c)
            }
            None => (self.clone(), Rational::one()),
        }
    }
}

pub(crate) fn index_of(vars: &[String], name: &str) -> Result<usize> {
    vars.iter()
        .position(|v| v == name)
        .ok_or_else(|| Error::UnknownVariable(name.to_string()))
}

/// Dense univariate helpers used for content gcds.
pub(crate) mod dense {
    use super::*;

    pub fn trim(p: &mut Vec<Rational>) {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
    }

    fn rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut r = a.to_vec();
        trim(&mut r);
        let lb = b.last().expect("nonzero divisor").clone();
        while r.len() >= b.len() && !r.is_empty() {
            let shift = r.len() - b.len();
            let k = r.last().unwrap().clone() / lb.clone();
            for (i, c) in b.iter().enumerate() {
                r[i + shift] = r[i + shift].clone() - k.clone() * c.clone();
            }
            trim(&mut r);
        }
        r
    }

    /// Monic gcd; the gcd of two zero polynomials is zero.
    pub fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y);
            x = y;
            y = r;
        }
        if let Some(l) = x.last().cloned() {
            for c in x.iter_mut() {
                *c = c.clone() / l.clone();
            }
        }
        x
    }
}

impl<C: Coefficient> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], k) })
                .collect();
            let cs = c.to_string();
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) if !rest.starts_with('(') => (true, rest.to_string()),
                _ => (false, cs.clone()),
            };
            if k > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            if mono.is_empty() {
                write!(f, "{}", body)?;
            } else {
                if body != "1" {
                    write!(f, "{}*", body)?;
                }
                write!(f, "{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}
