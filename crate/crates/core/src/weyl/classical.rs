use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::kernel::{rat_from_int, Rational};

/// Real polynomial in the canonical pair, keyed by `(n, m)` for `qⁿpᵐ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ClassicalPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl ClassicalPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0)
    }

    pub fn q() -> Self {
        Self::monomial(1, 0)
    }

    pub fn p() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(n: u32, m: u32) -> Self {
        Self::term(n, m, Rational::one())
    }

    pub fn term(n: u32, m: u32, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term((n, m), c);
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, n: u32, m: u32) -> Rational {
        self.terms.get(&(n, m)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(n, m)| n + m).max().unwrap_or(0)
    }

    /// The single `(n, m)` if this is `c·qⁿpᵐ`.
    pub fn as_monomial(&self) -> Option<((u32, u32), &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(k, c)| (*k, c))
        } else {
            None
        }
    }

    fn add_term(&mut self, k: (u32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        let s = self.terms.remove(&k).unwrap_or_else(Rational::zero) + c;
        if !s.is_zero() {
            self.terms.insert(k, s);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, c * k);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in &self.terms {
            for ((x, y), d) in &other.terms {
                out.add_term((a + x, b + y), c * d);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn diff_q(&self) -> Self {
        let mut out = Self::zero();
        for ((n, m), c) in &self.terms {
            if *n > 0 {
                out.add_term((n - 1, *m), c * rat_from_int(*n as i64));
            }
        }
        out
    }

    pub fn diff_p(&self) -> Self {
        let mut out = Self::zero();
        for ((n, m), c) in &self.terms {
            if *m > 0 {
                out.add_term((*n, m - 1), c * rat_from_int(*m as i64));
            }
        }
        out
    }

    /// Terms in print order: higher total degree first, then higher q power.
    pub fn ordered_terms(&self) -> Vec<((u32, u32), Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(k, c)| (*k, c.clone())).collect();
        v.sort_by(|((a, b), _), ((x, y), _)| (x + y, x).cmp(&(a + b, a)));
        v
    }

    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, ((n, m), c)) in self.ordered_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k > 0 {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            let mono = latex_mono(n, m);
            if !a.is_one() || mono.is_empty() {
                if a.is_integer() {
                    s.push_str(&a.to_string());
                } else {
                    s.push_str(&format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom()));
                }
                if !mono.is_empty() {
                    s.push_str(" ");
                }
            }
            s.push_str(&mono);
        }
        s
    }
}

fn latex_mono(n: u32, m: u32) -> String {
    let part = |v: &str, k: u32| match k {
        0 => String::new(),
        1 => v.to_string(),
        _ => format!("{}^{{{}}}", v, k),
    };
    [part("q", n), part("p", m)].iter().filter(|s| !s.is_empty()).cloned().collect::<Vec<_>>().join(" ")
}

impl fmt::Display for ClassicalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, ((n, m), c)) in self.ordered_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            let mut parts = Vec::new();
            if !a.is_one() || (n == 0 && m == 0) {
                parts.push(a.to_string());
            }
            for (v, e) in [("q", n), ("p", m)] {
                match e {
                    0 => {}
                    1 => parts.push(v.to_string()),
                    _ => parts.push(format!("{}^{}", v, e)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// `{f, g} = ∂f/∂q ∂g/∂p − ∂f/∂p ∂g/∂q`, the bracket of `ω = dp ∧ dq`.
pub fn poisson_bracket(f: &ClassicalPoly, g: &ClassicalPoly) -> ClassicalPoly {
    f.diff_q().mul(&g.diff_p()).sub(&f.diff_p().mul(&g.diff_q()))
}
