use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::kernel::{GaussianRational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Q,
    P,
}

/// Element of the algebra generated by `q̂, p̂` with `[q̂, p̂] = i`, stored as
/// a combination of normal-form words `q̂ⁿp̂ᵐ`. The empty word is `Î`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct WeylElement {
    terms: BTreeMap<(u32, u32), GaussianRational>,
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |a, j| a * BigInt::from(j))
}

impl WeylElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::scalar(GaussianRational::one())
    }

    pub fn scalar(c: GaussianRational) -> Self {
        Self::word(0, 0, c)
    }

    pub fn q() -> Self {
        Self::word(1, 0, GaussianRational::one())
    }

    pub fn p() -> Self {
        Self::word(0, 1, GaussianRational::one())
    }

    /// `c·q̂ⁿp̂ᵐ`.
    pub fn word(n: u32, m: u32, c: GaussianRational) -> Self {
        let mut out = Self::zero();
        out.add_term((n, m), c);
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, n: u32, m: u32) -> GaussianRational {
        self.terms.get(&(n, m)).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the element is `c·Î` (including zero).
    pub fn as_scalar(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, k: (u32, u32), c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let s = self.terms.remove(&k).unwrap_or_else(GaussianRational::zero) + c;
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
        self.add(&other.scale(&-GaussianRational::one()))
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, c.clone() * k.clone());
        }
        out
    }

    pub fn scale_real(&self, k: &Rational) -> Self {
        self.scale(&GaussianRational::real(k.clone()))
    }

    /// Product in normal form via
    /// `p̂ᵇq̂ᶜ = Σₖ k!·C(b,k)·C(c,k)·(−i)ᵏ q̂ᶜ⁻ᵏp̂ᵇ⁻ᵏ`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &other.terms {
                let xy = x.clone() * y.clone();
                for k in 0..=(*b).min(*c) {
                    let w = factorial(k) * binomial(*b, k) * binomial(*c, k);
                    let coeff = GaussianRational::minus_i_pow(k)
                        .scale(&Rational::from_integer(w))
                        * xy.clone();
                    out.add_term((a + c - k, b + d - k), coeff);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(), |acc, _| acc.mul(self))
    }

    /// Formal adjoint: conjugate coefficients and reverse each word.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for ((n, m), c) in &self.terms {
            let word = Self::p().pow(*m).mul(&Self::q().pow(*n));
            out = out.add(&word.scale(&c.conj()));
        }
        out
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.adjoint() == *self
    }

    fn ordered(&self) -> Vec<((u32, u32), GaussianRational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(k, c)| (*k, c.clone())).collect();
        v.sort_by(|((a, b), _), ((x, y), _)| (x + y, x).cmp(&(a + b, a)));
        v
    }

    fn render(&self, latex: bool) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, ((n, m), c)) in self.ordered().into_iter().enumerate() {
            let word = render_word(n, m, latex);
            let (neg, mag) = split_sign(&c);
            if k > 0 {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            let coeff = render_coeff(&mag, latex);
            match (coeff.as_str(), word.is_empty()) {
                ("1", true) => s.push_str(if latex { "\\hat{I}" } else { "1" }),
                ("1", false) => s.push_str(&word),
                (_, true) => {
                    s.push_str(&coeff);
                    if latex {
                        s.push_str(" \\hat{I}");
                    }
                }
                (_, false) => {
                    s.push_str(&coeff);
                    s.push_str(if latex { " " } else { "*" });
                    s.push_str(&word);
                }
            }
        }
        s
    }

    pub fn to_latex(&self) -> String {
        self.render(true)
    }
}

/// A coefficient is printed with a leading minus when it is a negative real,
/// a negative imaginary, or a complex number with negative real part.
fn split_sign(c: &GaussianRational) -> (bool, GaussianRational) {
    let neg = if c.re.is_zero() { c.im.is_negative() } else { c.re.is_negative() };
    if neg {
        (true, -c.clone())
    } else {
        (false, c.clone())
    }
}

fn render_coeff(c: &GaussianRational, latex: bool) -> String {
    if !latex {
        return c.to_string();
    }
    let frac = |r: &Rational| {
        if r.is_integer() {
            r.to_string()
        } else {
            format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
        }
    };
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => frac(&c.re),
        (true, false) => {
            if c.im.is_one() {
                "i".into()
            } else {
                format!("{} i", frac(&c.im))
            }
        }
        (false, false) => {
            let sign = if c.im.is_negative() { "-" } else { "+" };
            format!("\\left({} {} {} i\\right)", frac(&c.re), sign, frac(&c.im.abs()))
        }
    }
}

fn render_word(n: u32, m: u32, latex: bool) -> String {
    let (q, p) = if latex { ("\\hat{q}", "\\hat{p}") } else { ("qh", "ph") };
    let part = |v: &str, k: u32| match k {
        0 => String::new(),
        1 => v.to_string(),
        _ if latex => format!("{}^{{{}}}", v, k),
        _ => format!("{}^{}", v, k),
    };
    let parts: Vec<String> = [part(q, n), part(p, m)].into_iter().filter(|s| !s.is_empty()).collect();
    parts.join(if latex { " " } else { "*" })
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(false))
    }
}

/// Normal form of a coefficient times a word in the generators.
pub fn weyl_normal_form(coefficient: &GaussianRational, word: &[Generator]) -> WeylElement {
    word.iter()
        .fold(WeylElement::scalar(coefficient.clone()), |acc, g| {
            acc.mul(&match g {
                Generator::Q => WeylElement::q(),
                Generator::P => WeylElement::p(),
            })
        })
}

/// `[A, B] = AB − BA`.
pub fn commutator(a: &WeylElement, b: &WeylElement) -> WeylElement {
    a.mul(b).sub(&b.mul(a))
}
