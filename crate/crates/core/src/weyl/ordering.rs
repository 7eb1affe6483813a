use std::fmt;
use std::str::FromStr;

use num_traits::One;

use super::element::{weyl_normal_form, Generator, WeylElement};
use super::ClassicalPoly;
use crate::kernel::{rat_from_int, GaussianRational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderingScheme {
    /// Equal-weight average over every interleaving of the factors.
    WeylSymmetric,
    /// All `p̂` factors to the left of all `q̂` factors.
    NormalPLeft,
}

impl fmt::Display for OrderingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderingScheme::WeylSymmetric => "weyl",
            OrderingScheme::NormalPLeft => "normal",
        })
    }
}

impl FromStr for OrderingScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "weyl" | "symmetric" | "mid" | "mid-point" => Ok(Self::WeylSymmetric),
            "normal" | "p-left" | "right" | "right-point" => Ok(Self::NormalPLeft),
            other => Err(format!("unknown ordering scheme `{other}` (expected weyl|normal)")),
        }
    }
}

/// Every distinct word with `n` copies of `q̂` and `m` copies of `p̂`.
pub(crate) fn interleavings(n: u32, m: u32) -> Vec<Vec<Generator>> {
    fn go(n: u32, m: u32, cur: &mut Vec<Generator>, out: &mut Vec<Vec<Generator>>) {
        if n == 0 && m == 0 {
            out.push(cur.clone());
            return;
        }
        if n > 0 {
            cur.push(Generator::Q);
            go(n - 1, m, cur, out);
            cur.pop();
        }
        if m > 0 {
            cur.push(Generator::P);
            go(n, m - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, m, &mut Vec::new(), &mut out);
    out
}

fn order_monomial(n: u32, m: u32, scheme: OrderingScheme) -> WeylElement {
    let one = GaussianRational::one();
    match scheme {
        OrderingScheme::WeylSymmetric => {
            let words = interleavings(n, m);
            let weight = Rational::one() / rat_from_int(words.len() as i64);
            words
                .iter()
                .fold(WeylElement::zero(), |acc, w| acc.add(&weyl_normal_form(&one, w)))
                .scale_real(&weight)
        }
        OrderingScheme::NormalPLeft => {
            let mut word = vec![Generator::P; m as usize];
            word.extend(std::iter::repeat_n(Generator::Q, n as usize));
            weyl_normal_form(&one, &word)
        }
    }
}

/// Linear extension of the chosen monomial ordering.
pub fn apply_ordering(f: &ClassicalPoly, scheme: OrderingScheme) -> WeylElement {
    f.terms().fold(WeylElement::zero(), |acc, ((n, m), c)| {
        acc.add(&order_monomial(*n, *m, scheme).scale_real(c))
    })
}
