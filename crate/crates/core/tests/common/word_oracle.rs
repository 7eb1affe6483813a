//! Independent reference for the operator algebra. Operators are sums of
//! words in `q` and `p` with Gaussian-rational coefficients held as pairs of
//! `Ratio<i64>`. Words are reduced by the single rule `p q -> q p - i`,
//! applied at every possible position; each branch must reach the same
//! sorted form.

use std::collections::{BTreeMap, HashMap};

use num_rational::Ratio;
use num_traits::{One, Zero};

use nogo_core::kernel::{rat, GaussianRational, Polynomial};
use nogo_core::weyl::WeylElement;

pub type Q = Ratio<i64>;

pub const QH: u8 = 0;
pub const PH: u8 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct C {
    pub re: Q,
    pub im: Q,
}

impl C {
    pub fn real(re: Q) -> Self {
        C { re, im: Q::zero() }
    }

    pub fn int(n: i64) -> Self {
        C::real(Q::from_integer(n))
    }

    pub fn i() -> Self {
        C { re: Q::zero(), im: Q::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(self, o: C) -> C {
        C { re: self.re + o.re, im: self.im + o.im }
    }

    pub fn mul(self, o: C) -> C {
        C { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }

    pub fn to_engine(self) -> GaussianRational {
        let r = |x: Q| rat(*x.numer(), *x.denom());
        GaussianRational::new(r(self.re), r(self.im))
    }
}

/// Sorted form: `(n, m)` for `q^n p^m`.
pub type Sorted = BTreeMap<(u32, u32), C>;

fn accumulate(into: &mut Sorted, from: &Sorted, k: C) {
    for (w, c) in from {
        let e = into.entry(*w).or_insert(C::int(0));
        *e = e.add(c.mul(k));
        if e.is_zero() {
            into.remove(w);
        }
    }
}

#[derive(Default)]
pub struct Rewriter {
    memo: HashMap<Vec<u8>, Sorted>,
}

impl Rewriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn word(&mut self, w: &[u8]) -> Sorted {
        if let Some(r) = self.memo.get(w) {
            return r.clone();
        }
        let mut result: Option<Sorted> = None;
        for k in 0..w.len().saturating_sub(1) {
            if !(w[k] == PH && w[k + 1] == QH) {
                continue;
            }
            let mut swapped = w.to_vec();
            swapped.swap(k, k + 1);
            let mut shorter = w.to_vec();
            shorter.drain(k..k + 2);
            let mut r = self.word(&swapped);
            let tail = self.word(&shorter);
            accumulate(&mut r, &tail, C::i().mul(C::int(-1)));
            match &result {
                Some(prev) => assert_eq!(prev, &r, "rewriting is not confluent on {w:?}"),
                None => result = Some(r),
            }
        }
        let r = result.unwrap_or_else(|| {
            let n = w.iter().filter(|&&g| g == QH).count() as u32;
            Sorted::from([((n, w.len() as u32 - n), C::int(1))])
        });
        self.memo.insert(w.to_vec(), r.clone());
        r
    }

    pub fn sum(&mut self, words: &[(Vec<u8>, C)]) -> Sorted {
        let mut out = Sorted::new();
        for (w, c) in words {
            let r = self.word(w);
            accumulate(&mut out, &r, *c);
        }
        out
    }
}

/// Every distinct arrangement of `n` copies of `q` and `m` of `p`.
pub fn arrangements(n: u32, m: u32) -> Vec<Vec<u8>> {
    if n == 0 && m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    if n > 0 {
        out.extend(arrangements(n - 1, m).into_iter().map(|mut w| {
            w.insert(0, QH);
            w
        }));
    }
    if m > 0 {
        out.extend(arrangements(n, m - 1).into_iter().map(|mut w| {
            w.insert(0, PH);
            w
        }));
    }
    out
}

/// Equal-weight average over the arrangements of `q^n p^m`.
pub fn symmetric_words(n: u32, m: u32) -> Vec<(Vec<u8>, C)> {
    let all = arrangements(n, m);
    let w = C::real(Q::new(1, all.len() as i64));
    all.into_iter().map(|x| (x, w)).collect()
}

/// `p^m q^n` as a single word.
pub fn p_left_word(n: u32, m: u32) -> Vec<(Vec<u8>, C)> {
    let mut w = vec![PH; m as usize];
    w.extend(std::iter::repeat_n(QH, n as usize));
    vec![(w, C::int(1))]
}

pub fn to_engine(s: &Sorted) -> WeylElement {
    s.iter().fold(WeylElement::zero(), |acc, ((n, m), c)| acc.add(&WeylElement::word(*n, *m, c.to_engine())))
}

/// Coefficients by power of `q`.
pub type QPoly = Vec<C>;

fn trim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(C::is_zero) {
        p.pop();
    }
    p
}

/// Applies a word to a wave function, rightmost letter first, with `q`
/// multiplying and `p = -i d/dq`.
pub fn act(words: &[(Vec<u8>, C)], psi: &QPoly) -> QPoly {
    let mut out: QPoly = Vec::new();
    for (w, c) in words {
        let mut f = psi.clone();
        for &g in w.iter().rev() {
            f = if g == QH {
                std::iter::once(C::int(0)).chain(f).collect()
            } else {
                f.iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, a)| a.mul(C::int(k as i64)).mul(C { re: Q::zero(), im: -Q::one() }))
                    .collect()
            };
        }
        if out.len() < f.len() {
            out.resize(f.len(), C::int(0));
        }
        for (k, a) in f.into_iter().enumerate() {
            out[k] = out[k].add(a.mul(*c));
        }
    }
    trim(out)
}

pub fn engine_poly(p: &Polynomial<GaussianRational>) -> QPoly {
    let mut out = vec![C::int(0); 16];
    for (e, c) in p.terms() {
        let k = e.first().copied().unwrap_or(0) as usize;
        let q = |x: &nogo_core::kernel::Rational| -> Q {
            Q::new(i64::try_from(x.numer()).expect("small"), i64::try_from(x.denom()).expect("small"))
        };
        out[k] = C { re: q(&c.re), im: q(&c.im) };
    }
    trim(out)
}
