#![allow(dead_code)]

pub mod word_oracle;

use num_traits::One;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use nogo_core::kernel::{rat, GaussianRational};
use nogo_core::parse::{parse_tensor, parse_tensor_with};
use nogo_core::tensor::canonicalize;
use nogo_core::weyl::{poisson_bracket, weyl_normal_form, ClassicalPoly, Generator, WeylElement};

use word_oracle::{Rewriter, PH, QH};

pub const PROPERTY_CASES: u32 = 500;

pub fn classical_poly() -> impl Strategy<Value = ClassicalPoly> {
    prop::collection::vec((0u32..=3, 0u32..=3, -5i64..=5, 1i64..=3), 0..4).prop_map(|ts| {
        ts.into_iter().fold(ClassicalPoly::zero(), |acc, (n, m, a, b)| acc.add(&ClassicalPoly::term(n, m, rat(a, b))))
    })
}

pub fn word() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(QH..=PH, 0..7)
}

fn generators(w: &[u8]) -> Vec<Generator> {
    w.iter().map(|&g| if g == QH { Generator::Q } else { Generator::P }).collect()
}

pub fn normal_form(w: &[u8]) -> WeylElement {
    weyl_normal_form(&GaussianRational::one(), &generators(w))
}

pub fn jacobi(f: &ClassicalPoly, g: &ClassicalPoly, h: &ClassicalPoly) -> Result<(), TestCaseError> {
    let pb = poisson_bracket;
    let s = pb(f, &pb(g, h)).add(&pb(g, &pb(h, f))).add(&pb(h, &pb(f, g)));
    prop_assert!(s.is_zero(), "Jacobi sum {s}");
    Ok(())
}

pub fn leibniz(f: &ClassicalPoly, g: &ClassicalPoly, h: &ClassicalPoly) -> Result<(), TestCaseError> {
    let lhs = poisson_bracket(f, &g.mul(h));
    let rhs = poisson_bracket(f, g).mul(h).add(&g.mul(&poisson_bracket(f, h)));
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

/// Re-normalizing the sorted words of a normal form changes nothing, and
/// the result agrees with the rewriting oracle.
pub fn normal_form_idempotent(w: &[u8]) -> Result<(), TestCaseError> {
    let nf = normal_form(w);
    let mut again = WeylElement::zero();
    for ((n, m), c) in nf.terms() {
        let mut sorted = vec![Generator::Q; *n as usize];
        sorted.extend(std::iter::repeat_n(Generator::P, *m as usize));
        again = again.add(&weyl_normal_form(c, &sorted));
    }
    prop_assert_eq!(&again, &nf);
    let oracle = word_oracle::to_engine(&Rewriter::new().word(w));
    prop_assert_eq!(&oracle, &nf, "oracle disagrees on {:?}", w);
    Ok(())
}

pub fn normal_form_homomorphism(a: &[u8], b: &[u8]) -> Result<(), TestCaseError> {
    let joined: Vec<u8> = a.iter().chain(b).copied().collect();
    prop_assert_eq!(normal_form(&joined), normal_form(a).mul(&normal_form(b)));
    Ok(())
}

pub const TENSOR_PREAMBLE: &str = "antisym F {1 2}; ";

/// Terms with one free index `^c`; `X`, `Y`, `Z` stand for dummy labels.
pub const TENSOR_TEMPLATES: [&str; 13] = [
    "bar[T]^c",
    "D[g,X] D[g,^X] bar[T]^c",
    "D[g,^X] D[g,X] bar[T]^c",
    "R[g]^c_{XYZ} bar[U]^{XY} bar[T]^Z",
    "Ric[g]^c_X bar[T]^X",
    "g^{cX} bar[w]_X",
    "bar[F]^{cX} bar[w]_X",
    "D[g,X] bar[F]^{Xc}",
    "delta^c_X bar[T]^X",
    "bar[T]^X bar[w]_X bar[T]^c",
    "D[g,X] D[g,Y] bar[U]^{XY} bar[T]^c",
    "R[g]^c_{XYZ} bar[F]^{XY} bar[T]^Z",
    "D[g,^X] bar[T]^c bar[w]_X",
];

const DUMMY_POOL: [char; 10] = ['a', 'b', 'd', 'e', 'f', 'h', 'j', 'k', 'n', 's'];

fn dummy_names() -> impl Strategy<Value = Vec<char>> {
    Just(DUMMY_POOL.to_vec()).prop_shuffle()
}

/// `(template, coefficient numerator, denominator)` per term.
pub type TermSpec = (usize, i64, i64);

pub fn term_specs() -> impl Strategy<Value = Vec<TermSpec>> {
    prop::collection::vec((0..TENSOR_TEMPLATES.len(), prop_oneof![-3i64..=-1, 1i64..=3], 1i64..=2), 1..5)
}

pub fn render(specs: &[TermSpec], names: &[Vec<char>]) -> String {
    let mut s = String::from(TENSOR_PREAMBLE);
    for (k, (t, a, b)) in specs.iter().enumerate() {
        let letters = &names[k % names.len()];
        let body: String = TENSOR_TEMPLATES[*t]
            .chars()
            .map(|ch| match ch {
                'X' => letters[0],
                'Y' => letters[1],
                'Z' => letters[2],
                other => other,
            })
            .collect();
        s.push_str(&format!(" + {a}/{b} {body}"));
    }
    s
}

pub fn tensor_case() -> impl Strategy<Value = (Vec<TermSpec>, Vec<Vec<char>>, Vec<Vec<char>>)> {
    term_specs().prop_flat_map(|specs| {
        let n = specs.len();
        (Just(specs), prop::collection::vec(dummy_names(), n), prop::collection::vec(dummy_names(), n))
    })
}

/// Canonicalizing twice is the same as once, and the printed canonical
/// form parses back to itself.
pub fn canonicalize_idempotent(src: &str) -> Result<(), TestCaseError> {
    let parsed = parse_tensor(src).map_err(|e| TestCaseError::fail(format!("{src}: {e}")))?;
    let once = canonicalize(&parsed.expr).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let twice = canonicalize(&once).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(&twice, &once);
    let printed = once.to_string();
    let back = parse_tensor_with(&printed, parsed.decls.clone()).map_err(|e| TestCaseError::fail(format!("{printed}: {e}")))?;
    let back = canonicalize(&back.expr).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(back, once, "round trip of {}", printed);
    Ok(())
}

/// Two spellings that differ only in dummy names have one canonical form.
pub fn renaming_invariant(a: &str, b: &str) -> Result<(), TestCaseError> {
    let ca = canonicalize(&parse_tensor(a).map_err(|e| TestCaseError::fail(e.to_string()))?.expr);
    let cb = canonicalize(&parse_tensor(b).map_err(|e| TestCaseError::fail(e.to_string()))?.expr);
    let (ca, cb) = (ca.map_err(|e| TestCaseError::fail(e.to_string()))?, cb.map_err(|e| TestCaseError::fail(e.to_string()))?);
    prop_assert_eq!(ca, cb, "{} vs {}", a, b);
    Ok(())
}
