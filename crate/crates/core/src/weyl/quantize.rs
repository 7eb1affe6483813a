use std::collections::BTreeMap;

use super::classical::poisson_bracket;
use super::element::commutator;
use super::ordering::{apply_ordering, OrderingScheme};
use super::{ClassicalPoly, WeylElement};
use crate::error::{Error, Result};
use crate::kernel::{rat, GaussianRational};

/// Linear map from classical polynomials to operators, given on monomials.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OperatorMap {
    assignments: BTreeMap<(u32, u32), WeylElement>,
}

/// The forced assignment on polynomials of degree at most two.
pub type QuantizationTable = OperatorMap;

impl OperatorMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, n: u32, m: u32, op: WeylElement) {
        self.assignments.insert((n, m), op);
    }

    pub fn get(&self, n: u32, m: u32) -> Option<&WeylElement> {
        self.assignments.get(&(n, m))
    }

    pub fn monomials(&self) -> impl Iterator<Item = &(u32, u32)> {
        self.assignments.keys()
    }

    /// `1 ↦ Î`, `q ↦ q̂`, `p ↦ p̂`, `q² ↦ q̂²`, `p² ↦ p̂²`, `qp ↦ (q̂p̂ + p̂q̂)/2`.
    pub fn u2() -> Self {
        let (q, p) = (WeylElement::q(), WeylElement::p());
        let mut t = Self::new();
        t.insert(0, 0, WeylElement::identity());
        t.insert(1, 0, q.clone());
        t.insert(0, 1, p.clone());
        t.insert(2, 0, q.mul(&q));
        t.insert(0, 2, p.mul(&p));
        t.insert(1, 1, q.mul(&p).add(&p.mul(&q)).scale_real(&rat(1, 2)));
        t
    }

    /// An ordering scheme tabulated on the given monomials.
    pub fn from_ordering(scheme: OrderingScheme, monomials: &[(u32, u32)]) -> Self {
        let mut t = Self::new();
        for &(n, m) in monomials {
            t.insert(n, m, apply_ordering(&ClassicalPoly::monomial(n, m), scheme));
        }
        t
    }

    /// Linear extension; the error carries the first unassigned monomial.
    pub fn apply(&self, f: &ClassicalPoly) -> std::result::Result<WeylElement, (u32, u32)> {
        let mut out = WeylElement::zero();
        for ((n, m), c) in f.terms() {
            let op = self.get(*n, *m).ok_or((*n, *m))?;
            out = out.add(&op.scale_real(c));
        }
        Ok(out)
    }
}

/// Monomials of total degree at most two: `{1, q, p, q², p², qp}`.
pub fn u2_basis() -> Vec<ClassicalPoly> {
    [(0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (1, 1)]
        .iter()
        .map(|&(n, m)| ClassicalPoly::monomial(n, m))
        .collect()
}

/// Quantize a polynomial of degree at most two with the forced table.
pub fn quantize_u2(f: &ClassicalPoly) -> Result<WeylElement> {
    let degree = f.degree();
    if degree > 2 {
        return Err(Error::DegreeExceeded { degree, bound: 2 });
    }
    Ok(OperatorMap::u2().apply(f).expect("table covers every monomial of degree <= 2"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairCheck {
    pub f: ClassicalPoly,
    pub g: ClassicalPoly,
    pub bracket: ClassicalPoly,
    /// Image of the classical bracket.
    pub lhs: WeylElement,
    /// `(1/i)[f̂, ĝ]`.
    pub rhs: WeylElement,
    pub bracket_ok: bool,
    pub linear_ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomomorphismReport {
    pub pairs: Vec<PairCheck>,
    /// `None` when the constant polynomial is not assigned.
    pub unit_ok: Option<bool>,
    pub self_adjoint: Vec<(ClassicalPoly, bool)>,
}

impl HomomorphismReport {
    pub fn failing_pairs(&self) -> Vec<&PairCheck> {
        self.pairs.iter().filter(|p| !p.bracket_ok || !p.linear_ok).collect()
    }

    /// Bracket, linearity and unit conditions all hold.
    pub fn all_pass(&self) -> bool {
        self.failing_pairs().is_empty() && self.unit_ok.unwrap_or(true)
    }
}

/// Check the quantization conditions on every unordered pair of distinct
/// basis elements: `Q({f,g}) = (1/i)[Q(f), Q(g)]`, additivity and
/// homogeneity, and `Q(1) = Î`.
pub fn check_homomorphism(map: &OperatorMap, basis: &[ClassicalPoly]) -> Result<HomomorphismReport> {
    let minus_i = -GaussianRational::i();
    let lambda = rat(-3, 7);
    let image = |f: &ClassicalPoly, bracket: Option<(&ClassicalPoly, &ClassicalPoly)>| {
        map.apply(f).map_err(|(n, m)| {
            let (bf, bg) = bracket.map(|(a, b)| (a.to_string(), b.to_string())).unwrap_or_else(|| (f.to_string(), String::new()));
            Error::MissingAssignment { f: bf, g: bg, missing: ClassicalPoly::monomial(n, m).to_string() }
        })
    };
    let mut pairs = Vec::new();
    for (i, f) in basis.iter().enumerate() {
        for g in &basis[i + 1..] {
            let bracket = poisson_bracket(f, g);
            let fh = image(f, None)?;
            let gh = image(g, None)?;
            let lhs = image(&bracket, Some((f, g)))?;
            let rhs = commutator(&fh, &gh).scale(&minus_i);
            let sum = image(&f.add(g), None)?;
            let scaled = image(&f.scale(&lambda), None)?;
            let linear_ok = sum == fh.add(&gh) && scaled == fh.scale_real(&lambda);
            pairs.push(PairCheck {
                f: f.clone(),
                g: g.clone(),
                bracket,
                bracket_ok: lhs == rhs,
                lhs,
                rhs,
                linear_ok,
            });
        }
    }
    let unit_ok = map.get(0, 0).map(|u| *u == WeylElement::identity());
    let self_adjoint = basis
        .iter()
        .map(|f| Ok((f.clone(), image(f, None)?.is_self_adjoint())))
        .collect::<Result<_>>()?;
    Ok(HomomorphismReport { pairs, unit_ok, self_adjoint })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn qp_symmetrized() {
        let qp = quantize_u2(&ClassicalPoly::monomial(1, 1)).unwrap();
        let expected = WeylElement::word(1, 1, GaussianRational::one())
            .sub(&WeylElement::scalar(GaussianRational::i().scale(&rat(1, 2))));
        assert_eq!(qp, expected);
        assert_eq!(quantize_u2(&ClassicalPoly::one()).unwrap(), WeylElement::identity());
    }

    #[test]
    fn cubic_rejected() {
        assert_eq!(
            quantize_u2(&ClassicalPoly::monomial(3, 0)),
            Err(Error::DegreeExceeded { degree: 3, bound: 2 })
        );
    }

    #[test]
    fn u2_map_passes_all_pairs() {
        let report = check_homomorphism(&OperatorMap::u2(), &u2_basis()).unwrap();
        assert_eq!(report.pairs.len(), 15);
        assert!(report.all_pass());
        assert!(report.self_adjoint.iter().all(|(_, ok)| *ok));
    }

    #[test]
    fn empty_basis_is_vacuous() {
        let report = check_homomorphism(&OperatorMap::u2(), &[]).unwrap();
        assert!(report.pairs.is_empty());
        assert!(report.all_pass());
    }

    #[test]
    fn missing_bracket_is_named() {
        let mut t = OperatorMap::new();
        t.insert(2, 0, WeylElement::q().pow(2));
        t.insert(0, 2, WeylElement::p().pow(2));
        let err = check_homomorphism(&t, &[ClassicalPoly::monomial(2, 0), ClassicalPoly::monomial(0, 2)]).unwrap_err();
        match err {
            Error::MissingAssignment { f, g, missing } => {
                assert_eq!((f.as_str(), g.as_str(), missing.as_str()), ("q^2", "p^2", "q*p"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unit_must_map_to_identity() {
        let mut t = OperatorMap::u2();
        t.insert(0, 0, WeylElement::identity().scale_real(&rat(2, 1)));
        let report = check_homomorphism(&t, &u2_basis()).unwrap();
        assert_eq!(report.unit_ok, Some(false));
        assert!(!report.all_pass());
    }
}
