//! Random-field evaluation of abstract expressions, and the fixed suite of
//! identities that pins the sign conventions.

use std::collections::BTreeMap;

use super::component::ComponentTensor;
use super::curvature::Geometry;
use super::evaluate::{evaluate_abstract, Bindings, ConstantValues};
use super::manifest::sample_metrics;
use super::random::{random_field, rng};
use crate::error::{Error, Result};
use crate::kernel::{rat, Rational, RationalFunction};
use crate::parse::parse_tensor;
use crate::tensor::{TensorExpr, TensorSymbol, Variance};

pub const FIELD_DEGREE: u32 = 2;

/// Random polynomial components for every generic symbol in `e`, projected
/// onto the declared slot symmetries. Flat and curved versions of a symbol
/// share one binding.
pub fn random_bindings(e: &TensorExpr, geo: &Geometry, seed: u64) -> Result<Bindings> {
    let mut ranks: BTreeMap<String, (TensorSymbol, usize)> = BTreeMap::new();
    for t in &e.terms {
        for f in &t.factors {
            if !f.symbol.is_generic() {
                continue;
            }
            let rank = f.indices.len();
            match ranks.get(&f.symbol.name) {
                Some((_, r)) if *r != rank => {
                    return Err(Error::Shape(format!("`{}` used with ranks {r} and {rank}", f.symbol.name)))
                }
                _ => {
                    ranks.insert(f.symbol.name.clone(), (f.symbol.clone(), rank));
                }
            }
        }
    }
    let mut r = rng(seed);
    let vars = geo.metric.vars().clone();
    let mut out = Bindings::new();
    for (name, (sym, rank)) in ranks {
        let raw = random_field(&vars, vec![Variance::Down; rank], FIELD_DEGREE, &mut r);
        out.insert(name, project(&raw, &sym));
    }
    Ok(out)
}

/// Average of `sign · X∘perm` over the symbol's slot group.
fn project(x: &ComponentTensor, sym: &TensorSymbol) -> ComponentTensor {
    let group = sym.slot_group(x.rank());
    if group.len() <= 1 {
        return x.clone();
    }
    let w = RationalFunction::constant(x.variables().clone(), rat(1, group.len() as i64));
    ComponentTensor::from_fn(x.variables().clone(), x.variance().to_vec(), |idx| {
        let mut acc = RationalFunction::zero(x.variables().clone());
        for (perm, sign) in &group {
            let moved: Vec<usize> = perm.iter().map(|&k| idx[k]).collect();
            let c = x.get(&moved);
            acc = if *sign < 0 { acc.sub(c) } else { acc.add(c) };
        }
        acc.mul(&w)
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub metric: String,
    pub identically_zero: bool,
    /// Declared sample points where some component is nonzero.
    pub nonzero_samples: Vec<Vec<Rational>>,
}

/// Evaluates `e` with random fields on one geometry.
pub fn oracle_check(e: &TensorExpr, geo: &Geometry, seed: u64) -> Result<OracleReport> {
    let bindings = random_bindings(e, geo, seed)?;
    let v = evaluate_abstract(e, &bindings, geo, &ConstantValues::default())?;
    let mut nonzero_samples = Vec::new();
    for p in &geo.metric.samples {
        if v.tensor.nonzero_at(p)? {
            nonzero_samples.push(p.clone());
        }
    }
    Ok(OracleReport { metric: geo.metric.name.clone(), identically_zero: v.tensor.is_zero(), nonzero_samples })
}

/// Identities that must vanish exactly on every sample metric.
pub const PINNED_IDENTITIES: [(&str, &str); 6] = [
    ("vector commutator", "D[g,a] D[g,b] bar[T]^c - D[g,b] D[g,a] bar[T]^c + R[g]^c_{abd} bar[T]^d"),
    ("covector commutator", "D[g,a] D[g,b] bar[w]_c - D[g,b] D[g,a] bar[w]_c - R[g]^d_{abc} bar[w]_d"),
    (
        "(1,1) commutator",
        "D[g,a] D[g,b] bar[S]^c_e - D[g,b] D[g,a] bar[S]^c_e + R[g]^c_{abd} bar[S]^d_e - R[g]^d_{abe} bar[S]^c_d",
    ),
    ("scalar commutator", "D[g,a] D[g,b] bar[f] - D[g,b] D[g,a] bar[f]"),
    ("metric compatibility", "D[g,a] g_{bc}"),
    ("Ricci symmetry", "Ric[g]_{ab} - Ric[g]_{ba}"),
];

#[derive(Clone, Debug, PartialEq)]
pub struct PinResult {
    pub identity: String,
    pub metric: String,
    pub holds: bool,
}

/// Runs every pinned identity on every sample metric.
pub fn pinning_suite(seed: u64) -> Result<Vec<PinResult>> {
    let mut out = Vec::new();
    for g in sample_metrics() {
        let geo = Geometry::new(g)?;
        for (name, src) in PINNED_IDENTITIES {
            let e = parse_tensor(src)?.expr;
            let r = oracle_check(&e, &geo, seed)?;
            out.push(PinResult { identity: name.to_string(), metric: r.metric, holds: r.identically_zero });
        }
    }
    Ok(out)
}

/// Ricci scalar of the curved 2D sample at the origin.
pub fn bump_scalar_at_origin() -> Result<Rational> {
    let g = super::manifest::sample_metric("bump2")?;
    let geo = Geometry::new(g)?;
    geo.ricci_scalar.eval(&[rat(0, 1), rat(0, 1)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::sample_metric;
    use crate::tensor::{canonicalize, flat_commute_sort};

    fn geo(name: &str) -> Geometry {
        Geometry::new(sample_metric(name).unwrap()).unwrap()
    }

    #[test]
    fn all_pins_hold() {
        let r = pinning_suite(11).unwrap();
        assert_eq!(r.len(), 24);
        for p in r {
            assert!(p.holds, "{} on {}", p.identity, p.metric);
        }
        assert_eq!(bump_scalar_at_origin().unwrap(), rat(-2, 1));
    }

    #[test]
    fn wrong_sign_is_detected() {
        let e = parse_tensor("D[g,a] D[g,b] bar[T]^c - D[g,b] D[g,a] bar[T]^c - R[g]^c_{abd} bar[T]^d").unwrap().expr;
        let r = oracle_check(&e, &geo("bump4"), 3).unwrap();
        assert!(!r.identically_zero);
        assert!(!r.nonzero_samples.is_empty());
    }

    #[test]
    fn antisymmetric_binding() {
        let src = parse_tensor("antisym F {1 2}; F_{ab} + F_{ba}").unwrap();
        let r = oracle_check(&src.expr, &geo("minkowski4"), 5).unwrap();
        assert!(r.identically_zero);
    }

    #[test]
    fn flat_sort_preserves_components_on_flat_metrics() {
        let e = parse_tensor("D[eta,b] D[eta,^a] D[eta,c] T_a - D[eta,c] D[eta,^a] D[eta,b] T_a").unwrap().expr;
        let sorted = flat_commute_sort(&e).unwrap();
        assert!(sorted.is_zero());
        for name in ["minkowski4", "polar2"] {
            assert!(oracle_check(&e, &geo(name), 9).unwrap().identically_zero, "{name}");
        }
        let c = canonicalize(&e).unwrap();
        assert!(oracle_check(&c, &geo("polar2"), 9).unwrap().identically_zero);
    }
}
