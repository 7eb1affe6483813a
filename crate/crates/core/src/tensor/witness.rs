//! Concrete obstruction witnesses for the generalization map.

use super::canon::canonicalize;
use super::constraint::{apply_constraints_with, ConstraintRule};
use super::derivative::{curved_commute, curved_sort, flat_commute_sort, Location};
use super::expr::{labels, Connection, Constant, Derivative, Factor, Scalar, TensorExpr, Term};
use super::generalize::{generalize, wellposedness_check, Wellposedness};
use super::index::IndexLabel;
use super::symbol::{Side, SlotSymmetry, TensorSymbol};
use crate::error::{Error, Result};
use crate::kernel::rat;

fn field(name: &str, side: Side, spec: &str, conn: Connection, prefix: &str) -> Factor {
    let prefix = labels(prefix).into_iter().map(|l| Derivative::new(conn, l)).collect();
    Factor::new(TensorSymbol::generic(name, side), labels(spec)).with_prefix(prefix)
}

fn flat(name: &str, spec: &str, prefix: &str) -> TensorExpr {
    TensorExpr::from_factor(field(name, Side::Flat, spec, Connection::Flat, prefix))
}

/// `∇^(η)_a ∇^(η)_b T^c` and `∇^(η)_b ∇^(η)_a T^c`.
pub fn theorem_pair() -> (TensorExpr, TensorExpr) {
    (flat("T", "^c", "_ab"), flat("T", "^c", "_ba"))
}

/// Flat-equal pair whose curved images differ by a curvature term.
pub fn gr_witness() -> Result<Wellposedness> {
    let (a, b) = theorem_pair();
    wellposedness_check(&a, &b)
}

/// Generalizes and averages every derivative prefix over all orderings.
pub fn symmetric_image(e: &TensorExpr) -> Result<TensorExpr> {
    let g = generalize(e)?;
    let mut out = Vec::new();
    for t in &g.terms {
        let mut partial = vec![t.clone()];
        for fi in 0..t.factors.len() {
            let k = t.factors[fi].prefix.len();
            let perms = super::canon::permutations(k);
            let w = Scalar::rational(rat(1, perms.len() as i64));
            let mut next = Vec::new();
            for p in &partial {
                for perm in &perms {
                    let mut q = p.clone();
                    q.factors[fi].prefix = perm.iter().map(|&i| p.factors[fi].prefix[i].clone()).collect();
                    q.scalar = q.scalar.mul(&w);
                    next.push(q);
                }
            }
            partial = next;
        }
        out.extend(partial);
    }
    Ok(TensorExpr::from_terms(out))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricCheck {
    pub image: TensorExpr,
    pub direct: TensorExpr,
    /// Canonical `image − ∇_a ∇_b T̄^c`.
    pub residual: TensorExpr,
}

/// Defect of the symmetrized map against derivative compatibility.
pub fn symmetric_defect(e: &TensorExpr) -> Result<TensorExpr> {
    curved_sort(&symmetric_image(e)?.sub(&generalize(e)?))
}

pub fn symmetric_map_check() -> Result<SymmetricCheck> {
    let (e, _) = theorem_pair();
    Ok(SymmetricCheck { image: symmetric_image(&e)?, direct: generalize(&e)?, residual: symmetric_defect(&e)? })
}

pub fn antisymmetric_f(side: Side) -> TensorSymbol {
    TensorSymbol::generic("F", side).with_symmetry(SlotSymmetry::antisymmetric(vec![0, 1]))
}

/// `∇^b ∇^a X_{ab}` for the given symbol.
pub fn double_divergence(sym: TensorSymbol, conn: Connection) -> TensorExpr {
    let prefix = vec![Derivative::new(conn, IndexLabel::up("b")), Derivative::new(conn, IndexLabel::up("a"))];
    TensorExpr::from_factor(Factor::new(sym, labels("_ab")).with_prefix(prefix))
}

/// `∇^(η)b ∇^(η)a F_ab` with `F` antisymmetric; exactly zero.
pub fn flat_current_conservation() -> Result<TensorExpr> {
    flat_commute_sort(&double_divergence(antisymmetric_f(Side::Flat), Connection::Flat))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LorentzReport {
    /// `∇^b j̄_b` with `j̄_b = −(1/4π) ∇^a ∇_a Ā_b`.
    pub start: TensorExpr,
    /// After moving the divergence next to `Ā`, before the gauge condition.
    pub before_constraint: TensorExpr,
    /// Canonical result under `∇^b Ā_b = 0`.
    pub residual: TensorExpr,
    /// The same steps with the flat connection.
    pub flat_residual: TensorExpr,
    /// `−(1/4π) ∇^b (R^d_b Ā_d)` expanded, for comparison.
    pub expected: TensorExpr,
}

pub fn lorentz_start(conn: Connection) -> TensorExpr {
    let side = if conn == Connection::Flat { Side::Flat } else { Side::Curved };
    let coeff = Scalar::rational(rat(-1, 4)).mul(&Scalar::constant(Constant::Pi, -1));
    let f = field("A", side, "_b", conn, "^b^a_a");
    TensorExpr::from_terms(vec![Term::new(coeff, vec![f])])
}

pub fn lorentz_gauge_rule(conn: Connection) -> Result<ConstraintRule> {
    let side = if conn == Connection::Flat { Side::Flat } else { Side::Curved };
    ConstraintRule::new(Term::new(Scalar::one(), vec![field("A", side, "_b", conn, "^b")]), TensorExpr::zero())
}

/// Finds the factor of `A` carrying three derivatives.
fn three_derivative_site(e: &TensorExpr) -> Result<(usize, usize)> {
    for (ti, t) in e.terms.iter().enumerate() {
        for (fi, f) in t.factors.iter().enumerate() {
            if f.symbol.name == "A" && f.prefix.len() == 3 {
                return Ok((ti, fi));
            }
        }
    }
    Err(Error::InvalidLocation("no third-order derivative of A".into()))
}

/// The rewrite steps of the Lorentz-gauge computation: two swaps bring the
/// outer divergence next to `A`, then the gauge condition removes it.
pub fn lorentz_steps(conn: Connection, mut on_step: impl FnMut(LorentzStep, &TensorExpr)) -> Result<TensorExpr> {
    let mut cur = lorentz_start(conn);
    for p in [0, 1] {
        let (ti, fi) = three_derivative_site(&cur)?;
        let loc = Location::new(ti, fi, p);
        cur = if conn == Connection::Curved {
            let next = curved_commute(&cur, loc)?;
            on_step(LorentzStep::Commute(loc), &next);
            next
        } else {
            let mut next = cur.clone();
            next.terms[ti].factors[fi].prefix.swap(p, p + 1);
            on_step(LorentzStep::FlatSwap(loc), &next);
            next
        };
        cur = canonicalize(&cur)?;
        on_step(LorentzStep::Canonicalize, &cur);
    }
    on_step(LorentzStep::BeforeConstraint, &cur);
    let rule = lorentz_gauge_rule(conn)?;
    apply_constraints_with(&cur, &[rule], |_, e| on_step(LorentzStep::Constraint, e))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LorentzStep {
    Commute(Location),
    FlatSwap(Location),
    Canonicalize,
    BeforeConstraint,
    Constraint,
}

pub fn lorentz_expected() -> Result<TensorExpr> {
    let coeff = Scalar::rational(rat(-1, 4)).mul(&Scalar::constant(Constant::Pi, -1));
    let ric = Factor::new(TensorSymbol::ricci(), labels("_b^d"));
    let a = field("A", Side::Curved, "_d", Connection::Curved, "");
    let inner = TensorExpr::from_terms(vec![Term::new(coeff, vec![ric, a])]);
    canonicalize(&super::derivative::differentiate(&inner, &Derivative::new(Connection::Curved, IndexLabel::up("b")))?)
}

pub fn lorentz_gauge_contradiction() -> Result<LorentzReport> {
    let mut before = TensorExpr::zero();
    let residual = lorentz_steps(Connection::Curved, |s, e| {
        if s == LorentzStep::BeforeConstraint {
            before = e.clone();
        }
    })?;
    let flat_residual = lorentz_steps(Connection::Flat, |_, _| {})?;
    Ok(LorentzReport {
        start: lorentz_start(Connection::Curved),
        before_constraint: before,
        residual,
        flat_residual,
        expected: lorentz_expected()?,
    })
}

/// Flat-equal pairs whose factors have order at most two, plus scalar
/// double derivatives. Every pair must have zero curved residual.
pub fn order2_family() -> Vec<(TensorExpr, TensorExpr)> {
    let mut out = Vec::new();
    let names = ["a", "b"];
    let variances = ["_", "^"];
    // scalar double-derivative swaps, every variance combination
    for va in variances {
        for vb in variances {
            let p = format!("{va}{}{vb}{}", names[0], names[1]);
            let q = format!("{vb}{}{va}{}", names[1], names[0]);
            out.push((flat("f", "", &p), flat("f", "", &q)));
        }
    }
    // contracted scalar Laplacian in both orders
    out.push((flat("f", "", "^a_a"), flat("f", "", "_a^a")));
    // single derivatives of vectors and covectors
    for v in variances {
        let s = format!("{v}c");
        out.push((flat("T", &s, "_a"), flat("T", &s, "_a")));
        out.push((flat("T", &s, "^a"), flat("T", &s, "^a")));
    }
    // products of order-one objects and metric identities
    let u = |s: &str| field("u", Side::Flat, s, Connection::Flat, "");
    let v = |s: &str| field("v", Side::Flat, s, Connection::Flat, "");
    let eta = |s: &str| Factor::new(TensorSymbol::metric(Side::Flat), labels(s));
    let prod = |fs: Vec<Factor>| TensorExpr::from_terms(vec![Term::new(Scalar::one(), fs)]);
    out.push((prod(vec![u("^a"), v("_a")]), prod(vec![v("^b"), u("_b")])));
    out.push((prod(vec![eta("_ab"), u("^b")]), prod(vec![u("_a")])));
    out.push((prod(vec![eta("^ab"), eta("_bc")]), prod(vec![Factor::new(TensorSymbol::kronecker(), labels("^a_c"))])));
    // antisymmetry of an order-two tensor
    let f = |s: &str| Factor::new(antisymmetric_f(Side::Flat), labels(s));
    out.push((prod(vec![f("_ab")]), prod(vec![f("_ba")]).neg()));
    // Leibniz on scalars: ∇_a (f h) = h ∇_a f + f ∇_a h
    let sc = |n: &str, pre: &str| field(n, Side::Flat, "", Connection::Flat, pre);
    let lhs = super::derivative::differentiate(
        &prod(vec![sc("f", ""), sc("h", "")]),
        &Derivative::new(Connection::Flat, IndexLabel::down("a")),
    )
    .expect("valid product");
    out.push((lhs, prod(vec![sc("h", ""), sc("f", "_a")]).add(&prod(vec![sc("f", ""), sc("h", "_a")]))));
    // gauge shift of a potential: ∇_a ∇_b χ − ∇_b ∇_a χ
    out.push((flat("chi", "", "_a_b"), flat("chi", "", "_b_a")));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gr_witness_residual() {
        let w = gr_witness().unwrap();
        assert!(w.flat_equal);
        assert_eq!(w.curved_residual.to_string(), "R[g]^c_{abd} bar[T]^d");
    }

    #[test]
    fn symmetric_map_residual_is_half_riemann() {
        let s = symmetric_map_check().unwrap();
        assert_eq!(s.residual.to_string(), "1/2 R[g]^c_{abd} bar[T]^d");
    }

    #[test]
    fn conservation_and_control() {
        assert!(flat_current_conservation().unwrap().is_zero());
        let s = TensorSymbol::generic("S", Side::Flat).with_symmetry(SlotSymmetry::symmetric(vec![0, 1]));
        assert!(!flat_commute_sort(&double_divergence(s, Connection::Flat)).unwrap().is_zero());
    }

    #[test]
    fn lorentz_residual_matches_expected() {
        let r = lorentz_gauge_contradiction().unwrap();
        assert!(!r.residual.is_zero());
        assert!(r.flat_residual.is_zero());
        assert_eq!(r.residual, r.expected, "got {}", r.residual);
    }

    #[test]
    fn order_two_family_is_consistent() {
        for (a, b) in order2_family() {
            let w = wellposedness_check(&a, &b).unwrap();
            assert!(w.flat_equal, "{a} vs {b}");
            assert!(w.curved_residual.is_zero(), "{a} vs {b}: {}", w.curved_residual);
        }
    }
}
