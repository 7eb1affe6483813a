use num_traits::Zero;

use super::classical::poisson_bracket;
use super::element::commutator;
use super::ordering::{apply_ordering, OrderingScheme};
use super::{ClassicalPoly, WeylElement};
use crate::kernel::{rat, GaussianRational};

/// Two classically equal expressions for `q²p²` and their symmetric-ordered
/// quantum counterparts.
#[derive(Clone, Debug, PartialEq)]
pub struct GvhWitness {
    /// `(1/9){q³, p³}`.
    pub classical_lhs: ClassicalPoly,
    /// `(1/3){q²p, qp²}`.
    pub classical_rhs: ClassicalPoly,
    pub classical_residual: ClassicalPoly,
    /// `(1/9)(1/i)[Q(q³), Q(p³)]`.
    pub lhs: WeylElement,
    /// `(1/3)(1/i)[Q(q²p), Q(qp²)]`.
    pub rhs: WeylElement,
    pub residual: WeylElement,
}

impl GvhWitness {
    /// The constant `c` when the quantum residual is `c·Î`.
    pub fn constant(&self) -> Option<GaussianRational> {
        self.residual.as_scalar()
    }

    /// Classical residual vanishes and the quantum one is a nonzero multiple
    /// of the identity.
    pub fn is_obstruction(&self) -> bool {
        self.classical_residual.is_zero()
            && self.constant().is_some_and(|c| !c.is_zero())
    }
}

pub fn gvh_witness() -> GvhWitness {
    gvh_witness_with(OrderingScheme::WeylSymmetric)
}

pub(crate) fn gvh_witness_with(scheme: OrderingScheme) -> GvhWitness {
    let m = ClassicalPoly::monomial;
    let (ninth, third) = (rat(1, 9), rat(1, 3));
    let classical_lhs = poisson_bracket(&m(3, 0), &m(0, 3)).scale(&ninth);
    let classical_rhs = poisson_bracket(&m(2, 1), &m(1, 2)).scale(&third);
    let classical_residual = classical_lhs.sub(&classical_rhs);

    let q = |f: &ClassicalPoly| apply_ordering(f, scheme);
    let minus_i = -GaussianRational::i();
    let lhs = commutator(&q(&m(3, 0)), &q(&m(0, 3))).scale(&minus_i).scale_real(&ninth);
    let rhs = commutator(&q(&m(2, 1)), &q(&m(1, 2))).scale(&minus_i).scale_real(&third);
    let residual = lhs.sub(&rhs);
    GvhWitness { classical_lhs, classical_rhs, classical_residual, lhs, rhs, residual }
}
