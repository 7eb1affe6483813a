//! Phase-space polynomials and their operator counterparts.
//!
//! Units are chosen with ħ = 1, so the canonical pair satisfies
//! `[q̂, p̂] = i`. Operators are stored in the q-left normal form `q̂ⁿp̂ᵐ`;
//! the p-left "normal ordering" is a map into that form, not a storage format.

mod classical;
mod element;
mod ordering;
mod prescription;
mod quantize;
mod witness;

pub use classical::{poisson_bracket, ClassicalPoly};
pub use element::{commutator, weyl_normal_form, Generator, WeylElement};
pub use ordering::{apply_ordering, OrderingScheme};
pub use prescription::{operator_action, prescription_action, prescription_check, PrescriptionCheck};
pub use quantize::{
    check_homomorphism, quantize_u2, u2_basis, HomomorphismReport, OperatorMap, PairCheck,
    QuantizationTable,
};
pub use witness::{gvh_witness, GvhWitness};
