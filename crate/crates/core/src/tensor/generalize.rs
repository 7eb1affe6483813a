//! The minimal-substitution map from flat to curved expressions.

use super::canon::{canonicalize, canonicalize_with, CanonOptions};
use super::derivative::{curved_sort_with, Location};
use super::expr::{Connection, TensorExpr};
use super::symbol::Side;
use crate::error::{Error, Result};

/// Syntactic image: `η → g`, `∇^(η) → ∇^(g)`, `X → X̄`, derivative order
/// kept. Linear and multiplicative by construction.
pub fn generalize(e: &TensorExpr) -> Result<TensorExpr> {
    if e.side()? == Some(Side::Curved) {
        return Err(Error::CurvedInput(e.to_string()));
    }
    let mut out = e.clone();
    for t in &mut out.terms {
        for f in &mut t.factors {
            f.symbol = f.symbol.barred();
            for d in &mut f.prefix {
                d.connection = Connection::Curved;
            }
        }
    }
    Ok(out)
}

/// Outcome of comparing the images of two flat expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wellposedness {
    pub flat_equal: bool,
    /// Canonical `flat_commute_sort(eA − eB)`.
    pub flat_residual: TensorExpr,
    /// Canonical `generalize(eB) − generalize(eA)` after sorting curved
    /// derivatives into a common order.
    pub curved_residual: TensorExpr,
    /// Locations swapped while sorting, for certificates.
    pub swaps: Vec<Location>,
}

impl Wellposedness {
    /// A generalization map can exist on `{eA, eB}`.
    pub fn consistent(&self) -> bool {
        !self.flat_equal || self.curved_residual.is_zero()
    }
}

pub fn wellposedness_check(ea: &TensorExpr, eb: &TensorExpr) -> Result<Wellposedness> {
    let diff = ea.sub(eb);
    let flat_residual = canonicalize_with(&diff, CanonOptions { commute_flat: true })?;
    let image = generalize(&eb.sub(ea))?;
    let mut swaps = Vec::new();
    let curved_residual = curved_sort_with(&image, |loc, _, _| swaps.push(loc))?;
    Ok(Wellposedness {
        flat_equal: flat_residual.is_zero(),
        flat_residual,
        curved_residual: canonicalize(&curved_residual)?,
        swaps,
    })
}
