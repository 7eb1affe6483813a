//! Seeded random polynomial tensor fields.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::component::{multi_indices, ComponentTensor};
use crate::kernel::{Polynomial, RationalFunction, Rational};
use crate::tensor::Variance;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Polynomial of total degree ≤ `degree` with small integer coefficients.
pub fn random_polynomial(vars: &Arc<[String]>, degree: u32, rng: &mut impl Rng) -> Polynomial {
    let n = vars.len();
    let mut terms = Vec::new();
    for e in multi_indices(degree as usize + 1, n) {
        let exps: Vec<u32> = e.iter().map(|&k| k as u32).collect();
        if exps.iter().sum::<u32>() > degree || !rng.gen_bool(0.5) {
            continue;
        }
        let c: i64 = rng.gen_range(-3..=3);
        if c != 0 {
            terms.push((exps, Rational::from_integer(c.into())));
        }
    }
    Polynomial::from_terms(vars.clone(), terms)
}

pub fn random_field(vars: &Arc<[String]>, variance: Vec<Variance>, degree: u32, rng: &mut impl Rng) -> ComponentTensor {
    ComponentTensor::from_fn(vars.clone(), variance, |_| RationalFunction::from_poly(random_polynomial(vars, degree, rng)))
}
