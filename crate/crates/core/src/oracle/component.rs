use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{RationalFunction, Rational};
use crate::tensor::Variance;

/// Dense array of exact components, one slot per variance entry.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentTensor {
    vars: Arc<[String]>,
    variance: Vec<Variance>,
    data: Vec<RationalFunction>,
}

/// All index tuples of the given rank, last slot fastest.
pub fn multi_indices(dim: usize, rank: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = dim.pow(rank as u32);
    (0..total).map(move |mut k| {
        let mut idx = vec![0; rank];
        for slot in (0..rank).rev() {
            idx[slot] = k % dim;
            k /= dim;
        }
        idx
    })
}

impl ComponentTensor {
    pub fn zeros(vars: Arc<[String]>, variance: Vec<Variance>) -> Self {
        let n = vars.len().pow(variance.len() as u32);
        let data = vec![RationalFunction::zero(vars.clone()); n];
        Self { vars, variance, data }
    }

    pub fn from_fn(
        vars: Arc<[String]>,
        variance: Vec<Variance>,
        mut f: impl FnMut(&[usize]) -> RationalFunction,
    ) -> Self {
        let dim = vars.len();
        let rank = variance.len();
        let data = multi_indices(dim, rank).map(|i| f(&i)).collect();
        Self { vars, variance, data }
    }

    pub fn variables(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank());
        idx.iter().fold(0, |acc, &i| acc * self.dim() + i)
    }

    pub fn get(&self, idx: &[usize]) -> &RationalFunction {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: RationalFunction) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    pub fn components(&self) -> impl Iterator<Item = (Vec<usize>, &RationalFunction)> {
        multi_indices(self.dim(), self.rank()).zip(self.data.iter())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RationalFunction::is_zero)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.variance != other.variance || self.vars != other.vars {
            return Err(Error::Shape("subtracting tensors of different type".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect();
        Ok(Self { vars: self.vars.clone(), variance: self.variance.clone(), data })
    }

    /// Component values at a point.
    pub fn eval_at(&self, point: &[Rational]) -> Result<Vec<Rational>> {
        self.data.iter().map(|f| f.eval(point)).collect()
    }

    /// True when some component is nonzero at `point`.
    pub fn nonzero_at(&self, point: &[Rational]) -> Result<bool> {
        use num_traits::Zero;
        Ok(self.eval_at(point)?.iter().any(|v| !v.is_zero()))
    }
}
