//! Exact arithmetic: rationals, Gaussian rationals, multivariate polynomials
//! and rational functions over named variables.

mod gaussian;
mod poly;
mod ratfun;
mod rational;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use gaussian::GaussianRational;
pub use poly::{Monomial, Polynomial};
pub use ratfun::RationalFunction;
pub use rational::{rat, rat_from_int, Rational};

/// An exact field used as polynomial coefficients.
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn from_i64(n: i64) -> Self;
    fn try_inv(&self) -> Result<Self>;
}

impl Coefficient for Rational {
    fn from_i64(n: i64) -> Self {
        rat_from_int(n)
    }

    fn try_inv(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Neg,
    Inv,
}

/// Single entry point for field arithmetic. Unary operations ignore `b`.
pub fn field_op<C: Coefficient>(op: FieldOp, a: &C, b: &C) -> Result<C> {
    match op {
        FieldOp::Add => Ok(a.clone() + b.clone()),
        FieldOp::Mul => Ok(a.clone() * b.clone()),
        FieldOp::Neg => Ok(-a.clone()),
        FieldOp::Inv => a.try_inv(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_examples() {
        let r = field_op(FieldOp::Add, &rat(1, 2), &rat(1, 3)).unwrap();
        assert_eq!(r, rat(5, 6));
        assert_eq!(
            field_op(FieldOp::Inv, &Rational::zero(), &Rational::zero()),
            Err(Error::DivisionByZero)
        );
        assert_eq!(field_op(FieldOp::Neg, &rat(2, 4), &rat(0, 1)).unwrap(), rat(-1, 2));
    }

    #[test]
    fn gaussian_examples() {
        let i = GaussianRational::i();
        let sq = field_op(FieldOp::Mul, &i, &i).unwrap();
        assert_eq!(sq, GaussianRational::from_i64(-1));
        assert!(field_op(FieldOp::Inv, &GaussianRational::zero(), &i).is_err());
    }
}
