use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{rat_from_int, Coefficient, Rational};
use crate::error::{Error, Result};

/// Exact complex number `re + im·i` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn imag(im: Rational) -> Self {
        Self { re: Rational::zero(), im }
    }

    pub fn i() -> Self {
        Self::imag(Rational::one())
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `(-i)^k`, used by the momentum operator `p = -i d/dq`.
    pub fn minus_i_pow(k: u32) -> Self {
        match k % 4 {
            0 => Self::one(),
            1 => -Self::i(),
            2 => -Self::one(),
            _ => Self::i(),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self { re: &self.re * r, im: &self.im * r }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::real(Rational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(Rational::one())
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl Coefficient for GaussianRational {
    fn from_i64(n: i64) -> Self {
        Self::real(rat_from_int(n))
    }

    fn try_inv(&self) -> Result<Self> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        if norm.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self { re: &self.re / &norm, im: -(&self.im / &norm) })
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        Self::real(r)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write_imag(f, &self.im),
            (false, false) => {
                write!(f, "({}", self.re)?;
                if self.im.is_negative() {
                    write!(f, " - ")?;
                    write_imag(f, &-self.im.clone())?;
                } else {
                    write!(f, " + ")?;
                    write_imag(f, &self.im)?;
                }
                write!(f, ")")
            }
        }
    }
}

fn write_imag(f: &mut fmt::Formatter<'_>, im: &Rational) -> fmt::Result {
    if im.is_one() {
        write!(f, "i")
    } else if *im == -Rational::one() {
        write!(f, "-i")
    } else {
        write!(f, "{}*i", im)
    }
}
