//! Scalar abstraction for the rational tree functionals.
//!
//! Everything that is a rational function of subtree counts (projections,
//! harmonic numbers, the tilted transition law, generating functions) is
//! written against [`Scalar`], so the same code runs in `f64` for large trees
//! and in exact [`BigRational`] for identity checks on small ones.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Num;
use std::fmt::Debug;
use std::ops::Neg;

pub trait Scalar: Num + Neg<Output = Self> + Clone + PartialOrd + Debug {
    fn from_count(n: u64) -> Self;

    /// Integer power by repeated squaring.
    fn powu(&self, exp: u32) -> Self {
        num_traits::pow(self.clone(), exp as usize)
    }

    /// Lossy conversion used for reporting.
    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn from_count(n: u64) -> Self {
        n as f64
    }
    fn powu(&self, exp: u32) -> Self {
        self.powi(exp as i32)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_count(n: u64) -> Self {
        n as f32
    }
    fn powu(&self, exp: u32) -> Self {
        self.powi(exp as i32)
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

impl Scalar for BigRational {
    fn from_count(n: u64) -> Self {
        Ratio::from_integer(BigInt::from(n))
    }
    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for Ratio<i128> {
    fn from_count(n: u64) -> Self {
        Ratio::from_integer(n as i128)
    }
    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

/// `p/q` in any scalar type.
pub fn ratio<S: Scalar>(p: u64, q: u64) -> S {
    S::from_count(p) / S::from_count(q)
}

pub(crate) fn is_positive<S: Scalar>(x: &S) -> bool {
    *x > S::zero()
}
