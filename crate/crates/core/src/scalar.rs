//! Numeric abstraction used by inference so the same code runs in `f64`
//! during simulation and in exact rational arithmetic inside the oracle.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{NumAssign, Signed, ToPrimitive};

/// A field-like value type that preference matrices can be accumulated in.
pub trait Scalar: Clone + Debug + PartialOrd + Signed + NumAssign + Send + Sync {
    fn from_ratio(num: u64, den: u64) -> Self;

    /// Converts an `f64`. For rationals the conversion is exact.
    fn from_f64(value: f64) -> Self;

    fn to_f64(&self) -> f64;

    fn from_i64(value: i64) -> Self {
        let magnitude = Self::from_ratio(value.unsigned_abs(), 1);
        if value < 0 {
            -magnitude
        } else {
            magnitude
        }
    }
}

impl Scalar for f64 {
    fn from_ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(value: f64) -> Self {
        value
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(value: f64) -> Self {
        BigRational::from_float(value).expect("finite probability")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Sign of a scalar as `-1`, `0` or `1`.
pub fn sign<S: Scalar>(value: &S) -> i8 {
    let zero = S::zero();
    if *value > zero {
        1
    } else if *value < zero {
        -1
    } else {
        0
    }
}
