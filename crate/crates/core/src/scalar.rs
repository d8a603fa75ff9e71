//! The coordinate type abstraction.
//!
//! Geometry and the dispersion engine only need ordered ring operations, so
//! they are written once against [`Scalar`] and run on floats, exact dyadics
//! and arbitrary-precision rationals alike.

use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::dyadic::Dyadic;

/// Ordered ring element usable as a coordinate.
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
{
    /// Conversion from a float; exact for every type except `f32`, which
    /// rounds to nearest.
    fn from_f64(x: f64) -> Self;

    fn to_f64(&self) -> f64;

    /// False for NaN and infinities.
    fn is_finite(&self) -> bool {
        true
    }
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Scalar for f32 {
    fn from_f64(x: f64) -> Self {
        x as f32
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
    fn is_finite(&self) -> bool {
        f32::is_finite(*self)
    }
}

impl Scalar for Dyadic {
    fn from_f64(x: f64) -> Self {
        Dyadic::from_f64(x).expect("non-finite value converted to Dyadic")
    }
    fn to_f64(&self) -> f64 {
        Dyadic::to_f64(self)
    }
}

impl Scalar for BigRational {
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("non-finite value converted to BigRational")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}
