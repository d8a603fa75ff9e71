//! Exact dyadic rationals `p / 2^q`.
//!
//! Every structural constant used by the test-box construction (thresholds
//! `2^{1-k}`, bucket edges `2^{-k}`, box volumes) is dyadic, so the claims
//! about them can be checked without rounding. Every finite `f64` is dyadic
//! as well, which makes conversion from floats exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// A number `numerator / 2^exponent` kept in canonical form: the numerator is
/// odd, or zero with exponent zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: BigInt,
    exponent: u64,
}

impl Dyadic {
    pub fn new(numerator: impl Into<BigInt>, exponent: u64) -> Self {
        let mut d = Dyadic {
            numerator: numerator.into(),
            exponent,
        };
        d.normalize();
        d
    }

    /// `2^{-k}`.
    pub fn pow2_neg(k: u64) -> Self {
        Dyadic::new(1, k)
    }

    pub fn from_integer(n: i64) -> Self {
        Dyadic::new(n, 0)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_negative(&self) -> bool {
        self.numerator.is_negative()
    }

    pub fn pow(&self, e: u32) -> Self {
        // An odd numerator stays odd under powers, so no renormalization.
        Dyadic {
            numerator: num_traits::pow(self.numerator.clone(), e as usize),
            exponent: if self.numerator.is_zero() {
                0
            } else {
                self.exponent * e as u64
            },
        }
    }

    /// Exact conversion; returns `None` for NaN and infinities.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        let (mantissa, exp, sign) = num_traits::Float::integer_decode(x);
        let mut numerator = BigInt::from(mantissa);
        if sign < 0 {
            numerator = -numerator;
        }
        Some(if exp >= 0 {
            Dyadic::new(numerator << exp as usize, 0)
        } else {
            Dyadic::new(numerator, (-exp) as u64)
        })
    }

    /// Nearest-ish `f64` rendering (exact whenever the value fits in 53 bits).
    pub fn to_f64(&self) -> f64 {
        if self.numerator.is_zero() {
            return 0.0;
        }
        let bits = self.numerator.bits();
        let (num, shift) = if bits > 64 {
            let shift = bits - 64;
            (&self.numerator >> shift as usize, shift as i64)
        } else {
            (self.numerator.clone(), 0)
        };
        let mantissa = num.to_f64().unwrap_or(f64::NAN);
        scale_by_pow2(mantissa, shift - self.exponent as i64)
    }

    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let twos = self.numerator.trailing_zeros().unwrap_or(0);
        let drop = twos.min(self.exponent);
        if drop > 0 {
            self.numerator >>= drop as usize;
            self.exponent -= drop;
        }
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, u64) {
        let e = self.exponent.max(other.exponent);
        let a = &self.numerator << (e - self.exponent) as usize;
        let b = &other.numerator << (e - other.exponent) as usize;
        (a, b, e)
    }
}

fn scale_by_pow2(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

impl Zero for Dyadic {
    fn zero() -> Self {
        Dyadic {
            numerator: BigInt::zero(),
            exponent: 0,
        }
    }

    fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }
}

impl One for Dyadic {
    fn one() -> Self {
        Dyadic {
            numerator: BigInt::one(),
            exponent: 0,
        }
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a + b, e)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a - b, e)
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        &self * &rhs
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        // Product of odd numerators is odd.
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            numerator: &self.numerator * &rhs.numerator,
            exponent: self.exponent + rhs.exponent,
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponent {
            0 => write!(f, "{}", self.numerator),
            e => write!(f, "{}/2^{}", self.numerator, e),
        }
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl From<Dyadic> for num_rational::BigRational {
    fn from(d: Dyadic) -> Self {
        let denom = BigInt::one() << d.exponent as usize;
        num_rational::BigRational::new(d.numerator, denom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::Sign;
    use num_integer::Integer;

    fn is_odd(n: &BigInt) -> bool {
        n.sign() != Sign::NoSign && n.is_odd()
    }

    #[test]
    fn canonical_form_reduces_powers_of_two() {
        let d = Dyadic::new(12, 5);
        assert_eq!(d.numerator(), &BigInt::from(3));
        assert_eq!(d.exponent(), 3);
        assert!(is_odd(d.numerator()));
        assert_eq!(Dyadic::new(0, 9).exponent(), 0);
        assert_eq!(Dyadic::new(8, 2), Dyadic::from_integer(2));
    }

    #[test]
    fn arithmetic_is_exact() {
        let quarter = Dyadic::pow2_neg(2);
        let three_quarters = Dyadic::one() - quarter.clone();
        let v = three_quarters.clone() * three_quarters * quarter;
        assert_eq!(v, Dyadic::new(9, 6));
        assert_eq!(v.to_f64(), 0.140625);
        assert_eq!(Dyadic::new(7, 3).pow(4) * Dyadic::pow2_neg(3), Dyadic::new(2401, 15));
    }

    #[test]
    fn ordering_across_exponents() {
        assert!(Dyadic::new(2401, 15) > Dyadic::pow2_neg(4));
        assert!(Dyadic::new(1, 2) == Dyadic::new(2, 3));
        assert!(Dyadic::new(-1, 1) < Dyadic::zero());
    }

    #[test]
    fn float_round_trip() {
        for x in [0.0, 1.0, 0.1, 1.0 / 3.0, 0.75, 1e-300, 5e-324, 123456.789] {
            let d = Dyadic::from_f64(x).unwrap();
            assert_eq!(d.to_f64(), x, "{x}");
        }
        assert!(Dyadic::from_f64(f64::NAN).is_none());
    }
}
