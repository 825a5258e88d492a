//! Scalar abstraction: the whole crate is generic over the entry type.
//!
//! Two families of scalars are supported:
//!
//! * [`Scalar`] — ring/field arithmetic only. Implemented by `f32`/`f64`,
//!   the exact rational [`Exact`](crate::Exact), and the multiprecision
//!   float [`Mp`](crate::mp::Mp). Enough for determinants, Vandermonde
//!   products and symmetric polynomials.
//! * [`RealScalar`] — adds transcendentals (`exp`, `cos`, `powf`, ...)
//!   and precision awareness; this is what the kernel evaluators and the
//!   tolerance-aware sign oracle need. Implemented by `f32`/`f64` and `Mp`.

use num_traits::{FromPrimitive, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use std::fmt::{Debug, Display};

/// Ring-level scalar: cloneable, ordered, signed arithmetic.
pub trait Scalar:
    Signed + FromPrimitive + ToPrimitive + Clone + PartialOrd + Display + Debug + Send + Sync
{
    /// True for exact types (rationals), false for floats. Drives the
    /// distinctness test of parameter vectors.
    fn is_exact() -> bool {
        false
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

impl Scalar for num_rational::BigRational {
    fn is_exact() -> bool {
        true
    }
}

/// Classified sign of a value whose last bits may be in doubt.
///
/// Produced only by [`sign_with_tolerance`] (floats) or by exact
/// comparison (rationals); never constructed ad hoc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignClass {
    Negative,
    Zero,
    Positive,
}

impl SignClass {
    pub fn flip(self) -> SignClass {
        match self {
            SignClass::Negative => SignClass::Positive,
            SignClass::Zero => SignClass::Zero,
            SignClass::Positive => SignClass::Negative,
        }
    }
}

/// Decide the sign of `v` given a rigorous absolute error bound.
///
/// `Negative` iff `v < -error_bound`, `Positive` iff `v > error_bound`,
/// `Zero` otherwise. `error_bound` must be non-negative.
pub fn sign_with_tolerance<R: RealScalar>(v: &R, error_bound: &R) -> SignClass {
    debug_assert!(!error_bound.is_negative());
    if v < &(-error_bound.clone()) {
        SignClass::Negative
    } else if v > error_bound {
        SignClass::Positive
    } else {
        SignClass::Zero
    }
}

/// Exact sign classification for exact scalar types.
pub fn exact_sign<T: Scalar>(v: &T) -> SignClass {
    if v.is_negative() {
        SignClass::Negative
    } else if v.is_zero() {
        SignClass::Zero
    } else {
        SignClass::Positive
    }
}

/// Float-like scalar with transcendentals and precision bookkeeping.
///
/// Values carry their own working precision; derived values never
/// silently downgrade it. `self`-relative constructors (`of`, `pi_like`)
/// inherit the receiver's precision, which lets generic code stay
/// precision-correct without threading a context around.
pub trait RealScalar: Scalar {
    /// Lift an `f64` to the same precision as `self`.
    fn of(&self, x: f64) -> Self;
    /// Lift an integer to the same precision as `self`.
    fn of_i64(&self, x: i64) -> Self {
        self.of(x as f64)
    }
    fn approx_f64(&self) -> f64;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn cos(&self) -> Self;
    fn sqrt(&self) -> Self;
    /// `self^e` for `self >= 0`.
    fn powf(&self, e: &Self) -> Self;
    fn powi(&self, e: i32) -> Self;
    /// Euler gamma function at the working precision.
    fn gamma(&self) -> Self;
    /// Documented relative error bound of [`RealScalar::gamma`].
    fn gamma_rel_error() -> f64;
    /// π at the receiver's precision.
    fn pi_like(&self) -> Self;
    /// Unit roundoff `2^(1-p)` at the receiver's precision.
    fn unit_roundoff(&self) -> Self;
    /// Working precision of this value, in bits.
    fn precision_bits(&self) -> u32;
    /// A copy of `self` carried at `bits` precision (never used to
    /// truncate intermediate results, only to raise headroom or to
    /// round a finished value back down).
    fn with_precision_bits(&self, bits: u32) -> Self;
    /// Decimal rendering with `sig` significant digits.
    fn to_decimal_string(&self, sig: usize) -> String;
}

impl RealScalar for f64 {
    fn of(&self, x: f64) -> Self {
        x
    }
    fn approx_f64(&self) -> f64 {
        *self
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn powf(&self, e: &Self) -> Self {
        f64::powf(*self, *e)
    }
    fn powi(&self, e: i32) -> Self {
        f64::powi(*self, e)
    }
    fn gamma(&self) -> Self {
        lanczos_gamma(*self)
    }
    fn gamma_rel_error() -> f64 {
        1e-13
    }
    fn pi_like(&self) -> Self {
        std::f64::consts::PI
    }
    fn unit_roundoff(&self) -> Self {
        f64::EPSILON / 2.0
    }
    fn precision_bits(&self) -> u32 {
        53
    }
    fn with_precision_bits(&self, _bits: u32) -> Self {
        *self
    }
    fn to_decimal_string(&self, sig: usize) -> String {
        format!("{:.*e}", sig.saturating_sub(1), self)
    }
}

impl RealScalar for f32 {
    fn of(&self, x: f64) -> Self {
        x as f32
    }
    fn approx_f64(&self) -> f64 {
        *self as f64
    }
    fn exp(&self) -> Self {
        f32::exp(*self)
    }
    fn ln(&self) -> Self {
        f32::ln(*self)
    }
    fn cos(&self) -> Self {
        f32::cos(*self)
    }
    fn sqrt(&self) -> Self {
        f32::sqrt(*self)
    }
    fn powf(&self, e: &Self) -> Self {
        f32::powf(*self, *e)
    }
    fn powi(&self, e: i32) -> Self {
        f32::powi(*self, e)
    }
    fn gamma(&self) -> Self {
        lanczos_gamma(*self as f64) as f32
    }
    fn gamma_rel_error() -> f64 {
        1e-6
    }
    fn pi_like(&self) -> Self {
        std::f32::consts::PI
    }
    fn unit_roundoff(&self) -> Self {
        f32::EPSILON / 2.0
    }
    fn precision_bits(&self) -> u32 {
        24
    }
    fn with_precision_bits(&self, _bits: u32) -> Self {
        *self
    }
    fn to_decimal_string(&self, sig: usize) -> String {
        format!("{:.*e}", sig.saturating_sub(1), self)
    }
}

/// Lanczos approximation of Γ(x), g = 7, 9 terms. Relative error is
/// below 1e-13 on the positive axis, which is the documented bound
/// returned by `f64::gamma_rel_error`.
fn lanczos_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * lanczos_gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = COEF[0];
        for (i, c) in COEF.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + G + 0.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_classification() {
        assert_eq!(sign_with_tolerance(&-1e-3, &1e-9), SignClass::Negative);
        assert_eq!(sign_with_tolerance(&1e-40, &1e-9), SignClass::Zero);
        assert_eq!(sign_with_tolerance(&0.5, &1e-9), SignClass::Positive);
    }

    #[test]
    fn sign_is_antisymmetric() {
        for v in [-2.0, -1e-12, 0.0, 3e-7, 10.0] {
            for e in [0.0, 1e-9, 1e-3] {
                assert_eq!(sign_with_tolerance(&v, &e), sign_with_tolerance(&-v, &e).flip());
            }
        }
    }

    #[test]
    fn exact_sign_on_rationals() {
        use num_rational::BigRational;
        use num_traits::Zero;
        let r = BigRational::new((-1).into(), 3.into());
        assert_eq!(exact_sign(&r), SignClass::Negative);
        assert_eq!(exact_sign(&BigRational::zero()), SignClass::Zero);
    }

    #[test]
    fn lanczos_matches_known_values() {
        assert!((lanczos_gamma(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-13);
        assert!((lanczos_gamma(5.0) - 24.0).abs() < 24.0 * 1e-13);
        assert!((lanczos_gamma(1.0) - 1.0).abs() < 1e-13);
        assert!((lanczos_gamma(2.5) - 1.329340388179137).abs() < 1e-13);
    }
}
