//! polyalab-core: total positivity of Toeplitz kernels, at desk scale.
//!
//! The crate samples one-dimensional functions into kernel matrices,
//! decides total non-negativity / total positivity by minor enumeration
//! with certificate output, evaluates Hirschman-Widder (hypoexponential)
//! densities by several independent formulas, converts between moments,
//! Maclaurin data and parameters through symmetric polynomials, and runs
//! the power-threshold experiments that reproduce the classical
//! classification tables.
//!
//! Everything numeric is generic over a scalar type: `f64` for quick
//! work, [`Exact`] (arbitrary-precision rationals) where inputs permit,
//! and [`Mp`] (MPFR floats, 128-bit default) when minors must be signed
//! with a rigorous error bound.

#![forbid(unsafe_code)]

pub mod density;
pub mod error;
pub mod matrix;
pub mod quad;
pub mod roots;
pub mod symfunc;
pub mod lab;
pub mod tpcheck;
pub mod mp;
pub mod scalar;

pub use density::{hciz_det, hciz_series, hw_eval, hw_eval_additive, hw_eval_determinantal, hw_eval_series, hw_laplace, hw_moment, EvalResult, KernelSpec, Smoothness};
pub use error::{Error, Result};
pub use matrix::{det_exact, det_float, det_float_with_errors, vandermonde, DenseMatrix};
pub use roots::{real_roots_monic, RootOptions};
pub use mp::{mp, mp_at, Mp, DEFAULT_PRECISION, MIN_PRECISION};
pub use symfunc::{e_eval, e_table, h_eval, h_generating_partial_sum, h_table, h_to_e, ParamVector, SymPolyTable};
pub use tpcheck::{check_tn, check_tp, principal_minor_scan, sample, GridSample, MinorCertificate, MinorOrder, TnOptions, TnReport, Verdict};
pub use scalar::{exact_sign, sign_with_tolerance, RealScalar, Scalar, SignClass};

/// Exact rational scalar (arbitrary-precision numerator/denominator).
pub type Exact = num_rational::BigRational;
