//! Evaluators for the named one-dimensional kernels: Hirschman-Widder
//! densities (additive, series, and determinantal routes), the
//! two-exponential kernel, gamma densities, the discontinuous family
//! `lambda_d`, the Heaviside step, the Wallis kernel, `M_beta`, the
//! Gaussian, and pointwise power/polynomial compositions. Also the
//! moments, the bilateral Laplace transform, and the orbital-integral
//! determinant/series pair.

use crate::error::{Error, Result};
use crate::matrix::{det_float_with_errors, vandermonde, DenseMatrix};
use crate::scalar::{RealScalar, Scalar};
use crate::symfunc::{h_table, ParamVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A named one-dimensional function inducing the Toeplitz kernel
/// `(x, y) -> spec(x - y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params")]
pub enum KernelSpec {
    /// Hirschman-Widder (hypoexponential) density with positive weights.
    #[serde(rename = "HW")]
    Hw { alpha: Vec<f64> },
    /// Density of `q X_1 + r X_2` for independent standard exponentials.
    #[serde(rename = "OmegaQR")]
    OmegaQr { q: f64, r: f64 },
    /// Gamma density `x^(shape-1) e^-x / Gamma(shape)` on `x > 0`.
    #[serde(rename = "Gamma")]
    Gamma { shape: f64 },
    /// `e^-x` for `x > 0`, `d` at `x = 0`, `0` for `x < 0`.
    #[serde(rename = "LambdaD")]
    LambdaD { d: f64 },
    /// Indicator of `x >= 0`.
    #[serde(rename = "Heaviside")]
    Heaviside,
    /// `cos x` on `|x| <= pi/2`, zero outside.
    #[serde(rename = "Wallis")]
    Wallis,
    /// `(beta+1) e^(-beta |x|) - beta e^(-(beta+1) |x|)`.
    #[serde(rename = "MBeta")]
    MBeta { beta: f64 },
    /// Standard normal density.
    #[serde(rename = "Gauss")]
    Gauss,
    /// Pointwise power of another kernel.
    #[serde(rename = "PowerOf")]
    PowerOf { inner: Box<KernelSpec>, exponent: f64 },
    /// Pointwise polynomial of another kernel; `coeffs[k]` multiplies `y^k`.
    #[serde(rename = "PolyOf")]
    PolyOf { inner: Box<KernelSpec>, coeffs: Vec<f64> },
}

/// Smoothness classification of a kernel at its worst point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Smoothness {
    /// Has a jump discontinuity.
    NotContinuous,
    /// Continuously differentiable exactly `k` times (lower bound for
    /// power/polynomial compositions).
    Class(u32),
    Infinite,
}

impl KernelSpec {
    /// Check the family parameters make sense.
    pub fn validate(&self) -> Result<()> {
        match self {
            KernelSpec::Hw { alpha } => {
                if alpha.is_empty() || alpha.iter().any(|a| !(*a > 0.0)) {
                    return Err(Error::Domain("HW needs m >= 1 positive parameters".into()));
                }
            }
            KernelSpec::OmegaQr { q, r } => {
                if !(*q > 0.0) || !(*r > 0.0) {
                    return Err(Error::Domain("OmegaQR needs q, r > 0".into()));
                }
            }
            KernelSpec::Gamma { shape } => {
                if !(*shape > 0.0) {
                    return Err(Error::Domain("Gamma needs shape > 0".into()));
                }
            }
            KernelSpec::LambdaD { d } => {
                if !d.is_finite() {
                    return Err(Error::Domain("LambdaD needs finite d".into()));
                }
            }
            KernelSpec::MBeta { beta } => {
                if !(*beta > 0.0) {
                    return Err(Error::Domain("MBeta needs beta > 0".into()));
                }
            }
            KernelSpec::PowerOf { inner, exponent } => {
                if !(*exponent > 0.0) {
                    return Err(Error::Domain("PowerOf needs a positive exponent".into()));
                }
                inner.validate()?;
            }
            KernelSpec::PolyOf { inner, coeffs } => {
                if coeffs.is_empty() {
                    return Err(Error::Domain("PolyOf needs coefficients".into()));
                }
                inner.validate()?;
            }
            _ => {}
        }
        Ok(())
    }

    /// Closed support interval; infinities encode half-lines.
    pub fn support(&self) -> (f64, f64) {
        match self {
            KernelSpec::Hw { .. }
            | KernelSpec::OmegaQr { .. }
            | KernelSpec::Gamma { .. }
            | KernelSpec::LambdaD { .. }
            | KernelSpec::Heaviside => (0.0, f64::INFINITY),
            KernelSpec::Wallis => (-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2),
            KernelSpec::MBeta { .. } | KernelSpec::Gauss => (f64::NEG_INFINITY, f64::INFINITY),
            KernelSpec::PowerOf { inner, .. } => inner.support(),
            KernelSpec::PolyOf { inner, coeffs } => {
                if coeffs[0] != 0.0 {
                    (f64::NEG_INFINITY, f64::INFINITY)
                } else {
                    inner.support()
                }
            }
        }
    }

    /// Points at which the kernel jumps.
    pub fn discontinuity_points(&self) -> Vec<f64> {
        match self {
            KernelSpec::Hw { alpha } if alpha.len() == 1 => vec![0.0],
            KernelSpec::LambdaD { .. } | KernelSpec::Heaviside => vec![0.0],
            KernelSpec::Gamma { shape } if *shape <= 1.0 => vec![0.0],
            KernelSpec::PowerOf { inner, .. } => inner.discontinuity_points(),
            KernelSpec::PolyOf { inner, .. } => inner.discontinuity_points(),
            _ => vec![],
        }
    }

    /// Continuity class; for compositions this is a lower bound.
    pub fn smoothness_class(&self) -> Smoothness {
        match self {
            KernelSpec::Hw { alpha } => {
                if alpha.len() == 1 {
                    Smoothness::NotContinuous
                } else {
                    Smoothness::Class(alpha.len() as u32 - 2)
                }
            }
            KernelSpec::OmegaQr { .. } => Smoothness::Class(0),
            KernelSpec::Gamma { shape } => {
                if *shape <= 1.0 {
                    Smoothness::NotContinuous
                } else {
                    Smoothness::Class((shape.ceil() as u32).saturating_sub(2))
                }
            }
            KernelSpec::LambdaD { .. } | KernelSpec::Heaviside => Smoothness::NotContinuous,
            KernelSpec::Wallis => Smoothness::Class(0),
            KernelSpec::MBeta { .. } => Smoothness::Class(2),
            KernelSpec::Gauss => Smoothness::Infinite,
            KernelSpec::PowerOf { inner, .. } | KernelSpec::PolyOf { inner, .. } => {
                inner.smoothness_class()
            }
        }
    }

    /// Evaluate the kernel at `x`, with an absolute error bound.
    pub fn eval<R: RealScalar>(&self, x: &R) -> Result<EvalResult<R>> {
        let zero = x.of(0.0);
        let u = x.unit_roundoff();
        match self {
            KernelSpec::Hw { alpha } => {
                let p = lift_params(alpha, x)?;
                hw_eval(&p, x)
            }
            KernelSpec::OmegaQr { q, r } => {
                if x < &zero {
                    return Ok(EvalResult::exact(zero));
                }
                let qq = x.of(*q);
                if q == r {
                    // x e^(-x/q) / q^2
                    let e = (-(x.clone() / qq.clone())).exp();
                    let v = x.clone() * e / (qq.clone() * qq.clone());
                    let rel = u.clone() * x.of(6.0 + (x.approx_f64() / q).abs());
                    let bound = v.abs() * rel;
                    return Ok(EvalResult { value: v, abs_error_bound: bound });
                }
                let rr = x.of(*r);
                let e1 = (-(x.clone() / qq.clone())).exp();
                let e2 = (-(x.clone() / rr.clone())).exp();
                let denom = qq - rr;
                let v = (e1.clone() - e2.clone()) / denom.clone();
                let scale = (e1.abs() + e2.abs()) / denom.abs();
                let bound = scale * u.clone() * x.of(6.0 + x.approx_f64().abs() * (1.0 / q + 1.0 / r));
                Ok(EvalResult { value: v, abs_error_bound: bound })
            }
            KernelSpec::Gamma { shape } => {
                if x < &zero {
                    return Ok(EvalResult::exact(zero));
                }
                if x.is_zero() {
                    return if *shape < 1.0 {
                        Err(Error::Unbounded { difference: 0.0 })
                    } else if *shape == 1.0 {
                        Ok(EvalResult::exact(x.of(1.0)))
                    } else {
                        Ok(EvalResult::exact(zero))
                    };
                }
                let a = x.of(*shape);
                let g = a.gamma();
                let v = x.powf(&(a - x.of(1.0))) * (-x.clone()).exp() / g;
                let rel = u * x.of(8.0 + ((shape - 1.0) * x.approx_f64().max(1e-300).ln()).abs() + x.approx_f64())
                    + x.of(R::gamma_rel_error() * 1.5);
                let bound = v.abs() * rel;
                Ok(EvalResult { value: v, abs_error_bound: bound })
            }
            KernelSpec::LambdaD { d } => {
                if x > &zero {
                    let v = (-x.clone()).exp();
                    let bound = v.abs() * u * x.of(2.0 + x.approx_f64().abs());
                    Ok(EvalResult { value: v, abs_error_bound: bound })
                } else if x.is_zero() {
                    Ok(EvalResult::exact(x.of(*d)))
                } else {
                    Ok(EvalResult::exact(zero))
                }
            }
            KernelSpec::Heaviside => {
                let v = if x >= &zero { x.of(1.0) } else { zero };
                Ok(EvalResult::exact(v))
            }
            KernelSpec::Wallis => {
                let half_pi = x.pi_like() / x.of(2.0);
                if x.abs() <= half_pi {
                    let v = x.cos();
                    let bound = u * x.of(2.0 + x.approx_f64().abs());
                    Ok(EvalResult { value: v, abs_error_bound: bound })
                } else {
                    Ok(EvalResult::exact(zero))
                }
            }
            KernelSpec::MBeta { beta } => {
                let b = x.of(*beta);
                let b1 = x.of(*beta + 1.0);
                let ax = x.abs();
                let t1 = b1.clone() * (-(b.clone() * ax.clone())).exp();
                let t2 = b.clone() * (-(b1.clone() * ax.clone())).exp();
                let v = t1.clone() - t2.clone();
                let bound =
                    (t1.abs() + t2.abs()) * u * x.of(6.0 + (2.0 * beta + 1.0) * x.approx_f64().abs());
                Ok(EvalResult { value: v, abs_error_bound: bound })
            }
            KernelSpec::Gauss => {
                let two_pi = x.pi_like() * x.of(2.0);
                let v = (-(x.clone() * x.clone()) / x.of(2.0)).exp() / two_pi.sqrt();
                let bound = v.abs() * u * x.of(6.0 + x.approx_f64() * x.approx_f64());
                Ok(EvalResult { value: v, abs_error_bound: bound })
            }
            KernelSpec::PowerOf { inner, exponent } => {
                let base = inner.eval(x)?;
                let alpha = x.of(*exponent);
                if base.value.is_zero() && base.abs_error_bound.is_zero() {
                    return Ok(EvalResult::exact(zero));
                }
                if base.value < -base.abs_error_bound.clone() {
                    return Err(Error::Domain(
                        "power composition over a negative kernel value".into(),
                    ));
                }
                let v = clamp_nonneg(&base.value).powf(&alpha);
                let hi = (base.value.clone() + base.abs_error_bound.clone()).powf(&alpha);
                let lo = clamp_nonneg(&(base.value.clone() - base.abs_error_bound.clone())).powf(&alpha);
                let spread = if (hi.clone() - v.clone()).abs() > (v.clone() - lo.clone()).abs() {
                    (hi - v.clone()).abs()
                } else {
                    (v.clone() - lo).abs()
                };
                let bound = spread + v.abs() * u * x.of(4.0 + exponent.abs());
                Ok(EvalResult { value: v, abs_error_bound: bound })
            }
            KernelSpec::PolyOf { inner, coeffs } => {
                let base = inner.eval(x)?;
                let y = base.value.clone();
                let ey = base.abs_error_bound.clone();
                let mut acc = x.of(*coeffs.last().unwrap());
                let mut err = zero.clone();
                for c in coeffs.iter().rev().skip(1) {
                    let prod = acc.clone() * y.clone();
                    err = err * y.abs() + acc.abs() * ey.clone() + u.clone() * prod.abs();
                    acc = prod + x.of(*c);
                    err = err + u.clone() * acc.abs();
                }
                Ok(EvalResult { value: acc, abs_error_bound: err })
            }
        }
    }
}

fn clamp_nonneg<R: RealScalar>(v: &R) -> R {
    if v.is_negative() {
        v.of(0.0)
    } else {
        v.clone()
    }
}

fn lift_params<R: RealScalar>(alpha: &[f64], model: &R) -> Result<ParamVector<R>> {
    ParamVector::new(alpha.iter().map(|&a| model.of(a)).collect())
}

/// Value together with a rigorous absolute error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult<R> {
    pub value: R,
    pub abs_error_bound: R,
}

impl<R: RealScalar> EvalResult<R> {
    fn exact(value: R) -> Self {
        let z = value.of(0.0);
        EvalResult { value, abs_error_bound: z }
    }
}

/// Dispatching Hirschman-Widder evaluator: additive form for clearly
/// separated parameters, series otherwise (repeated or clustered
/// reciprocals make the additive form cancel catastrophically).
pub fn hw_eval<R: RealScalar>(p: &ParamVector<R>, x: &R) -> Result<EvalResult<R>> {
    if x < &x.of(0.0) {
        return Ok(EvalResult::exact(x.of(0.0)));
    }
    let series_tol = default_series_tol(p, x);
    if !p.is_distinct() {
        return hw_eval_series(p, x, &series_tol);
    }
    let a = p.reciprocals();
    let mut max_a = x.of(0.0);
    for v in &a {
        if *v > max_a {
            max_a = v.clone();
        }
    }
    let threshold = max_a * x.of(1e-4);
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if (a[i].clone() - a[j].clone()).abs() < threshold {
                return hw_eval_series(p, x, &series_tol);
            }
        }
    }
    hw_eval_additive(p, x)
}

fn default_series_tol<R: RealScalar>(p: &ParamVector<R>, x: &R) -> R {
    let mut max_a = 0.0f64;
    for a in p.alpha() {
        max_a = max_a.max(1.0 / a.approx_f64());
    }
    x.unit_roundoff() * x.of(4.0 * (1.0 + max_a))
}

/// Additive representation over one-sided exponentials; requires
/// pairwise-distinct parameters.
pub fn hw_eval_additive<R: RealScalar>(p: &ParamVector<R>, x: &R) -> Result<EvalResult<R>> {
    if !p.is_distinct() {
        return Err(Error::RequiresDistinct);
    }
    let zero = x.of(0.0);
    if x < &zero {
        return Ok(EvalResult::exact(zero));
    }
    let a = p.reciprocals();
    let m = a.len();
    let u = x.unit_roundoff();
    let mut sum = zero.clone();
    let mut sum_abs = zero.clone();
    let mut max_ax = 0.0f64;
    for j in 0..m {
        let mut term = a[j].clone() * (-(a[j].clone() * x.clone())).exp();
        max_ax = max_ax.max(a[j].approx_f64() * x.approx_f64());
        for k in 0..m {
            if k != j {
                term = term * a[k].clone() / (a[k].clone() - a[j].clone());
            }
        }
        sum_abs = sum_abs + term.abs();
        sum = sum + term;
    }
    let bound = sum_abs * u * x.of(1.25 * (max_ax + 3.0 * m as f64 + 2.0));
    Ok(EvalResult { value: sum, abs_error_bound: bound })
}

/// Maclaurin-series evaluator, valid for any positive parameters
/// (including repeats); truncates once the tail is provably below
/// `tol`, and raises the internal working precision so alternating-sum
/// cancellation cannot eat the answer.
pub fn hw_eval_series<R: RealScalar>(p: &ParamVector<R>, x: &R, tol: &R) -> Result<EvalResult<R>> {
    if !tol.is_positive() {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let zero = x.of(0.0);
    if x < &zero {
        return Err(Error::Domain("series evaluator needs x >= 0".into()));
    }
    let m = p.len();
    let a_f64: Vec<f64> = p.alpha().iter().map(|v| 1.0 / v.approx_f64()).collect();
    let e1: f64 = a_f64.iter().sum();
    let xf = x.approx_f64();
    let pref_log2 = a_f64.iter().map(|v| v.log2()).sum::<f64>();
    // headroom: largest term ~ pref * e^(e1 x); target resolution tol
    let tol_log2 = tol.approx_f64().max(1e-300).log2();
    let needed = (pref_log2 + e1 * xf * std::f64::consts::LOG2_E - tol_log2 + 64.0).ceil();
    let wp = (x.precision_bits() as f64).max(needed).min((1u32 << 20) as f64) as u32;

    let xw = x.with_precision_bits(wp);
    let aw: Vec<R> = p
        .alpha()
        .iter()
        .map(|v| {
            let lifted = v.with_precision_bits(wp);
            xw.of(1.0) / lifted
        })
        .collect();
    let mut pref = xw.of(1.0);
    for aj in &aw {
        pref = pref * aj.clone();
    }
    let e1w = {
        let mut s = xw.of(0.0);
        for aj in &aw {
            s = s + aj.clone();
        }
        s
    };

    // h_k rows over prefixes, advanced one degree at a time
    let mut row = vec![xw.of(1.0); m + 1];
    let mut xpow = xw.powi((m - 1) as i32); // x^n for n = m-1
    if m == 1 {
        xpow = xw.of(1.0);
    }
    // n! for n = m-1
    let mut fact = xw.of(1.0);
    for i in 2..m {
        fact = fact * xw.of_i64(i as i64);
    }
    let mut sum = xw.of(0.0);
    let mut sum_abs = xw.of(0.0);
    let mut n = m - 1;
    let mut k = 0usize; // h index = n - m + 1
    let mut last_term_abs;
    let tail_bound;
    loop {
        // term for current n: pref * (-1)^k h_k x^n / n!
        let h_k = row[m].clone();
        let term = pref.clone() * h_k * xpow.clone() / fact.clone();
        let signed = if k % 2 == 0 { term.clone() } else { -term.clone() };
        sum = sum + signed;
        sum_abs = sum_abs + term.abs();
        last_term_abs = term.abs();

        // geometric tail test: |t_{n+1}|/|t_n| <= e1 * x / (n+1)
        let q = e1w.clone() * xw.clone() / xw.of_i64((n + 1) as i64);
        if q < xw.of(0.5) {
            let t = last_term_abs.clone() * q.clone() / (xw.of(1.0) - q);
            if t < tol.with_precision_bits(wp) / xw.of(2.0) {
                tail_bound = t;
                break;
            }
        }
        if n > 500_000 {
            return Err(Error::Domain("series did not converge within term budget".into()));
        }

        // advance h row by one degree
        let mut next = vec![xw.of(0.0); m + 1];
        for j in 1..=m {
            next[j] = next[j - 1].clone() + aw[j - 1].clone() * row[j].clone();
        }
        row = next;
        n += 1;
        k += 1;
        xpow = xpow * xw.clone();
        fact = fact * xw.of_i64(n as i64);
    }
    let uw = xw.unit_roundoff();
    let rounding = sum_abs * uw * xw.of_i64(8 * (k as i64 + 2));
    let value = sum.with_precision_bits(x.precision_bits());
    let final_round = value.abs() * x.unit_roundoff();
    let bound = (tail_bound + rounding).with_precision_bits(x.precision_bits()) + final_round;
    Ok(EvalResult { value, abs_error_bound: bound })
}

/// Determinantal representation: first row `e^(-a_j x)`, then the
/// Vandermonde rows `1, a_j, ..., a_j^(m-2)`, scaled by
/// `prod(a) / V(a)`. Requires pairwise-distinct parameters.
pub fn hw_eval_determinantal<R: RealScalar>(p: &ParamVector<R>, x: &R) -> Result<EvalResult<R>> {
    if !p.is_distinct() {
        return Err(Error::RequiresDistinct);
    }
    let zero = x.of(0.0);
    if x < &zero {
        return Ok(EvalResult::exact(zero));
    }
    let a = p.reciprocals();
    let m = a.len();
    let u = x.unit_roundoff();
    let mat = DenseMatrix::from_fn(m, m, |i, j| {
        if i == 0 {
            (-(a[j].clone() * x.clone())).exp()
        } else {
            a[j].powi((i - 1) as i32)
        }
    });
    let errs = DenseMatrix::from_fn(m, m, |i, j| {
        if i == 0 {
            mat.get(i, j).abs() * u.clone() * x.of(2.0 + a[j].approx_f64() * x.approx_f64())
        } else {
            mat.get(i, j).abs() * u.clone() * x.of(i as f64)
        }
    });
    let (det, det_err) = det_float_with_errors(&mat, Some(&errs))?;
    let mut c = x.of(1.0);
    for aj in &a {
        c = c * aj.clone();
    }
    let v = vandermonde(&a);
    let scale = c / v;
    let value = scale.clone() * det;
    let bound = scale.abs() * det_err
        + value.abs() * u * x.of(2.0 * (m * m) as f64 + 4.0);
    Ok(EvalResult { value, abs_error_bound: bound })
}

/// `k`-th moment `k! h_k(alpha)`; exact on exact scalars.
pub fn hw_moment<T: Scalar>(p: &ParamVector<T>, k: usize) -> T {
    let h = h_table(p.alpha(), k);
    let mut fact = T::one();
    for i in 2..=k {
        fact = fact * T::from_usize(i).unwrap();
    }
    fact * h.get(k).clone()
}

/// Bilateral Laplace transform `prod_j 1/(1 + alpha_j s)` on the open
/// half-plane `Re s > -1/alpha_j` for every `j`.
pub fn hw_laplace(p: &ParamVector<f64>, s: Complex64) -> Result<Complex64> {
    for &a in p.alpha() {
        if s.re <= -1.0 / a {
            return Err(Error::Domain(format!(
                "Re s = {} outside the half-plane Re s > {}",
                s.re,
                -1.0 / a
            )));
        }
    }
    let mut acc = Complex64::new(1.0, 0.0);
    for &a in p.alpha() {
        acc /= Complex64::new(1.0, 0.0) + a * s;
    }
    Ok(acc)
}

/// Orbital-integral value `f_A(-i diag b)` by the determinant formula
/// `prod_{j<m} j! / (V(a) V(b)) * det(e^(b_i a_j))`; entries of `a` and
/// `b` must each be pairwise distinct.
pub fn hciz_det<R: RealScalar>(a: &[R], b: &[R]) -> Result<R> {
    let m = a.len();
    if m == 0 || b.len() != m {
        return Err(Error::Degenerate("need equal-length non-empty tuples".into()));
    }
    for (v, name) in [(a, "a"), (b, "b")] {
        for i in 0..m {
            for j in i + 1..m {
                if v[i] == v[j] {
                    return Err(Error::Degenerate(format!("repeated entries in {name}")));
                }
            }
        }
    }
    let model = &a[0];
    let u = model.unit_roundoff();
    let mat = DenseMatrix::from_fn(m, m, |i, j| (b[i].clone() * a[j].clone()).exp());
    let errs = DenseMatrix::from_fn(m, m, |i, j| {
        mat.get(i, j).abs() * u.clone() * model.of(2.0 + (b[i].approx_f64() * a[j].approx_f64()).abs())
    });
    let (det, _err) = det_float_with_errors(&mat, Some(&errs))?;
    let mut fact = model.of(1.0);
    let mut running = model.of(1.0);
    for j in 1..m {
        running = running * model.of_i64(j as i64);
        fact = fact * running.clone();
    }
    Ok(fact * det / (vandermonde(a) * vandermonde(b)))
}

/// Series form of `f_A(-i x E_11)`:
/// `(m-1)! sum_j h_j(a) x^j / (j+m-1)!`, truncated after `n_terms`
/// terms; returns the partial sum and a geometric tail estimate.
pub fn hciz_series<R: RealScalar>(a: &[R], x: &R, n_terms: usize) -> Result<EvalResult<R>> {
    let m = a.len();
    if m == 0 {
        return Err(Error::Degenerate("need at least one coordinate".into()));
    }
    if n_terms == 0 {
        return Err(Error::Domain("need at least one term".into()));
    }
    let mut fact_m1 = x.of(1.0);
    for i in 2..m {
        fact_m1 = fact_m1 * x.of_i64(i as i64);
    }
    let mut e1 = x.of(0.0);
    for aj in a {
        e1 = e1 + aj.clone();
    }
    let mut row = vec![x.of(1.0); m + 1];
    let mut denom = fact_m1.clone(); // (j + m - 1)! for j = 0
    let mut xpow = x.of(1.0);
    let mut sum = x.of(0.0);
    let mut last = x.of(0.0);
    for j in 0..n_terms {
        let term = fact_m1.clone() * row[m].clone() * xpow.clone() / denom.clone();
        sum = sum + term.clone();
        last = term.abs();
        // advance
        let mut next = vec![x.of(0.0); m + 1];
        for t in 1..=m {
            next[t] = next[t - 1].clone() + a[t - 1].clone() * row[t].clone();
        }
        row = next;
        xpow = xpow * x.clone();
        denom = denom * x.of_i64((j + m) as i64);
    }
    let q = e1 * x.abs() / x.of_i64((n_terms + m) as i64);
    let tail = if q < x.of(1.0) {
        last * q.clone() / (x.of(1.0) - q)
    } else {
        x.of(f64::INFINITY)
    };
    Ok(EvalResult { value: sum, abs_error_bound: tail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::{mp, mp_at};
    use num_traits::Signed;
    use crate::Mp;

    fn pv(alpha: &[f64]) -> ParamVector<Mp> {
        ParamVector::new(alpha.iter().map(|&a| mp(a)).collect()).unwrap()
    }

    #[test]
    fn additive_examples() {
        // p=(1,1/2) at x = ln 2: 2 e^-x - 2 e^-2x = 1/2
        let p = pv(&[1.0, 0.5]);
        let x = mp(2.0f64).ln();
        let r = hw_eval_additive(&p, &x).unwrap();
        assert!((r.value.approx_f64() - 0.5).abs() < 1e-25);
        // one-sided support
        let r = hw_eval_additive(&p, &mp(-1.0)).unwrap();
        assert_eq!(r.value.approx_f64(), 0.0);
        // repeated parameters refused
        let p = pv(&[1.0, 1.0]);
        assert!(matches!(hw_eval_additive(&p, &mp(1.0)), Err(Error::RequiresDistinct)));
    }

    #[test]
    fn series_examples() {
        let tol = mp(1e-30);
        // p=(1,1): x e^-x at 1
        let r = hw_eval_series(&pv(&[1.0, 1.0]), &mp(1.0), &tol).unwrap();
        assert!((r.value.approx_f64() - (-1.0f64).exp()).abs() < 1e-15);
        assert!(r.abs_error_bound.approx_f64() <= 1e-30 * 1.0001);
        // starts at n = m-1
        let r = hw_eval_series(&pv(&[1.0, 1.0]), &mp(0.0), &tol).unwrap();
        assert_eq!(r.value.approx_f64(), 0.0);
        // single atom (1/3) e^(-2/3)
        let r = hw_eval_series(&pv(&[3.0]), &mp(2.0), &tol).unwrap();
        let expect = (1.0 / 3.0) * (-2.0f64 / 3.0).exp();
        assert!((r.value.approx_f64() - expect).abs() < 1e-16);
        // bad tolerance
        assert!(hw_eval_series(&pv(&[1.0]), &mp(1.0), &mp(0.0)).is_err());
    }

    #[test]
    fn determinantal_examples() {
        // a=(1,2), x=1 -> 2(e^-1 - e^-2)
        let p = pv(&[1.0, 0.5]);
        let r = hw_eval_determinantal(&p, &mp(1.0)).unwrap();
        let expect = 2.0 * ((-1.0f64).exp() - (-2.0f64).exp());
        assert!((r.value.approx_f64() - expect).abs() < 1e-20);
        // degenerate 1x1
        let r = hw_eval_determinantal(&pv(&[1.0]), &mp(1.0)).unwrap();
        assert!((r.value.approx_f64() - (-1.0f64).exp()).abs() < 1e-20);
    }

    #[test]
    fn three_routes_agree() {
        let p = pv(&[1.0, 2.0, 4.0]);
        let x = mp(1.0);
        let add = hw_eval_additive(&p, &x).unwrap();
        let ser = hw_eval_series(&p, &x, &mp(1e-32)).unwrap();
        let det = hw_eval_determinantal(&p, &x).unwrap();
        let tol = 1e-25;
        assert!((add.value.approx_f64() - ser.value.approx_f64()).abs() < tol);
        assert!((add.value.approx_f64() - det.value.approx_f64()).abs() < tol);
    }

    #[test]
    fn moments() {
        use num_traits::FromPrimitive;
        let p = ParamVector::new(vec![
            crate::Exact::from_i64(1).unwrap(),
            crate::Exact::from_i64(1).unwrap(),
        ])
        .unwrap();
        assert_eq!(hw_moment(&p, 0), crate::Exact::from_i64(1).unwrap());
        assert_eq!(hw_moment(&p, 1), crate::Exact::from_i64(2).unwrap());
        assert_eq!(hw_moment(&p, 2), crate::Exact::from_i64(6).unwrap());
    }

    #[test]
    fn laplace() {
        let p = ParamVector::new(vec![1.0, 1.0]).unwrap();
        let v = hw_laplace(&p, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(v, Complex64::new(1.0, 0.0));
        let p = ParamVector::new(vec![1.0, 2.0]).unwrap();
        let v = hw_laplace(&p, Complex64::new(1.0, 0.0)).unwrap();
        assert!((v.re - 1.0 / 6.0).abs() < 1e-15);
        let p = ParamVector::new(vec![1.0]).unwrap();
        assert!(hw_laplace(&p, Complex64::new(-2.0, 0.0)).is_err());
    }

    #[test]
    fn eval_named_values() {
        let x0 = mp(0.0);
        let spec = KernelSpec::LambdaD { d: 0.5 };
        assert_eq!(spec.eval(&x0).unwrap().value.approx_f64(), 0.5);
        let w = KernelSpec::Wallis;
        let half_pi = mp(1.0).pi_like() / mp(2.0);
        assert!(w.eval(&half_pi).unwrap().value.approx_f64().abs() < 1e-30);
        assert_eq!(w.eval(&x0).unwrap().value.approx_f64(), 1.0);
        let m = KernelSpec::MBeta { beta: 1.0 };
        assert!((m.eval(&x0).unwrap().value.approx_f64() - 1.0).abs() < 1e-30);
        let h = KernelSpec::Heaviside;
        assert_eq!(h.eval(&mp(-0.5)).unwrap().value.approx_f64(), 0.0);
        assert_eq!(h.eval(&x0).unwrap().value.approx_f64(), 1.0);
    }

    #[test]
    fn gamma_edge_cases() {
        let g = KernelSpec::Gamma { shape: 0.5 };
        assert!(matches!(g.eval(&mp(0.0)), Err(Error::Unbounded { .. })));
        let g1 = KernelSpec::Gamma { shape: 1.0 };
        assert_eq!(g1.eval(&mp(0.0)).unwrap().value.approx_f64(), 1.0);
        let g2 = KernelSpec::Gamma { shape: 2.0 };
        assert_eq!(g2.eval(&mp(0.0)).unwrap().value.approx_f64(), 0.0);
        // gamma(2) is x e^-x
        let r = g2.eval(&mp(1.5)).unwrap();
        assert!((r.value.approx_f64() - 1.5 * (-1.5f64).exp()).abs() < 1e-20);
    }

    #[test]
    fn omega_matches_hw() {
        // OmegaQR(1,1) = HW(1,1) = x e^-x on x >= 0
        let o = KernelSpec::OmegaQr { q: 1.0, r: 1.0 };
        let h = KernelSpec::Hw { alpha: vec![1.0, 1.0] };
        for xv in [0.0, 0.3, 1.0, 2.7, 10.0] {
            let x = mp(xv);
            let a = o.eval(&x).unwrap().value.approx_f64();
            let b = h.eval(&x).unwrap().value.approx_f64();
            assert!((a - b).abs() < 1e-20, "x={xv}: {a} vs {b}");
        }
    }

    #[test]
    fn power_and_poly() {
        let base = KernelSpec::Hw { alpha: vec![1.0, 1.0] };
        let sq = KernelSpec::PowerOf { inner: Box::new(base.clone()), exponent: 2.0 };
        let x = mp(1.3);
        let v = base.eval(&x).unwrap().value;
        let v2 = sq.eval(&x).unwrap().value;
        assert!((v2 - v.clone() * v.clone()).abs() < mp(1e-30));
        let aff = KernelSpec::PolyOf {
            inner: Box::new(base.clone()),
            coeffs: vec![0.1, 1.0],
        };
        let va = aff.eval(&x).unwrap().value;
        assert!((va - (v + mp(0.1))).abs() < mp(1e-30));
    }

    #[test]
    fn hciz_1x1_and_symmetry() {
        let v = hciz_det(&[mp(2.0)], &[mp(3.0)]).unwrap();
        assert!((v.approx_f64() - 6.0f64.exp()).abs() < 1e-10);
        // permutation invariance of b
        let a = [mp(1.0), mp(2.0)];
        let v1 = hciz_det(&a, &[mp(0.1), mp(0.3)]).unwrap();
        let v2 = hciz_det(&a, &[mp(0.3), mp(0.1)]).unwrap();
        assert!((v1.approx_f64() - v2.approx_f64()).abs() < 1e-25);
        // repeated entries rejected
        assert!(hciz_det(&[mp(1.0), mp(1.0)], &[mp(0.1), mp(0.3)]).is_err());
    }

    #[test]
    fn hciz_series_values() {
        // m=1, a=(2): sum = e^(2x)
        let r = hciz_series(&[mp(2.0)], &mp(0.7), 80).unwrap();
        assert!((r.value.approx_f64() - 1.4f64.exp()).abs() < 1e-15);
        // x=0 -> 1
        let r = hciz_series(&[mp(1.0), mp(2.0)], &mp(0.0), 5).unwrap();
        assert_eq!(r.value.approx_f64(), 1.0);
    }

    #[test]
    fn hciz_det_matches_series_via_trace_shift() {
        // f_A(-i diag(b)) with b = (c + x, c) equals e^(c (a1+a2)) f_A(-i x E11)
        let a = [mp(1.0), mp(2.0)];
        let (c, x) = (0.3, -0.2);
        let det = hciz_det(&a, &[mp(c + x), mp(c)]).unwrap();
        let series = hciz_series(&a, &mp(x), 200).unwrap();
        let shifted = mp(c * 3.0).exp() * series.value;
        assert!(
            (det.approx_f64() - shifted.approx_f64()).abs() < 1e-12,
            "{} vs {}",
            det.approx_f64(),
            shifted.approx_f64()
        );
    }

    #[test]
    fn series_handles_large_x_at_128_bits() {
        // cancellation headroom: a_max * x = 100
        let p = pv(&[0.1, 1.0]);
        let x = mp_at(10.0, 128);
        let add = hw_eval_additive(&p, &x).unwrap();
        let ser = hw_eval_series(&p, &x, &mp(1e-30)).unwrap();
        assert!((add.value.approx_f64() - ser.value.approx_f64()).abs() < 1e-20);
    }

    #[test]
    fn kernel_json_round_trip() {
        let spec = KernelSpec::PowerOf {
            inner: Box::new(KernelSpec::OmegaQr { q: 1.0, r: 2.0 }),
            exponent: 2.5,
        };
        let s = serde_json::to_string(&spec).unwrap();
        let back: KernelSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(spec, back);
        let parsed: KernelSpec =
            serde_json::from_str(r#"{"family":"HW","params":{"alpha":[1,1]}}"#).unwrap();
        assert_eq!(parsed, KernelSpec::Hw { alpha: vec![1.0, 1.0] });
        let parsed: KernelSpec = serde_json::from_str(r#"{"family":"Wallis"}"#).unwrap();
        assert_eq!(parsed, KernelSpec::Wallis);
    }
}
