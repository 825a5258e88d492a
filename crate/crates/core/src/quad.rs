//! Adaptive Simpson quadrature, plus the exponential-tail cutoff used
//! to integrate hypoexponential densities over the half-line.

use crate::scalar::Scalar;
use crate::symfunc::ParamVector;

/// Adaptive Simpson on `[a, b]`. The interval is pre-split into 16
/// panels so narrow features are not missed by the first estimate.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let n = 16;
    let w = (b - a) / n as f64;
    let mut acc = 0.0;
    for i in 0..n {
        let lo = a + i as f64 * w;
        let hi = lo + w;
        acc += simpson_rec(f, lo, hi, f(lo), f(hi), f(0.5 * (lo + hi)), tol / n as f64, 60);
    }
    acc
}

fn simpson_est(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fm: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let whole = simpson_est(fa, fm, fb, b - a);
    let left = simpson_est(fa, flm, fm, m - a);
    let right = simpson_est(fm, frm, fb, b - m);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        left + right + diff / 15.0
    } else {
        simpson_rec(f, a, m, fa, fm, flm, tol / 2.0, depth - 1)
            + simpson_rec(f, m, b, fm, fb, frm, tol / 2.0, depth - 1)
    }
}

/// Cutoff `T` such that `int_T^inf x^k Lambda_alpha(x) dx < tol`, from
/// the envelope `Lambda(x) <= prod(a) x^(m-1) e^(-a_min x) / (m-1)!`.
pub fn hw_tail_cutoff<T: Scalar>(p: &ParamVector<T>, k: usize, tol: f64) -> f64 {
    let a: Vec<f64> = p
        .alpha()
        .iter()
        .map(|v| 1.0 / v.to_f64().unwrap_or(f64::NAN))
        .collect();
    let a_min = a.iter().cloned().fold(f64::INFINITY, f64::min);
    let m = a.len();
    let log_pref: f64 = a.iter().map(|x| x.ln()).sum::<f64>()
        - (1..m).map(|i| (i as f64).ln()).sum::<f64>();
    let j = (k + m - 1) as f64;
    let mut t = 2.0 * (j + 1.0) / a_min + 1.0;
    // tail bound: pref * 2 * T^j e^(-a_min T) / a_min  (valid once
    // a_min T >= 2 j); double until below tol
    for _ in 0..200 {
        let log_tail = log_pref + (2.0f64 / a_min).ln() + j * t.ln() - a_min * t;
        if log_tail < tol.ln() {
            return t;
        }
        t *= 1.5;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfunc::ParamVector;

    #[test]
    fn simpson_on_smooth_functions() {
        let v = adaptive_simpson(&|x| x * x, 0.0, 1.0, 1e-12);
        assert!((v - 1.0 / 3.0).abs() < 1e-11);
        let v = adaptive_simpson(&|x| (-x).exp(), 0.0, 40.0, 1e-12);
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn hw_mass_is_one() {
        let p = ParamVector::new(vec![1.0f64, 0.5, 0.25]).unwrap();
        let cutoff = hw_tail_cutoff(&p, 0, 1e-12);
        let f = |x: f64| {
            crate::density::hw_eval(&p, &x).map(|r| r.value).unwrap_or(0.0)
        };
        let v = adaptive_simpson(&f, 0.0, cutoff, 1e-11);
        assert!((v - 1.0).abs() < 1e-8, "mass {v}");
    }
}
