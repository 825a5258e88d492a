//! Real roots of real-rooted monic polynomials.
//!
//! Callers (moment/Maclaurin recovery) guarantee that consistent input
//! data yields a polynomial whose roots are all real and positive; this
//! module finds them and *detects* when that promise is broken.
//!
//! The method is derivative interlacing: the critical points of `p`
//! split the line into intervals of monotonicity, so every simple root
//! is bracketed by a sign change and found by bisection plus a Newton
//! polish. A critical point at which `p` itself (nearly) vanishes is a
//! multiple root; its multiplicity is one more than its multiplicity in
//! `p'`, which the recursion already knows. Near-coincident roots are
//! merged within `merge_tol` and reported with multiplicity.

use crate::error::{Error, Result};
use crate::scalar::RealScalar;

/// Options for [`real_roots_monic`].
#[derive(Debug, Clone)]
pub struct RootOptions {
    /// Roots closer than this are reported as one root with multiplicity.
    pub merge_tol: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions { merge_tol: 1e-8 }
    }
}

/// All roots (with multiplicity, ascending) of the monic polynomial with
/// the given coefficients, lowest degree first; the leading coefficient
/// must be non-zero and is divided out.
///
/// Fails with an inconsistent-input error when complex or non-positive
/// roots are detected.
pub fn real_roots_monic<R: RealScalar>(coeffs: &[R], opts: &RootOptions) -> Result<Vec<R>> {
    if coeffs.len() < 2 {
        return Err(Error::Domain("polynomial must have degree >= 1".into()));
    }
    let lead = coeffs.last().unwrap();
    if lead.is_zero() {
        return Err(Error::Degenerate("leading coefficient is zero".into()));
    }
    let monic: Vec<R> = coeffs.iter().map(|c| c.clone() / lead.clone()).collect();
    let with_mult = roots_with_multiplicity(&monic, opts)?;
    let degree = monic.len() - 1;
    let total: usize = with_mult.iter().map(|(_, m)| m).sum();
    if total != degree {
        return Err(Error::Inconsistent(format!(
            "found {total} real roots of a degree-{degree} polynomial; complex roots present"
        )));
    }
    let mut out = Vec::with_capacity(degree);
    for (r, m) in with_mult {
        if !(r > r.of(0.0)) {
            return Err(Error::Inconsistent(format!(
                "non-positive root {} detected",
                r.approx_f64()
            )));
        }
        for _ in 0..m {
            out.push(r.clone());
        }
    }
    Ok(out)
}

/// Distinct real roots of a monic polynomial with their multiplicities,
/// sorted ascending. Finds however many real roots exist; consistency
/// with the degree is the caller's check.
fn roots_with_multiplicity<R: RealScalar>(
    monic: &[R],
    opts: &RootOptions,
) -> Result<Vec<(R, usize)>> {
    let n = monic.len() - 1;
    let zero = monic[0].of(0.0);
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![(-monic[0].clone(), 1)]);
    }
    // monic derivative
    let mut deriv: Vec<R> = (1..=n)
        .map(|k| monic[k].clone() * monic[k].of_i64(k as i64))
        .collect();
    let dl = deriv.last().unwrap().clone();
    for c in deriv.iter_mut() {
        *c = c.clone() / dl.clone();
    }
    let criticals = roots_with_multiplicity(&deriv, opts)?;

    let bound = cauchy_bound(monic);
    let mut roots: Vec<(R, usize)> = Vec::new();

    // multiple roots of p sit at critical points where p nearly vanishes
    let mut is_root_of_p = vec![false; criticals.len()];
    for (idx, (r, m)) in criticals.iter().enumerate() {
        let (val, floor) = horner_with_bound(monic, r);
        let mult_in_p = m + 1;
        let accept = if val.abs() <= floor {
            true
        } else {
            // would-be cluster radius if the residual came from a split
            // of a genuine multiplicity-(m+1) root
            let d = nth_derivative_at(monic, r, mult_in_p);
            if d.abs() <= floor {
                false
            } else {
                let fact: i64 = (1..=mult_in_p as i64).product();
                let ratio = val.abs() * r.of_i64(fact) / d.abs();
                let split = ratio.powf(&r.of(1.0 / mult_in_p as f64));
                split.approx_f64() <= opts.merge_tol
            }
        };
        if accept {
            is_root_of_p[idx] = true;
            roots.push((r.clone(), mult_in_p));
        }
    }

    // simple roots: sign changes between consecutive critical points
    let mut nodes: Vec<R> = Vec::with_capacity(criticals.len() + 2);
    nodes.push(-bound.clone());
    for (r, _) in &criticals {
        nodes.push(r.clone());
    }
    nodes.push(bound.clone());
    let safe = zero.of(10.0 * opts.merge_tol);
    for w in 0..nodes.len() - 1 {
        let mut a = nodes[w].clone();
        let mut b = nodes[w + 1].clone();
        // step off endpoints that are themselves roots of p
        if w > 0 && is_root_of_p[w - 1] {
            a = a + safe.clone();
        }
        if w < criticals.len() && is_root_of_p[w] {
            b = b - safe.clone();
        }
        if !(a < b) {
            continue;
        }
        let (fa, ea) = horner_with_bound(monic, &a);
        let (fb, eb) = horner_with_bound(monic, &b);
        if fa.abs() <= ea || fb.abs() <= eb {
            continue; // endpoint sign unresolved; root already accounted for
        }
        if fa.is_negative() == fb.is_negative() {
            continue;
        }
        let root = bisect_newton(monic, a, b, fa.is_negative());
        // guard against rediscovering an accepted multiple root
        if roots
            .iter()
            .any(|(r, _)| (r.clone() - root.clone()).abs().approx_f64() <= opts.merge_tol)
        {
            continue;
        }
        roots.push((root, 1));
    }

    roots.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    // merge any residual near-coincident pair
    let mut merged: Vec<(R, usize)> = Vec::with_capacity(roots.len());
    for (r, m) in roots {
        match merged.last_mut() {
            Some((prev, pm)) if (r.clone() - prev.clone()).abs().approx_f64() <= opts.merge_tol => {
                *pm += m;
            }
            _ => merged.push((r, m)),
        }
    }
    Ok(merged)
}

/// Cauchy root bound `1 + max |a_k|` for a monic polynomial.
fn cauchy_bound<R: RealScalar>(monic: &[R]) -> R {
    let mut m = monic[0].of(0.0);
    for c in &monic[..monic.len() - 1] {
        if c.abs() > m {
            m = c.abs();
        }
    }
    m + monic[0].of(1.0)
}

/// Horner evaluation with a running roundoff bound.
fn horner_with_bound<R: RealScalar>(coeffs: &[R], x: &R) -> (R, R) {
    let u = x.unit_roundoff();
    let mut acc = coeffs.last().unwrap().clone();
    let mut mag = acc.abs();
    for c in coeffs.iter().rev().skip(1) {
        acc = acc * x.clone() + c.clone();
        mag = mag * x.abs() + c.abs();
    }
    let n = coeffs.len() as i64;
    let bound = mag * u * x.of_i64(4 * n);
    (acc, bound)
}

fn nth_derivative_at<R: RealScalar>(coeffs: &[R], x: &R, order: usize) -> R {
    let mut c: Vec<R> = coeffs.to_vec();
    for _ in 0..order {
        if c.len() <= 1 {
            return x.of(0.0);
        }
        c = (1..c.len())
            .map(|k| c[k].clone() * x.of_i64(k as i64))
            .collect();
    }
    horner_with_bound(&c, x).0
}

/// Bisection to locate, then Newton to polish, on an interval where the
/// polynomial is monotone with a sign change. `neg_left` says whether
/// the value at the left endpoint is negative.
fn bisect_newton<R: RealScalar>(coeffs: &[R], mut a: R, mut b: R, neg_left: bool) -> R {
    let two = a.of(2.0);
    for _ in 0..48 {
        let mid = (a.clone() + b.clone()) / two.clone();
        let (v, _) = horner_with_bound(coeffs, &mid);
        if v.is_negative() == neg_left {
            a = mid;
        } else {
            b = mid;
        }
    }
    let deriv: Vec<R> = (1..coeffs.len())
        .map(|k| coeffs[k].clone() * a.of_i64(k as i64))
        .collect();
    let mut x = (a.clone() + b.clone()) / two.clone();
    let eps_rel = {
        let p = x.precision_bits().saturating_sub(6);
        x.of(2.0).powi(-(p as i32))
    };
    for _ in 0..64 {
        let (v, _) = horner_with_bound(coeffs, &x);
        let d = horner_with_bound(&deriv, &x).0;
        if d.is_zero() {
            break;
        }
        let step = v / d;
        let next = x.clone() - step.clone();
        // safeguard within the bracket
        let next = if next < a || next > b {
            (a.clone() + b.clone()) / two.clone()
        } else {
            next
        };
        let done = step.abs() <= (x.abs() + x.of(1.0)) * eps_rel.clone();
        x = next;
        if done {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::mp;
    use crate::Mp;

    fn poly(cs: &[f64]) -> Vec<Mp> {
        cs.iter().map(|&c| mp(c)).collect()
    }

    #[test]
    fn quadratic_two_roots() {
        // z^2 - 3z + 2 = (z-1)(z-2)
        let r = real_roots_monic(&poly(&[2.0, -3.0, 1.0]), &RootOptions::default()).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].approx_f64() - 1.0).abs() < 1e-30);
        assert!((r[1].approx_f64() - 2.0).abs() < 1e-30);
    }

    #[test]
    fn linear() {
        let r = real_roots_monic(&poly(&[-5.0, 1.0]), &RootOptions::default()).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].approx_f64(), 5.0);
    }

    #[test]
    fn complex_roots_rejected() {
        let e = real_roots_monic(&poly(&[1.0, 0.0, 1.0]), &RootOptions::default());
        assert!(matches!(e, Err(Error::Inconsistent(_))));
    }

    #[test]
    fn negative_root_rejected() {
        // (z-1)(z+2) = z^2 + z - 2
        let e = real_roots_monic(&poly(&[-2.0, 1.0, 1.0]), &RootOptions::default());
        assert!(matches!(e, Err(Error::Inconsistent(_))));
    }

    #[test]
    fn double_root() {
        // (z-1)^2
        let r = real_roots_monic(&poly(&[1.0, -2.0, 1.0]), &RootOptions::default()).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].approx_f64() - 1.0).abs() < 1e-12);
        assert!((r[1].approx_f64() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn triple_root_with_simple() {
        // (z-1)^3 (z-3) = z^4 - 6 z^3 + 12 z^2 - 10 z + 3
        let r =
            real_roots_monic(&poly(&[3.0, -10.0, 12.0, -6.0, 1.0]), &RootOptions::default())
                .unwrap();
        assert_eq!(r.len(), 4);
        for i in 0..3 {
            assert!((r[i].approx_f64() - 1.0).abs() < 1e-8, "root {}", r[i].approx_f64());
        }
        assert!((r[3].approx_f64() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn well_separated_expand_roundtrip() {
        // roots 0.3, 1.7, 4.1, 9.5 -> expand -> recover
        let roots = [0.3, 1.7, 4.1, 9.5];
        let mut c = vec![mp(1.0)];
        for r in roots {
            let mut next = vec![mp(0.0); c.len() + 1];
            for (k, ck) in c.iter().enumerate() {
                next[k + 1] = next[k + 1].clone() + ck.clone();
                next[k] = next[k].clone() - ck.clone() * mp(r);
            }
            c = next;
        }
        let found = real_roots_monic(&c, &RootOptions::default()).unwrap();
        assert_eq!(found.len(), 4);
        for (f, r) in found.iter().zip(roots) {
            assert!((f.approx_f64() - r).abs() < 1e-10);
        }
    }
}
