//! Parameter recovery: from moments via `h -> e` (Jacobi-Trudi) and
//! root extraction, and from Maclaurin derivative data at the origin.

use crate::error::{Error, Result};
use crate::roots::{real_roots_monic, RootOptions};
use crate::scalar::RealScalar;
use crate::symfunc::{h_table, h_to_e, ParamVector, SymPolyTable};

/// Recovered parameters with the reproduction residual.
#[derive(Debug, Clone)]
pub struct RecoveryResult<R> {
    /// Sorted ascending.
    pub recovered: ParamVector<R>,
    /// Max deviation of the reproduced moments/coefficients from inputs.
    pub residual: R,
}

/// Recover `alpha` from the first `m` moments `mu_1..mu_m`.
///
/// `h_k := mu_k / k!` are the complete homogeneous values at `alpha`;
/// Jacobi-Trudi converts to the elementary values, whose alternating sum
/// is the monic polynomial with roots `alpha_j`.
pub fn recover_from_moments<R: RealScalar>(mu: &[R], m: usize) -> Result<RecoveryResult<R>> {
    if mu.len() != m || m == 0 {
        return Err(Error::Domain(format!("need exactly m = {m} moments, got {}", mu.len())));
    }
    let one = mu[0].of(1.0);
    let mut h = Vec::with_capacity(m + 1);
    h.push(one.clone());
    let mut fact = one.clone();
    for (k, mu_k) in mu.iter().enumerate() {
        fact = fact * mu[0].of_i64(k as i64 + 1);
        h.push(mu_k.clone() / fact.clone());
    }
    let h = SymPolyTable::new(h)?;
    let e = h_to_e(&h, m)?;
    let roots = roots_of_esum(&e, m, &one)?;
    let recovered = ParamVector::new(roots)?;
    // reproduce the moments
    let ht = h_table(recovered.alpha(), m);
    let mut residual = mu[0].of(0.0);
    let mut fact = one.clone();
    for k in 1..=m {
        fact = fact * mu[0].of_i64(k as i64);
        let rep = fact.clone() * ht.get(k).clone();
        let dev = (rep - mu[k - 1].clone()).abs();
        if dev > residual {
            residual = dev;
        }
    }
    Ok(RecoveryResult { recovered, residual })
}

/// Recover `alpha` from the derivative values `Lambda^(k)(0+)` for
/// `k = m-1 .. 2m-1` (so `c` has `m+1` entries).
///
/// The leading entry equals `prod a_j` (the reciprocals' product); the
/// ratios `(-1)^i c_i / c_0` are `h_i` of the reciprocals, and the roots
/// of the elementary alternating sum are the `a_j` themselves.
pub fn recover_from_maclaurin<R: RealScalar>(c: &[R], m: usize) -> Result<RecoveryResult<R>> {
    if c.len() != m + 1 || m == 0 {
        return Err(Error::Domain(format!(
            "need exactly m + 1 = {} derivative values, got {}",
            m + 1,
            c.len()
        )));
    }
    if c[0].is_zero() {
        return Err(Error::Degenerate(
            "leading Maclaurin value must be non-zero (it is the product of the reciprocals)"
                .into(),
        ));
    }
    let one = c[0].of(1.0);
    let mut h = Vec::with_capacity(m + 1);
    h.push(one.clone());
    for i in 1..=m {
        let ratio = c[i].clone() / c[0].clone();
        h.push(if i % 2 == 1 { -ratio } else { ratio });
    }
    let h = SymPolyTable::new(h)?;
    let e = h_to_e(&h, m)?;
    let a_roots = roots_of_esum(&e, m, &one)?;
    let alphas: Vec<R> = a_roots.iter().map(|a| one.clone() / a.clone()).collect();
    let recovered = ParamVector::new(alphas)?.sorted();
    // reproduce the derivative values from the recovered parameters
    let a_rec = recovered.reciprocals();
    let mut prod = one.clone();
    for a in &a_rec {
        prod = prod * a.clone();
    }
    let ht = h_table(&a_rec, m);
    let mut residual = c[0].of(0.0);
    for i in 0..=m {
        let mut rep = prod.clone() * ht.get(i).clone();
        if i % 2 == 1 {
            rep = -rep;
        }
        let dev = (rep - c[i].clone()).abs();
        if dev > residual {
            residual = dev;
        }
    }
    Ok(RecoveryResult { recovered, residual })
}

/// Roots of `sum_k (-1)^k e_k z^(m-k)`, i.e. of `prod (z - r_j)`.
fn roots_of_esum<R: RealScalar>(e: &SymPolyTable<R>, m: usize, one: &R) -> Result<Vec<R>> {
    // low-to-high coefficients: z^i carries (-1)^(m-i) e_{m-i}
    let mut coeffs = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let k = m - i;
        let v = e.get(k).clone();
        coeffs.push(if k % 2 == 1 { -v } else { v });
    }
    debug_assert!(coeffs[m] == one.clone());
    let _ = one;
    real_roots_monic(&coeffs, &RootOptions::default())
}
