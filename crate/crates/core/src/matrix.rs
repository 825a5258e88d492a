//! Dense matrices, exact and float determinants, Vandermonde products.
//!
//! Two determinant routes are kept deliberately separate:
//!
//! * [`det_exact`] — fraction-free (Bareiss) elimination. Exact on exact
//!   scalar types; every intermediate value is a quotient of minors, so
//!   coefficient growth stays polynomial.
//! * [`det_float`] — partially pivoted LU carrying a running forward
//!   error bound. The bound accounts for per-entry input uncertainty and
//!   for unit roundoff at the working precision, and is what the sign
//!   oracle consumes.

use crate::error::{Error, Result};
use crate::scalar::{RealScalar, Scalar};


/// Row-major dense matrix over a homogeneous scalar type.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: Clone> DenseMatrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Grid(format!(
                "entry count {} does not match {}x{}",
                entries.len(),
                rows,
                cols
            )));
        }
        Ok(DenseMatrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    /// Submatrix picked by (strictly increasing) row and column indices.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> DenseMatrix<T> {
        DenseMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
///
/// For exact scalars every division is exact and the result is the true
/// determinant. Callable on floats, but [`det_float`] is the right tool
/// there.
pub fn det_exact<T: Scalar>(m: &DenseMatrix<T>) -> Result<T> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(T::one());
    }
    let mut a: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j).clone()).collect())
        .collect();
    let mut sign_flip = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(T::zero());
            };
            a.swap(k, p);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = num / prev.clone();
            }
            a[i][k] = T::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if sign_flip { -det } else { det })
}

/// Float determinant with a rigorous forward error bound.
///
/// Equivalent to `det_float_with_errors` with all input uncertainties
/// zero.
pub fn det_float<R: RealScalar>(m: &DenseMatrix<R>) -> Result<(R, R)> {
    det_float_with_errors(m, None)
}

/// Float determinant where each entry `m[i][j]` is known only up to the
/// absolute uncertainty `entry_err[i][j]`.
///
/// Returns `(value, bound)` with `|value - det(true matrix)| <= bound`
/// up to first order in the uncertainties and roundoff (a safety factor
/// absorbs the higher-order terms). When a pivot cannot be separated
/// from zero, the value is returned with a bound large enough that the
/// sign classifies as `Zero`; the bound then comes from a Hadamard
/// estimate of the unresolved block, so it still dominates the true
/// determinant.
pub fn det_float_with_errors<R: RealScalar>(
    m: &DenseMatrix<R>,
    entry_err: Option<&DenseMatrix<R>>,
) -> Result<(R, R)> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok((R::one(), R::zero()));
    }
    let model = m.get(0, 0).clone();
    let u = {
        // most conservative roundoff among the entries
        let mut worst = model.unit_roundoff();
        for e in &m.entries {
            let ue = e.unit_roundoff();
            if ue > worst {
                worst = ue;
            }
        }
        worst
    };
    let zero = model.of(0.0);
    let mut vals: Vec<Vec<R>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j).clone()).collect())
        .collect();
    let mut errs: Vec<Vec<R>> = match entry_err {
        Some(e) => {
            if e.rows != n || e.cols != n {
                return Err(Error::Grid("error matrix dimensions mismatch".into()));
            }
            (0..n)
                .map(|i| (0..n).map(|j| e.get(i, j).clone()).collect())
                .collect()
        }
        None => vec![vec![zero.clone(); n]; n],
    };

    let mut det = model.of(1.0);
    let mut det_err = zero.clone();
    let mut negate = false;

    for k in 0..n {
        // partial pivoting on magnitude
        let mut p = k;
        for i in k + 1..n {
            if vals[i][k].abs() > vals[p][k].abs() {
                p = i;
            }
        }
        if p != k {
            vals.swap(k, p);
            errs.swap(k, p);
            negate = !negate;
        }
        let pivot = vals[k][k].clone();
        let pivot_err = errs[k][k].clone();
        if pivot.abs() <= pivot_err {
            // Sign of the pivot is unresolved at this precision. Bound the
            // whole determinant: |det| <= prod(|p_i|+e_i) * Hadamard(rest).
            let mut bound = det.abs() + det_err.clone();
            let mut hadamard = model.of(1.0);
            for (i, row) in vals.iter().enumerate().take(n).skip(k) {
                let mut sq = zero.clone();
                for j in k..n {
                    let t = row[j].abs() + errs[i][j].clone();
                    sq = sq + t.clone() * t;
                }
                hadamard = hadamard * sq.sqrt();
            }
            bound = bound * (hadamard + u.clone());
            let value = zero.clone();
            return Ok((value, bound + u));
        }
        // accumulate the pivot into the determinant product
        let new_det = det.clone() * pivot.clone();
        det_err = det_err * pivot.abs() + det.abs() * pivot_err.clone() + u.clone() * new_det.abs();
        det = new_det;
        let denom = pivot.abs() - pivot_err.clone();
        for i in k + 1..n {
            let f = vals[i][k].clone() / pivot.clone();
            let f_err =
                (errs[i][k].clone() + f.abs() * pivot_err.clone()) / denom.clone() + u.clone() * f.abs();
            for j in k + 1..n {
                let prod = f.clone() * vals[k][j].clone();
                let new = vals[i][j].clone() - prod.clone();
                errs[i][j] = errs[i][j].clone()
                    + f.abs() * errs[k][j].clone()
                    + vals[k][j].abs() * f_err.clone()
                    + u.clone() * (prod.abs() + new.abs());
                vals[i][j] = new;
            }
            vals[i][k] = zero.clone();
        }
    }
    if negate {
        det = -det;
    }
    // safety factor for the dropped second-order terms
    let bound = (det_err + u.clone() * det.abs()) * model.of(1.125) + u;
    Ok((det, bound))
}

/// `V(a) = prod_{i<j} (a_j - a_i)`; empty and singleton inputs give 1.
pub fn vandermonde<T: Scalar>(a: &[T]) -> T {
    let mut acc = T::one();
    for j in 1..a.len() {
        for i in 0..j {
            acc = acc * (a[j].clone() - a[i].clone());
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::mp;
    use num_rational::BigRational;
    use num_traits::{FromPrimitive, Signed};

    fn rat(n: i64) -> BigRational {
        BigRational::from_i64(n).unwrap()
    }

    fn ratq(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn det_exact_small_cases() {
        let m = DenseMatrix::new(2, 2, vec![rat(1), rat(1), rat(1), rat(1)]).unwrap();
        assert_eq!(det_exact(&m).unwrap(), rat(0));
        let m = DenseMatrix::new(2, 2, vec![rat(2), rat(1), rat(1), rat(1)]).unwrap();
        assert_eq!(det_exact(&m).unwrap(), rat(1));
    }

    #[test]
    fn det_exact_rejects_non_square() {
        let m = DenseMatrix::new(2, 3, vec![rat(0); 6]).unwrap();
        assert!(matches!(det_exact(&m), Err(Error::NonSquare { .. })));
    }

    /// Brute-force Laplace expansion; the independent oracle for both
    /// determinant routes.
    pub(crate) fn det_laplace(m: &DenseMatrix<BigRational>) -> BigRational {
        let n = m.rows();
        if n == 0 {
            return rat(1);
        }
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut acc = rat(0);
        let cols: Vec<usize> = (1..n).collect();
        for i in 0..n {
            let rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
            let minor = det_laplace(&m.submatrix(&rows, &cols));
            let term = m.get(i, 0).clone() * minor;
            acc = if i % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }

    #[test]
    fn det_exact_matches_laplace_oracle() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 7) as i64 - 3
        };
        for _ in 0..200 {
            for n in 1..=5 {
                let m = DenseMatrix::from_fn(n, n, |_, _| rat(next()));
                assert_eq!(det_exact(&m).unwrap(), det_laplace(&m));
            }
        }
    }

    #[test]
    fn det_float_identity_bound() {
        let m = DenseMatrix::from_fn(3, 3, |i, j| mp(if i == j { 1.0 } else { 0.0 }));
        let (v, e) = det_float(&m).unwrap();
        assert_eq!(v.approx_f64(), 1.0);
        assert!(e < mp(2.0f64.powi(-100)), "bound {e} not < 2^-100");
    }

    #[test]
    fn det_float_hilbert4_within_bound() {
        let m = DenseMatrix::from_fn(4, 4, |i, j| mp(1.0 / (i + j + 1) as f64));
        // exact determinant of the rational Hilbert matrix cast to floats
        let exactm = DenseMatrix::from_fn(4, 4, |i, j| {
            let ij = (i + j + 1) as i64;
            ratq(1, ij)
        });
        // the float matrix entries are f64 roundings; compare against the
        // determinant of the rounded matrix, computed exactly
        let rounded = DenseMatrix::from_fn(4, 4, |i, j| {
            BigRational::from_f64(1.0 / (i + j + 1) as f64).unwrap()
        });
        let exact_rounded = det_exact(&rounded).unwrap();
        let (v, e) = det_float(&m).unwrap();
        let diff = (v.approx_f64() - rational_to_f64(&exact_rounded)).abs();
        assert!(diff <= e.approx_f64(), "diff {diff} > bound {}", e.approx_f64());
        // and the true Hilbert determinant 1/6048000 is close by
        let truth = rational_to_f64(&det_exact(&exactm).unwrap());
        assert!((truth - 1.0 / 6048000.0).abs() < 1e-22);
        assert!((v.approx_f64() - truth).abs() < 1e-16);
    }

    fn rational_to_f64(r: &BigRational) -> f64 {
        use num_traits::ToPrimitive;
        r.to_f64().unwrap()
    }

    #[test]
    fn det_float_singular_rank1() {
        let m = DenseMatrix::from_fn(3, 3, |i, j| mp(((i + 1) * (j + 2)) as f64));
        let (v, e) = det_float(&m).unwrap();
        assert!(v.abs() <= e);
    }

    #[test]
    fn vandermonde_values() {
        assert_eq!(vandermonde(&[rat(1), rat(2)]), rat(1));
        assert_eq!(vandermonde(&[rat(1), rat(2), rat(4)]), rat(6));
        assert_eq!(vandermonde(&[rat(3), rat(3)]), rat(0));
        assert_eq!(vandermonde::<BigRational>(&[]), rat(1));
        assert_eq!(vandermonde(&[rat(9)]), rat(1));
    }
}
