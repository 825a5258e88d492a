//! Complete homogeneous and elementary symmetric polynomials, the
//! Jacobi-Trudi conversion between them, and the parameter vector type
//! that ties moments and Maclaurin data together.

use crate::error::{Error, Result};
use crate::matrix::{det_exact, DenseMatrix};
use crate::scalar::Scalar;

/// Positive coefficient tuple of a hypoexponential density, with
/// distinctness metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector<T> {
    alpha: Vec<T>,
    distinct: bool,
}

impl<T: Scalar> ParamVector<T> {
    /// Build from positive entries; records whether all entries are
    /// pairwise distinct (exact equality for exact scalars, relative
    /// 1e-12 for floats).
    pub fn new(alpha: Vec<T>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::Domain("parameter vector must be non-empty".into()));
        }
        if alpha.iter().any(|a| !a.is_positive()) {
            return Err(Error::Domain("parameters must be positive".into()));
        }
        let distinct = all_distinct(&alpha);
        Ok(ParamVector { alpha, distinct })
    }

    pub fn alpha(&self) -> &[T] {
        &self.alpha
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_distinct(&self) -> bool {
        self.distinct
    }

    /// The reciprocals `a_j = 1/alpha_j`.
    pub fn reciprocals(&self) -> Vec<T> {
        self.alpha.iter().map(|a| T::one() / a.clone()).collect()
    }

    /// Entries sorted ascending (used by recovery output).
    pub fn sorted(&self) -> ParamVector<T> {
        let mut alpha = self.alpha.clone();
        alpha.sort_by(|x, y| x.partial_cmp(y).unwrap());
        ParamVector { alpha, distinct: self.distinct }
    }
}

fn all_distinct<T: Scalar>(v: &[T]) -> bool {
    if T::is_exact() {
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if v[i] == v[j] {
                    return false;
                }
            }
        }
        return true;
    }
    let mut max = T::zero();
    for x in v {
        if x.abs() > max {
            max = x.abs();
        }
    }
    let tol = max * T::from_f64(1e-12).unwrap();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if (v[i].clone() - v[j].clone()).abs() <= tol {
                return false;
            }
        }
    }
    true
}

/// Table of `h_0..h_N` (or `e_0..e_N`) evaluated at one argument vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SymPolyTable<T> {
    values: Vec<T>,
}

impl<T: Scalar> SymPolyTable<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        match values.first() {
            Some(v) if v.is_one() => Ok(SymPolyTable { values }),
            _ => Err(Error::Domain("table must start with value 1 at index 0".into())),
        }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, k: usize) -> &T {
        &self.values[k]
    }

    pub fn top_index(&self) -> usize {
        self.values.len() - 1
    }
}

/// Complete homogeneous symmetric polynomial `h_p(args)` by the prefix
/// recurrence `h_p(x_1..k) = h_p(x_1..k-1) + x_k h_{p-1}(x_1..k)`.
pub fn h_eval<T: Scalar>(args: &[T], p: usize) -> T {
    h_table(args, p).values.pop_unwrap()
}

/// `h_0..h_n` at the given arguments.
pub fn h_table<T: Scalar>(args: &[T], n: usize) -> SymPolyTable<T> {
    let m = args.len();
    // row[j] = h_k(args[..j]) for the current k
    let mut row = vec![T::one(); m + 1];
    let mut values = Vec::with_capacity(n + 1);
    values.push(T::one());
    for _k in 1..=n {
        let mut next = vec![T::zero(); m + 1];
        for j in 1..=m {
            next[j] = next[j - 1].clone() + args[j - 1].clone() * row[j].clone();
        }
        values.push(next[m].clone());
        row = next;
    }
    SymPolyTable { values }
}

/// Elementary symmetric polynomial `e_p(args)`; zero for `p > len(args)`.
pub fn e_eval<T: Scalar>(args: &[T], p: usize) -> T {
    if p > args.len() {
        return T::zero();
    }
    e_table(args, p).values.pop_unwrap()
}

/// `e_0..e_n` at the given arguments (entries beyond `len(args)` are 0).
pub fn e_table<T: Scalar>(args: &[T], n: usize) -> SymPolyTable<T> {
    let mut values = vec![T::zero(); n + 1];
    values[0] = T::one();
    for (idx, x) in args.iter().enumerate() {
        let hi = n.min(idx + 1);
        for k in (1..=hi).rev() {
            values[k] = values[k].clone() + x.clone() * values[k - 1].clone();
        }
    }
    SymPolyTable { values }
}

trait PopUnwrap<T> {
    fn pop_unwrap(self) -> T;
}

impl<T> PopUnwrap<T> for Vec<T> {
    fn pop_unwrap(mut self) -> T {
        self.pop().expect("non-empty by construction")
    }
}

/// Jacobi-Trudi conversion: `e_k = det(h_{1-i+j})_{i,j=1}^k` with
/// `h_{negative} = 0`, for `k = 0..m`.
pub fn h_to_e<T: Scalar>(h: &SymPolyTable<T>, m: usize) -> Result<SymPolyTable<T>> {
    if h.top_index() < m {
        return Err(Error::Domain(format!(
            "need h_0..h_{m}, table only reaches h_{}",
            h.top_index()
        )));
    }
    let mut values = Vec::with_capacity(m + 1);
    values.push(T::one());
    for k in 1..=m {
        let jt = DenseMatrix::from_fn(k, k, |i, j| {
            // entry h_{1-i+j}, zero when the index is negative
            let idx = 1 + j as i64 - i as i64;
            if idx < 0 {
                T::zero()
            } else {
                h.get(idx as usize).clone()
            }
        });
        values.push(det_exact(&jt)?);
    }
    Ok(SymPolyTable { values })
}

/// Partial sum of the generating identity
/// `sum_p h_p(args) z^p = prod_j 1/(1 - args_j z)`, valid for
/// `|z| < min_j 1/args_j`. The radius is checked.
pub fn h_generating_partial_sum<T: Scalar>(args: &[T], z: &T, n: usize) -> Result<T> {
    for a in args {
        if !a.is_positive() {
            return Err(Error::Domain("arguments must be positive".into()));
        }
        if z.abs() * a.clone() >= T::one() {
            return Err(Error::Domain(
                "|z| must be below the radius min_j 1/args_j".into(),
            ));
        }
    }
    let table = h_table(args, n);
    let mut acc = T::zero();
    let mut zp = T::one();
    for k in 0..=n {
        acc = acc + table.get(k).clone() * zp.clone();
        zp = zp * z.clone();
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Exact;
    use num_traits::FromPrimitive;

    fn r(n: i64) -> Exact {
        Exact::from_i64(n).unwrap()
    }

    #[test]
    fn h_small_values() {
        assert_eq!(h_eval::<Exact>(&[r(7), r(9)], 0), r(1));
        assert_eq!(h_eval(&[r(1), r(2)], 2), r(7));
        assert_eq!(h_eval(&[r(1), r(1)], 3), r(4));
    }

    #[test]
    fn e_small_values() {
        assert_eq!(e_eval(&[r(1), r(2), r(3)], 1), r(6));
        assert_eq!(e_eval(&[r(1), r(2)], 2), r(2));
        assert_eq!(e_eval(&[r(1), r(2), r(3)], 4), r(0));
    }

    #[test]
    fn jacobi_trudi_examples() {
        // h-table of (1,2): (1, 3, 7) -> e = (1, 3, 2)
        let h = SymPolyTable::new(vec![r(1), r(3), r(7)]).unwrap();
        let e = h_to_e(&h, 2).unwrap();
        assert_eq!(e.values(), &[r(1), r(3), r(2)]);
        // k = 1 identity
        let h = SymPolyTable::new(vec![r(1), r(42)]).unwrap();
        let e = h_to_e(&h, 1).unwrap();
        assert_eq!(e.values(), &[r(1), r(42)]);
        // h-table of (1,1,1): (1,3,6,10) -> binomials (1,3,3,1)
        let h = SymPolyTable::new(vec![r(1), r(3), r(6), r(10)]).unwrap();
        let e = h_to_e(&h, 3).unwrap();
        assert_eq!(e.values(), &[r(1), r(3), r(3), r(1)]);
    }

    #[test]
    fn jacobi_trudi_matches_direct_e() {
        let args = vec![r(2), r(3), r(5), r(7)];
        let h = h_table(&args, 4);
        let e = h_to_e(&h, 4).unwrap();
        for k in 0..=4 {
            assert_eq!(e.get(k), &e_eval(&args, k), "k = {k}");
        }
    }

    #[test]
    fn generating_partial_sums() {
        // args=(1), z=0.5: geometric series -> 2
        let v = h_generating_partial_sum(&[1.0f64], &0.5, 60).unwrap();
        assert!((v - 2.0).abs() < 1e-8);
        // z = 0 -> 1
        let v = h_generating_partial_sum(&[1.0f64, 2.0], &0.0, 5).unwrap();
        assert_eq!(v, 1.0);
        // args=(1,2), z=0.25 -> 8/3
        let v = h_generating_partial_sum(&[1.0f64, 2.0], &0.25, 80).unwrap();
        assert!((v - 8.0 / 3.0).abs() < 1e-10);
        // radius violation
        assert!(h_generating_partial_sum(&[1.0f64, 2.0], &0.5, 5).is_err());
    }

    #[test]
    fn param_vector_distinctness() {
        let p = ParamVector::new(vec![r(1), r(2)]).unwrap();
        assert!(p.is_distinct());
        let p = ParamVector::new(vec![r(1), r(1)]).unwrap();
        assert!(!p.is_distinct());
        let p = ParamVector::new(vec![1.0f64, 1.0 + 1e-15]).unwrap();
        assert!(!p.is_distinct());
        let p = ParamVector::new(vec![1.0f64, 1.0 + 1e-9]).unwrap();
        assert!(p.is_distinct());
        assert!(ParamVector::<f64>::new(vec![]).is_err());
        assert!(ParamVector::new(vec![1.0f64, -2.0]).is_err());
    }

    #[test]
    fn reciprocals() {
        let p = ParamVector::new(vec![Exact::new(1.into(), 2.into()), r(4)]).unwrap();
        assert_eq!(p.reciprocals(), vec![r(2), Exact::new(1.into(), 4.into())]);
    }
}
