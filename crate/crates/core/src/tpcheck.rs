//! Sampling Toeplitz kernels on finite grids and deciding TN_p / TP_p
//! by minor enumeration with certificates.
//!
//! Enumeration order is a contract: minors are visited by increasing
//! size `r`, then lexicographically in (row set, column set); the first
//! violation in that order is the reported witness. The implementation
//! is sequential, which realizes that deterministic reduce directly.
//! Minor signs come from [`det_float_with_errors`] plus
//! [`sign_with_tolerance`], so an entry-level error bound can never be
//! mistaken for a negative minor.

use crate::density::KernelSpec;
use crate::error::{Error, Result};
use crate::matrix::{det_float_with_errors, DenseMatrix};
use crate::scalar::{sign_with_tolerance, RealScalar, SignClass};
use itertools::Itertools;
use serde_json::json;

/// How deep minor enumeration should go.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinorOrder {
    /// All minors of order `<= p`.
    UpTo(usize),
    /// All minors up to the full minimum dimension.
    Full,
}

impl MinorOrder {
    pub fn resolve(&self, rows: usize, cols: usize) -> usize {
        match self {
            MinorOrder::UpTo(p) => *p.min(&rows.min(cols)),
            MinorOrder::Full => rows.min(cols),
        }
    }
}

/// Options shared by the minor-enumeration entry points.
#[derive(Debug, Clone)]
pub struct TnOptions {
    /// Hard cap on minors evaluated in one call.
    pub budget: u64,
}

impl Default for TnOptions {
    fn default() -> Self {
        TnOptions { budget: 10_000_000 }
    }
}

/// A sampled Toeplitz kernel: `matrix[i][j] = spec(xs[i] - ys[j])`,
/// together with per-entry evaluation error bounds.
#[derive(Debug, Clone)]
pub struct GridSample<R> {
    pub xs: Vec<R>,
    pub ys: Vec<R>,
    pub matrix: DenseMatrix<R>,
    pub entry_err: DenseMatrix<R>,
    pub spec: KernelSpec,
}

/// One minor with its classified sign.
#[derive(Debug, Clone)]
pub struct MinorCertificate<R> {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub det_value: R,
    pub det_error: R,
    pub sign: SignClass,
    pub principal: bool,
}

impl<R: RealScalar> MinorCertificate<R> {
    /// JSON with 1-based indices and the determinant rendered to 30
    /// significant digits.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "rows": self.rows.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "cols": self.cols.iter().map(|j| j + 1).collect::<Vec<_>>(),
            "det_value": self.det_value.to_decimal_string(30),
            "det_error_bound": self.det_error.to_decimal_string(30),
            "sign": format!("{:?}", self.sign),
            "principal": self.principal,
        })
    }
}

/// Verdict of a TN/TP check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// No minor of the tested orders is negative.
    Tn,
    /// Every tested minor is positive.
    Tp,
    /// Witness minor is negative.
    NotTn,
    /// TP refuted by a zero (not negative) minor.
    NotTp,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Tn => "TN_p",
            Verdict::Tp => "TP_p",
            Verdict::NotTn => "NotTN_p",
            Verdict::NotTp => "NotTP_p",
        }
    }
}

/// Outcome of a minor-enumeration check.
#[derive(Debug, Clone)]
pub struct TnReport<R> {
    pub order_tested: usize,
    pub verdict: Verdict,
    /// Violating minor for refutations; minor of smallest value otherwise.
    pub witness: Option<MinorCertificate<R>>,
    pub minors_evaluated: u64,
}

impl<R: RealScalar> TnReport<R> {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "order_tested": self.order_tested,
            "verdict": self.verdict.as_str(),
            "witness": self.witness.as_ref().map(|w| w.to_json()),
            "minors_evaluated": self.minors_evaluated,
        })
    }
}

/// Fill the kernel matrix over the given grids.
///
/// Grids must be strictly increasing; a kernel that is unbounded at one
/// of the sampled differences aborts with an error naming it.
pub fn sample<R: RealScalar>(spec: &KernelSpec, xs: &[R], ys: &[R]) -> Result<GridSample<R>> {
    spec.validate()?;
    check_increasing(xs, "xs")?;
    check_increasing(ys, "ys")?;
    let n = xs.len();
    let m = ys.len();
    let mut vals = Vec::with_capacity(n * m);
    let mut errs = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            let d = xs[i].clone() - ys[j].clone();
            let r = spec.eval(&d).map_err(|e| match e {
                Error::Unbounded { .. } => Error::Unbounded { difference: d.approx_f64() },
                other => other,
            })?;
            vals.push(r.value);
            errs.push(r.abs_error_bound);
        }
    }
    Ok(GridSample {
        xs: xs.to_vec(),
        ys: ys.to_vec(),
        matrix: DenseMatrix::new(n, m, vals)?,
        entry_err: DenseMatrix::new(n, m, errs)?,
        spec: spec.clone(),
    })
}

impl<R: RealScalar> GridSample<R> {
    /// Build a sample from an explicit matrix (synthetic test corpora).
    pub fn from_matrix(
        xs: Vec<R>,
        ys: Vec<R>,
        matrix: DenseMatrix<R>,
        entry_err: DenseMatrix<R>,
        spec: KernelSpec,
    ) -> Result<Self> {
        check_increasing(&xs, "xs")?;
        check_increasing(&ys, "ys")?;
        if matrix.rows() != xs.len() || matrix.cols() != ys.len() {
            return Err(Error::Grid("matrix dimensions do not match grids".into()));
        }
        Ok(GridSample { xs, ys, matrix, entry_err, spec })
    }

    /// Apply a map `(value, error) -> (value, error)` entrywise; the
    /// kernel description is replaced by `spec`.
    pub fn map_entries(&self, spec: KernelSpec, f: impl Fn(&R, &R) -> (R, R)) -> GridSample<R> {
        let n = self.matrix.rows();
        let m = self.matrix.cols();
        let mut vals = Vec::with_capacity(n * m);
        let mut errs = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                let (v, e) = f(self.matrix.get(i, j), self.entry_err.get(i, j));
                vals.push(v);
                errs.push(e);
            }
        }
        GridSample {
            xs: self.xs.clone(),
            ys: self.ys.clone(),
            matrix: DenseMatrix::new(n, m, vals).expect("same dims"),
            entry_err: DenseMatrix::new(n, m, errs).expect("same dims"),
            spec,
        }
    }

    fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<(R, R)> {
        let sub = self.matrix.submatrix(rows, cols);
        let sube = self.entry_err.submatrix(rows, cols);
        det_float_with_errors(&sub, Some(&sube))
    }
}

fn check_increasing<R: RealScalar>(v: &[R], name: &str) -> Result<()> {
    if v.is_empty() {
        return Err(Error::Grid(format!("{name} must be non-empty")));
    }
    for w in v.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::Grid(format!("{name} must be strictly increasing")));
        }
    }
    Ok(())
}

pub(crate) fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn full_budget(n: usize, m: usize, p: usize) -> u128 {
    (1..=p).map(|r| binomial(n, r) * binomial(m, r)).sum()
}

/// Is the sample TN up to order `p`? Enumerates minors in contract
/// order, short-circuiting on the first negative one.
pub fn check_tn<R: RealScalar>(
    g: &GridSample<R>,
    p: MinorOrder,
    opts: &TnOptions,
) -> Result<TnReport<R>> {
    let n = g.matrix.rows();
    let m = g.matrix.cols();
    let order = p.resolve(n, m);
    if order == 0 {
        return Err(Error::Domain("order must be at least 1".into()));
    }
    let required = full_budget(n, m, order);
    if required > opts.budget as u128 {
        return Err(Error::BudgetExceeded { required, budget: opts.budget });
    }
    let mut evaluated = 0u64;
    let mut min_minor: Option<MinorCertificate<R>> = None;
    for r in 1..=order {
        for rows in (0..n).combinations(r) {
            for cols in (0..m).combinations(r) {
                let (v, e) = g.minor(&rows, &cols)?;
                evaluated += 1;
                let sign = sign_with_tolerance(&v, &e);
                if sign == SignClass::Negative {
                    return Ok(TnReport {
                        order_tested: order,
                        verdict: Verdict::NotTn,
                        witness: Some(MinorCertificate {
                            principal: rows == cols,
                            rows,
                            cols,
                            det_value: v,
                            det_error: e,
                            sign,
                        }),
                        minors_evaluated: evaluated,
                    });
                }
                let smaller = match &min_minor {
                    None => true,
                    Some(c) => v < c.det_value,
                };
                if smaller {
                    min_minor = Some(MinorCertificate {
                        principal: rows == cols,
                        rows: rows.clone(),
                        cols: cols.clone(),
                        det_value: v,
                        det_error: e,
                        sign,
                    });
                }
            }
        }
    }
    Ok(TnReport {
        order_tested: order,
        verdict: Verdict::Tn,
        witness: min_minor,
        minors_evaluated: evaluated,
    })
}

/// Is the sample TP up to order `p`?
///
/// With `use_fekete` only contiguous minors are tested, which suffices
/// for *full* total positivity; the flag therefore requires `p` to be
/// the full minimum dimension. A zero minor refutes TP without refuting
/// TN (`NotTp`); a negative minor refutes both (`NotTn`).
pub fn check_tp<R: RealScalar>(
    g: &GridSample<R>,
    p: MinorOrder,
    use_fekete: bool,
    opts: &TnOptions,
) -> Result<TnReport<R>> {
    let n = g.matrix.rows();
    let m = g.matrix.cols();
    let order = p.resolve(n, m);
    if order == 0 {
        return Err(Error::Domain("order must be at least 1".into()));
    }
    if use_fekete && order < n.min(m) {
        return Err(Error::Mode(
            "Fekete mode tests contiguous minors only, which is sound only for full TP \
             (order = min dimension)"
                .into(),
        ));
    }
    let required: u128 = if use_fekete {
        (1..=order).map(|r| ((n - r + 1) * (m - r + 1)) as u128).sum()
    } else {
        full_budget(n, m, order)
    };
    if required > opts.budget as u128 {
        return Err(Error::BudgetExceeded { required, budget: opts.budget });
    }
    let mut evaluated = 0u64;
    let mut check = |rows: Vec<usize>, cols: Vec<usize>, g: &GridSample<R>| -> Result<Option<TnReport<R>>> {
        let (v, e) = g.minor(&rows, &cols)?;
        evaluated += 1;
        let sign = sign_with_tolerance(&v, &e);
        if sign == SignClass::Positive {
            return Ok(None);
        }
        let verdict = if sign == SignClass::Negative { Verdict::NotTn } else { Verdict::NotTp };
        Ok(Some(TnReport {
            order_tested: order,
            verdict,
            witness: Some(MinorCertificate {
                principal: rows == cols,
                rows,
                cols,
                det_value: v,
                det_error: e,
                sign,
            }),
            minors_evaluated: evaluated,
        }))
    };
    if use_fekete {
        for r in 1..=order {
            for i in 0..=n - r {
                for j in 0..=m - r {
                    let rows: Vec<usize> = (i..i + r).collect();
                    let cols: Vec<usize> = (j..j + r).collect();
                    if let Some(rep) = check(rows, cols, g)? {
                        return Ok(rep);
                    }
                }
            }
        }
    } else {
        for r in 1..=order {
            for rows in (0..n).combinations(r) {
                for cols in (0..m).combinations(r) {
                    if let Some(rep) = check(rows.clone(), cols, g)? {
                        return Ok(rep);
                    }
                }
            }
        }
    }
    Ok(TnReport {
        order_tested: order,
        verdict: Verdict::Tp,
        witness: None,
        minors_evaluated: evaluated,
    })
}

/// Minimal-value principal minor of order `<= p` regardless of sign;
/// the workhorse of shift searches, which track how close a family of
/// matrices comes to a violation. Requires equally long grids.
pub fn principal_minimum<R: RealScalar>(
    g: &GridSample<R>,
    p: MinorOrder,
    opts: &TnOptions,
) -> Result<MinorCertificate<R>> {
    let n = g.matrix.rows();
    if n != g.matrix.cols() {
        return Err(Error::Grid(format!(
            "principal scan needs equal grid lengths, got {} and {}",
            n,
            g.matrix.cols()
        )));
    }
    let order = p.resolve(n, n);
    let required: u128 = (1..=order).map(|r| binomial(n, r)).sum();
    if required > opts.budget as u128 {
        return Err(Error::BudgetExceeded { required, budget: opts.budget });
    }
    let mut best: Option<MinorCertificate<R>> = None;
    for r in 1..=order {
        for rows in (0..n).combinations(r) {
            let (v, e) = g.minor(&rows, &rows)?;
            let sign = sign_with_tolerance(&v, &e);
            let smaller = match &best {
                None => true,
                Some(c) => v < c.det_value,
            };
            if smaller {
                best = Some(MinorCertificate {
                    cols: rows.clone(),
                    rows,
                    det_value: v,
                    det_error: e,
                    sign,
                    principal: true,
                });
            }
        }
    }
    Ok(best.expect("order >= 1 guarantees at least one minor"))
}

/// Most negative principal minor of order `<= p`, if any is negative.
/// Requires equally long grids.
pub fn principal_minor_scan<R: RealScalar>(
    g: &GridSample<R>,
    p: MinorOrder,
    opts: &TnOptions,
) -> Result<Option<MinorCertificate<R>>> {
    let n = g.matrix.rows();
    if n != g.matrix.cols() {
        return Err(Error::Grid(format!(
            "principal scan needs equal grid lengths, got {} and {}",
            n,
            g.matrix.cols()
        )));
    }
    let order = p.resolve(n, n);
    let required: u128 = (1..=order).map(|r| binomial(n, r)).sum();
    if required > opts.budget as u128 {
        return Err(Error::BudgetExceeded { required, budget: opts.budget });
    }
    let mut worst: Option<MinorCertificate<R>> = None;
    for r in 1..=order {
        for rows in (0..n).combinations(r) {
            let (v, e) = g.minor(&rows, &rows)?;
            if sign_with_tolerance(&v, &e) == SignClass::Negative {
                let more_negative = match &worst {
                    None => true,
                    Some(c) => v < c.det_value,
                };
                if more_negative {
                    worst = Some(MinorCertificate {
                        cols: rows.clone(),
                        rows,
                        det_value: v,
                        det_error: e,
                        sign: SignClass::Negative,
                        principal: true,
                    });
                }
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::mp;
    use crate::Mp;

    fn grid(v: &[f64]) -> Vec<Mp> {
        v.iter().map(|&x| mp(x)).collect()
    }

    #[test]
    fn heaviside_sample_pattern() {
        let g = sample(&KernelSpec::Heaviside, &grid(&[0.0, 1.0]), &grid(&[0.0, 1.0])).unwrap();
        let vals: Vec<f64> = g.matrix.entries().iter().map(|v| v.approx_f64()).collect();
        assert_eq!(vals, vec![1.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn hw_sample_values() {
        let g = sample(
            &KernelSpec::Hw { alpha: vec![1.0, 1.0] },
            &grid(&[1.0, 2.0]),
            &grid(&[0.0, 1.0]),
        )
        .unwrap();
        let e1 = (-1.0f64).exp();
        let e2 = 2.0 * (-2.0f64).exp();
        let vals: Vec<f64> = g.matrix.entries().iter().map(|v| v.approx_f64()).collect();
        assert!((vals[0] - e1).abs() < 1e-15);
        assert_eq!(vals[1], 0.0);
        assert!((vals[2] - e2).abs() < 1e-15);
        assert!((vals[3] - e1).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_grids() {
        let r = sample(&KernelSpec::Heaviside, &grid(&[1.0, 1.0]), &grid(&[0.0, 1.0]));
        assert!(matches!(r, Err(Error::Grid(_))));
    }

    #[test]
    fn gamma_unbounded_sampling_error() {
        let r = sample(
            &KernelSpec::Gamma { shape: 0.5 },
            &grid(&[0.0, 1.0]),
            &grid(&[0.0, 2.0]),
        );
        match r {
            Err(Error::Unbounded { difference }) => assert_eq!(difference, 0.0),
            other => panic!("expected unbounded error, got {other:?}"),
        }
    }

    #[test]
    fn all_ones_is_tn2() {
        let g = sample(
            &KernelSpec::PolyOf {
                inner: Box::new(KernelSpec::Heaviside),
                coeffs: vec![1.0],
            },
            &grid(&[0.0, 1.0]),
            &grid(&[0.0, 1.0]),
        )
        .unwrap();
        let rep = check_tn(&g, MinorOrder::UpTo(2), &TnOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Tn);
    }

    #[test]
    fn lambda_two_negative_witness() {
        // lambda_d with d=2 on xs=(1,2), ys=(0,1): det = -e^-2
        let g = sample(&KernelSpec::LambdaD { d: 2.0 }, &grid(&[1.0, 2.0]), &grid(&[0.0, 1.0]))
            .unwrap();
        let rep = check_tn(&g, MinorOrder::UpTo(2), &TnOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::NotTn);
        let w = rep.witness.unwrap();
        assert_eq!(w.rows, vec![0, 1]);
        assert_eq!(w.cols, vec![0, 1]);
        assert!((w.det_value.approx_f64() + (-2.0f64).exp()).abs() < 1e-15);
        assert_eq!(w.sign, SignClass::Negative);
    }

    #[test]
    fn hw_grid_is_tn4() {
        let g = sample(
            &KernelSpec::Hw { alpha: vec![1.0, 1.0] },
            &grid(&[0.0, 1.0, 2.0, 3.0]),
            &grid(&[0.0, 1.0, 2.0, 3.0]),
        )
        .unwrap();
        let rep = check_tn(&g, MinorOrder::UpTo(4), &TnOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Tn);
        assert!(rep.witness.is_some());
    }

    #[test]
    fn tp_simple_cases() {
        // [[2,1],[1,1]] realized as exp(-(x-y)^2/2) style kernel is overkill;
        // use a synthetic sample
        let m = DenseMatrix::new(2, 2, vec![mp(2.0), mp(1.0), mp(1.0), mp(1.0)]).unwrap();
        let e = DenseMatrix::new(2, 2, vec![mp(0.0); 4]).unwrap();
        let g = GridSample::from_matrix(
            grid(&[0.0, 1.0]),
            grid(&[0.0, 1.0]),
            m,
            e,
            KernelSpec::Heaviside,
        )
        .unwrap();
        let rep = check_tp(&g, MinorOrder::UpTo(2), false, &TnOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Tp);
    }

    #[test]
    fn gauss_kernel_tp3() {
        let g = sample(&KernelSpec::Gauss, &grid(&[0.0, 1.0, 2.0]), &grid(&[0.0, 1.0, 2.0]))
            .unwrap();
        let rep = check_tp(&g, MinorOrder::UpTo(3), false, &TnOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Tp);
    }

    #[test]
    fn heaviside_not_tp_by_zero() {
        let g = sample(&KernelSpec::Heaviside, &grid(&[0.0, 1.0]), &grid(&[0.0, 1.0])).unwrap();
        let rep = check_tp(&g, MinorOrder::UpTo(2), false, &TnOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::NotTp);
        let w = rep.witness.unwrap();
        assert_eq!(w.sign, SignClass::Zero);
        assert_eq!((w.rows.as_slice(), w.cols.as_slice()), (&[0usize][..], &[1usize][..]));
    }

    #[test]
    fn fekete_requires_full_order() {
        let g = sample(&KernelSpec::Gauss, &grid(&[0.0, 1.0, 2.0]), &grid(&[0.0, 1.0, 2.0]))
            .unwrap();
        assert!(matches!(
            check_tp(&g, MinorOrder::UpTo(2), true, &TnOptions::default()),
            Err(Error::Mode(_))
        ));
        let rep = check_tp(&g, MinorOrder::Full, true, &TnOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Tp);
    }

    #[test]
    fn principal_scan_examples() {
        // identity has no negative principal minor
        let id = DenseMatrix::from_fn(3, 3, |i, j| mp(if i == j { 1.0 } else { 0.0 }));
        let e = DenseMatrix::from_fn(3, 3, |_, _| mp(0.0));
        let g = GridSample::from_matrix(
            grid(&[0.0, 1.0, 2.0]),
            grid(&[0.0, 1.0, 2.0]),
            id,
            e,
            KernelSpec::Heaviside,
        )
        .unwrap();
        assert!(principal_minor_scan(&g, MinorOrder::UpTo(3), &TnOptions::default())
            .unwrap()
            .is_none());
        // on a symmetric grid the lambda_2 sample is triangular with a
        // positive diagonal, so no principal minor goes negative even
        // though the kernel is not TN
        let g = sample(&KernelSpec::LambdaD { d: 2.0 }, &grid(&[1.0, 2.0]), &grid(&[1.0, 2.0]))
            .unwrap();
        assert!(principal_minor_scan(&g, MinorOrder::UpTo(2), &TnOptions::default())
            .unwrap()
            .is_none());
        // with offset grids the violating index set is principal (rows = cols)
        let g = sample(&KernelSpec::LambdaD { d: 2.0 }, &grid(&[1.0, 2.0]), &grid(&[0.0, 1.0]))
            .unwrap();
        let w = principal_minor_scan(&g, MinorOrder::UpTo(2), &TnOptions::default())
            .unwrap()
            .unwrap();
        assert_eq!(w.rows, w.cols);
        // mismatched grid lengths
        let g = sample(&KernelSpec::Heaviside, &grid(&[0.0, 1.0, 2.0]), &grid(&[0.0, 1.0]))
            .unwrap();
        assert!(principal_minor_scan(&g, MinorOrder::UpTo(2), &TnOptions::default()).is_err());
    }

    #[test]
    fn budget_enforced() {
        let xs: Vec<Mp> = (0..12).map(|i| mp(i as f64)).collect();
        let g = sample(&KernelSpec::Gauss, &xs, &xs).unwrap();
        let r = check_tn(&g, MinorOrder::Full, &TnOptions { budget: 1000 });
        assert!(matches!(r, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn tn_monotone_in_order() {
        let g = sample(
            &KernelSpec::Hw { alpha: vec![1.0, 0.5] },
            &grid(&[0.0, 0.7, 1.9, 3.1]),
            &grid(&[0.0, 0.7, 1.9, 3.1]),
        )
        .unwrap();
        let o = TnOptions::default();
        assert_eq!(check_tn(&g, MinorOrder::UpTo(4), &o).unwrap().verdict, Verdict::Tn);
        for p in 1..=3 {
            assert_eq!(check_tn(&g, MinorOrder::UpTo(p), &o).unwrap().verdict, Verdict::Tn);
        }
    }

    #[test]
    fn report_json_shape() {
        let g = sample(&KernelSpec::LambdaD { d: 2.0 }, &grid(&[1.0, 2.0]), &grid(&[0.0, 1.0]))
            .unwrap();
        let rep = check_tn(&g, MinorOrder::UpTo(2), &TnOptions::default()).unwrap();
        let j = rep.to_json();
        assert_eq!(j["verdict"], "NotTN_p");
        assert_eq!(j["witness"]["rows"][0], 1);
        let det_str = j["witness"]["det_value"].as_str().unwrap();
        assert!(det_str.starts_with("-1.3533528323661269189399949497"), "{det_str}");
    }
}
