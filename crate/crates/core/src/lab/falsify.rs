//! Empirical preserver falsification: run a battery of TN kernel
//! samples through a composition map and look for a broken minor.
//!
//! A counterexample is only counted when the base sample is itself
//! verified TN at the tested order, so every hit certifies that the map
//! fails to preserve TN_p on matrices.

use super::{LabOptions, WitnessRecord};
use crate::density::KernelSpec;
use crate::error::Result;
use crate::mp::{mp_at, Mp};
use crate::scalar::RealScalar;
use num_traits::Zero;
use crate::tpcheck::{check_tn, sample, GridSample, MinorOrder, TnOptions, TnReport, Verdict};
use num_traits::Signed;

/// The parametric composition maps under test.
#[derive(Debug, Clone, PartialEq)]
pub enum PreserverFn {
    /// `x -> c x^alpha`
    Power { c: f64, alpha: f64 },
    /// `x -> c`
    Constant { c: f64 },
    /// `x -> c 1_{x > 0}`
    IndicatorPositive { c: f64 },
    /// `x -> c0 + c1 x`
    Affine { c0: f64, c1: f64 },
}

impl PreserverFn {
    pub fn describe(&self) -> String {
        match self {
            PreserverFn::Power { c, alpha } => format!("{c} * x^{alpha}"),
            PreserverFn::Constant { c } => format!("{c}"),
            PreserverFn::IndicatorPositive { c } => format!("{c} * 1(x > 0)"),
            PreserverFn::Affine { c0, c1 } => format!("{c0} + {c1} x"),
        }
    }

    /// Apply to one entry with error propagation.
    fn apply(&self, v: &Mp, e: &Mp) -> (Mp, Mp) {
        let u = v.unit_roundoff();
        match self {
            PreserverFn::Power { c, alpha } => {
                if v.is_zero() && e.is_zero() {
                    return (v.of(0.0), v.of(0.0));
                }
                let cc = v.of(*c);
                let al = v.of(*alpha);
                let base = if v.is_negative() { v.of(0.0) } else { v.clone() };
                let val = cc.clone() * base.powf(&al);
                let hi = cc.clone() * (v.clone() + e.clone()).powf(&al);
                let lo_arg = {
                    let t = v.clone() - e.clone();
                    if t.is_negative() {
                        v.of(0.0)
                    } else {
                        t
                    }
                };
                let lo = cc * lo_arg.powf(&al);
                let spread = {
                    let up = (hi - val.clone()).abs();
                    let dn = (val.clone() - lo).abs();
                    if up > dn {
                        up
                    } else {
                        dn
                    }
                };
                let err = spread + val.abs() * u * v.of(4.0 + alpha.abs());
                (val, err)
            }
            PreserverFn::Constant { c } => (v.of(*c), v.of(0.0)),
            PreserverFn::IndicatorPositive { c } => {
                if v > e {
                    (v.of(*c), v.of(0.0))
                } else if v.abs() <= e.clone() && !(v.is_zero() && e.is_zero()) {
                    // cannot resolve the side of the jump
                    (v.of(0.0), v.of(c.abs()))
                } else {
                    (v.of(0.0), v.of(0.0))
                }
            }
            PreserverFn::Affine { c0, c1 } => {
                let val = v.of(*c0) + v.of(*c1) * v.clone();
                let err = v.of(c1.abs()) * e.clone() + val.abs() * u * v.of(2.0);
                (val, err)
            }
        }
    }
}

/// Kernel classes the battery can target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetClass {
    /// Samples of Polya frequency functions.
    PfGrid,
    /// Samples of totally non-negative functions.
    TnGrid,
    /// Samples of one-sided totally non-negative functions.
    OneSidedTnGrid,
}

struct BatteryItem {
    spec: KernelSpec,
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Polya frequency function?
    pf: bool,
    one_sided: bool,
}

/// Named kernels with grids whose samples are TN at every order up to 5.
/// Grids include the shifted and offset configurations known to expose
/// fractional-power and affine failures.
fn battery() -> Vec<BatteryItem> {
    let item = |spec: KernelSpec, xs: Vec<f64>, ys: Vec<f64>, pf: bool, one_sided: bool| {
        BatteryItem { spec, xs, ys, pf, one_sided }
    };
    vec![
        item(
            KernelSpec::Hw { alpha: vec![1.0, 1.0] },
            vec![0.0, 1.0, 2.0, 3.0],
            vec![0.0, 1.0, 2.0, 3.0],
            true,
            true,
        ),
        // zeros in the upper corner catch affine maps at order 2
        item(
            KernelSpec::Hw { alpha: vec![1.0, 1.0] },
            vec![-1.0, 1.0],
            vec![0.0, 2.0],
            true,
            true,
        ),
        item(
            KernelSpec::Hw { alpha: vec![1.0, 2.0] },
            vec![0.0, 0.5, 1.5, 3.0],
            vec![0.0, 0.5, 1.5, 3.0],
            true,
            true,
        ),
        item(
            KernelSpec::Hw { alpha: vec![1.0, 2.0, 5.0] },
            vec![0.1, 0.2, 0.3],
            vec![0.05, 0.15, 0.25],
            true,
            true,
        ),
        item(
            KernelSpec::OmegaQr { q: 1.0, r: 2.0 },
            vec![0.5, 1.0, 1.5, 2.0],
            vec![0.5, 1.0, 1.5, 2.0],
            true,
            true,
        ),
        // shifted two-atom grid: fractional powers break a principal minor here
        item(
            KernelSpec::OmegaQr { q: 1.0, r: 1.0 },
            vec![1.0, 2.0, 3.0],
            vec![-0.975, 0.025, 1.025],
            true,
            true,
        ),
        item(
            KernelSpec::Gamma { shape: 2.0 },
            vec![0.17, 0.22, 0.27, 0.32],
            vec![0.0, 0.05, 0.1, 0.15],
            true,
            true,
        ),
        item(
            KernelSpec::LambdaD { d: 0.5 },
            vec![-1.0, -0.5, 0.0, 0.5, 1.0],
            vec![-1.0, -0.5, 0.0, 0.5, 1.0],
            true,
            true,
        ),
        item(
            KernelSpec::LambdaD { d: 1.0 },
            vec![-1.0, 0.0, 1.0, 2.0],
            vec![-1.0, 0.0, 1.0, 2.0],
            true,
            true,
        ),
        item(
            KernelSpec::Heaviside,
            vec![0.0, 1.0, 2.0, 3.0],
            vec![0.0, 1.0, 2.0, 3.0],
            false,
            true,
        ),
        // the grid on which the square of the two-sided kernel fails at order 4
        item(
            KernelSpec::MBeta { beta: 1.0 },
            vec![0.0, 0.05, 0.1, 0.15, 0.2],
            vec![0.025, 0.075, 0.125, 0.175, 0.225],
            true,
            false,
        ),
        item(
            KernelSpec::Gauss,
            vec![0.0, 0.5, 1.0],
            vec![0.0, 0.5, 1.0],
            true,
            false,
        ),
    ]
}

/// A certified falsification: the base sample is TN, its image is not.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub base: KernelSpec,
    pub grid: (Vec<f64>, Vec<f64>),
    pub base_report: TnReport<Mp>,
    pub transformed_report: TnReport<Mp>,
    pub witness: WitnessRecord,
}

/// Outcome of a falsification run.
#[derive(Debug, Clone)]
pub struct FalsifyOutcome {
    pub counterexample: Option<Counterexample>,
    pub items_checked: usize,
    pub minors_evaluated: u64,
}

/// Run the battery for the given class at orders up to `max_order`.
/// Returns the first counterexample in battery order, or none if the
/// map survives (consistent with it lying in the classified preserver
/// set at that order).
pub fn falsify_preserver(
    f: &PreserverFn,
    class: TargetClass,
    max_order: usize,
    opts: &LabOptions,
) -> Result<FalsifyOutcome> {
    let to = TnOptions { budget: opts.minor_budget };
    let mut items_checked = 0usize;
    let mut minors = 0u64;
    for item in battery() {
        let keep = match class {
            TargetClass::PfGrid => item.pf,
            TargetClass::TnGrid => true,
            TargetClass::OneSidedTnGrid => item.one_sided,
        };
        if !keep {
            continue;
        }
        items_checked += 1;
        let xs: Vec<Mp> = item.xs.iter().map(|&x| mp_at(x, opts.precision_bits)).collect();
        let ys: Vec<Mp> = item.ys.iter().map(|&y| mp_at(y, opts.precision_bits)).collect();
        let g = sample(&item.spec, &xs, &ys)?;
        let order = MinorOrder::UpTo(max_order);
        let base_report = check_tn(&g, order, &to)?;
        minors += base_report.minors_evaluated;
        if base_report.verdict != Verdict::Tn {
            // not a valid TN base at this order; skip rather than count
            continue;
        }
        let transformed: GridSample<Mp> = g.map_entries(item.spec.clone(), |v, e| f.apply(v, e));
        let rep = check_tn(&transformed, order, &to)?;
        minors += rep.minors_evaluated;
        if rep.verdict == Verdict::NotTn {
            let w = WitnessRecord::from_certificate(
                rep.witness.as_ref().expect("NotTn carries a witness"),
                &transformed.xs,
                &transformed.ys,
            );
            return Ok(FalsifyOutcome {
                counterexample: Some(Counterexample {
                    base: item.spec,
                    grid: (item.xs, item.ys),
                    base_report,
                    transformed_report: rep,
                    witness: w,
                }),
                items_checked,
                minors_evaluated: minors,
            });
        }
    }
    Ok(FalsifyOutcome { counterexample: None, items_checked, minors_evaluated: minors })
}
