//! Power-threshold sweeps: Karlin's two-exponential kernel under
//! additive shifts, the Wallis kernel under multiplicative scales, the
//! gamma-density Laplace-power family, the discontinuous family
//! boundary, and the two-sided power-failure test.

use super::{
    arithmetic_grid, Classification, LabOptions, PowerSweepConfig, PowerSweepReport, ShiftSearch,
    SweepRow, WitnessRecord, DEFAULT_GRID_STEPS,
};
use crate::density::KernelSpec;
use crate::error::{Error, Result};
use crate::mp::{mp_at, Mp};
use crate::scalar::{RealScalar, SignClass};
use crate::tpcheck::{
    binomial, check_tn, check_tp, principal_minimum, sample, GridSample, MinorOrder, TnOptions,
    TnReport, Verdict,
};

fn principal_count(p: usize) -> u64 {
    (1..=p).map(|r| binomial(p, r)).sum::<u128>() as u64
}

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() < 1e-9
}

/// Membership in `Z_{>=0} union (p-2, inf)`: the powers that keep the
/// two-atom kernels TN of order `p`.
fn karlin_predicted_tn(alpha: f64, p: usize) -> bool {
    near_integer(alpha) || alpha > p as f64 - 2.0 + 1e-9
}

/// Membership in `Z_{>0} union (p-1, inf)`.
fn gamma_predicted_tn(alpha: f64, p: usize) -> bool {
    (near_integer(alpha) && alpha.round() >= 1.0) || alpha > p as f64 - 1.0 + 1e-9
}

fn lift_grid(g: &[f64], bits: u32) -> Vec<Mp> {
    g.iter().map(|&x| mp_at(x, bits)).collect()
}

fn tn_opts(opts: &LabOptions) -> TnOptions {
    TnOptions { budget: opts.minor_budget }
}

struct FoundWitness {
    record: WitnessRecord,
    shift_or_scale: f64,
}

/// Karlin sweep: for each exponent, search additive shifts for either a
/// negative principal minor or a fully TP matrix of
/// `Omega_(q,r)(x_j - y_k - a)^alpha`.
pub fn karlin_sweep(cfg: &PowerSweepConfig, opts: &LabOptions) -> Result<PowerSweepReport> {
    let (q, r) = match &cfg.base {
        KernelSpec::OmegaQr { q, r } => (*q, *r),
        other => {
            return Err(Error::Domain(format!(
                "karlin sweep needs an OmegaQR base, got {other:?}"
            )))
        }
    };
    let p = cfg.order;
    if cfg.xs.len() != p || cfg.ys.len() != p {
        return Err(Error::Grid(format!("karlin sweep needs |xs| = |ys| = {p}")));
    }
    let shift = cfg
        .shift_search
        .clone()
        .ok_or_else(|| Error::Domain("karlin sweep needs a shift search".into()))?;
    let base = KernelSpec::OmegaQr { q, r };
    let mut rows = Vec::with_capacity(cfg.exponents.len());
    for &alpha in &cfg.exponents {
        rows.push(shifted_power_row(
            &base,
            alpha,
            p,
            &cfg.xs,
            &cfg.ys,
            &shift,
            opts,
        )?);
    }
    Ok(PowerSweepReport { kind: format!("karlin(q={q},r={r})"), order: p, rows })
}

/// One exponent of the shifted-power experiment.
fn shifted_power_row(
    base: &KernelSpec,
    alpha: f64,
    p: usize,
    xs: &[f64],
    ys: &[f64],
    shift: &ShiftSearch,
    opts: &LabOptions,
) -> Result<SweepRow> {
    let kernel = powered(base, alpha);
    let mut minors = 0u64;
    let mut found: Option<FoundWitness> = None;

    // candidate grids: the configured one first, then the default ladder
    let mut grids: Vec<(Vec<f64>, Vec<f64>, ShiftSearch)> =
        vec![(xs.to_vec(), ys.to_vec(), shift.clone())];
    for &step in &DEFAULT_GRID_STEPS {
        let g = arithmetic_grid(p, step, 0.0);
        if g != xs {
            let s = ShiftSearch::spanning(&g, &g);
            grids.push((g.clone(), g, s));
        }
    }

    'searching: for (gxs, gys, ss) in &grids {
        let mut best: Option<(f64, f64)> = None; // (minor value, shift)
        for i in 0..ss.coarse {
            let a = ss.lo + (ss.hi - ss.lo) * i as f64 / (ss.coarse - 1) as f64;
            let (value, cert) = principal_probe(&kernel, gxs, gys, a, p, opts, &mut minors)?;
            if let Some(c) = cert {
                found = Some(c);
                break 'searching;
            }
            if best.map_or(true, |(v, _)| value < v) {
                best = Some((value, a));
            }
        }
        // golden-section refinement around the coarse minimum
        if let Some((_, a0)) = best {
            let w = (ss.hi - ss.lo) / (ss.coarse - 1) as f64;
            let (mut lo, mut hi) = (a0 - w, a0 + w);
            let phi = 0.618_033_988_749_894_9;
            let mut x1 = hi - phi * (hi - lo);
            let mut x2 = lo + phi * (hi - lo);
            let (mut f1, c1) = principal_probe(&kernel, gxs, gys, x1, p, opts, &mut minors)?;
            if let Some(c) = c1 {
                found = Some(c);
                break 'searching;
            }
            let (mut f2, c2) = principal_probe(&kernel, gxs, gys, x2, p, opts, &mut minors)?;
            if let Some(c) = c2 {
                found = Some(c);
                break 'searching;
            }
            for _ in 0..ss.refine_depth {
                if f1 < f2 {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - phi * (hi - lo);
                    let (v, c) = principal_probe(&kernel, gxs, gys, x1, p, opts, &mut minors)?;
                    if let Some(c) = c {
                        found = Some(c);
                        break 'searching;
                    }
                    f1 = v;
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + phi * (hi - lo);
                    let (v, c) = principal_probe(&kernel, gxs, gys, x2, p, opts, &mut minors)?;
                    if let Some(c) = c {
                        found = Some(c);
                        break 'searching;
                    }
                    f2 = v;
                }
            }
        }
    }

    if let Some(f) = found {
        return Ok(SweepRow {
            exponent: alpha,
            classification: Classification::NegativePrincipalMinor,
            witness: Some(f.record),
            shift_or_scale: Some(f.shift_or_scale),
            minors_evaluated: minors,
        });
    }

    // TP hunt, only meaningful above the threshold
    if alpha > p as f64 - 2.0 + 1e-9 {
        for (gxs, gys, _) in &grids {
            let base_shift = gxs[0] - gys[gys.len() - 1];
            for delta in [0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0] {
                let a = base_shift - delta;
                let g = sample_shifted(&kernel, gxs, gys, a, opts)?;
                let rep = check_tp(&g, MinorOrder::Full, true, &tn_opts(opts))?;
                minors += rep.minors_evaluated;
                if rep.verdict == Verdict::Tp {
                    return Ok(SweepRow {
                        exponent: alpha,
                        classification: Classification::TpWitness,
                        witness: None,
                        shift_or_scale: Some(a),
                        minors_evaluated: minors,
                    });
                }
            }
        }
    }

    let classification = if karlin_predicted_tn(alpha, p) {
        Classification::Tn
    } else {
        Classification::Inconclusive
    };
    Ok(SweepRow {
        exponent: alpha,
        classification,
        witness: None,
        shift_or_scale: None,
        minors_evaluated: minors,
    })
}

fn powered(base: &KernelSpec, alpha: f64) -> KernelSpec {
    KernelSpec::PowerOf { inner: Box::new(base.clone()), exponent: alpha }
}

/// Sample `kernel(x - y - a)` by shifting the column grid.
fn sample_shifted(
    kernel: &KernelSpec,
    xs: &[f64],
    ys: &[f64],
    a: f64,
    opts: &LabOptions,
) -> Result<GridSample<Mp>> {
    let xs = lift_grid(xs, opts.precision_bits);
    let ys: Vec<Mp> = ys.iter().map(|&y| mp_at(y + a, opts.precision_bits)).collect();
    sample(kernel, &xs, &ys)
}

/// Minimal principal minor at one shift; returns the witness if it is
/// decisively negative.
fn principal_probe(
    kernel: &KernelSpec,
    xs: &[f64],
    ys: &[f64],
    a: f64,
    p: usize,
    opts: &LabOptions,
    minors: &mut u64,
) -> Result<(f64, Option<FoundWitness>)> {
    let g = sample_shifted(kernel, xs, ys, a, opts)?;
    let cert = principal_minimum(&g, MinorOrder::UpTo(p), &tn_opts(opts))?;
    *minors += principal_count(p);
    let value = cert.det_value.approx_f64();
    if cert.sign == SignClass::Negative {
        let record = WitnessRecord::from_certificate(&cert, &g.xs, &g.ys);
        Ok((value, Some(FoundWitness { record, shift_or_scale: a })))
    } else {
        Ok((value, None))
    }
}

/// Wallis sweep: multiplicative scales descending from the cap at which
/// every sampled difference still lies inside the support.
pub fn wallis_sweep(cfg: &PowerSweepConfig, opts: &LabOptions) -> Result<PowerSweepReport> {
    if cfg.base != KernelSpec::Wallis {
        return Err(Error::Domain("wallis sweep needs the Wallis base".into()));
    }
    let p = cfg.order;
    if cfg.xs.len() != p || cfg.ys.len() != p {
        return Err(Error::Grid(format!("wallis sweep needs |xs| = |ys| = {p}")));
    }
    let max_diff = cfg.xs[p - 1] - cfg.ys[0];
    let m_cap = 0.999 * std::f64::consts::FRAC_PI_2 / max_diff.abs().max(1e-9);
    let scales: Vec<f64> = (0..40).map(|k| m_cap * 0.85f64.powi(k)).collect();
    let scaled = |v: &[f64], m: f64, bits: u32| -> Vec<Mp> {
        v.iter().map(|&x| mp_at(m * x, bits)).collect()
    };
    let mut rows = Vec::with_capacity(cfg.exponents.len());
    for &alpha in &cfg.exponents {
        let kernel = powered(&KernelSpec::Wallis, alpha);
        let mut minors = 0u64;
        let mut found: Option<FoundWitness> = None;
        for &m in &scales {
            let g = sample(
                &kernel,
                &scaled(&cfg.xs, m, opts.precision_bits),
                &scaled(&cfg.ys, m, opts.precision_bits),
            )?;
            let cert = principal_minimum(&g, MinorOrder::UpTo(p), &tn_opts(opts))?;
            minors += principal_count(p);
            if cert.sign == SignClass::Negative {
                found = Some(FoundWitness {
                    record: WitnessRecord::from_certificate(&cert, &g.xs, &g.ys),
                    shift_or_scale: m,
                });
                break;
            }
        }
        if let Some(f) = found {
            rows.push(SweepRow {
                exponent: alpha,
                classification: Classification::NegativePrincipalMinor,
                witness: Some(f.record),
                shift_or_scale: Some(f.shift_or_scale),
                minors_evaluated: minors,
            });
            continue;
        }
        let mut tp_scale = None;
        if alpha > p as f64 - 2.0 + 1e-9 {
            for &m in &scales {
                let g = sample(
                    &kernel,
                    &scaled(&cfg.xs, m, opts.precision_bits),
                    &scaled(&cfg.ys, m, opts.precision_bits),
                )?;
                let rep = check_tp(&g, MinorOrder::Full, true, &tn_opts(opts))?;
                minors += rep.minors_evaluated;
                if rep.verdict == Verdict::Tp {
                    tp_scale = Some(m);
                    break;
                }
            }
        }
        let (classification, shift_or_scale) = match tp_scale {
            Some(m) => (Classification::TpWitness, Some(m)),
            None if karlin_predicted_tn(alpha, p) => (Classification::Tn, None),
            None => (Classification::Inconclusive, None),
        };
        rows.push(SweepRow {
            exponent: alpha,
            classification,
            witness: None,
            shift_or_scale,
            minors_evaluated: minors,
        });
    }
    Ok(PowerSweepReport { kind: "wallis".into(), order: p, rows })
}

/// Grid family for the gamma sweep: the diagonal offset keeps every
/// sampled difference away from the unbounded point at zero.
fn gamma_grids(p: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut out = Vec::new();
    for &step in &[0.05, 0.1, 0.25, 0.5, 1.0] {
        for &c in &[0.17, 0.33, 0.71, 1.37, 2.7] {
            let xs: Vec<f64> = (0..p).map(|i| c + step * i as f64).collect();
            let ys: Vec<f64> = (0..p).map(|j| step * j as f64).collect();
            out.push((xs, ys));
        }
    }
    out
}

/// Gamma-density sweep: TN status of `Gamma(alpha)` samples per exponent.
pub fn gamma_sweep(
    exponents: &[f64],
    p: usize,
    extra_grids: &[(Vec<f64>, Vec<f64>)],
    opts: &LabOptions,
) -> Result<PowerSweepReport> {
    let mut rows = Vec::with_capacity(exponents.len());
    let mut grids = extra_grids.to_vec();
    grids.extend(gamma_grids(p));
    for &alpha in exponents {
        let kernel = KernelSpec::Gamma { shape: alpha };
        let mut minors = 0u64;
        let mut found: Option<FoundWitness> = None;
        for (gxs, gys) in &grids {
            let xs = lift_grid(gxs, opts.precision_bits);
            let ys = lift_grid(gys, opts.precision_bits);
            let g = match sample(&kernel, &xs, &ys) {
                Ok(g) => g,
                Err(Error::Unbounded { .. }) => continue,
                Err(e) => return Err(e),
            };
            let rep = check_tn(&g, MinorOrder::UpTo(p), &tn_opts(opts))?;
            minors += rep.minors_evaluated;
            if rep.verdict == Verdict::NotTn {
                let w = rep.witness.expect("NotTn carries a witness");
                found = Some(FoundWitness {
                    record: WitnessRecord::from_certificate(&w, &g.xs, &g.ys),
                    shift_or_scale: 0.0,
                });
                break;
            }
        }
        let row = match found {
            Some(f) => SweepRow {
                exponent: alpha,
                classification: Classification::NegativeMinor,
                witness: Some(f.record),
                shift_or_scale: None,
                minors_evaluated: minors,
            },
            None => SweepRow {
                exponent: alpha,
                classification: if gamma_predicted_tn(alpha, p) {
                    Classification::Tn
                } else {
                    Classification::Inconclusive
                },
                witness: None,
                shift_or_scale: None,
                minors_evaluated: minors,
            },
        };
        rows.push(row);
    }
    Ok(PowerSweepReport { kind: "gamma".into(), order: p, rows })
}

/// TN boundary of the discontinuous family: TN on grids straddling the
/// jump for `d` in `[0, 1]`, the analytic 2x2 witness outside.
pub fn lambda_d_boundary(ds: &[f64], p: usize, opts: &LabOptions) -> Result<PowerSweepReport> {
    let mut rows = Vec::with_capacity(ds.len());
    for &d in ds {
        let kernel = KernelSpec::LambdaD { d };
        let mut minors = 0u64;
        let mut found: Option<WitnessRecord> = None;
        if d > 1.0 || d < 0.0 {
            // canonical witness grid: y_2 = x_1 puts the jump value in
            // the anti-diagonal, det = e^-(x2-y1) (1 - d)
            let xs = lift_grid(&[1.0, 2.0], opts.precision_bits);
            let ys = lift_grid(&[0.0, 1.0], opts.precision_bits);
            let g = sample(&kernel, &xs, &ys)?;
            let rep = check_tn(&g, MinorOrder::UpTo(p.min(2)), &tn_opts(opts))?;
            minors += rep.minors_evaluated;
            if rep.verdict == Verdict::NotTn {
                found = Some(WitnessRecord::from_certificate(
                    &rep.witness.expect("witness"),
                    &g.xs,
                    &g.ys,
                ));
            }
        }
        if found.is_none() {
            // straddling grids
            let mut all_tn = true;
            for &step in &[0.25, 0.5, 1.0] {
                let half = (p as f64 - 1.0) / 2.0;
                let grid: Vec<f64> = (0..p).map(|i| step * (i as f64 - half)).collect();
                let xs = lift_grid(&grid, opts.precision_bits);
                let g = sample(&kernel, &xs, &xs)?;
                let rep = check_tn(&g, MinorOrder::UpTo(p), &tn_opts(opts))?;
                minors += rep.minors_evaluated;
                if rep.verdict == Verdict::NotTn {
                    found = Some(WitnessRecord::from_certificate(
                        &rep.witness.expect("witness"),
                        &g.xs,
                        &g.ys,
                    ));
                    all_tn = false;
                    break;
                }
            }
            let _ = all_tn;
        }
        let classification = match &found {
            Some(_) => Classification::NegativeMinor,
            None if (0.0..=1.0).contains(&d) => Classification::Tn,
            None => Classification::Inconclusive,
        };
        rows.push(SweepRow {
            exponent: d,
            classification,
            witness: found,
            shift_or_scale: None,
            minors_evaluated: minors,
        });
    }
    Ok(PowerSweepReport { kind: "lambda-d".into(), order: p, rows })
}

/// Outcome of the two-sided power-failure experiment.
#[derive(Debug, Clone)]
pub struct MbetaPowerReport {
    pub beta: f64,
    pub power: usize,
    pub order: usize,
    /// TN check of `M_beta` itself on the decisive grid.
    pub base_report: TnReport<Mp>,
    /// Refutation of `M_beta^k`, when found.
    pub power_report: Option<TnReport<Mp>>,
    pub grid: Option<(Vec<f64>, Vec<f64>)>,
    /// False when the search exhausted its ladder without a witness.
    pub conclusive: bool,
}

/// Search symmetric-ish grids for a negative minor of the `M_beta^k`
/// sample while verifying `M_beta` itself stays TN on the same grid.
pub fn mbeta_power_test(
    beta: f64,
    k: usize,
    p: usize,
    opts: &LabOptions,
) -> Result<MbetaPowerReport> {
    if k < 1 {
        return Err(Error::Domain("power must be at least 1".into()));
    }
    let base = KernelSpec::MBeta { beta };
    let to = tn_opts(opts);
    let ladder: Vec<(f64, f64)> = {
        let mut v = Vec::new();
        for &step in &[0.05, 0.02, 0.035, 0.08, 0.12, 0.2, 0.3, 0.5, 0.8] {
            for &off in &[0.5, 0.0] {
                v.push((step, off));
            }
        }
        v
    };
    let n = 5usize;
    if k == 1 {
        let (step, off) = ladder[0];
        let xs: Vec<f64> = (0..n).map(|i| step * i as f64).collect();
        let ys: Vec<f64> = (0..n).map(|j| step * (j as f64 + off)).collect();
        let g = sample(&base, &lift_grid(&xs, opts.precision_bits), &lift_grid(&ys, opts.precision_bits))?;
        let rep = check_tn(&g, MinorOrder::UpTo(p), &to)?;
        return Ok(MbetaPowerReport {
            beta,
            power: k,
            order: p,
            base_report: rep,
            power_report: None,
            grid: Some((xs, ys)),
            conclusive: true,
        });
    }
    let powered = KernelSpec::PowerOf { inner: Box::new(base.clone()), exponent: k as f64 };
    let mut last_base: Option<(TnReport<Mp>, Vec<f64>, Vec<f64>)> = None;
    for (step, off) in ladder {
        let xs: Vec<f64> = (0..n).map(|i| step * i as f64).collect();
        let ys: Vec<f64> = (0..n).map(|j| step * (j as f64 + off)).collect();
        let lx = lift_grid(&xs, opts.precision_bits);
        let ly = lift_grid(&ys, opts.precision_bits);
        let gp = sample(&powered, &lx, &ly)?;
        let rep = check_tn(&gp, MinorOrder::UpTo(p), &to)?;
        let gb = sample(&base, &lx, &ly)?;
        let base_rep = check_tn(&gb, MinorOrder::UpTo(p), &to)?;
        if rep.verdict == Verdict::NotTn {
            return Ok(MbetaPowerReport {
                beta,
                power: k,
                order: p,
                base_report: base_rep,
                power_report: Some(rep),
                grid: Some((xs, ys)),
                conclusive: true,
            });
        }
        last_base = Some((base_rep, xs, ys));
    }
    let (base_report, xs, ys) = last_base.expect("ladder non-empty");
    Ok(MbetaPowerReport {
        beta,
        power: k,
        order: p,
        base_report,
        power_report: None,
        grid: Some((xs, ys)),
        conclusive: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn karlin_cfg(q: f64, r: f64, p: usize, exps: &[f64]) -> PowerSweepConfig {
        let grid: Vec<f64> = (1..=p).map(|i| i as f64).collect();
        PowerSweepConfig {
            base: KernelSpec::OmegaQr { q, r },
            exponents: exps.to_vec(),
            order: p,
            xs: grid.clone(),
            ys: grid.clone(),
            shift_search: Some(ShiftSearch::spanning(&grid, &grid)),
        }
    }

    #[test]
    fn karlin_p3_classifications() {
        let rep = karlin_sweep(&karlin_cfg(1.0, 1.0, 3, &[0.5, 1.0, 1.5, 2.0]), &LabOptions::default())
            .unwrap();
        let cls: Vec<Classification> = rep.rows.iter().map(|r| r.classification).collect();
        assert_eq!(cls[0], Classification::NegativePrincipalMinor, "alpha=0.5");
        assert!(cls[1].is_tn_side(), "alpha=1");
        assert!(cls[2].is_tn_side(), "alpha=1.5 (above threshold p-2=1)");
        assert!(cls[3].is_tn_side(), "alpha=2");
        // 1.5 > p-2 should in fact come back with a TP witness
        assert_eq!(cls[2], Classification::TpWitness);
    }

    #[test]
    fn wallis_p3_examples() {
        let grid: Vec<f64> = (1..=3).map(|i| i as f64).collect();
        let cfg = PowerSweepConfig {
            base: KernelSpec::Wallis,
            exponents: vec![1.0, 1.2, 0.5],
            order: 3,
            xs: grid.clone(),
            ys: grid,
            shift_search: None,
        };
        let rep = wallis_sweep(&cfg, &LabOptions::default()).unwrap();
        assert_eq!(rep.rows[0].classification, Classification::Tn);
        assert_eq!(rep.rows[1].classification, Classification::TpWitness);
        assert_eq!(rep.rows[2].classification, Classification::NegativePrincipalMinor);
    }

    #[test]
    fn gamma_p3_examples() {
        let rep = gamma_sweep(&[2.0, 1.5, 2.5], 3, &[], &LabOptions::default()).unwrap();
        assert_eq!(rep.rows[0].classification, Classification::Tn);
        assert_eq!(rep.rows[1].classification, Classification::NegativeMinor);
        assert_eq!(rep.rows[2].classification, Classification::Tn);
    }

    #[test]
    fn lambda_d_rows() {
        let rep = lambda_d_boundary(&[0.5, 2.0, -0.1], 3, &LabOptions::default()).unwrap();
        assert_eq!(rep.rows[0].classification, Classification::Tn);
        assert_eq!(rep.rows[1].classification, Classification::NegativeMinor);
        let w = rep.rows[1].witness.as_ref().unwrap();
        // analytic 2x2 witness: det = e^-(x2-y1) (1 - d) = -e^-2
        assert!(w.det_value.starts_with("-1.3533528"), "{}", w.det_value);
        assert_eq!(rep.rows[2].classification, Classification::NegativeMinor);
    }

    #[test]
    fn mbeta_power_failure() {
        let opts = LabOptions::default();
        let rep = mbeta_power_test(1.0, 2, 5, &opts).unwrap();
        assert!(rep.conclusive);
        assert_eq!(rep.base_report.verdict, Verdict::Tn);
        assert_eq!(rep.power_report.as_ref().unwrap().verdict, Verdict::NotTn);
        let rep1 = mbeta_power_test(1.0, 1, 4, &opts).unwrap();
        assert!(rep1.conclusive);
        assert_eq!(rep1.base_report.verdict, Verdict::Tn);
        assert!(rep1.power_report.is_none());
    }

    #[test]
    fn csv_columns() {
        let rep = lambda_d_boundary(&[2.0], 2, &LabOptions::default()).unwrap();
        let csv = rep.to_csv();
        assert!(csv.starts_with(
            "exponent,classification,shift_or_scale,witness_rows,witness_cols,det_value\n"
        ));
        assert!(csv.contains("NegativeMinor"));
    }
}
