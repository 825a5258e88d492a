//! Experiment drivers: power-threshold sweeps, the discontinuous-family
//! boundary, two-sided power failure, polynomial rigidity, preserver
//! falsification batteries, and parameter recovery.
//!
//! Witness searches are deterministic: grid ladders are fixed, and the
//! randomized descent used by the rigidity search runs off a seeded
//! splitmix64 stream, so every reported witness is reproducible from
//! its recorded grid and shift/scale.

pub mod falsify;
pub mod recovery;
pub mod rigidity;
pub mod sweeps;

use crate::scalar::{RealScalar, SignClass};
use crate::tpcheck::MinorCertificate;
use serde_json::json;

/// Per-exponent outcome of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Some searched shift/scale produced a fully TP matrix.
    TpWitness,
    /// No violation found and none predicted.
    Tn,
    /// A negative minor was found.
    NegativeMinor,
    /// A negative principal minor was found.
    NegativePrincipalMinor,
    /// A violation is predicted but was not found within budget.
    Inconclusive,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::TpWitness => "TP_witness",
            Classification::Tn => "TN",
            Classification::NegativeMinor => "NegativeMinor",
            Classification::NegativePrincipalMinor => "NegativePrincipalMinor",
            Classification::Inconclusive => "Inconclusive",
        }
    }

    /// True when the row is consistent with the kernel being TN at the
    /// tested order (a TP witness is in particular not a violation).
    pub fn is_tn_side(&self) -> bool {
        matches!(self, Classification::Tn | Classification::TpWitness)
    }
}

/// Self-contained snapshot of a witness minor: enough to rebuild the
/// matrix and recheck the certificate.
#[derive(Debug, Clone)]
pub struct WitnessRecord {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub det_value: String,
    pub sign: SignClass,
    pub principal: bool,
    pub grid_xs: Vec<f64>,
    pub grid_ys: Vec<f64>,
}

impl WitnessRecord {
    pub fn from_certificate<R: RealScalar>(
        cert: &MinorCertificate<R>,
        xs: &[R],
        ys: &[R],
    ) -> Self {
        WitnessRecord {
            rows: cert.rows.clone(),
            cols: cert.cols.clone(),
            det_value: cert.det_value.to_decimal_string(30),
            sign: cert.sign,
            principal: cert.principal,
            grid_xs: xs.iter().map(|v| v.approx_f64()).collect(),
            grid_ys: ys.iter().map(|v| v.approx_f64()).collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "rows": self.rows.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "cols": self.cols.iter().map(|j| j + 1).collect::<Vec<_>>(),
            "det_value": self.det_value,
            "sign": format!("{:?}", self.sign),
            "principal": self.principal,
            "grid_xs": self.grid_xs,
            "grid_ys": self.grid_ys,
        })
    }
}

/// One row of a [`PowerSweepReport`].
#[derive(Debug, Clone)]
pub struct SweepRow {
    /// Exponent (or, for the discontinuous-family boundary, the value d).
    pub exponent: f64,
    pub classification: Classification,
    pub witness: Option<WitnessRecord>,
    pub shift_or_scale: Option<f64>,
    pub minors_evaluated: u64,
}

/// Report of a sweep over exponents.
#[derive(Debug, Clone)]
pub struct PowerSweepReport {
    pub kind: String,
    pub order: usize,
    pub rows: Vec<SweepRow>,
}

impl PowerSweepReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "schema": 1,
            "kind": self.kind,
            "order": self.order,
            "rows": self.rows.iter().map(|r| json!({
                "exponent": r.exponent,
                "classification": r.classification.as_str(),
                "shift_or_scale": r.shift_or_scale,
                "witness": r.witness.as_ref().map(|w| w.to_json()),
                "minors_evaluated": r.minors_evaluated,
            })).collect::<Vec<_>>(),
        })
    }

    /// CSV with the fixed column order
    /// `exponent,classification,shift_or_scale,witness_rows,witness_cols,det_value`.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("exponent,classification,shift_or_scale,witness_rows,witness_cols,det_value\n");
        for r in &self.rows {
            let (wr, wc, dv) = match &r.witness {
                Some(w) => (
                    join_indices(&w.rows),
                    join_indices(&w.cols),
                    w.det_value.clone(),
                ),
                None => (String::new(), String::new(), String::new()),
            };
            let shift = r
                .shift_or_scale
                .map(|s| format!("{s}"))
                .unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.exponent,
                r.classification.as_str(),
                shift,
                wr,
                wc,
                dv
            ));
        }
        out
    }
}

fn join_indices(v: &[usize]) -> String {
    v.iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(";")
}

/// Bounds and resolution of an additive shift search.
#[derive(Debug, Clone)]
pub struct ShiftSearch {
    pub lo: f64,
    pub hi: f64,
    pub coarse: usize,
    pub refine_depth: usize,
}

impl ShiftSearch {
    /// The spec'd default: 200 coarse shifts over
    /// `[-(max x - min y), +(max x - min y)]`, 40 refinement steps.
    pub fn spanning(xs: &[f64], ys: &[f64]) -> Self {
        let span = xs.iter().cloned().fold(f64::MIN, f64::max)
            - ys.iter().cloned().fold(f64::MAX, f64::min);
        ShiftSearch { lo: -span, hi: span, coarse: 200, refine_depth: 40 }
    }
}

/// Configuration shared by the Karlin and Wallis sweeps.
#[derive(Debug, Clone)]
pub struct PowerSweepConfig {
    pub base: crate::density::KernelSpec,
    pub exponents: Vec<f64>,
    pub order: usize,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub shift_search: Option<ShiftSearch>,
}

/// Runtime knobs common to lab drivers.
#[derive(Debug, Clone)]
pub struct LabOptions {
    pub precision_bits: u32,
    pub minor_budget: u64,
    pub seed: u64,
}

impl Default for LabOptions {
    fn default() -> Self {
        LabOptions {
            precision_bits: crate::mp::DEFAULT_PRECISION,
            minor_budget: 10_000_000,
            seed: 0x5eed_1ab5,
        }
    }
}

/// Default arithmetic-progression grid steps for witness searches.
pub const DEFAULT_GRID_STEPS: [f64; 4] = [0.1, 0.25, 0.5, 1.0];

/// Arithmetic grid `offset + step, offset + 2 step, ...` of length `n`.
pub fn arithmetic_grid(n: usize, step: f64, offset: f64) -> Vec<f64> {
    (1..=n).map(|i| offset + step * i as f64).collect()
}

/// Geometric grid `scale * base^i` of length `n`.
pub fn geometric_grid(n: usize, base: f64, scale: f64) -> Vec<f64> {
    (0..n).map(|i| scale * base.powi(i as i32)).collect()
}

/// Deterministic splitmix64 stream for seeded searches.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Standard normal via Box-Muller.
    pub fn gauss(&mut self) -> f64 {
        let u1 = self.next_f64().max(1e-18);
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    pub fn pick_usize(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}
