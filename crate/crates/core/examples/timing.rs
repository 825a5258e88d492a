// temporary timing probe
use polyalab_core::lab::sweeps::karlin_sweep;
use polyalab_core::lab::{LabOptions, PowerSweepConfig, ShiftSearch};
use polyalab_core::KernelSpec;

fn main() {
    let p = 5usize;
    let grid: Vec<f64> = (1..=p).map(|i| i as f64).collect();
    let exps: Vec<f64> = (1..=4 * (p - 1)).map(|k| 0.25 * k as f64).collect();
    let cfg = PowerSweepConfig {
        base: KernelSpec::OmegaQr { q: 1.0, r: 1.0 },
        exponents: exps,
        order: p,
        xs: grid.clone(),
        ys: grid.clone(),
        shift_search: Some(ShiftSearch::spanning(&grid, &grid)),
    };
    let t0 = std::time::Instant::now();
    let rep = karlin_sweep(&cfg, &LabOptions::default()).unwrap();
    println!("p=5 karlin: {:?} rows in {:?}", rep.rows.len(), t0.elapsed());
    for r in &rep.rows {
        println!("  alpha={:<5} {:?}", r.exponent, r.classification.as_str());
    }
}
