//! Run an approximant and evaluate every bound, the Harnack inequality and
//! the area identity along it.

use pancake::harness::{
    area_identity_residual, check_harnack, default_stride, full_report, run_approximant,
};
use pancake::SolverConfig;

fn main() -> pancake::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(2, |s| s.parse().expect("n"));
    let age: f64 = args.get(1).map_or(10.0, |s| s.parse().expect("R"));
    let grid: usize = args.get(2).map_or(256, |s| s.parse().expect("N"));
    let cfg = SolverConfig {
        grid_size: grid,
        snapshot_stride: default_stride(age),
        ..SolverConfig::default()
    };
    let run = run_approximant(n, age, &cfg)?;
    let report = full_report(&run)?;
    println!("tolerance {:.3e}", report.tolerance);
    for e in &report.entries {
        println!(
            "{:<20} {:>12} {:>10}  {}{}",
            e.id,
            e.margin.map_or("-".into(), |m| format!("{m:+.4e}")),
            e.worst_t.map_or("-".into(), |t| format!("{t:.4}")),
            if e.pass { "pass" } else { "FAIL" },
            match (e.vacuous, e.gated) {
                (true, _) => " (vacuous)",
                (_, false) => " (not gated)",
                _ => "",
            }
        );
    }
    println!("passed {} failed {}", report.passed(), report.failed());

    let h = check_harnack(&run)?;
    println!(
        "harnack: worst pair margin {:.3e}, monotone margin {:.3e}, max H(pi) {:.3}",
        h.worst_margin, h.monotone_margin, h.h_tip_max
    );
    println!("area identity residual {:.3e}", area_identity_residual(&run)?);
    Ok(())
}
