//! Evolve an oval slice of age R with n-dimensional rotational symmetry and
//! write the time series and the full run record.
//!
//!     cargo run --release --example pancake_run -- 2 10 512 out/

use std::path::PathBuf;

use pancake::harness::{default_stride, run_approximant};
use pancake::io::{write_record, write_timeseries};
use pancake::SolverConfig;

fn main() -> pancake::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(2, |s| s.parse().expect("n"));
    let age: f64 = args.get(1).map_or(10.0, |s| s.parse().expect("R"));
    let grid: usize = args.get(2).map_or(256, |s| s.parse().expect("N"));
    let out = PathBuf::from(args.get(3).map_or("pancake-out", String::as_str));

    let cfg = SolverConfig {
        grid_size: grid,
        snapshot_stride: default_stride(age),
        ..SolverConfig::default()
    };
    let run = run_approximant(n, age, &cfg)?;
    println!(
        "{} steps, {} snapshots, stopped on {:?}",
        run.steps,
        run.snapshots.len(),
        run.termination
    );
    println!("extinction at {:?} on the run clock", run.extinction_time);

    // a few rows on the shifted clock
    let te = run.extinction_time.unwrap_or(0.0);
    let every = (run.snapshots.len() / 8).max(1);
    for s in run.snapshots.iter().step_by(every) {
        let d = &s.diagnostics;
        println!(
            "t {:9.4}  h {:.6}  l {:9.5}  A {:9.5}  Hmin {:.4e}",
            d.t - te,
            d.h,
            d.ell,
            d.area,
            d.h_min
        );
    }

    write_timeseries(&run, &out.join("timeseries.csv"))?;
    write_record(&run, &out.join("record.json"))?;
    println!("wrote {}", out.display());
    Ok(())
}
