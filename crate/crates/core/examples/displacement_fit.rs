//! Fit C in l(t) = −t + (n−1) log(−t) + C + o(1). For n = 1 the oval gives
//! C = log 2 exactly; for n = 2 the fits over growing R should settle.

use pancake::harness::{default_stride, fit_displacement_constant, run_approximant};
use pancake::SolverConfig;

fn fit(n: usize, age: f64, grid: usize) -> pancake::Result<f64> {
    let cfg = SolverConfig {
        grid_size: grid,
        snapshot_stride: default_stride(age),
        ..SolverConfig::default()
    };
    let run = run_approximant(n, age, &cfg)?;
    let f = fit_displacement_constant(&run)?;
    println!("n={n} R={age:4}  C_est {:.6}  stability {:.2e}", f.c_est, f.stability);
    Ok(f.c_est)
}

fn main() -> pancake::Result<()> {
    let grid = std::env::args().nth(1).map_or(256, |s| s.parse().expect("N"));
    let c1 = fit(1, 10.0, grid)?;
    println!("  log 2 = {:.6}, error {:.2e}", std::f64::consts::LN_2, (c1 - std::f64::consts::LN_2).abs());
    let cs = [10.0, 20.0, 40.0]
        .into_iter()
        .map(|r| fit(2, r, grid))
        .collect::<pancake::Result<Vec<_>>>()?;
    println!(
        "  successive differences {:.3e}, {:.3e}",
        (cs[1] - cs[0]).abs(),
        (cs[2] - cs[1]).abs()
    );
    Ok(())
}
