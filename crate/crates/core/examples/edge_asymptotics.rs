//! Distance of the profile's upper branch to the Grim Reaper l + log cos x
//! away from the slab walls.

use std::f64::consts::FRAC_PI_8;

use pancake::harness::{default_stride, edge_grim_gap, mid_run_edge_gap, run_approximant};
use pancake::oval::{oval_edge_gap, sample_profile};
use pancake::{OvalTime, SolverConfig};

fn main() -> pancake::Result<()> {
    let grid = std::env::args().nth(1).map_or(256, |s| s.parse().expect("N"));

    // n = 1: the oval itself, closed form against the sampled profile
    for t in [-2.0, -5.0, -10.0] {
        let time = OvalTime::new(t)?;
        let exact = oval_edge_gap(time, FRAC_PI_8, 20_000);
        let sampled = edge_grim_gap(&sample_profile(time, grid, 1)?, FRAC_PI_8)?;
        println!("oval t={t:5}: closed form {exact:.3e}, sampled {sampled:.3e}");
    }

    // n = 2: gap half way through runs from older and older ovals
    for age in [10.0, 20.0, 40.0] {
        let cfg = SolverConfig {
            grid_size: grid,
            snapshot_stride: default_stride(age),
            ..SolverConfig::default()
        };
        let run = run_approximant(2, age, &cfg)?;
        let (t, gap) = mid_run_edge_gap(&run)?;
        println!("n=2 R={age:4}: gap {gap:.4e} at t = {t:.3}");
    }
    Ok(())
}
