//! For n = 1 the flow is curve shortening and the oval is an exact solution.
//! Evolve the oval from t = −2 to t = −1 and compare with the closed form.

use pancake::oval::{oval_curvature, sample_profile};
use pancake::solver::{evolve_until, FlowState, SolverConfig};
use pancake::OvalTime;

fn max_error(n: usize) -> pancake::Result<f64> {
    let start = sample_profile(OvalTime::new(-2.0)?, n, 1)?;
    let end = evolve_until(&FlowState::new(start, -2.0), &SolverConfig::with_grid(n), -1.0)?;
    let target = OvalTime::new(-1.0)?;
    let grid = end.curve.grid();
    Ok(end
        .curve
        .kappa()
        .iter()
        .enumerate()
        .map(|(i, k)| {
            let exact = oval_curvature(grid.theta(i), target);
            (k - exact).abs() / exact
        })
        .fold(0.0, f64::max))
}

fn main() -> pancake::Result<()> {
    let mut prev: Option<f64> = None;
    for n in [64, 128, 256, 512] {
        let e = max_error(n)?;
        match prev {
            Some(p) => println!("N={n:5}  max rel error {e:.3e}  ratio {:.2}", p / e),
            None => println!("N={n:5}  max rel error {e:.3e}"),
        }
        prev = Some(e);
    }
    Ok(())
}
