//! Round spheres shrink self-similarly and vanish at r0²/(2n).

use pancake::harness::{sphere_benchmark, MAX_STRIDE_SNAPSHOTS};
use pancake::SolverConfig;

fn main() -> pancake::Result<()> {
    let n_grid = std::env::args().nth(1).map_or(256, |s| s.parse().expect("N"));
    for n in 1..=3 {
        let exact = 1.0 / (2.0 * n as f64);
        let cfg = SolverConfig {
            grid_size: n_grid,
            snapshot_stride: exact / MAX_STRIDE_SNAPSHOTS,
            ..SolverConfig::default()
        };
        let err = sphere_benchmark(n, 1.0, &cfg)?;
        println!("n={n}  T = {exact:.6}  relative error {err:.2e}");
    }
    Ok(())
}
