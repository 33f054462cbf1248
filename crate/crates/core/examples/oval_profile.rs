//! Closed-form Angenent oval next to its sampled turning-angle profile.
//!
//!     cargo run --release --example oval_profile -- -3.0 256

use std::f64::consts::PI;

use pancake::oval::{oval_curvature, oval_extents, oval_point, oval_residual, sample_profile};
use pancake::OvalTime;

fn main() -> pancake::Result<()> {
    let mut args = std::env::args().skip(1);
    let t: f64 = args.next().map_or(-3.0, |s| s.parse().expect("t"));
    let n: usize = args.next().map_or(256, |s| s.parse().expect("N"));
    let time = OvalTime::new(t)?;

    let (h, ell) = oval_extents(time);
    println!("t = {t}: a^2 = {:.6e}, h = {h:.9}, l = {ell:.9}", time.a_squared());
    println!("{:>8} {:>14} {:>14} {:>14} {:>10}", "theta", "kappa", "x", "y", "residual");
    for k in 0..=8 {
        let theta = k as f64 * PI / 8.0;
        let p = oval_point(theta, time);
        println!(
            "{theta:8.4} {:14.8e} {:14.8} {:14.8} {:10.2e}",
            oval_curvature(theta, time),
            p.x,
            p.y,
            oval_residual(p, time)
        );
    }

    let curve = sample_profile(time, n, 1)?;
    let coords = curve.reconstruct()?;
    let (hs, ls) = coords.displacements(curve.grid());
    let (cx, cy) = curve.closure_defect();
    println!("sampled N={n}: h = {hs:.9}, l = {ls:.9}, closure ({cx:.1e}, {cy:.1e})");
    println!(
        "area {:.9} against 2π|t| = {:.9}",
        curve.area_of(&coords),
        -2.0 * PI * t
    );
    Ok(())
}
