//! Strict Alexandrov reflection across x = α for ovals and circles.

use pancake::oval::sample_profile;
use pancake::{OvalTime, ProfileCurve};

fn main() -> pancake::Result<()> {
    for t in [-1.0, -10.0] {
        let curve = sample_profile(OvalTime::new(t)?, 512, 2)?;
        let (h, _) = curve.reconstruct()?.displacements(curve.grid());
        print!("oval t={t:5}:");
        for frac in [0.01, 0.1, 0.3, 0.5, 0.9] {
            let v = curve.alexandrov_strict(frac * h)?;
            print!("  {frac}h {:.4}{}", v.margin, if v.strict { "" } else { "!" });
        }
        println!();
    }

    // on a circle the clearance ratio tends to 2α/√(r²−α²) as x → α
    let r = 2.0;
    let circle = ProfileCurve::round(2, 1024, r)?;
    for alpha in [0.2, 1.0, 1.6] {
        let v = circle.alexandrov_strict(alpha)?;
        let exact = 2.0 * alpha / (r * r - alpha * alpha).sqrt();
        println!("circle r={r} α={alpha}: margin {:.5}, exact {exact:.5}", v.margin);
    }
    Ok(())
}
