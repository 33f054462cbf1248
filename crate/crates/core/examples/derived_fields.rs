//! Coordinates, rotational curvature λ and mean curvature H of a sampled
//! oval, written as CSV on stdout.

use pancake::oval::sample_profile;
use pancake::OvalTime;

fn main() -> pancake::Result<()> {
    let curve = sample_profile(OvalTime::new(-2.0)?, 64, 2)?;
    let f = curve.derived()?;
    println!("theta,kappa,x,y,lambda,H");
    for i in 0..curve.grid().len() {
        println!(
            "{:.6},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e}",
            curve.grid().theta(i),
            curve.kappa()[i],
            f.x[i],
            f.y[i],
            f.lambda[i],
            f.mean_curvature[i]
        );
    }
    Ok(())
}
