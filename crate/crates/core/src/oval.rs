//! Closed forms for the Angenent oval (paperclip) and the Grim Reaper, and
//! initial data for the approximating flows.
//!
//! The oval time slice at `t < 0` has curvature `κ² = a²(t) + cos²θ` in
//! turning-angle parametrization, with `a²(t) = 1/(e^{−2t} − 1)`. It lies in
//! the strip `|x| < π/2` and satisfies `cos x = eᵗ cosh y`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::TurningGrid;
use crate::profile::ProfileCurve;

/// A strictly negative time on the oval's own clock (extinction at 0).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct OvalTime(f64);

impl OvalTime {
    pub fn new(t: f64) -> Result<Self> {
        if t < 0.0 && t.is_finite() {
            Ok(OvalTime(t))
        } else {
            Err(Error::NonNegativeTime(t))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `a²(t) = 1/(e^{−2t} − 1)`, via `expm1` so it stays accurate near `t = 0⁻`.
    pub fn a_squared(self) -> f64 {
        1.0 / (-2.0 * self.0).exp_m1()
    }
}

impl TryFrom<f64> for OvalTime {
    type Error = Error;

    fn try_from(t: f64) -> Result<Self> {
        OvalTime::new(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

fn curvature_from_cos(cos: f64, a2: f64) -> f64 {
    (a2 + cos * cos).sqrt()
}

pub fn oval_curvature(theta: f64, t: OvalTime) -> f64 {
    curvature_from_cos(theta.cos(), t.a_squared())
}

fn point_from_trig(cos: f64, sin: f64, t: OvalTime) -> PlanePoint {
    let a2 = t.a_squared();
    let root = (cos * cos + a2).sqrt();
    let x = (sin / root).atan();
    // √(cos²+a²) − cos cancels badly for cos > 0 once a ≪ 1; use the
    // conjugate form a²/(√(cos²+a²) + cos) there.
    let numerator = if cos > 0.0 { a2 / (root + cos) } else { root - cos };
    let y = -t.value() + (numerator.ln() - 0.5 * a2.ln_1p());
    PlanePoint { x, y }
}

/// Point of the oval with turning angle `θ`, anchored so that `x(0) = 0` and
/// `y(π/2) = 0`.
pub fn oval_point(theta: f64, t: OvalTime) -> PlanePoint {
    point_from_trig(theta.cos(), theta.sin(), t)
}

/// Horizontal and vertical displacements `(h, ℓ)` with `cos h = eᵗ` and
/// `cosh ℓ = e^{−t}`.
pub fn oval_extents(t: OvalTime) -> (f64, f64) {
    let t = t.value();
    (t.exp().acos(), (-t).exp().acosh())
}

/// Signed residual `cos x − eᵗ cosh y`: zero on the oval, positive inside.
pub fn oval_residual(p: PlanePoint, t: OvalTime) -> f64 {
    p.x.cos() - t.value().exp() * p.y.cosh()
}

/// Height `t − log cos x` of the unit-speed Grim Reaper at time `t`.
pub fn grim_height(x: f64, t: f64) -> Result<f64> {
    if x.abs() >= FRAC_PI_2 || !x.is_finite() {
        return Err(Error::OutsideStrip(x));
    }
    Ok(t - x.cos().ln())
}

/// Upper branch of the oval as a graph, `y = arccosh(e^{−t} cos x)`, for
/// `|x| ≤ h(t)`.
pub fn oval_graph_height(x: f64, t: OvalTime) -> f64 {
    let arg = (-t.value()).exp() * x.cos();
    arg.max(1.0).acosh()
}

/// Sup of `|u(x) − ℓ − log cos x|` over `|x| ≤ π/2 − δ` for the exact oval,
/// evaluated on a dense sample of the closed-form graph.
pub fn oval_edge_gap(t: OvalTime, delta: f64, samples: usize) -> f64 {
    let (_, ell) = oval_extents(t);
    let limit = FRAC_PI_2 - delta;
    (0..=samples)
        .map(|k| {
            let x = limit * k as f64 / samples as f64;
            (oval_graph_height(x, t) - ell - x.cos().ln()).abs()
        })
        .fold(0.0, f64::max)
}

fn check_sampling(n_grid: usize, dim: usize) -> Result<TurningGrid> {
    if dim < 1 {
        return Err(Error::InvalidDimension(dim));
    }
    TurningGrid::new(n_grid)
}

/// Sample the oval at time `t` onto the uniform turning-angle grid.
///
/// Each node carries the curvature of its cell `[θ_i − Δθ/2, θ_i + Δθ/2]`:
/// `κ_i = Δθ / L_i`, where `L_i` is the exact displacement of the oval across
/// the cell projected on the tangent `(cos θ_i, sin θ_i)`. In resolved regions
/// this differs from `κ(θ_i)` by `O(Δθ²)`; near the poles of old ovals, where
/// `κ ≈ eᵗ` is far below `Δθ`, it keeps the side length right, which point
/// sampling does not.
pub fn sample_profile(t: OvalTime, n_grid: usize, dim: usize) -> Result<ProfileCurve> {
    let grid = check_sampling(n_grid, dim)?;
    let half = 0.5 * grid.spacing();
    let quarter: Vec<f64> = (grid.right_pole()..=grid.tip())
        .map(|i| {
            let theta = grid.theta(i);
            let lo = oval_point(theta - half, t);
            let hi = oval_point(theta + half, t);
            let length = grid.cos()[i] * (hi.x - lo.x) + grid.sin()[i] * (hi.y - lo.y);
            grid.spacing() / length
        })
        .collect();
    ProfileCurve::new(dim, grid.from_quarter(&quarter))
}

/// Point sampling `κ_i = κ(θ_i, t)`; only adequate while `a(t) ≫ Δθ`.
pub fn sample_profile_pointwise(t: OvalTime, n_grid: usize, dim: usize) -> Result<ProfileCurve> {
    let grid = check_sampling(n_grid, dim)?;
    let a2 = t.a_squared();
    let kappa: Vec<f64> = grid.cos().iter().map(|&c| curvature_from_cos(c, a2)).collect();
    ProfileCurve::new(dim, kappa)
}

/// Closed-form `∂κ/∂t` of the oval: `e^{−2t}(e^{−2t} − 1)^{−2} / κ`.
pub fn oval_curvature_rate(theta: f64, t: OvalTime) -> f64 {
    let e = (-2.0 * t.value()).exp();
    let denom = (-2.0 * t.value()).exp_m1();
    e / (denom * denom) / oval_curvature(theta, t)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{LN_2, PI};

    use approx::assert_relative_eq;

    use super::*;

    fn t(v: f64) -> OvalTime {
        OvalTime::new(v).unwrap()
    }

    #[test]
    fn rejects_nonnegative_time() {
        assert!(OvalTime::new(0.0).is_err());
        assert!(OvalTime::new(1.0).is_err());
        assert!(OvalTime::new(f64::NAN).is_err());
    }

    #[test]
    fn curvature_examples() {
        let t0 = t(-LN_2 / 2.0);
        assert_relative_eq!(oval_curvature(PI / 2.0, t0), 1.0, epsilon = 1e-15);
        assert_relative_eq!(oval_curvature(PI, t0), 2f64.sqrt(), epsilon = 1e-15);
        // κ → |cos θ| from above as t → −∞
        let mut prev = f64::INFINITY;
        for k in 1..12 {
            let k_val = oval_curvature(0.3, t(-(k as f64)));
            assert!(k_val > 0.3f64.cos().abs());
            assert!(k_val < prev);
            prev = k_val;
        }
    }

    #[test]
    fn curvature_law_offset_is_angle_independent() {
        for &tv in &[-0.01, -0.5, -3.0, -15.0] {
            let tt = t(tv);
            for k in 0..50 {
                let th = k as f64 * 0.13;
                let k2 = oval_curvature(th, tt).powi(2) - th.cos().powi(2);
                assert_relative_eq!(k2, tt.a_squared(), max_relative = 1e-9, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn point_anchors_and_extents() {
        let tt = t(-1.3);
        let (h, ell) = oval_extents(tt);
        let pole = oval_point(PI / 2.0, tt);
        let tip = oval_point(PI, tt);
        assert_relative_eq!(pole.x, h, epsilon = 1e-14);
        assert!(pole.y.abs() < 1e-14);
        assert!(tip.x.abs() < 1e-15);
        assert_relative_eq!(tip.y, ell, epsilon = 1e-13);
        assert_relative_eq!(h.cos(), (-1.3f64).exp(), epsilon = 1e-15);
        assert_relative_eq!(ell.cosh(), 1.3f64.exp(), max_relative = 1e-14);
        let bottom = oval_point(0.0, t(-1.0));
        assert_eq!(bottom.x, 0.0);
        assert!(oval_residual(bottom, t(-1.0)).abs() < 1e-12);
    }

    #[test]
    fn extents_examples() {
        let (h, ell) = oval_extents(t(-LN_2));
        assert_relative_eq!(h, PI / 3.0, epsilon = 1e-15);
        assert_relative_eq!(ell, (2.0 + 3f64.sqrt()).ln(), epsilon = 1e-15);
        let (h, ell) = oval_extents(t(-10.0));
        assert!((10.0..=10.0 + LN_2).contains(&ell));
        assert!(h >= FRAC_PI_2 * (1.0 - (-10f64).exp()) && h <= FRAC_PI_2);
    }

    #[test]
    fn residual_signs() {
        let tt = t(-1.0);
        let origin = PlanePoint { x: 0.0, y: 0.0 };
        assert_relative_eq!(oval_residual(origin, tt), 1.0 - (-1f64).exp());
        let (h, ell) = oval_extents(tt);
        assert!(oval_residual(PlanePoint { x: h, y: 0.0 }, tt).abs() < 1e-15);
        assert!(oval_residual(PlanePoint { x: 0.0, y: ell + 1.0 }, tt) < 0.0);
    }

    #[test]
    fn grim_height_examples() {
        assert_eq!(grim_height(0.0, 0.0).unwrap(), 0.0);
        assert!(grim_height(FRAC_PI_2, 0.0).is_err());
        assert!(grim_height(FRAC_PI_2 - 1e-12, 0.0).unwrap() > 25.0);
    }

    #[test]
    fn oval_avoids_translated_grim_reapers() {
        for &tv in &[-0.2, -1.0, -5.0, -12.0] {
            let tt = t(tv);
            let worst = (1..2000)
                .map(|k| {
                    let th = PI / 2.0 + PI * k as f64 / 2000.0;
                    let p = oval_point(th, tt);
                    p.y - (-tv + LN_2 + p.x.cos().ln())
                })
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(worst < 0.0, "t = {tv}: {worst}");
        }
    }

    #[test]
    fn sampled_profile_symmetry_and_values() {
        let c = sample_profile(t(-1.0), 256, 2).unwrap();
        let g = c.grid();
        assert_eq!(g.symmetry_violation(c.kappa()), None);
        // cell average agrees with point values to O(Δθ²)
        let dtheta = g.spacing();
        for i in 0..256 {
            let exact = oval_curvature(g.theta(i), t(-1.0));
            assert!((c.kappa()[i] - exact).abs() < dtheta * dtheta * exact);
        }
        assert!(sample_profile(t(-1.0), 250, 2).is_err());
        assert!(sample_profile(t(-1.0), 256, 0).is_err());
    }

    #[test]
    fn rate_matches_finite_difference() {
        let th = 2.2;
        let tt = t(-1.5);
        let eps = 1e-5;
        let fd = (oval_curvature(th, t(-1.5 + eps)) - oval_curvature(th, t(-1.5 - eps))) / (2.0 * eps);
        assert_relative_eq!(oval_curvature_rate(th, tt), fd, max_relative = 1e-8);
    }
}
