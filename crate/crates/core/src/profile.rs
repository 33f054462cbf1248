//! Geometry of an `O(n)`-invariant convex hypersurface through its profile
//! curve, parametrized by turning angle.
//!
//! The profile is rotated about the `x`-axis. With `γ(θ) = (x(θ), y(θ))`,
//!
//! ```text
//! x(θ) = ∫₀^θ cos u / κ(u) du,     y(θ) = ∫_{π/2}^θ sin u / κ(u) du,
//! λ(θ) = −cos θ / y(θ)  (λ = κ at the poles),     H = κ + (n − 1) λ.
//! ```
//!
//! All integrals use the composite trapezoid rule on the uniform grid.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::TurningGrid;

/// A strictly convex profile with both reflection symmetries, sampled on a
/// uniform turning-angle grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    dim: usize,
    grid: Arc<TurningGrid>,
    kappa: Vec<f64>,
}

impl ProfileCurve {
    /// Validates length, positivity and exact double reflection symmetry.
    pub fn new(dim: usize, kappa: Vec<f64>) -> Result<Self> {
        let grid = Arc::new(TurningGrid::new(kappa.len())?);
        Self::with_grid(dim, grid, kappa)
    }

    pub fn with_grid(dim: usize, grid: Arc<TurningGrid>, kappa: Vec<f64>) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidDimension(dim));
        }
        if kappa.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: kappa.len(),
            });
        }
        check_convex(&kappa)?;
        if let Some(index) = grid.symmetry_violation(&kappa) {
            return Err(Error::NotSymmetric { index });
        }
        Ok(ProfileCurve { dim, grid, kappa })
    }

    /// Like [`ProfileCurve::with_grid`] but averages over the reflections
    /// first instead of rejecting asymmetric input.
    pub fn symmetrized(dim: usize, grid: Arc<TurningGrid>, mut kappa: Vec<f64>) -> Result<Self> {
        if kappa.len() == grid.len() {
            grid.symmetrize(&mut kappa);
        }
        Self::with_grid(dim, grid, kappa)
    }

    /// Round sphere of radius `r`: `κ ≡ 1/r`, centred at the origin.
    pub fn round(dim: usize, n_grid: usize, radius: f64) -> Result<Self> {
        Self::new(dim, vec![1.0 / radius; n_grid])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid(&self) -> &TurningGrid {
        &self.grid
    }

    pub fn shared_grid(&self) -> Arc<TurningGrid> {
        Arc::clone(&self.grid)
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    pub fn into_kappa(self) -> Vec<f64> {
        self.kappa
    }

    /// `(Σ cos θ_i/κ_i Δθ, Σ sin θ_i/κ_i Δθ)`, zero for a closed curve.
    pub fn closure_defect(&self) -> (f64, f64) {
        closure_defect(&self.grid, &self.kappa)
    }

    pub fn reconstruct(&self) -> Result<Coordinates> {
        reconstruct(&self.grid, &self.kappa)
    }

    pub fn lambda_of(&self, coords: &Coordinates) -> Result<Vec<f64>> {
        let mut lambda = vec![0.0; self.kappa.len()];
        lambda_from_y(&self.grid, &self.kappa, &coords.y, &mut lambda)?;
        Ok(lambda)
    }

    pub fn mean_curvature(&self, lambda: &[f64]) -> Vec<f64> {
        let weight = (self.dim - 1) as f64;
        self.kappa
            .iter()
            .zip(lambda)
            .map(|(&k, &l)| k + weight * l)
            .collect()
    }

    /// Coordinates, rotational curvature and mean curvature in one pass.
    pub fn derived(&self) -> Result<DerivedFields> {
        let coords = self.reconstruct()?;
        let lambda = self.lambda_of(&coords)?;
        let mean_curvature = self.mean_curvature(&lambda);
        Ok(DerivedFields {
            x: coords.x,
            y: coords.y,
            lambda,
            mean_curvature,
        })
    }

    /// `∮ λ/κ dθ` by the trapezoid rule (a plain sum on the periodic grid).
    pub fn lambda_over_kappa_integral(&self, lambda: &[f64]) -> f64 {
        self.kappa
            .iter()
            .zip(lambda)
            .map(|(&k, &l)| l / k)
            .sum::<f64>()
            * self.grid.spacing()
    }

    /// Area enclosed by the profile; see [`enclosed_area`].
    pub fn area_of(&self, coords: &Coordinates) -> f64 {
        enclosed_area(&self.grid, &self.kappa, coords)
    }

    /// Decide whether the part of the curve with `x > α`, reflected across
    /// `x = α`, lies strictly inside the curve.
    pub fn alexandrov_strict(&self, alpha: f64) -> Result<ReflectionVerdict> {
        let coords = self.reconstruct()?;
        let (h, _) = coords.displacements(&self.grid);
        if !(alpha > 0.0 && alpha < h) {
            return Err(Error::IllPosedReflection { alpha, h });
        }
        let graph = UpperGraph::new(&self.grid, &coords);
        // the clearance is piecewise linear with breakpoints at the nodes and
        // at the mirror images of the nodes, so its ratio to x − α is extremal
        // at one of them
        let margin = graph
            .xs
            .iter()
            .map(|&x| if x > alpha { x } else { 2.0 * alpha - x })
            .filter(|&x| x > alpha && x <= h)
            .map(|x| (graph.eval(2.0 * alpha - x) - graph.eval(x)) / (x - alpha))
            .fold(f64::INFINITY, f64::min);
        Ok(ReflectionVerdict {
            strict: margin > 0.0,
            margin,
        })
    }
}

fn check_convex(kappa: &[f64]) -> Result<()> {
    match kappa.iter().position(|&k| !(k > 0.0 && k.is_finite())) {
        Some(index) => Err(Error::NotConvex {
            index,
            value: kappa[index],
        }),
        None => Ok(()),
    }
}

/// Outcome of the strict reflection test.
///
/// `margin` is the smallest vertical clearance between a reflected point and
/// the upper branch, divided by the point's horizontal distance to the mirror
/// line; it is dimensionless and positive iff the reflection is strict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionVerdict {
    pub strict: bool,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Coordinates {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl Coordinates {
    /// `h = x(π/2)` and `ℓ = y(π)`.
    pub fn displacements(&self, grid: &TurningGrid) -> (f64, f64) {
        (self.x[grid.right_pole()], self.y[grid.tip()])
    }

    /// Shoelace area `½ Σ (x_i y_{i+1} − x_{i+1} y_i)` of the polygon through
    /// the nodes.
    pub fn node_polygon_area(&self) -> f64 {
        let n = self.x.len();
        0.5 * (0..n)
            .map(|i| {
                let j = (i + 1) % n;
                self.x[i] * self.y[j] - self.x[j] * self.y[i]
            })
            .sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivedFields {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub lambda: Vec<f64>,
    pub mean_curvature: Vec<f64>,
}

impl DerivedFields {
    pub fn coordinates(&self) -> Coordinates {
        Coordinates {
            x: self.x.clone(),
            y: self.y.clone(),
        }
    }
}

pub fn closure_defect(grid: &TurningGrid, kappa: &[f64]) -> (f64, f64) {
    let (mut cx, mut cy) = (0.0, 0.0);
    for ((&c, &s), &k) in grid.cos().iter().zip(grid.sin()).zip(kappa) {
        cx += c / k;
        cy += s / k;
    }
    (cx * grid.spacing(), cy * grid.spacing())
}

/// Area of the polygon whose sides have directions `θ_i` and lengths
/// `Δθ/κ_i`.
///
/// The reconstructed nodes are the midpoints of these sides, so this is the
/// node shoelace plus the corner triangles `¼ L_i L_{i+1} sin Δθ / 2`. It is
/// the area whose rate the discrete flow controls: with it the identity
/// `−dA/dt = 2π + (n−1)∮λ/κ` holds to `O(Δθ²)` even where a side is much
/// longer than its neighbours, which the node polygon does not achieve.
pub fn enclosed_area(grid: &TurningGrid, kappa: &[f64], coords: &Coordinates) -> f64 {
    let n = kappa.len();
    let d = grid.spacing();
    let corners: f64 = (0..n).map(|i| 1.0 / (kappa[i] * kappa[(i + 1) % n])).sum::<f64>();
    coords.node_polygon_area() + d.sin() * d * d / 8.0 * corners
}

/// Cumulative trapezoid of `f` on the periodic grid, starting at `anchor`
/// with value 0 and running half way round in each direction.
fn cumulative_from(anchor: usize, f: impl Fn(usize) -> f64, half_step: f64, out: &mut [f64]) {
    let n = out.len();
    out[anchor] = 0.0;
    let mut acc = 0.0;
    let mut prev = f(anchor);
    for k in 1..=n / 2 {
        let i = (anchor + k) % n;
        let cur = f(i);
        acc += half_step * (prev + cur);
        out[i] = acc;
        prev = cur;
    }
    acc = 0.0;
    prev = f(anchor);
    for k in 1..n / 2 {
        let i = (anchor + n - k) % n;
        let cur = f(i);
        acc -= half_step * (prev + cur);
        out[i] = acc;
        prev = cur;
    }
}

pub(crate) fn y_into(grid: &TurningGrid, kappa: &[f64], y: &mut [f64]) {
    let sin = grid.sin();
    cumulative_from(grid.right_pole(), |i| sin[i] / kappa[i], 0.5 * grid.spacing(), y);
}

pub(crate) fn x_into(grid: &TurningGrid, kappa: &[f64], x: &mut [f64]) {
    let cos = grid.cos();
    cumulative_from(0, |i| cos[i] / kappa[i], 0.5 * grid.spacing(), x);
}

pub fn reconstruct(grid: &TurningGrid, kappa: &[f64]) -> Result<Coordinates> {
    let (cx, cy) = closure_defect(grid, kappa);
    let scale: f64 = kappa.iter().map(|k| 1.0 / k).sum::<f64>() * grid.spacing();
    if cx.abs().max(cy.abs()) > 1e-9 * scale {
        return Err(Error::NonClosure(cx, cy));
    }
    let mut x = vec![0.0; kappa.len()];
    let mut y = vec![0.0; kappa.len()];
    x_into(grid, kappa, &mut x);
    y_into(grid, kappa, &mut y);
    Ok(Coordinates { x, y })
}

/// `λ_i = −cos θ_i / y_i` away from the poles and `λ = κ` at them.
pub(crate) fn lambda_from_y(
    grid: &TurningGrid,
    kappa: &[f64],
    y: &[f64],
    lambda: &mut [f64],
) -> Result<()> {
    let cos = grid.cos();
    for i in 0..kappa.len() {
        if grid.is_pole(i) {
            lambda[i] = kappa[i];
            continue;
        }
        let l = -cos[i] / y[i];
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::DegenerateGeometry { index: i, y: y[i] });
        }
        lambda[i] = l;
    }
    Ok(())
}

/// Replace the pole values of `lambda` by the even extrapolation
/// `(4λ₁ − λ₂)/3` from the ratio values on either side.
///
/// The trapezoid `y` carries a smooth `O(Δθ²)` bias, so the ratio values
/// approach `κ(1 + O(Δθ²))` rather than `κ` at the pole; pinning `λ = κ` there
/// leaves a kink that the second difference in the flow turns into an `O(1)`
/// error. Falls back to `κ` when the extrapolation is not positive.
pub(crate) fn smooth_pole_lambda(grid: &TurningGrid, kappa: &[f64], lambda: &mut [f64]) {
    let n = grid.len();
    for p in [grid.right_pole(), grid.left_pole()] {
        let v = (4.0 * lambda[(p + 1) % n] - lambda[(p + 2) % n]) / 3.0;
        lambda[p] = if v > 0.0 && v.is_finite() { v } else { kappa[p] };
    }
}

/// The upper branch `y > 0` written as a graph `x ↦ u(x)` over `[−h, h]`,
/// linearly interpolated between reconstructed nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct UpperGraph {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl UpperGraph {
    pub fn new(grid: &TurningGrid, coords: &Coordinates) -> Self {
        // θ from 3π/2 down to π/2 sweeps x from −h up to h
        let (xs, ys) = grid
            .upper_branch()
            .rev()
            .map(|i| (coords.x[i], coords.y[i].max(0.0)))
            .unzip();
        UpperGraph { xs, ys }
    }

    /// Piecewise-linear height; zero outside `[−h, h]`.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] || x >= self.xs[n - 1] {
            return 0.0;
        }
        let k = self.xs.partition_point(|&xi| xi <= x);
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        let (y0, y1) = (self.ys[k - 1], self.ys[k]);
        if x1 == x0 {
            return y0.max(y1);
        }
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}
