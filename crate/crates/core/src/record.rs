//! Per-snapshot diagnostics and the time series of one run.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::profile::{ProfileCurve, UpperGraph};
use crate::solver::SolverConfig;

/// Scalars measured on one time slice. Times are on the run's own clock.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub t: f64,
    pub h: f64,
    pub ell: f64,
    pub area: f64,
    pub h_min: f64,
    pub h_max: f64,
    /// `H(π)`, the speed of the tip.
    pub h_tip: f64,
    pub kappa_min: f64,
    pub lambda_max: f64,
    /// `∮ λ/κ dθ`.
    pub lambda_over_kappa: f64,
    /// `|dA/dt + 2π + (n−1)∮λ/κ|` with `dA/dt` by central differences over
    /// neighbouring snapshots; absent at the ends of the series.
    pub area_residual: Option<f64>,
    /// Sup distance of the upper branch to the tip-anchored Grim profile
    /// over `|x| ≤ π/2 − δ`; absent while the profile is narrower than that.
    pub edge_gap: Option<f64>,
    /// Worst Harnack defect against all earlier snapshots.
    pub harnack_margin: Option<f64>,
}

impl Diagnostics {
    pub fn measure(curve: &ProfileCurve, t: f64, edge_delta: f64) -> Result<Self> {
        let grid = curve.grid();
        let f = curve.derived()?;
        let coords = f.coordinates();
        let (h, ell) = coords.displacements(grid);
        let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
        let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let edge_gap = edge_gap_of(curve, &coords, edge_delta).ok();
        Ok(Diagnostics {
            t,
            h,
            ell,
            area: curve.area_of(&coords),
            h_min: min(&f.mean_curvature),
            h_max: max(&f.mean_curvature),
            h_tip: f.mean_curvature[grid.tip()],
            kappa_min: min(curve.kappa()),
            lambda_max: max(&f.lambda),
            lambda_over_kappa: {
                let mut l = f.lambda.clone();
                crate::profile::smooth_pole_lambda(grid, curve.kappa(), &mut l);
                curve.lambda_over_kappa_integral(&l)
            },
            area_residual: None,
            edge_gap,
            harnack_margin: None,
        })
    }
}

/// Number of uniform samples used for the edge gap sup.
pub const EDGE_SAMPLES: usize = 1024;

pub(crate) fn edge_gap_of(
    curve: &ProfileCurve,
    coords: &crate::profile::Coordinates,
    delta: f64,
) -> Result<f64> {
    let (h, ell) = coords.displacements(curve.grid());
    let limit = FRAC_PI_2 - delta;
    if h < limit {
        return Err(crate::error::Error::InsufficientWidth { h, required: limit });
    }
    let graph = UpperGraph::new(curve.grid(), coords);
    Ok((0..=EDGE_SAMPLES)
        .map(|k| {
            let x = limit * (2.0 * k as f64 / EDGE_SAMPLES as f64 - 1.0);
            (graph.eval(x) - ell - x.cos().ln()).abs()
        })
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub diagnostics: Diagnostics,
    pub kappa: Vec<f64>,
}

impl Snapshot {
    pub fn curve(&self, dim: usize) -> Result<ProfileCurve> {
        ProfileCurve::new(dim, self.kappa.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    CurvatureBlowup,
    AreaExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub dim: usize,
    /// Age `R` of the oval slice the run started from, if any.
    pub oval_age: Option<f64>,
    pub config: SolverConfig,
    pub start_time: f64,
    pub snapshots: Vec<Snapshot>,
    pub termination: Termination,
    /// Extinction time on the run's clock.
    pub extinction_time: Option<f64>,
    /// Exact minus sampled initial area; see [`RunRecord::calibrate_area`].
    #[serde(default)]
    pub area_offset: f64,
    /// Extinction time of the smooth flow the early snapshots follow.
    #[serde(default)]
    pub calibrated_extinction: Option<f64>,
    pub dt_max: f64,
    pub steps: u64,
}

impl RunRecord {
    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.diagnostics.t).collect()
    }

    /// Record the area deficit of the initial sampling against `exact`, the
    /// known area of the smooth initial curve, and the extinction time it
    /// implies.
    ///
    /// Sampling a long, nearly straight side onto one grid cell loses a fixed
    /// amount of area. The discrete flow conserves that deficit, since both
    /// areas obey the same rate identity, and spends it as a time lag while
    /// the side shrinks to grid scale. Early snapshots therefore follow the
    /// smooth flow on the clock of [`RunRecord::calibrated_extinction`], late
    /// ones on the clock of [`RunRecord::extinction_time`].
    pub fn calibrate_area(&mut self, exact: f64) {
        let Some(first) = self.snapshots.first() else {
            return;
        };
        self.area_offset = exact - first.diagnostics.area;
        self.calibrated_extinction =
            crate::solver::extrapolate_area(self, self.area_offset).ok();
    }

    /// Fill the fields that depend on the whole series.
    pub fn finalize(&mut self) {
        let residuals = area_residuals(self);
        let harnack = harnack_margins(self);
        for ((s, r), m) in self.snapshots.iter_mut().zip(residuals).zip(harnack) {
            s.diagnostics.area_residual = r;
            s.diagnostics.harnack_margin = m;
        }
    }
}

/// Second-order derivative of `values` at interior index `k` on a
/// non-uniform grid.
pub(crate) fn central_derivative(t: &[f64], v: &[f64], k: usize) -> f64 {
    let h1 = t[k] - t[k - 1];
    let h2 = t[k + 1] - t[k];
    -h2 / (h1 * (h1 + h2)) * v[k - 1]
        + (h2 - h1) / (h1 * h2) * v[k]
        + h1 / (h2 * (h1 + h2)) * v[k + 1]
}

/// Residual of `−dA/dt = 2π + (n−1)∮λ/κ` at each interior snapshot.
pub fn area_residuals(r: &RunRecord) -> Vec<Option<f64>> {
    let m = r.snapshots.len();
    let t: Vec<f64> = r.times();
    let a: Vec<f64> = r.snapshots.iter().map(|s| s.diagnostics.area).collect();
    let weight = (r.dim - 1) as f64;
    (0..m)
        .map(|k| {
            if k == 0 || k + 1 >= m {
                return None;
            }
            let da = central_derivative(&t, &a, k);
            let rhs = 2.0 * std::f64::consts::PI + weight * r.snapshots[k].diagnostics.lambda_over_kappa;
            Some((da + rhs).abs())
        })
        .collect()
}

/// For each snapshot `s`, the worst relative Harnack defect
/// `H(π,s)·√(s'/t') / H(π,t) − 1` over earlier snapshots `t`, where primes
/// denote time elapsed since the start of the run. `None` for the first
/// snapshot.
///
/// Only the running maximum of `H(π,t)·√t'` matters, so this is linear in the
/// number of snapshots.
pub fn harnack_margins(r: &RunRecord) -> Vec<Option<f64>> {
    let t0 = r.start_time;
    let mut peak: Option<f64> = None;
    let mut out = Vec::with_capacity(r.snapshots.len());
    for s in &r.snapshots {
        let d = &s.diagnostics;
        let w = d.h_tip * (d.t - t0).sqrt();
        out.push(peak.map(|p| w / p - 1.0));
        if d.t > t0 {
            peak = Some(peak.map_or(w, |p| p.max(w)));
        }
    }
    out
}
