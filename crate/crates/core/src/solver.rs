//! Explicit time integration of rotationally symmetric mean curvature flow
//! in turning-angle form,
//!
//! ```text
//! κ_t = κ² (H_θθ + H),     H = κ + (n − 1) λ,
//! ```
//!
//! with `H_θθ` by second-order central differences on the periodic grid and
//! classical RK4 in time under the parabolic step limit
//! `dt = safety · Δθ² / max κ²`.

use std::f64::consts::FRAC_PI_8;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::TurningGrid;
use crate::profile::{self, ProfileCurve};
use crate::record::{Diagnostics, RunRecord, Snapshot, Termination};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Grid size `N`, divisible by 4.
    pub grid_size: usize,
    /// CFL fraction in `(0, 0.5]`.
    pub safety: f64,
    /// Stop once `max κ` reaches this value.
    pub kappa_max_stop: f64,
    /// Stop once the enclosed profile area drops to this value.
    pub area_stop: f64,
    /// Simulation time between recorded snapshots; 0 records every step.
    pub snapshot_stride: f64,
    /// Half-width `δ` of the excluded band next to the slab walls when
    /// measuring the distance to the Grim Reaper.
    pub edge_delta: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            grid_size: 512,
            safety: 0.25,
            kappa_max_stop: 1e3,
            area_stop: 1e-3,
            snapshot_stride: 0.0,
            edge_delta: FRAC_PI_8,
        }
    }
}

impl SolverConfig {
    pub fn with_grid(grid_size: usize) -> Self {
        SolverConfig {
            grid_size,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        TurningGrid::new(self.grid_size)?;
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if !(self.safety > 0.0 && self.safety <= 0.5) {
            return bad("safety must lie in (0, 0.5]");
        }
        if !(self.kappa_max_stop > 0.0) {
            return bad("curvature stop threshold must be positive");
        }
        if !(self.area_stop >= 0.0) {
            return bad("area stop threshold must be non-negative");
        }
        if !(self.snapshot_stride >= 0.0 && self.snapshot_stride.is_finite()) {
            return bad("snapshot stride must be finite and non-negative");
        }
        if !(self.edge_delta > 0.0 && self.edge_delta < std::f64::consts::FRAC_PI_4) {
            return bad("edge window delta must lie in (0, pi/4)");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub curve: ProfileCurve,
    pub t: f64,
    pub step_count: u64,
}

impl FlowState {
    pub fn new(curve: ProfileCurve, t: f64) -> Self {
        FlowState {
            curve,
            t,
            step_count: 0,
        }
    }
}

/// Scratch buffers for repeated evaluation of the right-hand side.
#[derive(Debug, Clone)]
struct Kernel {
    grid: Arc<TurningGrid>,
    weight: f64,
    y: Vec<f64>,
    lambda: Vec<f64>,
    mean: Vec<f64>,
}

impl Kernel {
    fn new(grid: Arc<TurningGrid>, dim: usize) -> Self {
        let n = grid.len();
        Kernel {
            grid,
            weight: (dim - 1) as f64,
            y: vec![0.0; n],
            lambda: vec![0.0; n],
            mean: vec![0.0; n],
        }
    }

    fn rate(&mut self, kappa: &[f64], out: &mut [f64]) -> Result<()> {
        let grid = &*self.grid;
        profile::y_into(grid, kappa, &mut self.y);
        profile::lambda_from_y(grid, kappa, &self.y, &mut self.lambda)?;
        profile::smooth_pole_lambda(grid, kappa, &mut self.lambda);
        for ((m, &k), &l) in self.mean.iter_mut().zip(kappa).zip(&self.lambda) {
            *m = k + self.weight * l;
        }
        let n = kappa.len();
        let inv_d2 = 1.0 / (grid.spacing() * grid.spacing());
        let h = &self.mean;
        for i in 0..n {
            let prev = h[(i + n - 1) % n];
            let next = h[(i + 1) % n];
            let hxx = (prev - 2.0 * h[i] + next) * inv_d2;
            out[i] = kappa[i] * kappa[i] * (hxx + h[i]);
        }
        grid.symmetrize(out);
        Ok(())
    }
}

fn check_state(kappa: &[f64], t: f64) -> Result<()> {
    match kappa.iter().position(|&k| !(k > 0.0 && k.is_finite())) {
        Some(index) => Err(Error::Unstable {
            t,
            index,
            value: kappa[index],
        }),
        None => Ok(()),
    }
}

/// `dκ/dt` on the grid; exactly symmetric under both reflections.
pub fn time_derivative(s: &FlowState) -> Result<Vec<f64>> {
    let kappa = s.curve.kappa();
    if let Some(index) = kappa.iter().position(|&k| !(k > 0.0 && k.is_finite())) {
        return Err(Error::NotConvex {
            index,
            value: kappa[index],
        });
    }
    let mut kernel = Kernel::new(s.curve.shared_grid(), s.curve.dim());
    let mut out = vec![0.0; kappa.len()];
    kernel.rate(kappa, &mut out)?;
    Ok(out)
}

pub fn stable_dt(s: &FlowState, cfg: &SolverConfig) -> f64 {
    stable_dt_for(s.curve.kappa(), s.curve.grid().spacing(), cfg.safety)
}

fn stable_dt_for(kappa: &[f64], spacing: f64, safety: f64) -> f64 {
    let kmax = kappa.iter().fold(0.0f64, |a, &k| a.max(k));
    safety * spacing * spacing / (kmax * kmax)
}

/// Reusable RK4 integrator for one profile dimension and grid.
#[derive(Debug, Clone)]
pub struct Stepper {
    kernel: Kernel,
    stages: [Vec<f64>; 4],
    trial: Vec<f64>,
}

impl Stepper {
    pub fn new(grid: Arc<TurningGrid>, dim: usize) -> Self {
        let n = grid.len();
        Stepper {
            kernel: Kernel::new(grid, dim),
            stages: std::array::from_fn(|_| vec![0.0; n]),
            trial: vec![0.0; n],
        }
    }

    pub fn for_state(s: &FlowState) -> Self {
        Self::new(s.curve.shared_grid(), s.curve.dim())
    }

    /// Advance `kappa` in place by one RK4 step of size `dt` starting at `t`.
    pub fn advance(&mut self, kappa: &mut [f64], t: f64, dt: f64) -> Result<()> {
        let [k1, k2, k3, k4] = &mut self.stages;
        let trial = &mut self.trial;
        self.kernel.rate(kappa, k1)?;
        for ((x, &k0), &d) in trial.iter_mut().zip(kappa.iter()).zip(k1.iter()) {
            *x = k0 + 0.5 * dt * d;
        }
        check_state(trial, t + 0.5 * dt)?;
        self.kernel.rate(trial, k2)?;
        for ((x, &k0), &d) in trial.iter_mut().zip(kappa.iter()).zip(k2.iter()) {
            *x = k0 + 0.5 * dt * d;
        }
        check_state(trial, t + 0.5 * dt)?;
        self.kernel.rate(trial, k3)?;
        for ((x, &k0), &d) in trial.iter_mut().zip(kappa.iter()).zip(k3.iter()) {
            *x = k0 + dt * d;
        }
        check_state(trial, t + dt)?;
        self.kernel.rate(trial, k4)?;
        for i in 0..kappa.len() {
            trial[i] = kappa[i] + dt / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        }
        self.kernel.grid.symmetrize(trial);
        check_state(trial, t + dt)?;
        kappa.copy_from_slice(trial);
        Ok(())
    }
}

/// One RK4 step followed by exact symmetrization.
pub fn step(s: &FlowState, dt: f64) -> Result<FlowState> {
    let mut stepper = Stepper::for_state(s);
    let mut kappa = s.curve.kappa().to_vec();
    stepper.advance(&mut kappa, s.t, dt)?;
    let curve = ProfileCurve::with_grid(s.curve.dim(), s.curve.shared_grid(), kappa)?;
    Ok(FlowState {
        curve,
        t: s.t + dt,
        step_count: s.step_count + 1,
    })
}

/// Integrate up to exactly `t_end` (the last step is shortened).
pub fn evolve_until(s0: &FlowState, cfg: &SolverConfig, t_end: f64) -> Result<FlowState> {
    cfg.validate()?;
    let mut stepper = Stepper::for_state(s0);
    let mut kappa = s0.curve.kappa().to_vec();
    let spacing = s0.curve.grid().spacing();
    let mut t = s0.t;
    let mut steps = s0.step_count;
    while t < t_end {
        let mut dt = stable_dt_for(&kappa, spacing, cfg.safety);
        if t + dt >= t_end {
            dt = t_end - t;
        }
        stepper.advance(&mut kappa, t, dt)?;
        t = if t + dt >= t_end { t_end } else { t + dt };
        steps += 1;
    }
    Ok(FlowState {
        curve: ProfileCurve::with_grid(s0.curve.dim(), s0.curve.shared_grid(), kappa)?,
        t,
        step_count: steps,
    })
}

/// Integrate until `max κ ≥ κ_max_stop` or `A ≤ A_stop`, recording
/// diagnostics.
///
/// Snapshots are taken at the initial state, at the first step past every
/// multiple of the stride, whenever the area has dropped below
/// [`AREA_SNAPSHOT_RATIO`] times its value at the previous snapshot (so the
/// final approach to extinction stays resolved), and at the terminating step. The observer sees every snapshot as it is recorded.
pub fn evolve<F>(s0: &FlowState, cfg: &SolverConfig, mut observer: F) -> Result<RunRecord>
where
    F: FnMut(&Snapshot),
{
    cfg.validate()?;
    if s0.curve.kappa().len() != cfg.grid_size {
        return Err(Error::InvalidConfig(format!(
            "state has {} nodes but configuration expects {}",
            s0.curve.kappa().len(),
            cfg.grid_size
        )));
    }
    let grid = s0.curve.shared_grid();
    let dim = s0.curve.dim();
    let spacing = grid.spacing();
    let mut stepper = Stepper::for_state(s0);
    let mut kappa = s0.curve.kappa().to_vec();
    let mut t = s0.t;
    let mut steps = s0.step_count;
    let mut dt_max = 0.0f64;
    let mut x = vec![0.0; kappa.len()];
    let mut y = vec![0.0; kappa.len()];

    let mut snapshots = Vec::new();
    let mut record = |kappa: &[f64], t: f64, snapshots: &mut Vec<Snapshot>| -> Result<f64> {
        let curve = ProfileCurve::with_grid(dim, Arc::clone(&grid), kappa.to_vec())?;
        let diagnostics = Diagnostics::measure(&curve, t, cfg.edge_delta)?;
        let area = diagnostics.area;
        let snap = Snapshot {
            diagnostics,
            kappa: kappa.to_vec(),
        };
        observer(&snap);
        snapshots.push(snap);
        Ok(area)
    };

    let mut last_area = record(&kappa, t, &mut snapshots)?;
    let mut next_snapshot = t + cfg.snapshot_stride;
    let termination = loop {
        let dt = stable_dt_for(&kappa, spacing, cfg.safety);
        stepper.advance(&mut kappa, t, dt)?;
        t += dt;
        steps += 1;
        dt_max = dt_max.max(dt);

        let kmax = kappa.iter().fold(0.0f64, |a, &k| a.max(k));
        profile::x_into(&grid, &kappa, &mut x);
        profile::y_into(&grid, &kappa, &mut y);
        let area = profile::Coordinates {
            x: std::mem::take(&mut x),
            y: std::mem::take(&mut y),
        };
        let a = profile::enclosed_area(&grid, &kappa, &area);
        x = area.x;
        y = area.y;

        let cause = if kmax >= cfg.kappa_max_stop {
            Some(Termination::CurvatureBlowup)
        } else if a <= cfg.area_stop {
            Some(Termination::AreaExhausted)
        } else {
            None
        };
        if cause.is_some() || t >= next_snapshot || a <= AREA_SNAPSHOT_RATIO * last_area {
            last_area = record(&kappa, t, &mut snapshots)?;
            if cfg.snapshot_stride == 0.0 {
                next_snapshot = t;
            }
            while next_snapshot <= t && cfg.snapshot_stride > 0.0 {
                next_snapshot += cfg.snapshot_stride;
            }
        }
        if let Some(cause) = cause {
            break cause;
        }
    };

    let mut run = RunRecord {
        dim,
        oval_age: None,
        config: *cfg,
        start_time: s0.t,
        snapshots,
        termination,
        extinction_time: None,
        area_offset: 0.0,
        calibrated_extinction: None,
        dt_max,
        steps: steps - s0.step_count,
    };
    run.extinction_time = estimate_extinction(&run).ok();
    run.finalize();
    Ok(run)
}

/// Area ratio between consecutive snapshots that forces a new one.
pub const AREA_SNAPSHOT_RATIO: f64 = 0.875;

/// Number of trailing snapshots used for the extinction fit.
pub const EXTINCTION_WINDOW: usize = 8;

/// Extrapolate the enclosed area linearly to zero using a least-squares fit
/// over the final snapshots; returns the extinction time on the run's clock.
pub fn estimate_extinction(r: &RunRecord) -> Result<f64> {
    extrapolate_area(r, 0.0)
}

/// Zero of the least-squares line through `A + offset` over the final
/// snapshots.
pub fn extrapolate_area(r: &RunRecord, offset: f64) -> Result<f64> {
    let m = r.snapshots.len();
    if m < EXTINCTION_WINDOW {
        return Err(Error::InsufficientData {
            needed: EXTINCTION_WINDOW,
            got: m,
        });
    }
    let window = &r.snapshots[m - EXTINCTION_WINDOW..];
    let t_ref = window[EXTINCTION_WINDOW - 1].diagnostics.t;
    let pts: Vec<(f64, f64)> = window
        .iter()
        .map(|s| (s.diagnostics.t - t_ref, s.diagnostics.area + offset))
        .collect();
    let k = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let ma = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - ma)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let slope = sxy / sxx;
    if !(slope < 0.0) {
        return Err(Error::NonDecreasingArea(slope));
    }
    let intercept = ma - slope * mt;
    Ok(t_ref - intercept / slope)
}
