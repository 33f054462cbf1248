//! Approximating runs from oval slices and the numerical checks applied to
//! them.
//!
//! Runs start at time 0 on their own clock. Every time-indexed bound is
//! evaluated on the shifted clock `t − T_est`, on which extinction sits at 0
//! and the run starts at `−T_est`.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oval::{sample_profile, OvalTime};
use crate::profile::{ProfileCurve, UpperGraph};
use crate::record::{self, RunRecord, Snapshot};
use crate::solver::{evolve, FlowState, SolverConfig};

/// Upper bound on the number of stride snapshots in a default run.
pub const MAX_STRIDE_SNAPSHOTS: f64 = 1990.0;

/// Snapshot stride that keeps an approximant run from age `R` under 2000
/// snapshots, using the a priori bound `T ≤ R + log 2`.
pub fn default_stride(oval_age: f64) -> f64 {
    (oval_age + LN_2) / MAX_STRIDE_SNAPSHOTS
}

/// Evolve the oval slice of age `R` with `n`-dimensional rotational
/// symmetry until the stop criteria trigger, calibrating against the exact
/// initial area `2πR`.
pub fn run_approximant(n: usize, oval_age: f64, cfg: &SolverConfig) -> Result<RunRecord> {
    if !(oval_age > 0.0 && oval_age.is_finite()) {
        return Err(Error::NonNegativeTime(-oval_age));
    }
    let curve = sample_profile(OvalTime::new(-oval_age)?, cfg.grid_size, n)?;
    let mut run = evolve(&FlowState::new(curve, 0.0), cfg, |_| {})?;
    run.oval_age = Some(oval_age);
    run.calibrate_area(2.0 * PI * oval_age);
    Ok(run)
}

/// Extinction time on the run's clock, required by every shifted-clock check.
pub fn extinction(r: &RunRecord) -> Result<f64> {
    r.extinction_time.ok_or(Error::InsufficientData {
        needed: crate::solver::EXTINCTION_WINDOW,
        got: r.snapshots.len(),
    })
}

/// `10·(Δθ² + dt_max)`.
pub fn tolerance(r: &RunRecord) -> f64 {
    let d = 2.0 * PI / r.config.grid_size as f64;
    10.0 * (d * d + r.dt_max)
}

fn oval_factor(r: &RunRecord) -> f64 {
    // 1 − e^{−R}; runs that did not start from an oval use the R → ∞ value
    r.oval_age.map_or(1.0, |age| -(-age).exp_m1())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub id: String,
    /// Worst normalized margin; non-negative means the bound holds. Absent
    /// when no snapshot falls in the bound's time window.
    pub margin: Option<f64>,
    /// Shifted-clock time of the worst margin.
    pub worst_t: Option<f64>,
    pub pass: bool,
    /// The bound has no content for this run (λ-bounds when `n = 1`).
    #[serde(default)]
    pub vacuous: bool,
    /// Whether the bound contributes to the overall verdict.
    #[serde(default = "default_true")]
    pub gated: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub tolerance: f64,
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn get(&self, id: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn passed(&self) -> usize {
        self.entries.iter().filter(|e| e.gated && e.pass).count()
    }

    pub fn failed(&self) -> usize {
        self.entries.iter().filter(|e| e.gated && !e.pass).count()
    }

    pub fn all_pass(&self) -> bool {
        self.failed() == 0
    }

    /// `(id, pass)` for every gated entry, in order.
    pub fn verdicts(&self) -> Vec<(String, bool)> {
        self.entries
            .iter()
            .filter(|e| e.gated)
            .map(|e| (e.id.clone(), e.pass))
            .collect()
    }

    fn push(&mut self, tracker: Tracker) {
        let observed = tracker.margin.is_finite();
        let vacuous = tracker.vacuous || !observed;
        let pass = vacuous || tracker.margin >= -self.tolerance;
        self.entries.push(BoundEntry {
            id: tracker.id.to_string(),
            margin: observed.then_some(tracker.margin),
            worst_t: observed.then_some(tracker.worst_t),
            pass,
            vacuous,
            gated: tracker.gated,
        });
    }
}

struct Tracker {
    id: &'static str,
    margin: f64,
    worst_t: f64,
    vacuous: bool,
    gated: bool,
}

impl Tracker {
    fn new(id: &'static str) -> Self {
        Tracker {
            id,
            margin: f64::INFINITY,
            worst_t: f64::NAN,
            vacuous: false,
            gated: true,
        }
    }

    fn observe(&mut self, margin: f64, t: f64) {
        if margin < self.margin {
            self.margin = margin;
            self.worst_t = t;
        }
    }
}

/// Snapshots strictly before extinction on the shifted clock, with their
/// shifted times.
fn shifted(r: &RunRecord) -> Result<Vec<(f64, &Snapshot)>> {
    let te = extinction(r)?;
    Ok(r.snapshots
        .iter()
        .map(|s| (s.diagnostics.t - te, s))
        .filter(|(t, _)| *t < 0.0)
        .collect())
}

/// Evaluate every gated bound along the run.
pub fn check_inequalities(r: &RunRecord) -> Result<BoundReport> {
    let te = extinction(r)?;
    let n = r.dim as f64;
    let factor = oval_factor(r);
    let mut report = BoundReport {
        tolerance: tolerance(r),
        entries: Vec::new(),
    };

    let mut hl_lower = Tracker::new("hl_lower");
    let mut hl_upper = Tracker::new("hl_upper");
    let mut area_lower = Tracker::new("area_lower");
    let mut area_upper = Tracker::new("area_upper");
    let mut hmin_circle = Tracker::new("Hmin_circle");
    let mut h_lower = Tracker::new("h_lower");
    let mut h_lower_limit = Tracker::new("h_lower_limit");
    let mut l_upper = Tracker::new("l_upper");
    let mut l_gt_h = Tracker::new("l_gt_h");
    let mut hmax_upper = Tracker::new("Hmax_upper");
    let mut kappa_ge_lambda = Tracker::new("kappa_ge_lambda");
    let mut lambda_decay = Tracker::new("lambda_decay");
    let mut kappa_theta = Tracker::new("kappa_theta_pos");
    let mut hmin_pole = Tracker::new("Hmin_at_pole");
    let mut hmax_tip = Tracker::new("Hmax_at_tip");
    let mut hmin_decay = Tracker::new("Hmin_decay");
    let mut slab = Tracker::new("slab");

    for (t, s) in shifted(r)? {
        let d = &s.diagnostics;
        let curve = s.curve(r.dim)?;
        let grid = curve.grid();
        let f = curve.derived()?;
        let hl = d.h * d.ell;

        hl_lower.observe(hl / (-FRAC_PI_2 * t) - 1.0, t);
        hl_upper.observe(1.0 - hl / (-n * PI * t), t);
        area_lower.observe(d.area / (-2.0 * PI * t) - 1.0, t);
        area_upper.observe(1.0 - d.area / (-2.0 * n * PI * t), t);
        hmin_circle.observe(1.0 - d.h_min * (d.ell * d.ell + d.h * d.h) / (2.0 * n * d.h), t);
        let envelope = FRAC_PI_2 * (2.0 * n / t).exp();
        h_lower.observe(d.h / (factor * envelope) - 1.0, t);
        h_lower_limit.observe(d.h / envelope - 1.0, t);
        let l_bound = -2.0 * n * (-2.0 * n / t).exp() * t / factor;
        l_upper.observe(1.0 - d.ell / l_bound, t);
        l_gt_h.observe(d.ell / d.h - 1.0, t);
        if t >= -te / 2.0 {
            let h_bound = 2.0 * n * 2f64.sqrt() * (-2.0 * n / t).exp() / factor;
            hmax_upper.observe(1.0 - d.h_max / h_bound, t);
        }
        let k = curve.kappa();
        let worst_kl = k
            .iter()
            .zip(&f.lambda)
            .map(|(&k, &l)| (k - l) / k)
            .fold(f64::INFINITY, f64::min);
        kappa_ge_lambda.observe(worst_kl, t);
        if t <= -1.0 {
            lambda_decay.observe(1.0 - d.lambda_max * (-t), t);
        }
        let worst_slope = (grid.right_pole()..grid.tip())
            .map(|i| (k[i + 1] - k[i]) / k[i + 1])
            .fold(f64::INFINITY, f64::min);
        kappa_theta.observe(worst_slope, t);
        let hp = f.mean_curvature[grid.right_pole()];
        let ht = f.mean_curvature[grid.tip()];
        let worst_min = f
            .mean_curvature
            .iter()
            .map(|&h| (h - hp) / hp)
            .fold(f64::INFINITY, f64::min);
        hmin_pole.observe(worst_min, t);
        let worst_max = f
            .mean_curvature
            .iter()
            .map(|&h| (ht - h) / ht)
            .fold(f64::INFINITY, f64::min);
        hmax_tip.observe(worst_max, t);
        hmin_decay.observe(1.0 - d.h_min * t * t / (n * PI), t);
        slab.observe(1.0 - d.h / FRAC_PI_2, t);
    }
    if r.dim == 1 {
        kappa_ge_lambda.vacuous = true;
        lambda_decay.vacuous = true;
    }
    for tr in [
        hl_lower,
        hl_upper,
        area_lower,
        area_upper,
        hmin_circle,
        h_lower,
        h_lower_limit,
        l_upper,
        l_gt_h,
        hmax_upper,
        kappa_ge_lambda,
        lambda_decay,
        kappa_theta,
        hmin_pole,
        hmax_tip,
        hmin_decay,
        slab,
    ] {
        report.push(tr);
    }
    Ok(report)
}

/// Relative tolerance of the Harnack checks, as a fraction of `max H(π)`.
pub const HARNACK_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarnackReport {
    /// Minimum over snapshot pairs `t < s` of
    /// `H(π,s)·√((s+T)/(t+T)) − H(π,t)`.
    pub worst_margin: f64,
    /// Shifted-clock times `(t, s)` of the worst pair.
    pub worst_pair: (f64, f64),
    /// Minimum of `H(π,s) − H(π,t)` over consecutive snapshots.
    pub monotone_margin: f64,
    pub h_tip_max: f64,
    pub pass: bool,
}

/// Harnack inequality at the tip over all snapshot pairs.
pub fn check_harnack(r: &RunRecord) -> Result<HarnackReport> {
    let te = extinction(r)?;
    let pts: Vec<(f64, f64)> = r
        .snapshots
        .iter()
        .map(|s| (s.diagnostics.t - r.start_time, s.diagnostics.h_tip))
        .collect();
    let h_tip_max = pts.iter().map(|p| p.1).fold(0.0, f64::max);
    let mut worst = f64::INFINITY;
    let mut worst_pair = (f64::NAN, f64::NAN);
    for (j, &(s, hs)) in pts.iter().enumerate() {
        for &(t, ht) in &pts[..j] {
            if t <= 0.0 {
                continue;
            }
            let m = hs * (s / t).sqrt() - ht;
            if m < worst {
                worst = m;
                worst_pair = (t + r.start_time - te, s + r.start_time - te);
            }
        }
    }
    let monotone_margin = pts
        .windows(2)
        .map(|w| w[1].1 - w[0].1)
        .fold(f64::INFINITY, f64::min);
    let tol = HARNACK_TOLERANCE * h_tip_max;
    Ok(HarnackReport {
        worst_margin: worst,
        worst_pair,
        monotone_margin,
        h_tip_max,
        pass: worst >= -tol && monotone_margin >= -tol,
    })
}

/// Largest residual of the area identity over interior snapshots.
pub fn area_identity_residual(r: &RunRecord) -> Result<f64> {
    if r.snapshots.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: r.snapshots.len(),
        });
    }
    Ok(record::area_residuals(r)
        .into_iter()
        .flatten()
        .fold(0.0, f64::max))
}

/// Sup over `|x| ≤ π/2 − δ` of `|u(x) − ℓ − log cos x|`, where `u` is the
/// upper branch as a graph and `ℓ` its height at the tip.
pub fn edge_grim_gap(c: &ProfileCurve, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < std::f64::consts::FRAC_PI_4) {
        return Err(Error::InvalidConfig(
            "edge window delta must lie in (0, pi/4)".to_string(),
        ));
    }
    record::edge_gap_of(c, &c.reconstruct()?, delta)
}

/// Edge gap of the snapshot closest to the middle of the run on the
/// shifted clock, `t = −T_est/2`.
pub fn mid_run_edge_gap(r: &RunRecord) -> Result<(f64, f64)> {
    let te = extinction(r)?;
    let target = r.start_time + 0.5 * (te - r.start_time);
    let s = r
        .snapshots
        .iter()
        .min_by(|a, b| {
            let da = (a.diagnostics.t - target).abs();
            let db = (b.diagnostics.t - target).abs();
            da.total_cmp(&db)
        })
        .ok_or(Error::InsufficientData { needed: 1, got: 0 })?;
    let gap = edge_grim_gap(&s.curve(r.dim)?, r.config.edge_delta)?;
    Ok((s.diagnostics.t - te, gap))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplacementFit {
    /// Mean of `g(t) = ℓ + t − (n−1) log(−t)` over the second quarter.
    pub c_est: f64,
    /// Difference between the first- and second-quarter means.
    pub stability: f64,
}

/// `g(t) = ℓ(t) + t − (n−1) log(−t)` on the shifted clock.
pub fn displacement_g(dim: usize, t: f64, ell: f64) -> f64 {
    ell + t - (dim as f64 - 1.0) * (-t).ln()
}

/// Estimate the displacement constant from the first half of the run, on
/// the calibrated clock when the run has one.
pub fn fit_displacement_constant(r: &RunRecord) -> Result<DisplacementFit> {
    let te = match r.calibrated_extinction {
        Some(t) => t,
        None => extinction(r)?,
    };
    let span = te - r.start_time;
    let required = r.oval_age.map_or(0.0, |age| 0.5 * age);
    if span < required || span <= 0.0 {
        return Err(Error::SpanTooShort { span, required });
    }
    let mean_over = |lo: f64, hi: f64| -> Result<f64> {
        let g: Vec<f64> = r
            .snapshots
            .iter()
            .map(|s| (s.diagnostics.t - te, s.diagnostics.ell))
            .filter(|(t, _)| *t >= lo && *t < hi)
            .map(|(t, ell)| displacement_g(r.dim, t, ell))
            .collect();
        if g.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        Ok(g.iter().sum::<f64>() / g.len() as f64)
    };
    let first = mean_over(-span, -0.75 * span)?;
    let second = mean_over(-0.75 * span, -0.5 * span)?;
    Ok(DisplacementFit {
        c_est: second,
        stability: (first - second).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedReport {
    /// Minimum of `H − |cos θ|` over nodes and snapshots with `t ≤ −1`.
    pub weak_margin: f64,
    pub worst_t: f64,
    /// Same against `|cos θ|(1 + (n−1)/(−t))`; reported, never gated.
    pub strong_margin: f64,
    pub strong_worst_t: f64,
}

pub fn check_speed_lower(r: &RunRecord) -> Result<SpeedReport> {
    let weight = r.dim as f64 - 1.0;
    let mut weak = Tracker::new("speed_lower");
    let mut strong = Tracker::new("speed_lower_strong");
    for (t, s) in shifted(r)? {
        if t > -1.0 {
            continue;
        }
        let curve = s.curve(r.dim)?;
        let f = curve.derived()?;
        for (&h, &c) in f.mean_curvature.iter().zip(curve.grid().cos()) {
            weak.observe(h - c.abs(), t);
            strong.observe(h - c.abs() * (1.0 + weight / (-t)), t);
        }
    }
    Ok(SpeedReport {
        weak_margin: weak.margin,
        worst_t: weak.worst_t,
        strong_margin: strong.margin,
        strong_worst_t: strong.worst_t,
    })
}

/// Minimum over snapshots and graph nodes with `nπ/(π/2−|x|) ≤ −t/2` of
/// `u(x,t)/(−t − nπ/(π/2−|x|)) − 1`.
pub fn check_graph_height(r: &RunRecord) -> Result<(f64, f64)> {
    let n = r.dim as f64;
    let mut tr = Tracker::new("graph_height");
    for (t, s) in shifted(r)? {
        let curve = s.curve(r.dim)?;
        let coords = curve.reconstruct()?;
        let graph = UpperGraph::new(curve.grid(), &coords);
        for (&x, &u) in graph.xs.iter().zip(&graph.ys) {
            let gap = FRAC_PI_2 - x.abs();
            if gap <= 0.0 {
                continue;
            }
            let pen = n * PI / gap;
            if pen <= -t / 2.0 {
                tr.observe(u / (-t - pen) - 1.0, t);
            }
        }
    }
    Ok((tr.margin, tr.worst_t))
}

/// Relative error of the estimated extinction time of a round sphere of
/// radius `r₀` against `r₀²/(2n)`.
pub fn sphere_benchmark(n: usize, r0: f64, cfg: &SolverConfig) -> Result<f64> {
    let curve = ProfileCurve::round(n, cfg.grid_size, r0)?;
    let run = evolve(&FlowState::new(curve, 0.0), cfg, |_| {})?;
    let exact = r0 * r0 / (2.0 * n as f64);
    Ok((extinction(&run)? - exact).abs() / exact)
}

/// Bounds, Harnack, speed and graph-height checks combined into one report.
pub fn full_report(r: &RunRecord) -> Result<BoundReport> {
    let mut report = check_inequalities(r)?;
    let harnack = check_harnack(r)?;
    report.entries.push(BoundEntry {
        id: "harnack".to_string(),
        margin: Some(harnack.worst_margin.min(harnack.monotone_margin) / harnack.h_tip_max),
        worst_t: Some(harnack.worst_pair.1),
        pass: harnack.pass,
        vacuous: false,
        gated: true,
    });
    let speed = check_speed_lower(r)?;
    let mut weak = Tracker::new("speed_lower");
    weak.margin = speed.weak_margin;
    weak.worst_t = speed.worst_t;
    report.push(weak);
    let mut strong = Tracker::new("speed_lower_strong");
    strong.margin = speed.strong_margin;
    strong.worst_t = speed.strong_worst_t;
    strong.gated = false;
    report.push(strong);
    let (margin, worst_t) = check_graph_height(r)?;
    let mut graph = Tracker::new("graph_height");
    graph.margin = margin;
    graph.worst_t = worst_t;
    report.push(graph);
    Ok(report)
}
