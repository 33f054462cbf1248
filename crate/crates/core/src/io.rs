//! Flat-file output: per-snapshot CSV time series, JSON run records and JSON
//! verification reports.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{BoundEntry, BoundReport, DisplacementFit};
use crate::record::RunRecord;
use crate::solver::SolverConfig;

pub const TIMESERIES_HEADER: &str = "t,h,l,A,Hmin,Hmax,kmin,lambdamax,area_residual,edge_gap,g";

fn num(out: &mut String, v: Option<f64>) {
    if let Some(v) = v.filter(|v| v.is_finite()) {
        let _ = write!(out, "{v:.15e}");
    }
}

/// CSV text of the time series. Times are shifted by the extinction estimate
/// when one exists; absent or undefined values are left empty.
pub fn timeseries_csv(r: &RunRecord) -> String {
    let shift = r.extinction_time.unwrap_or(0.0);
    let mut out = String::with_capacity(200 * (r.snapshots.len() + 1));
    out.push_str(TIMESERIES_HEADER);
    out.push('\n');
    for s in &r.snapshots {
        let d = &s.diagnostics;
        let t = d.t - shift;
        let g = r
            .extinction_time
            .map(|_| crate::harness::displacement_g(r.dim, t, d.ell));
        let fields = [
            Some(t),
            Some(d.h),
            Some(d.ell),
            Some(d.area),
            Some(d.h_min),
            Some(d.h_max),
            Some(d.kappa_min),
            Some(d.lambda_max),
            d.area_residual,
            d.edge_gap,
            g,
        ];
        for (i, f) in fields.into_iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            num(&mut out, f);
        }
        out.push('\n');
    }
    out
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn write_timeseries(r: &RunRecord, path: &Path) -> Result<()> {
    write_text(path, &timeseries_csv(r))
}

pub fn write_record(r: &RunRecord, path: &Path) -> Result<()> {
    let text = serde_json::to_string(r).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    write_text(path, &text)
}

pub fn read_record(path: &Path) -> Result<RunRecord> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub n: usize,
    #[serde(rename = "R")]
    pub oval_age: Option<f64>,
    pub config: SolverConfig,
    pub termination: crate::record::Termination,
    #[serde(rename = "T_est")]
    pub extinction_time: Option<f64>,
    #[serde(rename = "T_calibrated")]
    pub calibrated_extinction: Option<f64>,
    pub dt_max: f64,
    pub steps: u64,
    pub snapshots: usize,
    pub tolerance: f64,
}

impl RunSummary {
    pub fn of(r: &RunRecord) -> Self {
        RunSummary {
            n: r.dim,
            oval_age: r.oval_age,
            config: r.config,
            termination: r.termination,
            extinction_time: r.extinction_time,
            calibrated_extinction: r.calibrated_extinction,
            dt_max: r.dt_max,
            steps: r.steps,
            snapshots: r.snapshots.len(),
            tolerance: crate::harness::tolerance(r),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    #[serde(rename = "C_est")]
    pub c_est: Option<f64>,
    pub stability: Option<f64>,
}

impl From<Option<DisplacementFit>> for FitSummary {
    fn from(f: Option<DisplacementFit>) -> Self {
        FitSummary {
            c_est: f.map(|f| f.c_est),
            stability: f.map(|f| f.stability),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub run: RunSummary,
    pub bounds: Vec<BoundEntry>,
    pub fits: FitSummary,
    pub summary: Tally,
}

impl VerificationReport {
    pub fn new(r: &RunRecord, b: &BoundReport, fit: Option<DisplacementFit>) -> Self {
        VerificationReport {
            run: RunSummary::of(r),
            bounds: b.entries.clone(),
            fits: fit.into(),
            summary: Tally {
                passed: b.passed(),
                failed: b.failed(),
            },
        }
    }
}

pub fn write_report(report: &VerificationReport, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(report).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    write_text(path, &text)
}

pub fn read_report(path: &Path) -> Result<VerificationReport> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// CSV rows `theta,kappa,x,y,residual` of the closed-form oval on the grid.
pub fn oval_csv(t: crate::oval::OvalTime, n_grid: usize) -> Result<String> {
    let grid = crate::grid::TurningGrid::new(n_grid)?;
    let mut out = String::from("theta,kappa,x,y,residual\n");
    for i in 0..n_grid {
        let theta = grid.theta(i);
        let p = crate::oval::oval_point(theta, t);
        let _ = writeln!(
            out,
            "{:.15e},{:.15e},{:.15e},{:.15e},{:.15e}",
            theta,
            crate::oval::oval_curvature(theta, t),
            p.x,
            p.y,
            crate::oval::oval_residual(p, t)
        );
    }
    Ok(out)
}

pub fn write_oval(t: crate::oval::OvalTime, n_grid: usize, path: &Path) -> Result<()> {
    write_text(path, &oval_csv(t, n_grid)?)
}
