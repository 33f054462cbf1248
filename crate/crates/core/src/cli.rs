//! Command-line configuration and the subcommand drivers behind the
//! `pancake` binary.
//!
//! Values come from flags, then the `PANCAKE_OUT_DIR` environment variable
//! (output directory only), then an optional TOML key-value file, then
//! built-in defaults.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::harness::{self, MAX_STRIDE_SNAPSHOTS};
use crate::io;
use crate::oval::OvalTime;
use crate::record::RunRecord;
use crate::solver::SolverConfig;

pub const OUT_DIR_ENV: &str = "PANCAKE_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "pancake",
    version,
    about = "Evolve rotated Angenent-oval slices by mean curvature flow and check the pancake estimates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Oval,
    Run,
    Verify,
    Fit,
    Benchmark,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump the closed-form oval at time t as CSV (theta, kappa, x, y, residual)
    Oval(Flags),
    /// Evolve an oval slice and write the time series and the run record
    Run(Flags),
    /// Check every bound along a run; exit status 0 iff all gated bounds pass
    Verify(Flags),
    /// Estimate the displacement constant C
    Fit(Flags),
    /// Extinction time of a shrinking round sphere against r0^2/(2n)
    Benchmark(Flags),
}

#[derive(Debug, Clone, Default, Args)]
#[command(allow_negative_numbers = true)]
pub struct Flags {
    /// Dimension n of the rotation sphere
    #[arg(long = "n")]
    pub n: Option<usize>,
    /// Age R of the starting oval slice
    #[arg(long = "R")]
    pub oval_age: Option<f64>,
    /// Grid size N (divisible by 4)
    #[arg(long = "N")]
    pub grid_size: Option<usize>,
    #[arg(long)]
    pub safety: Option<f64>,
    #[arg(long = "kappa-max-stop")]
    pub kappa_max_stop: Option<f64>,
    #[arg(long = "area-stop")]
    pub area_stop: Option<f64>,
    /// Time between snapshots; 0 records every step
    #[arg(long)]
    pub stride: Option<f64>,
    /// Edge window delta for the Grim gap
    #[arg(long)]
    pub delta: Option<f64>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Oval time for `oval` (negative)
    #[arg(long = "t")]
    pub oval_time: Option<f64>,
    /// Initial sphere radius for `benchmark`
    #[arg(long)]
    pub r0: Option<f64>,
    /// Read a run record instead of running (`verify`, `fit`)
    #[arg(long)]
    pub record: Option<PathBuf>,
    /// TOML file of default values
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Keys accepted in the configuration file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileValues {
    pub n: Option<usize>,
    #[serde(rename = "R")]
    pub oval_age: Option<f64>,
    #[serde(rename = "N")]
    pub grid_size: Option<usize>,
    pub safety: Option<f64>,
    pub kappa_max_stop: Option<f64>,
    pub area_stop: Option<f64>,
    pub stride: Option<f64>,
    pub delta: Option<f64>,
    pub out: Option<PathBuf>,
    pub t: Option<f64>,
    pub r0: Option<f64>,
    pub record: Option<PathBuf>,
}

impl FileValues {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub command: CommandKind,
    pub n: usize,
    pub oval_age: f64,
    pub oval_time: f64,
    pub r0: f64,
    pub solver: SolverConfig,
    pub out_dir: PathBuf,
    pub record: Option<PathBuf>,
}

pub const DEFAULT_DIMENSION: usize = 2;
pub const DEFAULT_OVAL_AGE: f64 = 10.0;
pub const DEFAULT_OVAL_TIME: f64 = -1.0;

impl CliConfig {
    /// Merge parsed flags over file values over defaults and validate.
    pub fn resolve(command: CommandKind, flags: Flags, file: FileValues) -> Result<Self> {
        let n = flags.n.or(file.n).unwrap_or(DEFAULT_DIMENSION);
        if n == 0 {
            return Err(Error::InvalidDimension(n));
        }
        let oval_age = flags.oval_age.or(file.oval_age).unwrap_or(DEFAULT_OVAL_AGE);
        if !(oval_age > 0.0 && oval_age.is_finite()) {
            return Err(Error::Config(format!("R must be positive, got {oval_age}")));
        }
        let oval_time = flags.oval_time.or(file.t).unwrap_or(DEFAULT_OVAL_TIME);
        OvalTime::new(oval_time)?;
        let r0 = flags.r0.or(file.r0).unwrap_or(1.0);
        if !(r0 > 0.0 && r0.is_finite()) {
            return Err(Error::Config(format!("r0 must be positive, got {r0}")));
        }
        let defaults = SolverConfig::default();
        let default_stride = match command {
            CommandKind::Benchmark => r0 * r0 / (2.0 * n as f64) / MAX_STRIDE_SNAPSHOTS,
            _ => harness::default_stride(oval_age),
        };
        let solver = SolverConfig {
            grid_size: flags.grid_size.or(file.grid_size).unwrap_or(defaults.grid_size),
            safety: flags.safety.or(file.safety).unwrap_or(defaults.safety),
            kappa_max_stop: flags
                .kappa_max_stop
                .or(file.kappa_max_stop)
                .unwrap_or(defaults.kappa_max_stop),
            area_stop: flags.area_stop.or(file.area_stop).unwrap_or(defaults.area_stop),
            snapshot_stride: flags.stride.or(file.stride).unwrap_or(default_stride),
            edge_delta: flags.delta.or(file.delta).unwrap_or(defaults.edge_delta),
        };
        solver.validate()?;
        let out_dir = flags
            .out
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .or(file.out)
            .unwrap_or_else(|| PathBuf::from("."));
        Ok(CliConfig {
            command,
            n,
            oval_age,
            oval_time,
            r0,
            solver,
            out_dir,
            record: flags.record.or(file.record),
        })
    }
}

fn split(cli: Cli) -> (CommandKind, Flags) {
    match cli.command {
        Command::Oval(f) => (CommandKind::Oval, f),
        Command::Run(f) => (CommandKind::Run, f),
        Command::Verify(f) => (CommandKind::Verify, f),
        Command::Fit(f) => (CommandKind::Fit, f),
        Command::Benchmark(f) => (CommandKind::Benchmark, f),
    }
}

/// Parse `argv` (without the program name) and merge it with `file`, or
/// with the file named by `--config` when `file` is `None`.
pub fn parse_config<I, T>(argv: I, file: Option<&Path>) -> Result<CliConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = std::iter::once(OsString::from("pancake")).chain(argv.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Config(e.to_string()))?;
    from_cli(cli, file)
}

fn from_cli(cli: Cli, file: Option<&Path>) -> Result<CliConfig> {
    let (kind, flags) = split(cli);
    let path = file.map(Path::to_path_buf).or_else(|| flags.config.clone());
    let values = match path {
        Some(p) => FileValues::load(&p)?,
        None => FileValues::default(),
    };
    CliConfig::resolve(kind, flags, values)
}

fn load_or_run(cfg: &CliConfig) -> Result<RunRecord> {
    match &cfg.record {
        Some(p) => io::read_record(p),
        None => harness::run_approximant(cfg.n, cfg.oval_age, &cfg.solver),
    }
}

/// Run one configured subcommand. Returns whether its checks passed.
pub fn execute(cfg: &CliConfig) -> Result<bool> {
    let out = &cfg.out_dir;
    match cfg.command {
        CommandKind::Oval => {
            let path = out.join("oval.csv");
            io::write_oval(OvalTime::new(cfg.oval_time)?, cfg.solver.grid_size, &path)?;
            println!("wrote {}", path.display());
            Ok(true)
        }
        CommandKind::Run => {
            let r = harness::run_approximant(cfg.n, cfg.oval_age, &cfg.solver)?;
            io::write_timeseries(&r, &out.join("timeseries.csv"))?;
            io::write_record(&r, &out.join("record.json"))?;
            println!(
                "n={} R={} N={}: {} steps, {} snapshots, T_est={}",
                r.dim,
                cfg.oval_age,
                r.config.grid_size,
                r.steps,
                r.snapshots.len(),
                r.extinction_time.map_or("none".into(), |t| format!("{t:.6}")),
            );
            println!("wrote {}", out.display());
            Ok(true)
        }
        CommandKind::Verify => {
            let r = load_or_run(cfg)?;
            let bounds = harness::full_report(&r)?;
            let fit = harness::fit_displacement_constant(&r).ok();
            let report = io::VerificationReport::new(&r, &bounds, fit);
            for e in &report.bounds {
                let margin = e.margin.map_or("-".to_string(), |m| format!("{m:+.3e}"));
                let status = match (e.vacuous, e.pass, e.gated) {
                    (true, _, _) => "vacuous",
                    (_, true, _) => "pass",
                    (_, false, true) => "FAIL",
                    (_, false, false) => "fail (not gated)",
                };
                println!("{:<20} {:>11}  {}", e.id, margin, status);
            }
            println!(
                "passed {} failed {}",
                report.summary.passed, report.summary.failed
            );
            io::write_report(&report, &out.join("report.json"))?;
            Ok(bounds.all_pass())
        }
        CommandKind::Fit => {
            let r = load_or_run(cfg)?;
            let fit = harness::fit_displacement_constant(&r)?;
            println!("C_est {:.9} stability {:.3e}", fit.c_est, fit.stability);
            Ok(true)
        }
        CommandKind::Benchmark => {
            let err = harness::sphere_benchmark(cfg.n, cfg.r0, &cfg.solver)?;
            println!(
                "n={} r0={} N={}: relative extinction error {err:.3e}",
                cfg.n, cfg.r0, cfg.solver.grid_size
            );
            Ok(err < 0.01)
        }
    }
}

/// Entry point used by the binary.
pub fn main_with<I, T>(argv: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let result = from_cli(cli, None).and_then(|cfg| execute(&cfg));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
