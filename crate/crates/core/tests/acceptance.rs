//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Long runs are shared between criteria and
//! executed one after another.

use std::f64::consts::{FRAC_PI_8, LN_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};

use pancake::harness::{
    area_identity_residual, check_harnack, check_inequalities, default_stride,
    fit_displacement_constant, mid_run_edge_gap, run_approximant, sphere_benchmark,
    edge_grim_gap, MAX_STRIDE_SNAPSHOTS,
};
use pancake::oval::{oval_curvature, oval_edge_gap, oval_point, oval_residual, sample_profile};
use pancake::solver::{evolve_until, FlowState};
use pancake::{OvalTime, ProfileCurve, Result, RunRecord, SolverConfig};

struct Suite {
    failed: usize,
}

impl Suite {
    fn report(&mut self, id: &str, pass: bool, detail: String) {
        if !pass {
            self.failed += 1;
        }
        println!("[{}] {id}: {detail}", if pass { "PASS" } else { "FAIL" });
    }

    fn check(&mut self, id: &str, outcome: Result<(bool, String)>) {
        match outcome {
            Ok((pass, detail)) => self.report(id, pass, detail),
            Err(e) => self.report(id, false, format!("error: {e}")),
        }
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn approximant(n: usize, age: f64, grid: usize) -> Result<(RunRecord, Duration)> {
    let cfg = SolverConfig {
        grid_size: grid,
        snapshot_stride: default_stride(age),
        ..SolverConfig::default()
    };
    let start = Instant::now();
    let r = run_approximant(n, age, &cfg)?;
    Ok((r, start.elapsed()))
}

fn closed_form_residual() -> Result<(bool, String)> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for i in 0..100 {
        let t = -0.1 - 19.9 * i as f64 / 99.0;
        let time = OvalTime::new(t)?;
        for j in 0..100 {
            let theta = 2.0 * PI * (j as f64 + 0.5) / 100.0;
            worst = worst.max(oval_residual(oval_point(theta, time), time).abs());
        }
    }
    let el = start.elapsed();
    Ok((
        worst < 1e-10 && el < Duration::from_secs(1),
        format!("max implicit residual {worst:.2e} over 10^4 samples ({:.3} s)", secs(el)),
    ))
}

fn oracle_error(n: usize) -> Result<f64> {
    let s0 = FlowState::new(sample_profile(OvalTime::new(-2.0)?, n, 1)?, -2.0);
    let s = evolve_until(&s0, &SolverConfig::with_grid(n), -1.0)?;
    let target = OvalTime::new(-1.0)?;
    let grid = s.curve.grid();
    Ok(s.curve
        .kappa()
        .iter()
        .enumerate()
        .map(|(i, k)| {
            let exact = oval_curvature(grid.theta(i), target);
            (k - exact).abs() / exact
        })
        .fold(0.0, f64::max))
}

fn curve_shortening_oracle() -> Result<(bool, String)> {
    let start = Instant::now();
    let e512 = oracle_error(512)?;
    let el = start.elapsed();
    let e1024 = oracle_error(1024)?;
    let ratio = e512 / e1024;
    Ok((
        e512 < 1e-3 && (3.0..=5.0).contains(&ratio) && el < Duration::from_secs(30),
        format!(
            "max rel error {e512:.3e} at N=512 ({:.2} s), {e1024:.3e} at N=1024, ratio {ratio:.2}",
            secs(el)
        ),
    ))
}

fn sphere_extinction() -> Result<(bool, String)> {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in 1..=3 {
        let exact = 1.0 / (2.0 * n as f64);
        let cfg = SolverConfig {
            grid_size: 256,
            snapshot_stride: exact / MAX_STRIDE_SNAPSHOTS,
            ..SolverConfig::default()
        };
        let start = Instant::now();
        let err = sphere_benchmark(n, 1.0, &cfg)?;
        let el = start.elapsed();
        pass &= err < 0.01 && el < Duration::from_secs(30);
        parts.push(format!("n={n} rel error {err:.2e} ({:.2} s)", secs(el)));
    }
    Ok((pass, parts.join(", ")))
}

fn extinction_bracket(r: &RunRecord, el: Duration) -> Result<(bool, String)> {
    let te = pancake::harness::extinction(r)?;
    Ok((
        (2.49988..=10.6932).contains(&te) && el < Duration::from_secs(300),
        format!("T_est = {te:.5} in [2.49988, 10.6932] ({:.1} s, {} steps)", secs(el), r.steps),
    ))
}

fn inequality_suite(coarse: &RunRecord, fine: &RunRecord) -> Result<(bool, String)> {
    let a = check_inequalities(coarse)?;
    let b = check_inequalities(fine)?;
    let failing: Vec<String> = a
        .entries
        .iter()
        .filter(|e| !e.pass)
        .map(|e| format!("{} {:?}", e.id, e.margin))
        .collect();
    let worst = a
        .entries
        .iter()
        .filter(|e| !e.vacuous)
        .filter_map(|e| e.margin.map(|m| (m, e.id.as_str())))
        .fold((f64::INFINITY, ""), |acc, x| if x.0 < acc.0 { x } else { acc });
    let same = a.verdicts() == b.verdicts();
    Ok((
        a.all_pass() && same,
        format!(
            "{} gated bounds, {} failing {:?}, worst margin {:.2e} ({}), tol {:.2e}; verdicts at N=1024 {}",
            a.entries.len(),
            a.failed(),
            failing,
            worst.0,
            worst.1,
            a.tolerance,
            if same { "identical" } else { "differ" }
        ),
    ))
}

fn area_identity(coarse: &RunRecord, fine: &RunRecord) -> Result<(bool, String)> {
    let (a, b) = (area_identity_residual(coarse)?, area_identity_residual(fine)?);
    Ok((
        a < 1e-2 && b < 2.5e-3,
        format!("max residual {a:.3e} at N=512, {b:.3e} at N=1024"),
    ))
}

fn harnack(r: &RunRecord) -> Result<(bool, String)> {
    let h = check_harnack(r)?;
    Ok((
        h.pass,
        format!(
            "worst pair margin {:.3e}, monotone margin {:.3e}, threshold -{:.3e}",
            h.worst_margin,
            h.monotone_margin,
            1e-4 * h.h_tip_max
        ),
    ))
}

fn edge_convergence(runs: &[(f64, &RunRecord)]) -> Result<(bool, String)> {
    let mut gaps = Vec::new();
    for (age, r) in runs {
        let (t, gap) = mid_run_edge_gap(r)?;
        gaps.push((*age, t, gap));
    }
    let decreasing = gaps.windows(2).all(|w| w[1].2 < w[0].2);
    let time = OvalTime::new(-10.0)?;
    let exact = oval_edge_gap(time, FRAC_PI_8, 100_000);
    let sampled = edge_grim_gap(&sample_profile(time, 512, 1)?, FRAC_PI_8)?;
    let diff = (sampled - exact).abs();
    let listed: Vec<String> = gaps
        .iter()
        .map(|(a, t, g)| format!("R={a}: {g:.3e} at t={t:.2}"))
        .collect();
    Ok((
        decreasing && exact < 1e-3 && diff < 1e-3,
        format!(
            "n=2 mid-run gaps {}; n=1 t=-10 closed form {exact:.2e}, sampled {sampled:.2e}, diff {diff:.2e}",
            listed.join(", ")
        ),
    ))
}

fn displacement_constant(n1: &RunRecord, n2: &[&RunRecord]) -> Result<(bool, String)> {
    let c1 = fit_displacement_constant(n1)?.c_est;
    let cs = n2
        .iter()
        .map(|r| fit_displacement_constant(r).map(|f| f.c_est))
        .collect::<Result<Vec<f64>>>()?;
    let diffs: Vec<f64> = cs.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let list = |v: &[f64]| v.iter().map(|x| format!("{x:.5}")).collect::<Vec<_>>().join(", ");
    let shrinking = diffs.windows(2).all(|w| w[1] < w[0]);
    Ok((
        (c1 - LN_2).abs() < 1e-3 && shrinking,
        format!(
            "n=1 C_est {c1:.6} (log 2 = {LN_2:.6}, error {:.1e}); n=2 C_est [{}], differences [{}]",
            (c1 - LN_2).abs(),
            list(&cs),
            list(&diffs)
        ),
    ))
}

fn alexandrov() -> Result<(bool, String)> {
    let oval = sample_profile(OvalTime::new(-10.0)?, 512, 2)?;
    let (h, _) = oval.reconstruct()?.displacements(oval.grid());
    let margins = [0.1, 0.3, 0.5]
        .into_iter()
        .map(|f| oval.alexandrov_strict(f * h))
        .collect::<Result<Vec<_>>>()?;
    let strict = margins.iter().all(|v| v.strict);
    let monotone = margins.windows(2).all(|w| w[1].margin >= w[0].margin);

    let mut rng = rand::rngs::StdRng::seed_from_u64(20);
    let mut agree = 0;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let r: f64 = rng.random_range(0.5..3.0);
        let alpha = r * rng.random_range(0.1..0.8);
        let circle = ProfileCurve::round(2, 512, r)?;
        let v = circle.alexandrov_strict(alpha)?;
        let exact = 2.0 * alpha / (r * r - alpha * alpha).sqrt();
        // chord slope error: segment length rΔθ times |w''(α)|
        let bound = r * circle.grid().spacing() * r * r / (r * r - alpha * alpha).powf(1.5);
        let err = (v.margin - exact).abs();
        worst = worst.max(err / bound);
        if v.strict && err <= 2.0 * bound {
            agree += 1;
        }
    }
    let m: Vec<String> = margins.iter().map(|v| format!("{:.4}", v.margin)).collect();
    Ok((
        strict && monotone && agree == 100,
        format!(
            "oval margins at 0.1h, 0.3h, 0.5h: {}; circle oracle {agree}/100 (worst error {worst:.2} of the chord bound)",
            m.join(", ")
        ),
    ))
}

fn main() -> ExitCode {
    let mut suite = Suite { failed: 0 };
    let total = Instant::now();

    suite.check("1 closed-form residual", closed_form_residual());
    suite.check("2 curve-shortening oracle", curve_shortening_oracle());
    suite.check("3 sphere extinction", sphere_extinction());

    let runs = (|| -> Result<_> {
        let r10 = approximant(2, 10.0, 512)?;
        let r10_fine = approximant(2, 10.0, 1024)?;
        let r20 = approximant(2, 20.0, 512)?;
        let r40 = approximant(2, 40.0, 512)?;
        let n1 = approximant(1, 10.0, 512)?;
        Ok((r10, r10_fine, r20, r40, n1))
    })();
    match runs {
        Ok(((r10, el10), (fine, _), (r20, _), (r40, _), (n1, _))) => {
            suite.check("4 extinction-time bracket", extinction_bracket(&r10, el10));
            suite.check("5 inequality suite", inequality_suite(&r10, &fine));
            suite.check("6 area identity", area_identity(&r10, &fine));
            suite.check("7 harnack", harnack(&r10));
            suite.check(
                "8 edge-to-Grim convergence",
                edge_convergence(&[(10.0, &r10), (20.0, &r20), (40.0, &r40)]),
            );
            suite.check(
                "9 displacement constant",
                displacement_constant(&n1, &[&r10, &r20, &r40]),
            );
        }
        Err(e) => {
            for id in [
                "4 extinction-time bracket",
                "5 inequality suite",
                "6 area identity",
                "7 harnack",
                "8 edge-to-Grim convergence",
                "9 displacement constant",
            ] {
                suite.report(id, false, format!("run failed: {e}"));
            }
        }
    }
    suite.check("10 alexandrov reflection", alexandrov());

    println!(
        "{} of 10 criteria failed ({:.1} s)",
        suite.failed,
        secs(total.elapsed())
    );
    if suite.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
