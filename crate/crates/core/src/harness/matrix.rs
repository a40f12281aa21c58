//! The acceptance matrix behind `verify --all`: every bound on every problem
//! and optimizer it applies to, plus the figure-style qualitative checks.
//!
//! Problem setups are public so tests can exercise exactly the same instances.

use std::fmt;

use crate::analysis::{
    check_lipschitz, check_smoothness_fact, check_stepsize_domination, detect_edge_of_stability, verify_by_id,
    BoundVerdict,
};
use crate::config::OptimizerKind;
use crate::domain::Domain;
use crate::error::Result;
use crate::optimizers::iterates;
use crate::problems::{build_problem, make_quadratic_1d, make_ridge_regression, ProblemSpec, DEFAULT_LAMBDA};
use crate::report::RunReport;
use crate::telemetry::RunStatus;

/// GD stepsizes, as multiples of `1/L`, for the smooth GD bound.
pub const GD_SMOOTH_ETA_FACTORS: [f64; 3] = [0.5, 1.0, 1.9];
/// Horizons for the smooth GD bound.
pub const GD_SMOOTH_STEPS: [usize; 3] = [10, 100, 1000];
/// Horizons for the NGD and DoWG bounds.
pub const LONG_STEPS: [usize; 3] = [100, 1000, 10_000];
pub const EOS_STEPS: usize = 10_000;
pub const EOS_NGD_ETA: f64 = 0.1;
pub const EOS_WINDOW: f64 = 0.25;
pub const EOS_GATE: f64 = 0.5;
/// Required ratio of the best weighted-average gap at `T = 10^4` to the one at `T = 10^2`.
pub const DOWG_SCALING_RATIO: f64 = 1.0 / 50.0;
/// Scale factor for the NGD invariance check.
pub const SCALE_FACTOR: f64 = 100.0;
pub const SCALE_FREE_ETAS: [f64; 2] = [0.1, 0.013];
pub const SCALE_FREE_STEPS: usize = 200;

/// One line of a check report.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckLine {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn from_verdict(label: &str, v: &BoundVerdict) -> Self {
        let op = if v.sense == crate::analysis::BoundSense::Upper { "<=" } else { ">=" };
        let mut detail = format!("lhs = {:.6e} {op} rhs = {:.6e}", v.lhs, v.rhs);
        if let Some(note) = &v.inputs.note {
            detail.push_str(&format!(" [{note}]"));
        }
        Self::new(format!("{} {label}", v.theorem), v.satisfied, detail)
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

/// An ordered list of check lines.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckReport {
    pub lines: Vec<CheckLine>,
}

impl CheckReport {
    pub fn push(&mut self, line: CheckLine) {
        self.lines.push(line);
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }

    pub fn failures(&self) -> usize {
        self.lines.iter().filter(|l| !l.passed).count()
    }

    /// One line per check and a closing summary; deterministic.
    pub fn render(&self) -> String {
        let mut s: String = self.lines.iter().map(|l| format!("{l}\n")).collect();
        s.push_str(&format!(
            "{} checks, {} failed: {}\n",
            self.lines.len(),
            self.failures(),
            if self.passed() { "ALL PASS" } else { "FAILURES" }
        ));
        s
    }
}

/// Problem id plus the kind of a constrained domain, e.g. `ridge ball`.
pub fn problem_label(p: &ProblemSpec) -> String {
    match &p.domain {
        Domain::FullSpace => p.id.clone(),
        Domain::Ball { .. } => format!("{} ball", p.id),
        Domain::Box { .. } => format!("{} box", p.id),
    }
}

/// `f(x) = 50 x^2`, `L = 100`, started at `x0 = 1`.
pub fn quadratic() -> Result<ProblemSpec> {
    make_quadratic_1d(100.0)
}

/// Unconstrained smooth problems for the GD bound.
pub fn smooth_problems() -> Result<Vec<ProblemSpec>> {
    Ok(vec![quadratic()?, build_problem("ridge", 0)?])
}

/// Unconstrained smooth problems for the NGD bounds.
pub fn ngd_smooth_problems() -> Result<Vec<ProblemSpec>> {
    Ok(vec![quadratic()?, build_problem("ridge", 0)?, build_problem("logistic", 0)?])
}

/// Lipschitz problems on a ball of radius 10 around the minimizer.
pub fn nonsmooth_problems() -> Result<Vec<ProblemSpec>> {
    Ok(vec![build_problem("abs_sum", 0)?, build_problem("max_affine", 0)?])
}

/// The ridge surrogate for the edge-of-stability runs.
pub fn eos_problem() -> Result<ProblemSpec> {
    build_problem("ridge", 0)
}

/// Smooth problems on balls: the quadratic on radius 2 around 0 and ridge on
/// radius `2 D0` around `x*`.
pub fn dowg_smooth_problems() -> Result<Vec<ProblemSpec>> {
    let q = quadratic()?;
    let q = q.with_domain(Domain::ball(vec![0.0], 2.0)?);
    let r = build_problem("ridge", 0)?;
    let radius = 2.0 * r.initial_distance().expect("ridge knows x*");
    let center = r.objective.x_star().expect("ridge knows x*").to_vec();
    let r = r.with_domain(Domain::ball(center, radius)?);
    Ok(vec![q, r])
}

/// Problems on which NGD's trajectory is invariant under `f -> alpha f` in floating point.
pub fn scale_free_problems() -> Result<Vec<ProblemSpec>> {
    let mut ridge = make_ridge_regression(50, 1, DEFAULT_LAMBDA, 0)?;
    ridge.id = "ridge1d".into();
    Ok(vec![quadratic()?, build_problem("abs_sum", 0)?, ridge])
}

fn tuned_ngd_eta(p: &ProblemSpec, steps: usize) -> f64 {
    p.initial_distance().expect("known x*") / (steps as f64).sqrt()
}

fn push_verdict(out: &mut CheckReport, id: &str, label: &str, report: &RunReport, p: &ProblemSpec) -> Option<BoundVerdict> {
    match verify_by_id(id, report, p).expect("known id") {
        Ok(v) => {
            out.push(CheckLine::from_verdict(label, &v));
            Some(v)
        }
        Err(na) => {
            out.push(CheckLine::new(format!("{id} {label}"), false, format!("not applicable: {}", na.reason)));
            None
        }
    }
}

fn push_domination(out: &mut CheckReport, label: &str, report: &RunReport) {
    match check_stepsize_domination(report) {
        Ok(s) => out.push(CheckLine::new(
            format!("stepsize-domination {label}"),
            s.holds() && s.max_stepsize_error <= 1e-12,
            format!(
                "{} steps, {} violations, min eta_dowg/eta_dog = {:.6e}, recorded stepsize rel err = {:.1e}",
                s.steps, s.violations, s.min_ratio, s.max_stepsize_error
            ),
        )),
        Err(na) => out.push(CheckLine::new(format!("stepsize-domination {label}"), false, na.reason)),
    }
}

fn figure1(out: &mut CheckReport) -> Result<()> {
    let p = quadratic()?;
    let l = 100.0;
    let conv = p.run(&p.config(OptimizerKind::Gd, 400).with_eta(1.9 / l))?;
    let hit = conv.records.iter().position(|r| r.f_gap.is_some_and(|g| g < 1e-8));
    out.push(CheckLine::new(
        "gd-figure1-converges quadratic1d eta=1.9/L",
        hit.is_some() && conv.status == RunStatus::Completed,
        match hit {
            Some(k) => format!("f_gap < 1e-8 at step {k}"),
            None => "f_gap never below 1e-8 in 400 steps".into(),
        },
    ));
    let div = p.run(&p.config(OptimizerKind::Gd, 400).with_eta(2.1 / l))?;
    let final_abs = div.final_x[0].abs();
    out.push(CheckLine::new(
        "gd-figure1-diverges quadratic1d eta=2.1/L",
        div.status == RunStatus::NumericOverflow || final_abs > 1e6,
        format!("status {} after {} steps, |x| = {:.3e}", div.status, div.steps_run(), final_abs),
    ));
    Ok(())
}

fn gd_smooth(out: &mut CheckReport) -> Result<()> {
    for p in smooth_problems()? {
        let l = p.objective.smoothness().expect("smooth");
        for factor in GD_SMOOTH_ETA_FACTORS {
            for t in GD_SMOOTH_STEPS {
                let report = p.run(&p.config(OptimizerKind::Gd, t).with_eta(factor / l))?;
                push_verdict(out, "gd-smooth", &format!("{} eta={factor}/L T={t}", p.id), &report, &p);
            }
        }
    }
    Ok(())
}

fn ngd_smooth(out: &mut CheckReport) -> Result<()> {
    for p in ngd_smooth_problems()? {
        for t in LONG_STEPS {
            let report = p.run(&p.config(OptimizerKind::Ngd, t).with_eta(tuned_ngd_eta(&p, t)))?;
            let label = format!("{} eta=D0/sqrt(T) T={t}", p.id);
            for id in [
                "ngd-smooth",
                "ngd-smooth-tuned",
                "ngd-effective-stepsize",
                "ngd-best-effective-stepsize",
            ] {
                push_verdict(out, id, &label, &report, &p);
            }
        }
    }
    Ok(())
}

fn nonsmooth_baselines(out: &mut CheckReport) -> Result<()> {
    for p in nonsmooth_problems()? {
        let g = p.objective.lipschitz().expect("Lipschitz");
        let d0 = p.initial_distance().expect("known x*");
        for t in [100, 1000] {
            let report = p.run(&p.config(OptimizerKind::Gd, t).with_eta(d0 / (g * (t as f64).sqrt())))?;
            let label = format!("{} eta=D0/(G sqrt(T)) T={t}", p.id);
            push_verdict(out, "gd-lipschitz", &label, &report, &p);
            push_verdict(out, "gd-lipschitz-tuned", &label, &report, &p);
            let report = p.run(&p.config(OptimizerKind::Ngd, t).with_eta(d0 / (t as f64).sqrt()))?;
            push_verdict(out, "ngd-lipschitz", &format!("{} eta=D0/sqrt(T) T={t}", p.id), &report, &p);
        }
    }
    Ok(())
}

/// Compares NGD iterates on `f` and `alpha f` bit for bit.
pub fn scale_free_check(p: &ProblemSpec, eta: f64, alpha: f64, steps: usize) -> Result<CheckLine> {
    let scaled = p.scaled(alpha)?;
    let config = p.config(OptimizerKind::Ngd, steps).with_eta(eta);
    let a = iterates(&config, &p.objective, &p.initial_point)?;
    let b = iterates(&config, &scaled.objective, &p.initial_point)?;
    let identical = a.len() == b.len()
        && a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| x.to_bits() == y.to_bits());
    Ok(CheckLine::new(
        format!("ngd-scale-free {} eta={eta} alpha={alpha}", p.id),
        identical,
        format!("{} and {} iterates, bit-identical: {identical}", a.len(), b.len()),
    ))
}

fn scale_free(out: &mut CheckReport) -> Result<()> {
    for p in scale_free_problems()? {
        for eta in SCALE_FREE_ETAS {
            out.push(scale_free_check(&p, eta, SCALE_FACTOR, SCALE_FREE_STEPS)?);
        }
    }
    Ok(())
}

/// The NGD (`eta = 0.1`) and DoWG runs on the edge-of-stability surrogate.
pub fn eos_runs() -> Result<(ProblemSpec, RunReport, RunReport)> {
    let p = eos_problem()?;
    let ngd = p.run(&p.config(OptimizerKind::Ngd, EOS_STEPS).with_eta(EOS_NGD_ETA))?;
    let dowg = p.run(&p.config(OptimizerKind::Dowg, EOS_STEPS))?;
    Ok((p, ngd, dowg))
}

fn edge_of_stability(out: &mut CheckReport) -> Result<()> {
    let (p, ngd, dowg) = eos_runs()?;
    for (name, report) in [("ngd eta=0.1", &ngd), ("dowg", &dowg)] {
        let line = match detect_edge_of_stability(report, &p, EOS_WINDOW) {
            Ok(e) => CheckLine::new(
                format!("edge-of-stability {} {name} T={EOS_STEPS}", p.id),
                e.fraction_in_band >= EOS_GATE,
                format!(
                    "trailing {} steps: {:.1}% with eta_eff*L in [1, 2.5], mean {:.4}, range [{:.4}, {:.4}]",
                    e.window_len,
                    100.0 * e.fraction_in_band,
                    e.mean,
                    e.min,
                    e.max
                ),
            ),
            Err(na) => CheckLine::new(format!("edge-of-stability {name}"), false, na.reason),
        };
        out.push(line);
    }
    push_domination(out, &format!("{} T={EOS_STEPS}", p.id), &dowg);
    Ok(())
}

fn dowg_nonsmooth(out: &mut CheckReport) -> Result<()> {
    for p in nonsmooth_problems()? {
        for t in LONG_STEPS {
            let report = p.run(&p.config(OptimizerKind::Dowg, t))?;
            let label = format!("{} ball T={t}", p.id);
            push_verdict(out, "dowg-lipschitz", &label, &report, &p);
            push_domination(out, &label, &report);
        }
    }
    Ok(())
}

fn dowg_smooth(out: &mut CheckReport) -> Result<()> {
    for p in dowg_smooth_problems()? {
        let mut gaps = Vec::new();
        for t in LONG_STEPS {
            let report = p.run(&p.config(OptimizerKind::Dowg, t))?;
            let label = format!("{} ball T={t}", p.id);
            let v = push_verdict(out, "dowg-smooth", &label, &report, &p);
            push_domination(out, &label, &report);
            gaps.push(v.map_or(f64::NAN, |v| v.lhs));
        }
        let (first, last) = (gaps[0], gaps[gaps.len() - 1]);
        out.push(CheckLine::new(
            format!("dowg-smooth-scaling {} ball", p.id),
            last <= first * DOWG_SCALING_RATIO,
            format!("best gap {last:.6e} at T=10000 vs {first:.6e} at T=100 (need ratio <= 1/50)"),
        ));
    }
    Ok(())
}

fn declared_constants(out: &mut CheckReport) -> Result<()> {
    let mut smooth = ngd_smooth_problems()?;
    smooth.extend(dowg_smooth_problems()?);
    for p in &smooth {
        let ok = check_smoothness_fact(p, 1000, 1).unwrap_or(false);
        out.push(CheckLine::new(
            format!("smoothness-fact {}", problem_label(p)),
            ok,
            "|grad f|^2 <= 2L(f - f*) at 1000 random domain points",
        ));
    }
    for p in nonsmooth_problems()? {
        let excess = check_lipschitz(&p, 1000, 1).unwrap_or(f64::INFINITY);
        out.push(CheckLine::new(
            format!("lipschitz-constant {}", problem_label(&p)),
            excess <= 1e-12,
            format!("max |g| - G = {excess:.3e} at 1000 random domain points"),
        ));
    }
    Ok(())
}

/// Runs the whole matrix. Problems and runs are generated here; no files are read.
pub fn verify_all() -> Result<CheckReport> {
    let mut out = CheckReport::default();
    declared_constants(&mut out)?;
    figure1(&mut out)?;
    gd_smooth(&mut out)?;
    ngd_smooth(&mut out)?;
    nonsmooth_baselines(&mut out)?;
    scale_free(&mut out)?;
    edge_of_stability(&mut out)?;
    dowg_nonsmooth(&mut out)?;
    dowg_smooth(&mut out)?;
    Ok(out)
}
