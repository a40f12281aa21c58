use serde::{Deserialize, Serialize};

use super::NotApplicable;
use crate::config::OptimizerKind;
use crate::problems::ProblemSpec;
use crate::report::RunReport;

/// Lower and upper end of the band `eta_eff * L` must fall in.
const BAND: (f64, f64) = (1.0, 2.5);

/// Effective stepsizes in units of `1/L` over the trailing window of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeOfStability {
    /// First step of the trailing window.
    pub window_start: usize,
    pub window_len: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// Share of window steps with `eta_eff * L` in `[1, 2.5]`.
    pub fraction_in_band: f64,
    /// `max_t eta_eff * L` over the whole run.
    pub max_overall: f64,
}

/// Summarises `effective_stepsize * L` over the last `window_frac` of the records.
pub fn detect_edge_of_stability(
    report: &RunReport,
    spec: &ProblemSpec,
    window_frac: f64,
) -> Result<EdgeOfStability, NotApplicable> {
    const ID: &str = "edge-of-stability";
    if !(window_frac > 0.0 && window_frac <= 1.0) {
        return Err(NotApplicable::new(ID, "window fraction must be in (0, 1]"));
    }
    let l = spec
        .objective
        .smoothness()
        .ok_or_else(|| NotApplicable::new(ID, "smoothness constant L unknown"))?;
    let n = report.records.len();
    let window_len = ((n as f64 * window_frac).ceil() as usize).min(n);
    if window_len == 0 {
        return Err(NotApplicable::new(ID, "no records"));
    }
    let window_start = n - window_len;
    let scaled: Vec<f64> = report.records[window_start..]
        .iter()
        .map(|r| r.effective_stepsize * l)
        .collect();
    let in_band = scaled.iter().filter(|s| (BAND.0..=BAND.1).contains(*s)).count();
    Ok(EdgeOfStability {
        window_start,
        window_len,
        mean: scaled.iter().sum::<f64>() / window_len as f64,
        min: scaled.iter().copied().fold(f64::INFINITY, f64::min),
        max: scaled.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        fraction_in_band: in_band as f64 / window_len as f64,
        max_overall: report.records.iter().map(|r| r.effective_stepsize * l).fold(f64::NEG_INFINITY, f64::max),
    })
}

/// Result of evaluating the DoG and DoWG stepsize formulas on one DoWG trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominationSummary {
    pub steps: usize,
    /// Steps where the DoG stepsize exceeded the DoWG stepsize.
    pub violations: usize,
    /// Smallest `eta_DoWG / eta_DoG`.
    pub min_ratio: f64,
    /// Largest relative gap between the recorded stepsize and the recomputed DoWG formula.
    pub max_stepsize_error: f64,
    /// Largest relative gap between the recorded `v` and `sum_k rbar_k^2 |g_k|^2`.
    pub max_v_error: f64,
}

impl DominationSummary {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Evaluates both stepsize formulas on a DoWG run's `(rbar_k, |g_k|)` history.
///
/// DoWG's stepsize is rewritten as `rbar_t / sqrt(sum_k (rbar_k/rbar_t)^2 |g_k|^2)`
/// and DoG's as `rbar_t / sqrt(sum_k |g_k|^2)`. Both sums run left to right over
/// identical `|g_k|^2` terms, and every weight `(rbar_k/rbar_t)^2` rounds to at
/// most one, so the comparison is exact in floating point.
pub fn check_stepsize_domination(report: &RunReport) -> Result<DominationSummary, NotApplicable> {
    const ID: &str = "stepsize-domination";
    if report.config.optimizer != OptimizerKind::Dowg {
        return Err(NotApplicable::new(ID, "needs a DoWG trajectory"));
    }
    let mut history: Vec<(f64, f64)> = Vec::with_capacity(report.records.len());
    for r in &report.records {
        let rbar = r.rbar.ok_or_else(|| NotApplicable::new(ID, "record without rbar"))?;
        history.push((rbar, r.grad_norm * r.grad_norm));
    }

    let mut summary = DominationSummary {
        steps: history.len(),
        violations: 0,
        min_ratio: f64::INFINITY,
        max_stepsize_error: 0.0,
        max_v_error: 0.0,
    };
    let mut dog_sum = 0.0;
    let mut weighted = 0.0;
    let mut v = 0.0;
    for (t, &(rbar, g_sq)) in history.iter().enumerate() {
        dog_sum += g_sq;
        v += rbar * rbar * g_sq;
        if t > 0 && rbar == history[t - 1].0 {
            weighted += g_sq;
        } else {
            weighted = history[..=t]
                .iter()
                .map(|&(rk, gk)| {
                    let w = rk / rbar;
                    w * w * gk
                })
                .sum();
        }
        let dowg = rbar / weighted.sqrt();
        let dog = rbar / dog_sum.sqrt();
        if dog > dowg {
            summary.violations += 1;
        }
        summary.min_ratio = summary.min_ratio.min(dowg / dog);
        let rec = &report.records[t];
        summary.max_stepsize_error = summary.max_stepsize_error.max((rec.stepsize - dowg).abs() / dowg);
        if let Some(rv) = rec.v {
            summary.max_v_error = summary.max_v_error.max((rv - v).abs() / v);
        }
    }
    Ok(summary)
}
