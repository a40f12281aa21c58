use serde::{Deserialize, Serialize};

use crate::analysis::BoundVerdict;
use crate::config::RunConfig;
use crate::telemetry::{RunStatus, StepRecord};

/// Full trajectory telemetry of one run plus the verdicts attached to it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub status: RunStatus,
    /// One record per evaluated, non-stationary iterate; `len() == steps` when completed.
    pub records: Vec<StepRecord>,
    pub initial_x: Vec<f64>,
    /// Last iterate; the zero-gradient point when stationary.
    pub final_x: Vec<f64>,
    /// Evaluated iterate with the smallest objective value.
    pub best_x: Vec<f64>,
    pub best_value: f64,
    /// Uniform average of evaluated iterates (rbar^2-weighted for DoWG).
    pub avg_x: Option<Vec<f64>>,
    #[serde(default)]
    pub verdicts: Vec<BoundVerdict>,
}

impl RunReport {
    pub fn steps_run(&self) -> usize {
        self.records.len()
    }

    /// Smallest `f(x_k) - f*` over evaluated iterates, including a stationary point.
    pub fn min_gap(&self, f_star: f64) -> f64 {
        self.best_value - f_star
    }

    /// Smallest gap of the running weighted average (DoWG telemetry).
    pub fn min_avg_gap(&self) -> Option<f64> {
        self.records
            .iter()
            .filter_map(|r| r.avg_f_gap)
            .fold(None, |m: Option<f64>, g| Some(m.map_or(g, |m| m.min(g))))
    }

    pub fn max_effective_stepsize(&self) -> Option<f64> {
        self.records
            .iter()
            .map(|r| r.effective_stepsize)
            .fold(None, |m: Option<f64>, e| Some(m.map_or(e, |m| m.max(e))))
    }
}
