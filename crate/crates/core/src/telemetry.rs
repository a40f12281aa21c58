use serde::{Deserialize, Serialize};

/// One telemetry row, describing the iterate `x_t` the step started from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub f_value: f64,
    /// `f(x_t) - f*`, when `f*` is known.
    pub f_gap: Option<f64>,
    pub grad_norm: f64,
    pub stepsize: f64,
    /// Stepsize of the equivalent plain gradient step; `eta / |g|` for NGD.
    pub effective_stepsize: f64,
    /// Distance estimator (DoG and DoWG).
    pub rbar: Option<f64>,
    /// Weighted gradient sum (DoWG).
    pub v: Option<f64>,
    pub distance_to_opt: Option<f64>,
    /// Gap at the running weighted average of `x_0..=x_t` (DoWG).
    pub avg_f_gap: Option<f64>,
}

impl StepRecord {
    pub(crate) fn is_finite(&self) -> bool {
        let opt = |v: Option<f64>| v.is_none_or(f64::is_finite);
        self.f_value.is_finite()
            && self.grad_norm.is_finite()
            && self.stepsize.is_finite()
            && self.effective_stepsize.is_finite()
            && opt(self.f_gap)
            && opt(self.rbar)
            && opt(self.v)
            && opt(self.distance_to_opt)
            && opt(self.avg_f_gap)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Completed,
    /// A zero (sub)gradient was hit; the iterate minimizes the convex objective.
    Stationary,
    NumericOverflow,
}

impl std::fmt::Display for RunStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RunStatus::Completed => "completed",
            RunStatus::Stationary => "stationary",
            RunStatus::NumericOverflow => "numeric-overflow",
        })
    }
}
