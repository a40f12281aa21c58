//! GD, NGD, DoG and DoWG as explicit step-by-step state machines.
//!
//! Every state owns its iterate and scratch buffers, and one call to
//! [`Optimizer::step`] evaluates the oracle once at the current iterate,
//! emits a [`StepRecord`] for it and moves to the next iterate.

mod dog;
mod dowg;
mod gd;
mod ngd;

pub use dog::DogState;
pub use dowg::DowgState;
pub use gd::GdState;
pub use ngd::NgdState;

use crate::config::{OptimizerKind, RunConfig};
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::numeric::{all_finite, dist, norm};
use crate::objective::Objective;
use crate::report::RunReport;
use crate::telemetry::{RunStatus, StepRecord};

/// Iterates whose norm exceeds this are treated as divergent.
pub const DIVERGENCE_NORM: f64 = 1e12;

#[derive(Clone, Debug, PartialEq)]
pub enum StepOutcome {
    Moved(StepRecord),
    /// The (sub)gradient at the current iterate is zero; the state did not move.
    Stationary,
}

pub trait Optimizer {
    fn iterate(&self) -> &[f64];

    fn step(&mut self, obj: &Objective, dom: &Domain) -> StepOutcome;

    /// The averaged iterate the method's guarantees refer to, over all
    /// iterates evaluated so far. `None` before the first step.
    fn averaged_iterate(&self) -> Option<Vec<f64>>;
}

/// Running uniform average of evaluated iterates.
#[derive(Clone, Debug)]
pub(crate) struct UniformAverage {
    sum: Vec<f64>,
    count: usize,
}

impl UniformAverage {
    pub(crate) fn new(dim: usize) -> Self {
        Self {
            sum: vec![0.0; dim],
            count: 0,
        }
    }

    pub(crate) fn push(&mut self, x: &[f64]) {
        for (s, xi) in self.sum.iter_mut().zip(x) {
            *s += xi;
        }
        self.count += 1;
    }

    pub(crate) fn mean(&self) -> Option<Vec<f64>> {
        (self.count > 0).then(|| self.sum.iter().map(|s| s / self.count as f64).collect())
    }
}

/// Fills the fields common to every optimizer.
pub(crate) fn base_record(
    step: usize,
    obj: &Objective,
    x: &[f64],
    grad_norm: f64,
    stepsize: f64,
) -> StepRecord {
    let f_value = obj.value(x);
    StepRecord {
        step,
        f_value,
        f_gap: obj.f_star().map(|fs| f_value - fs),
        grad_norm,
        stepsize,
        effective_stepsize: stepsize,
        rbar: None,
        v: None,
        distance_to_opt: obj.x_star().map(|xs| dist(x, xs)),
        avg_f_gap: None,
    }
}

fn make_state(config: &RunConfig, x0: Vec<f64>) -> Box<dyn Optimizer> {
    match config.optimizer {
        OptimizerKind::Gd => Box::new(GdState::new(x0, config.eta.expect("validated"))),
        OptimizerKind::Ngd => Box::new(NgdState::new(x0, config.eta.expect("validated"))),
        OptimizerKind::Dog => Box::new(DogState::new(x0, config.r_eps.expect("validated"))),
        OptimizerKind::Dowg => Box::new(DowgState::new(x0, config.r_eps.expect("validated"))),
    }
}

/// Runs `config.steps` iterations from `x0` (projected onto the domain first).
///
/// Stops early on a zero gradient (`stationary`) or when a record turns
/// non-finite or the iterate leaves the ball of radius [`DIVERGENCE_NORM`]
/// (`numeric-overflow`). Identical inputs give a bit-identical report.
pub fn run(config: &RunConfig, obj: &Objective, x0: &[f64]) -> Result<RunReport> {
    config.validate()?;
    let dim = obj.dim();
    if x0.len() != dim {
        return Err(Error::Dimension {
            expected: dim,
            got: x0.len(),
        });
    }
    let dom = &config.domain;
    let x0 = dom.project(x0)?;
    if !all_finite(&x0) {
        return Err(Error::Config("initial point must be finite".into()));
    }

    let mut state = make_state(config, x0.clone());
    let mut records = Vec::with_capacity(config.steps);
    let mut best_x = x0.clone();
    let mut best_value = f64::INFINITY;
    let mut status = RunStatus::Completed;

    for _ in 0..config.steps {
        let x_t = state.iterate().to_vec();
        match state.step(obj, dom) {
            StepOutcome::Stationary => {
                let f = obj.value(&x_t);
                if f < best_value || best_value.is_infinite() {
                    best_value = f;
                    best_x = x_t;
                }
                status = RunStatus::Stationary;
                break;
            }
            StepOutcome::Moved(rec) => {
                if !rec.is_finite() {
                    status = RunStatus::NumericOverflow;
                    break;
                }
                if rec.f_value < best_value {
                    best_value = rec.f_value;
                    best_x = x_t;
                }
                records.push(rec);
                let x = state.iterate();
                if !all_finite(x) || norm(x) > DIVERGENCE_NORM {
                    status = RunStatus::NumericOverflow;
                    break;
                }
            }
        }
    }

    let final_x = state.iterate().to_vec();
    Ok(RunReport {
        config: config.clone(),
        status,
        records,
        initial_x: x0,
        final_x,
        best_x,
        best_value,
        avg_x: state.averaged_iterate(),
        verdicts: Vec::new(),
    })
}

/// The iterates `x_0, x_1, ...` visited by `config` from `x0`: up to
/// `steps + 1` points, fewer on a zero gradient or a non-finite iterate.
pub fn iterates(config: &RunConfig, obj: &Objective, x0: &[f64]) -> Result<Vec<Vec<f64>>> {
    config.validate()?;
    if x0.len() != obj.dim() {
        return Err(Error::Dimension {
            expected: obj.dim(),
            got: x0.len(),
        });
    }
    let dom = &config.domain;
    let x0 = dom.project(x0)?;
    let mut state = make_state(config, x0.clone());
    let mut out = vec![x0];
    for _ in 0..config.steps {
        if state.step(obj, dom) == StepOutcome::Stationary {
            break;
        }
        let x = state.iterate();
        out.push(x.to_vec());
        if !all_finite(x) {
            break;
        }
    }
    Ok(out)
}
