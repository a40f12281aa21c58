//! Convex test problems whose constants (`f*`, `x*`, `L`, `G`) are known
//! analytically or from a reference solve done once at construction.

mod data;
mod design;
mod logistic;
mod nonsmooth;
mod quadratic;
mod registry;
mod ridge;

pub use data::{load_design_csv, DesignData};
pub use design::{ridge_normal_solve, Design};
pub use logistic::{logistic_from_data, make_logistic};
pub use nonsmooth::{abs_sum_from_center, make_nonsmooth_lipschitz, max_affine_from_pieces, NonsmoothKind};
pub use quadratic::make_quadratic_1d;
pub use registry::{build_problem, LOGISTIC_SHAPE, NONSMOOTH_DIM, PROBLEM_IDS, QUADRATIC_L, RIDGE_SHAPE};
pub use ridge::{make_ridge_regression, ridge_from_data};

use crate::config::{OptimizerKind, RunConfig};
use crate::domain::Domain;
use crate::error::Result;
use crate::objective::Objective;
use crate::optimizers;
use crate::report::RunReport;

/// Default regularization for the synthetic regression problems.
pub const DEFAULT_LAMBDA: f64 = 1e-2;

/// Radius of the ball around `x*` that nonsmooth problems live on by default.
pub const NONSMOOTH_RADIUS: f64 = 10.0;

#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub id: String,
    pub seed: u64,
    pub objective: Objective,
    pub domain: Domain,
    /// Default starting point.
    pub initial_point: Vec<f64>,
    /// Which guarantees apply (smooth / Lipschitz / both) and on what domain.
    pub notes: String,
}

impl ProblemSpec {
    pub fn dim(&self) -> usize {
        self.objective.dim()
    }

    pub fn is_smooth(&self) -> bool {
        self.objective.smoothness().is_some()
    }

    pub fn is_lipschitz(&self) -> bool {
        self.objective.lipschitz().is_some()
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_initial_point(mut self, x0: Vec<f64>) -> Self {
        self.initial_point = x0;
        self
    }

    /// The same problem with the objective multiplied by `alpha > 0`.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        Ok(Self {
            id: format!("{}*{alpha}", self.id),
            objective: self.objective.scaled(alpha)?,
            ..self.clone()
        })
    }

    /// A configuration for this problem on its own domain.
    pub fn config(&self, optimizer: OptimizerKind, steps: usize) -> RunConfig {
        RunConfig::new(self.id.clone(), optimizer, steps, self.domain.clone()).with_seed(self.seed)
    }

    /// Runs `config` from `config.x0`, or from the problem's default start.
    pub fn run(&self, config: &RunConfig) -> Result<RunReport> {
        let x0 = config.x0.as_deref().unwrap_or(&self.initial_point);
        optimizers::run(config, &self.objective, x0)
    }

    /// `|x0 - x*|` for the default start, after projection onto the domain.
    pub fn initial_distance(&self) -> Option<f64> {
        let x0 = self.domain.project(&self.initial_point).ok()?;
        self.objective
            .x_star()
            .map(|xs| crate::numeric::dist(&x0, xs))
    }
}
