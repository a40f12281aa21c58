//! Parameter-free DoWG alongside GD, NGD and DoG on convex test problems,
//! with checkers that compare each run against its convergence bound.
//!
//! ```
//! use optbench::{build_problem, OptimizerKind};
//!
//! let problem = build_problem("quadratic1d", 0).unwrap();
//! let config = problem.config(OptimizerKind::Gd, 200).with_eta(0.019);
//! let report = problem.run(&config).unwrap();
//! assert!(report.records.last().unwrap().f_gap.unwrap() < 1e-8);
//! ```

pub mod analysis;
pub mod config;
pub mod domain;
pub mod error;
pub mod harness;
pub mod numeric;
pub mod objective;
pub mod optimizers;
pub mod problems;
pub mod report;
pub mod telemetry;

pub use analysis::{BoundVerdict, NotApplicable};
pub use config::{OptimizerKind, RunConfig, DEFAULT_R_EPS};
pub use domain::Domain;
pub use error::{Error, Result};
pub use objective::{KnownConstants, Objective, Optimum, Oracle};
pub use optimizers::{iterates, run};
pub use problems::{build_problem, ProblemSpec};
pub use report::RunReport;
pub use telemetry::{RunStatus, StepRecord};
