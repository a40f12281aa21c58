use super::{
    load_design_csv, logistic_from_data, make_logistic, make_nonsmooth_lipschitz, make_quadratic_1d,
    make_ridge_regression, ridge_from_data, NonsmoothKind, ProblemSpec, DEFAULT_LAMBDA,
};
use crate::error::{Error, Result};

/// Built-in problem ids. `ridge-csv:PATH` and `logistic-csv:PATH` load user data.
pub const PROBLEM_IDS: &[&str] = &["quadratic1d", "ridge", "logistic", "abs_sum", "max_affine"];

/// Smoothness of the built-in one-dimensional quadratic.
pub const QUADRATIC_L: f64 = 100.0;
/// Samples and features of the built-in ridge instance.
pub const RIDGE_SHAPE: (usize, usize) = (200, 20);
/// Samples and features of the built-in logistic instance.
pub const LOGISTIC_SHAPE: (usize, usize) = (200, 10);
/// Dimension of the built-in nonsmooth instances.
pub const NONSMOOTH_DIM: usize = 5;

/// Builds a problem by id; `seed` only affects randomly generated instances.
pub fn build_problem(id: &str, seed: u64) -> Result<ProblemSpec> {
    if let Some(path) = id.strip_prefix("ridge-csv:") {
        let data = load_design_csv(path)?;
        let mut spec = ridge_from_data(id, data.design, data.labels, DEFAULT_LAMBDA)?;
        spec.seed = seed;
        return Ok(spec);
    }
    if let Some(path) = id.strip_prefix("logistic-csv:") {
        let data = load_design_csv(path)?;
        let labels = data.signed_labels()?;
        let mut spec = logistic_from_data(id, data.design, labels, DEFAULT_LAMBDA)?;
        spec.seed = seed;
        return Ok(spec);
    }
    match id {
        "quadratic1d" => make_quadratic_1d(QUADRATIC_L),
        "ridge" => make_ridge_regression(RIDGE_SHAPE.0, RIDGE_SHAPE.1, DEFAULT_LAMBDA, seed),
        "logistic" => make_logistic(LOGISTIC_SHAPE.0, LOGISTIC_SHAPE.1, DEFAULT_LAMBDA, seed),
        "abs_sum" => make_nonsmooth_lipschitz(NonsmoothKind::AbsSum, NONSMOOTH_DIM, seed),
        "max_affine" => make_nonsmooth_lipschitz(NonsmoothKind::MaxAffine, NONSMOOTH_DIM, seed),
        other => Err(Error::UnknownProblem(other.into())),
    }
}
