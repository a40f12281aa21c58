use std::fmt::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::analysis::applicable_verdicts;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::problems::ProblemSpec;
use crate::report::RunReport;

/// Environment variable capping the number of concurrent sweep runs.
pub const THREADS_ENV: &str = "OPTBENCH_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    Steps,
    Eta,
    REps,
    Seed,
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "steps" => Ok(SweepParam::Steps),
            "eta" => Ok(SweepParam::Eta),
            "r-eps" | "r_eps" => Ok(SweepParam::REps),
            "seed" => Ok(SweepParam::Seed),
            other => Err(Error::Config(format!("unknown sweep parameter `{other}`"))),
        }
    }
}

fn as_count(value: f64, what: &str) -> Result<u64> {
    if value >= 0.0 && value.fract() == 0.0 && value <= u64::MAX as f64 {
        Ok(value as u64)
    } else {
        Err(Error::Config(format!("{what} must be a nonnegative integer, got {value}")))
    }
}

/// `base` with `param` set to `value`.
pub fn with_param(base: &RunConfig, param: SweepParam, value: f64) -> Result<RunConfig> {
    let mut c = base.clone();
    match param {
        SweepParam::Steps => c.steps = as_count(value, "steps")? as usize,
        SweepParam::Eta => c.eta = Some(value),
        SweepParam::REps => c.r_eps = Some(value),
        SweepParam::Seed => c.seed = as_count(value, "seed")?,
    }
    c.validate()?;
    Ok(c)
}

/// Worker count from `OPTBENCH_THREADS`, defaulting to the machine's parallelism.
pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|n| *n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs one configuration per value, possibly concurrently, and returns the
/// reports with their verdicts in the order of `values`.
///
/// `problem_for` builds the problem for a configuration, so seed sweeps can
/// regenerate the instance.
pub fn sweep<F>(base: &RunConfig, param: SweepParam, values: &[f64], problem_for: F) -> Result<Vec<RunReport>>
where
    F: Fn(&RunConfig) -> Result<ProblemSpec> + Sync,
{
    let configs = values
        .iter()
        .map(|&v| with_param(base, param, v))
        .collect::<Result<Vec<_>>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count())
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        configs
            .par_iter()
            .map(|c| {
                let spec = problem_for(c)?;
                let mut report = spec.run(c)?;
                report.verdicts = applicable_verdicts(&report, &spec);
                Ok(report)
            })
            .collect()
    })
}

/// One row per (run, verdict): the swept value, run status and `lhs / rhs`.
pub fn sweep_table(param: SweepParam, values: &[f64], reports: &[RunReport]) -> String {
    let name = match param {
        SweepParam::Steps => "steps",
        SweepParam::Eta => "eta",
        SweepParam::REps => "r_eps",
        SweepParam::Seed => "seed",
    };
    let mut s = format!(
        "{name:>12} {:>16} {:>28} {:>14} {:>14} {:>10} {}\n",
        "status", "theorem", "lhs", "rhs", "lhs/rhs", "ok"
    );
    for (value, report) in values.iter().zip(reports) {
        if report.verdicts.is_empty() {
            let _ = writeln!(s, "{value:>12} {:>16} {:>28}", report.status.to_string(), "-");
        }
        for v in &report.verdicts {
            let _ = writeln!(
                s,
                "{value:>12} {:>16} {:>28} {:>14.6e} {:>14.6e} {:>10.3e} {}",
                report.status.to_string(),
                v.theorem,
                v.lhs,
                v.rhs,
                v.lhs / v.rhs,
                if v.satisfied { "yes" } else { "no" }
            );
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::OptimizerKind;
    use crate::problems::make_quadratic_1d;

    #[test]
    fn sweep_preserves_value_order() {
        let p = make_quadratic_1d(100.0).unwrap();
        let base = p.config(OptimizerKind::Gd, 10).with_eta(0.01);
        let values = [50.0, 10.0, 30.0];
        let reports = sweep(&base, SweepParam::Steps, &values, |_| Ok(p.clone())).unwrap();
        let steps: Vec<usize> = reports.iter().map(|r| r.config.steps).collect();
        assert_eq!(steps, vec![50, 10, 30]);
        assert!(reports.iter().all(|r| r.verdicts.iter().any(|v| v.theorem == "gd-smooth")));
        let table = sweep_table(SweepParam::Steps, &values, &reports);
        assert_eq!(table.lines().count(), 4);
    }

    #[test]
    fn invalid_values_are_rejected() {
        let p = make_quadratic_1d(100.0).unwrap();
        let base = p.config(OptimizerKind::Gd, 10).with_eta(0.01);
        assert!(with_param(&base, SweepParam::Steps, 1.5).is_err());
        assert!(with_param(&base, SweepParam::Eta, -1.0).is_err());
        assert!(with_param(&base, SweepParam::REps, 1e-3).is_err());
        assert!("nope".parse::<SweepParam>().is_err());
    }
}
