use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::domain::Domain;
use crate::error::{Error, Result};

/// Initial distance estimate used by DoG and DoWG when none is given.
pub const DEFAULT_R_EPS: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    Gd,
    Ngd,
    Dog,
    Dowg,
}

impl OptimizerKind {
    /// GD and NGD take a stepsize; DoG and DoWG take `r_eps` instead.
    pub fn needs_eta(self) -> bool {
        matches!(self, OptimizerKind::Gd | OptimizerKind::Ngd)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OptimizerKind::Gd => "gd",
            OptimizerKind::Ngd => "ngd",
            OptimizerKind::Dog => "dog",
            OptimizerKind::Dowg => "dowg",
        }
    }
}

impl fmt::Display for OptimizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OptimizerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gd" => Ok(OptimizerKind::Gd),
            "ngd" => Ok(OptimizerKind::Ngd),
            "dog" => Ok(OptimizerKind::Dog),
            "dowg" => Ok(OptimizerKind::Dowg),
            other => Err(Error::Config(format!("unknown optimizer `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub problem: String,
    pub optimizer: OptimizerKind,
    pub steps: usize,
    pub eta: Option<f64>,
    pub r_eps: Option<f64>,
    /// Seed for problem-instance generation; the optimizers themselves are deterministic.
    pub seed: u64,
    pub domain: Domain,
    /// Starting point; the problem's default when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
}

impl RunConfig {
    pub fn new(problem: impl Into<String>, optimizer: OptimizerKind, steps: usize, domain: Domain) -> Self {
        Self {
            problem: problem.into(),
            optimizer,
            steps,
            eta: None,
            r_eps: (!optimizer.needs_eta()).then_some(DEFAULT_R_EPS),
            seed: 0,
            domain,
            x0: None,
        }
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = Some(eta);
        self
    }

    pub fn with_r_eps(mut self, r_eps: f64) -> Self {
        self.r_eps = Some(r_eps);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_x0(mut self, x0: Vec<f64>) -> Self {
        self.x0 = Some(x0);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::Config("steps must be positive".into()));
        }
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
            }
        };
        if self.optimizer.needs_eta() {
            match self.eta {
                Some(eta) => positive("eta", eta)?,
                None => return Err(Error::Config(format!("{} requires eta", self.optimizer))),
            }
            if self.r_eps.is_some() {
                return Err(Error::Config(format!("{} does not take r_eps", self.optimizer)));
            }
        } else {
            match self.r_eps {
                Some(r) => positive("r_eps", r)?,
                None => return Err(Error::Config(format!("{} requires r_eps", self.optimizer))),
            }
            if self.eta.is_some() {
                return Err(Error::Config(format!("{} does not take eta", self.optimizer)));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stepsize_parameters_are_exclusive() {
        let gd = RunConfig::new("q", OptimizerKind::Gd, 10, Domain::full());
        assert!(gd.validate().is_err());
        assert!(gd.clone().with_eta(0.1).validate().is_ok());
        assert!(gd.clone().with_eta(0.1).with_r_eps(1e-6).validate().is_err());
        assert!(gd.with_eta(-1.0).validate().is_err());

        let dowg = RunConfig::new("q", OptimizerKind::Dowg, 10, Domain::full());
        assert_eq!(dowg.r_eps, Some(DEFAULT_R_EPS));
        assert!(dowg.validate().is_ok());
        assert!(dowg.clone().with_eta(0.1).validate().is_err());
        let mut missing = dowg;
        missing.r_eps = None;
        assert!(missing.validate().is_err());
    }

    #[test]
    fn zero_steps_rejected() {
        let c = RunConfig::new("q", OptimizerKind::Ngd, 0, Domain::full()).with_eta(1.0);
        assert!(c.validate().is_err());
    }

    #[test]
    fn optimizer_names_round_trip() {
        for k in [OptimizerKind::Gd, OptimizerKind::Ngd, OptimizerKind::Dog, OptimizerKind::Dowg] {
            assert_eq!(k.as_str().parse::<OptimizerKind>().unwrap(), k);
        }
        assert!("adam".parse::<OptimizerKind>().is_err());
    }
}
