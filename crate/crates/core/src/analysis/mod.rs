//! Numerical verification of convergence guarantees and supporting lemmas.
//!
//! Bound checkers compare an observed quantity from a finished run (`lhs`)
//! with a bound evaluated from the problem's known constants (`rhs`). They
//! never mutate reports. A checker whose preconditions fail returns
//! [`NotApplicable`] instead of guessing a missing constant.

mod bounds;
mod checks;
mod lemmas;
mod stability;

pub use bounds::{
    applicable_verdicts, dowg_nonsmooth_rhs, dowg_smooth_rhs, gd_nonsmooth_rhs, gd_smooth_rhs, ngd_nonsmooth_rhs,
    ngd_smooth_rhs, verify_dowg_nonsmooth, verify_dowg_smooth, verify_gd_nonsmooth, verify_gd_nonsmooth_tuned,
    verify_gd_smooth, verify_ngd_best_effective_stepsize, verify_ngd_effective_stepsize, verify_ngd_nonsmooth,
    verify_by_id, verify_ngd_smooth, verify_ngd_smooth_tuned, DOWG_NONSMOOTH_CONSTANT, DOWG_SMOOTH_CONSTANT, THEOREM_IDS,
};
pub use checks::{
    check_convexity, check_gradient_fd, check_lipschitz, check_projection, check_smoothness_fact, sample_domain_points,
    ProjectionCheck,
};
pub use lemmas::{lemma_log_ratio_check, lemma_seq_check};
pub use stability::{check_stepsize_domination, detect_edge_of_stability, DominationSummary, EdgeOfStability};

use std::fmt;

use serde::{Deserialize, Serialize};

/// Relative slack allowed when comparing an observed quantity with its bound.
pub const BOUND_RTOL: f64 = 1e-9;

/// Whether the observed value must lie below or above the bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundSense {
    /// `lhs <= rhs * (1 + 1e-9)`
    Upper,
    /// `lhs >= rhs * (1 - 1e-9)`
    Lower,
}

impl BoundSense {
    pub fn holds(self, lhs: f64, rhs: f64) -> bool {
        match self {
            BoundSense::Upper => lhs <= rhs * (1.0 + BOUND_RTOL),
            BoundSense::Lower => lhs >= rhs * (1.0 - BOUND_RTOL),
        }
    }
}

/// Constants a bound was evaluated with.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    #[serde(rename = "T")]
    pub steps: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub eta: Option<f64>,
    #[serde(rename = "D0", skip_serializing_if = "Option::is_none", default)]
    pub d0: Option<f64>,
    #[serde(rename = "D", skip_serializing_if = "Option::is_none", default)]
    pub diameter: Option<f64>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none", default)]
    pub smoothness: Option<f64>,
    #[serde(rename = "G", skip_serializing_if = "Option::is_none", default)]
    pub lipschitz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r_eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundVerdict {
    pub theorem: String,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    pub sense: BoundSense,
    pub inputs: BoundInputs,
}

impl BoundVerdict {
    pub fn new(theorem: &str, lhs: f64, rhs: f64, sense: BoundSense, inputs: BoundInputs) -> Self {
        Self {
            theorem: theorem.into(),
            lhs,
            rhs,
            satisfied: sense.holds(lhs, rhs),
            sense,
            inputs,
        }
    }
}

impl fmt::Display for BoundVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.sense {
            BoundSense::Upper => "<=",
            BoundSense::Lower => ">=",
        };
        write!(
            f,
            "{} {}: lhs = {:.6e} {op} rhs = {:.6e} (T = {})",
            if self.satisfied { "PASS" } else { "FAIL" },
            self.theorem,
            self.lhs,
            self.rhs,
            self.inputs.steps
        )?;
        if let Some(note) = &self.inputs.note {
            write!(f, " [{note}]")?;
        }
        Ok(())
    }
}

/// A checker's preconditions do not hold for this run or problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotApplicable {
    pub theorem: String,
    pub reason: String,
}

impl NotApplicable {
    pub(crate) fn new(theorem: &str, reason: impl Into<String>) -> Self {
        Self {
            theorem: theorem.into(),
            reason: reason.into(),
        }
    }
}

impl fmt::Display for NotApplicable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: not applicable ({})", self.theorem, self.reason)
    }
}

impl std::error::Error for NotApplicable {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn satisfied_matches_relative_slack() {
        assert!(BoundSense::Upper.holds(1.0 + 5e-10, 1.0));
        assert!(!BoundSense::Upper.holds(1.0 + 2e-9, 1.0));
        assert!(BoundSense::Lower.holds(1.0 - 5e-10, 1.0));
        assert!(!BoundSense::Lower.holds(1.0 - 2e-9, 1.0));
        let v = BoundVerdict::new("x", 2.0, 1.0, BoundSense::Upper, BoundInputs::default());
        assert!(!v.satisfied);
    }

    #[test]
    fn verdict_json_has_expected_keys() {
        let v = BoundVerdict::new(
            "gd-smooth",
            0.5,
            1.0,
            BoundSense::Upper,
            BoundInputs {
                steps: 10,
                eta: Some(0.01),
                smoothness: Some(100.0),
                ..Default::default()
            },
        );
        let json: serde_json::Value = serde_json::to_value(&v).unwrap();
        for key in ["theorem", "lhs", "rhs", "satisfied", "inputs"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        assert_eq!(json["inputs"]["T"], 10);
        assert_eq!(json["inputs"]["L"], 100.0);
        let back: BoundVerdict = serde_json::from_value(json).unwrap();
        assert_eq!(back, v);
    }
}
