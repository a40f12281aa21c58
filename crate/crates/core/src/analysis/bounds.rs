use std::f64::consts::E;

use super::{BoundInputs, BoundSense, BoundVerdict, NotApplicable};
use crate::config::OptimizerKind;
use crate::domain::Domain;
use crate::numeric::{dist, log_plus};
use crate::problems::ProblemSpec;
use crate::report::RunReport;
use crate::telemetry::RunStatus;

/// Constant in the DoWG bound for Lipschitz objectives.
pub const DOWG_NONSMOOTH_CONSTANT: f64 = 16.0;
/// Constant in the DoWG bound for smooth objectives.
pub const DOWG_SMOOTH_CONSTANT: f64 = 64.0 * E;

/// Relative tolerance for recognising the tuned stepsize in a recorded config.
const TUNED_RTOL: f64 = 1e-12;

/// `D0^2 / (eta T) + eta G^2 / 2`
pub fn gd_nonsmooth_rhs(d0: f64, g: f64, eta: f64, t: usize) -> f64 {
    d0 * d0 / (eta * t as f64) + eta * g * g / 2.0
}

/// `2 L D0^2 / (4 + T eta L (2 - L eta))`
pub fn gd_smooth_rhs(l: f64, d0: f64, eta: f64, t: usize) -> f64 {
    2.0 * l * d0 * d0 / (4.0 + t as f64 * eta * l * (2.0 - l * eta))
}

/// `G (D0^2 / (2 eta T) + eta / 2)`
pub fn ngd_nonsmooth_rhs(g: f64, d0: f64, eta: f64, t: usize) -> f64 {
    g * (d0 * d0 / (2.0 * eta * t as f64) + eta / 2.0)
}

/// `2 L (D0^2 / (2 eta T) + eta / 2)^2`
pub fn ngd_smooth_rhs(l: f64, d0: f64, eta: f64, t: usize) -> f64 {
    let inner = d0 * d0 / (2.0 * eta * t as f64) + eta / 2.0;
    2.0 * l * inner * inner
}

/// `16 (G D / sqrt(T)) log_+(D / r_eps)`
pub fn dowg_nonsmooth_rhs(g: f64, d: f64, r_eps: f64, t: usize) -> f64 {
    DOWG_NONSMOOTH_CONSTANT * (g * d / (t as f64).sqrt()) * log_plus(d / r_eps).expect("D, r_eps > 0")
}

/// `64 e (L D^2 / T) log_+(D / r_eps)`
pub fn dowg_smooth_rhs(l: f64, d: f64, r_eps: f64, t: usize) -> f64 {
    DOWG_SMOOTH_CONSTANT * (l * d * d / t as f64) * log_plus(d / r_eps).expect("D, r_eps > 0")
}

/// What every checker needs from a finished run.
struct Context<'a> {
    report: &'a RunReport,
    spec: &'a ProblemSpec,
    f_star: f64,
    d0: f64,
    steps: usize,
}

impl Context<'_> {
    fn inputs(&self) -> BoundInputs {
        BoundInputs {
            steps: self.steps,
            eta: self.report.config.eta,
            d0: Some(self.d0),
            r_eps: self.report.config.r_eps,
            note: (self.report.status == RunStatus::Stationary).then(|| "stationary".to_string()),
            ..Default::default()
        }
    }

    fn eta(&self) -> f64 {
        self.report.config.eta.expect("validated config")
    }

    fn is_tuned(&self, target: f64) -> bool {
        (self.eta() - target).abs() <= TUNED_RTOL * target
    }

    fn gap(&self, x: &[f64]) -> f64 {
        self.spec.objective.value(x) - self.f_star
    }

    fn smoothness(&self, theorem: &str) -> Result<f64, NotApplicable> {
        self.spec
            .objective
            .smoothness()
            .ok_or_else(|| NotApplicable::new(theorem, "smoothness constant L unknown"))
    }

    fn lipschitz(&self, theorem: &str) -> Result<f64, NotApplicable> {
        self.spec
            .objective
            .lipschitz()
            .ok_or_else(|| NotApplicable::new(theorem, "Lipschitz constant G unknown"))
    }
}

fn context<'a>(
    theorem: &str,
    report: &'a RunReport,
    spec: &'a ProblemSpec,
    optimizer: OptimizerKind,
) -> Result<Context<'a>, NotApplicable> {
    let na = |reason: &str| NotApplicable::new(theorem, reason);
    if report.config.optimizer != optimizer {
        return Err(na(&format!("run used {}, bound is for {optimizer}", report.config.optimizer)));
    }
    if report.status == RunStatus::NumericOverflow {
        return Err(na("run diverged"));
    }
    let (Some(f_star), Some(x_star)) = (spec.objective.f_star(), spec.objective.x_star()) else {
        return Err(na("minimizer unknown"));
    };
    if !report.config.domain.contains(x_star, 1e-9) {
        return Err(na("minimizer lies outside the domain"));
    }
    Ok(Context {
        report,
        spec,
        f_star,
        d0: dist(&report.initial_x, x_star),
        steps: report.config.steps,
    })
}

/// Uniform average of GD iterates against `D0^2/(eta T) + eta G^2/2`.
pub fn verify_gd_nonsmooth(report: &RunReport, spec: &ProblemSpec) -> Result<BoundVerdict, NotApplicable> {
    const ID: &str = "gd-lipschitz";
    let cx = context(ID, report, spec, OptimizerKind::Gd)?;
    let g = cx.lipschitz(ID)?;
    let avg = report.avg_x.as_deref().ok_or_else(|| NotApplicable::new(ID, "no iterates"))?;
    let rhs = gd_nonsmooth_rhs(cx.d0, g, cx.eta(), cx.steps);
    let inputs = BoundInputs {
        lipschitz: Some(g),
        ..cx.inputs()
    };
    Ok(BoundVerdict::new(ID, cx.gap(avg), rhs, BoundSense::Upper, inputs))
}

/// With `eta = D0/(G sqrt(T))`, the uniform average is within `D0 G / sqrt(T)`.
pub fn verify_gd_nonsmooth_tuned(report: &RunReport, spec: &ProblemSpec) -> Result<BoundVerdict, NotApplicable> {
    const ID: &str = "gd-lipschitz-tuned";
    let cx = context(ID, report, spec, OptimizerKind::Gd)?;
    let g = cx.lipschitz(ID)?;
    let sqrt_t = (cx.steps as f64).sqrt();
    if !cx.is_tuned(cx.d0 / (g * sqrt_t)) {
        return Err(NotApplicable::new(ID, "stepsize is not D0/(G sqrt(T))"));
    }
    let avg = report.avg_x.as_deref().ok_or_else(|| NotApplicable::new(ID, "no iterates"))?;
    let inputs = BoundInputs {
        lipschitz: Some(g),
        ..cx.inputs()
    };
    Ok(BoundVerdict::new(ID, cx.gap(avg), cx.d0 * g / sqrt_t, BoundSense::Upper, inputs))
}

/// Last GD iterate against `2 L D0^2 / (4 + T eta L (2 - L eta))`, for unconstrained runs with `eta < 2/L`.
pub fn verify_gd_smooth(report: &RunReport, spec: &ProblemSpec) -> Result<BoundVerdict, NotApplicable> {
    const ID: &str = "gd-smooth";
    let cx = context(ID, report, spec, OptimizerKind::Gd)?;
    let l = cx.smoothness(ID)?;
    if !(cx.eta() < 2.0 / l) {
        return Err(NotApplicable::new(ID, "stepsize is not below 2/L"));
    }
    if !matches!(report.config.domain, Domain::FullSpace) {
        return Err(NotApplicable::new(ID, "bound is for unconstrained gradient descent"));
    }
    let t = report.steps_run();
    let rhs = gd_smooth_rhs(l, cx.d0, cx.eta(), t);
    let inputs = BoundInputs {
        steps: t,
        smoothness: Some(l),
        ..cx.inputs()
    };
    Ok(BoundVerdict::new(ID, cx.gap(&report.final_x), rhs, BoundSense::Upper, inputs))
}

/// Best NGD iterate against `G (D0^2/(2 eta T) + eta/2)`.
pub fn verify_ngd_nonsmooth(report: &RunReport, spec: &ProblemSpec) -> Result<BoundVerdict, NotApplicable> {
    const ID: &str = "ngd-lipschitz";
    let cx = context(ID, report, spec, OptimizerKind::Ngd)?;
    let g = cx.lipschitz(ID)?;
    let rhs = ngd_nonsmooth_rhs(g, cx.d0, cx.eta(), cx.steps);
    let inputs = BoundInputs {
        lipschitz: Some(g),
        ..cx.inputs()
    };
    Ok(BoundVerdict::new(ID, report.min_gap(cx.f_star), rhs, BoundSense::Upper, inputs))
}

/// Best NGD iterate against `2 L (D0^2/(2 eta T) + eta/2)^2`.
pub fn verify_ngd_smooth(report: &RunReport, spec: &ProblemSpec) -> Result<BoundVerdict, NotApplicable> {
    const ID: &str = "ngd-smooth";
    let cx = context(ID, report, spec, OptimizerKind::Ngd)?;
    let l = cx.smoothness(ID)?;
    let rhs = ngd_smooth_rhs(l, cx.d0, cx.eta(), cx.steps);
    let inputs = BoundInputs {
        smoothness: Some(l),
        ..cx.inputs()
    };
    Ok(BoundVerdict::new(ID, report.min_gap(cx.f_star), rhs, BoundSense::Upper, inputs))
}

/// With `eta = D0/sqrt(T)`, the best NGD iterate is within `2 L D0^2 / T`.
pub fn verify_ngd_smooth_tuned(report: &RunReport, spec: &ProblemSpec) -> Result<BoundVerdict, NotApplicable> {
    const ID: &str = "ngd-smooth-tuned";
    let cx = context(ID, report, spec, OptimizerKind::Ngd)?;
    let l = cx.smoothness(ID)?;
    if !cx.is_tuned(cx.d0 / (cx.steps as f64).sqrt()) {
        return Err(NotApplicable::new(ID, "stepsize is not D0/sqrt(T)"));
    }
    let rhs = 2.0 * l * cx.d0 * cx.d0 / cx.steps as f64;
    let inputs = BoundInputs {
        smoothness: Some(l),
        ..cx.inputs()
    };
    Ok(BoundVerdict::new(ID, report.min_gap(cx.f_star), rhs, BoundSense::Upper, inputs))
}

fn tuned_ngd_context<'a>(
    id: &str,
    report: &'a RunReport,
    spec: &'a ProblemSpec,
) -> Result<(Context<'a>, f64), NotApplicable> {
    let cx = context(id, report, spec, OptimizerKind::Ngd)?;
    let l = cx.smoothness(id)?;
    if !cx.is_tuned(cx.d0 / (cx.steps as f64).sqrt()) {
        return Err(NotApplicable::new(id, "stepsize is not D0/sqrt(T)"));
    }
    Ok((cx, l))
}

/// With `eta = D0/sqrt(T)`, some effective stepsize `eta/|g_t|` reaches `1/L`.
/// A stationary run satisfies this vacuously.
pub fn verify_ngd_effective_stepsize(report: &RunReport, spec: &ProblemSpec) -> Result<BoundVerdict, NotApplicable> {
    const ID: &str = "ngd-effective-stepsize";
    let (cx, l) = tuned_ngd_context(ID, report, spec)?;
    let lhs = report.max_effective_stepsize().unwrap_or(0.0);
    let inputs = BoundInputs {
        smoothness: Some(l),
        ..cx.inputs()
    };
    let mut v = BoundVerdict::new(ID, lhs, 1.0 / l, BoundSense::Lower, inputs);
    if report.status == RunStatus::Stationary {
        v.satisfied = true;
    }
    Ok(v)
}

/// With `eta = D0/sqrt(T)`, the effective stepsize at the best iterate is at least `1/(2L)`.
pub fn verify_ngd_best_effective_stepsize(
    report: &RunReport,
    spec: &ProblemSpec,
) -> Result<BoundVerdict, NotApplicable> {
    const ID: &str = "ngd-best-effective-stepsize";
    let (cx, l) = tuned_ngd_context(ID, report, spec)?;
    let inputs = BoundInputs {
        smoothness: Some(l),
        ..cx.inputs()
    };
    if report.status == RunStatus::Stationary {
        // The best iterate has zero gradient, so its effective stepsize is unbounded.
        let lhs = report.max_effective_stepsize().unwrap_or(0.0);
        let mut v = BoundVerdict::new(ID, lhs, 1.0 / (2.0 * l), BoundSense::Lower, inputs);
        v.satisfied = true;
        return Ok(v);
    }
    let best = report
        .records
        .iter()
        .filter(|r| r.f_value == report.best_value)
        .map(|r| r.effective_stepsize)
        .next()
        .ok_or_else(|| NotApplicable::new(ID, "best iterate not among the records"))?;
    Ok(BoundVerdict::new(ID, best, 1.0 / (2.0 * l), BoundSense::Lower, inputs))
}

struct DowgContext<'a> {
    cx: Context<'a>,
    d: f64,
    r_eps: f64,
    lhs: f64,
}

fn dowg_context<'a>(id: &str, report: &'a RunReport, spec: &'a ProblemSpec) -> Result<DowgContext<'a>, NotApplicable> {
    let cx = context(id, report, spec, OptimizerKind::Dowg)?;
    let d = report
        .config
        .domain
        .diameter()
        .ok_or_else(|| NotApplicable::new(id, "domain is not compact, diameter D unknown"))?;
    let r_eps = report.config.r_eps.expect("validated config");
    if !(r_eps < d) {
        return Err(NotApplicable::new(id, "r_eps is not below the diameter"));
    }
    let avg = report.min_avg_gap();
    let lhs = if report.status == RunStatus::Stationary {
        avg.map_or(report.min_gap(cx.f_star), |a| a.min(report.min_gap(cx.f_star)))
    } else {
        avg.ok_or_else(|| NotApplicable::new(id, "no weighted-average telemetry"))?
    };
    Ok(DowgContext { cx, d, r_eps, lhs })
}

/// Best weighted-average DoWG gap against `16 (G D/sqrt(T)) log_+(D/r_eps)`.
pub fn verify_dowg_nonsmooth(report: &RunReport, spec: &ProblemSpec) -> Result<BoundVerdict, NotApplicable> {
    const ID: &str = "dowg-lipschitz";
    let dc = dowg_context(ID, report, spec)?;
    let g = dc.cx.lipschitz(ID)?;
    let rhs = dowg_nonsmooth_rhs(g, dc.d, dc.r_eps, dc.cx.steps);
    let inputs = BoundInputs {
        diameter: Some(dc.d),
        lipschitz: Some(g),
        ..dc.cx.inputs()
    };
    Ok(BoundVerdict::new(ID, dc.lhs, rhs, BoundSense::Upper, inputs))
}

/// Best weighted-average DoWG gap against `64 e (L D^2/T) log_+(D/r_eps)`.
pub fn verify_dowg_smooth(report: &RunReport, spec: &ProblemSpec) -> Result<BoundVerdict, NotApplicable> {
    const ID: &str = "dowg-smooth";
    let dc = dowg_context(ID, report, spec)?;
    let l = dc.cx.smoothness(ID)?;
    let rhs = dowg_smooth_rhs(l, dc.d, dc.r_eps, dc.cx.steps);
    let inputs = BoundInputs {
        diameter: Some(dc.d),
        smoothness: Some(l),
        ..dc.cx.inputs()
    };
    Ok(BoundVerdict::new(ID, dc.lhs, rhs, BoundSense::Upper, inputs))
}

type Checker = fn(&RunReport, &ProblemSpec) -> Result<BoundVerdict, NotApplicable>;

/// Ids accepted by [`verify_by_id`].
pub const THEOREM_IDS: &[&str] = &[
    "gd-lipschitz",
    "gd-lipschitz-tuned",
    "gd-smooth",
    "ngd-lipschitz",
    "ngd-smooth",
    "ngd-smooth-tuned",
    "ngd-effective-stepsize",
    "ngd-best-effective-stepsize",
    "dowg-lipschitz",
    "dowg-smooth",
];

/// Runs the checker named `id`; `None` for an unknown id.
pub fn verify_by_id(id: &str, report: &RunReport, spec: &ProblemSpec) -> Option<Result<BoundVerdict, NotApplicable>> {
    let checker: Checker = match id {
        "gd-lipschitz" => verify_gd_nonsmooth,
        "gd-lipschitz-tuned" => verify_gd_nonsmooth_tuned,
        "gd-smooth" => verify_gd_smooth,
        "ngd-lipschitz" => verify_ngd_nonsmooth,
        "ngd-smooth" => verify_ngd_smooth,
        "ngd-smooth-tuned" => verify_ngd_smooth_tuned,
        "ngd-effective-stepsize" => verify_ngd_effective_stepsize,
        "ngd-best-effective-stepsize" => verify_ngd_best_effective_stepsize,
        "dowg-lipschitz" => verify_dowg_nonsmooth,
        "dowg-smooth" => verify_dowg_smooth,
        _ => return None,
    };
    Some(checker(report, spec))
}

/// Every bound whose preconditions hold for this run.
pub fn applicable_verdicts(report: &RunReport, spec: &ProblemSpec) -> Vec<BoundVerdict> {
    let checkers: &[Checker] = match report.config.optimizer {
        OptimizerKind::Gd => &[verify_gd_nonsmooth, verify_gd_nonsmooth_tuned, verify_gd_smooth],
        OptimizerKind::Ngd => &[
            verify_ngd_nonsmooth,
            verify_ngd_smooth,
            verify_ngd_smooth_tuned,
            verify_ngd_effective_stepsize,
            verify_ngd_best_effective_stepsize,
        ],
        OptimizerKind::Dowg => &[verify_dowg_nonsmooth, verify_dowg_smooth],
        OptimizerKind::Dog => &[],
    };
    checkers.iter().filter_map(|c| c(report, spec).ok()).collect()
}
