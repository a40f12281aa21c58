use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::{dowg_smooth_problems, problem_label, ngd_smooth_problems, nonsmooth_problems, CheckLine, CheckReport};
use crate::analysis::{
    check_convexity, check_gradient_fd, check_lipschitz, check_projection, check_smoothness_fact,
    lemma_log_ratio_check, lemma_seq_check,
};
use crate::domain::Domain;
use crate::error::Result;

pub const FUZZ_CASES: usize = 1000;
const FUZZ_SEED: u64 = 0x1e44a;

/// Random nondecreasing nonnegative sequence of length `1..=100` spanning
/// several orders of magnitude, with occasional repeated values and a zero start.
pub fn random_monotone(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let len = rng.random_range(1..=100);
    let mut a = Vec::with_capacity(len);
    let mut cur = if rng.random_bool(0.2) { 0.0 } else { 10f64.powf(rng.random_range(-3.0..3.0)) };
    a.push(cur);
    for _ in 1..len {
        if !rng.random_bool(0.2) {
            cur += 10f64.powf(rng.random_range(-4.0..3.0)) * rng.random::<f64>();
        }
        a.push(cur);
    }
    a
}

/// Random positive nondecreasing sequence of length `2..=101`.
pub fn random_positive_increasing(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let len = rng.random_range(2..=101);
    let mut cur = 10f64.powf(rng.random_range(-3.0..3.0));
    let mut s = vec![cur];
    let growth = 10f64.powf(rng.random_range(-6.0..1.0));
    for _ in 1..len {
        cur *= 1.0 + growth * rng.random::<f64>();
        s.push(cur);
    }
    s
}

fn lemma_fuzz(out: &mut CheckReport) {
    let mut rng = ChaCha8Rng::seed_from_u64(FUZZ_SEED);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..FUZZ_CASES {
        let (lhs, rhs) = lemma_seq_check(&random_monotone(&mut rng)).expect("valid sequence");
        worst = worst.max(lhs - rhs);
    }
    out.push(CheckLine::new(
        "lemma-nondecreasing-sequence",
        worst <= 1e-12,
        format!("{FUZZ_CASES} sequences, max lhs - rhs = {worst:.3e}"),
    ));
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..FUZZ_CASES {
        let (lhs, rhs) = lemma_log_ratio_check(&random_positive_increasing(&mut rng)).expect("valid sequence");
        worst = worst.max(rhs - lhs);
    }
    out.push(CheckLine::new(
        "lemma-log-ratio",
        worst <= 1e-12,
        format!("{FUZZ_CASES} sequences, max rhs - lhs = {worst:.3e}"),
    ));
}

fn problem_checks(out: &mut CheckReport) -> Result<()> {
    let mut smooth = ngd_smooth_problems()?;
    smooth.extend(dowg_smooth_problems()?);
    for p in &smooth {
        let ok = check_smoothness_fact(p, 1000, 2).unwrap_or(false);
        out.push(CheckLine::new(format!("smoothness-fact {}", problem_label(p)), ok, "1000 random domain points"));
        let err = check_gradient_fd(p, 100, 2).unwrap_or(f64::INFINITY);
        out.push(CheckLine::new(
            format!("gradient-finite-difference {}", problem_label(p)),
            err <= 1e-5,
            format!("max relative error {err:.3e} at 100 points"),
        ));
    }
    let nonsmooth = nonsmooth_problems()?;
    for p in &nonsmooth {
        let excess = check_lipschitz(p, 1000, 2).unwrap_or(f64::INFINITY);
        out.push(CheckLine::new(
            format!("lipschitz-constant {}", problem_label(p)),
            excess <= 1e-12,
            format!("max |g| - G = {excess:.3e} at 1000 points"),
        ));
    }
    for p in smooth.iter().chain(&nonsmooth) {
        let v = check_convexity(p, 1000, 2);
        out.push(CheckLine::new(
            format!("midpoint-convexity {}", problem_label(p)),
            v <= 1e-12,
            format!("max relative violation {v:.3e} over 1000 pairs"),
        ));
    }
    Ok(())
}

fn projection_checks(out: &mut CheckReport) -> Result<()> {
    let domains = [
        ("full_space", Domain::full()),
        ("ball", Domain::ball(vec![1.0, -2.0, 0.5, 0.0], 1.5)?),
        ("box", Domain::boxed(vec![-1.0, 0.0, -3.0, 2.0], vec![1.0, 0.25, 3.0, 2.5])?),
    ];
    for (name, dom) in domains {
        let c = check_projection(&dom, 4, 1000, 3);
        let idem_ok = if matches!(dom, Domain::FullSpace) {
            c.max_idempotence_error == 0.0
        } else {
            c.max_idempotence_error <= 1e-12
        };
        out.push(CheckLine::new(
            format!("projection {name}"),
            c.max_expansion <= 1e-12 && idem_ok && c.feasible,
            format!(
                "1000 pairs, max expansion {:.3e}, max idempotence error {:.3e}",
                c.max_expansion, c.max_idempotence_error
            ),
        ));
    }
    Ok(())
}

/// Lemma fuzzing, declared-constant checks, gradient checks and projection properties.
pub fn selftest() -> Result<CheckReport> {
    let mut out = CheckReport::default();
    lemma_fuzz(&mut out);
    problem_checks(&mut out)?;
    projection_checks(&mut out)?;
    Ok(out)
}
