use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::NotApplicable;
use crate::domain::Domain;
use crate::numeric::{dist, norm, norm_sq};
use crate::problems::ProblemSpec;

/// Central-difference step for the gradient check.
const FD_STEP: f64 = 1e-6;

fn gaussian(d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..d).map(|_| rng.sample(StandardNormal)).collect()
}

/// Random points of the problem's domain. Unbounded domains are sampled from a
/// Gaussian around the minimizer whose scale covers the default start.
pub fn sample_domain_points(spec: &ProblemSpec, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = spec.dim();
    let anchor = spec.objective.x_star().unwrap_or(&spec.initial_point).to_vec();
    let scale = 2.0 * spec.initial_distance().unwrap_or(0.0).max(1.0);
    (0..n)
        .map(|_| match &spec.domain {
            Domain::FullSpace => gaussian(d, &mut rng)
                .iter()
                .zip(&anchor)
                .map(|(z, a)| a + scale * z)
                .collect(),
            Domain::Ball { center, radius } => {
                let dir = gaussian(d, &mut rng);
                let n = norm(&dir);
                let u: f64 = rng.random();
                let r = radius * u.powf(1.0 / d as f64);
                center.iter().zip(&dir).map(|(c, z)| c + r * z / n).collect()
            }
            Domain::Box { lower, upper } => lower
                .iter()
                .zip(upper)
                .map(|(lo, hi)| lo + (hi - lo) * rng.random::<f64>())
                .collect(),
        })
        .collect()
}

/// Whether `|grad f(x)|^2 <= 2 L (f(x) - f*)` holds at `n` random domain points,
/// with relative slack `1e-9`.
pub fn check_smoothness_fact(spec: &ProblemSpec, n: usize, seed: u64) -> Result<bool, NotApplicable> {
    const ID: &str = "smoothness-fact";
    let l = spec
        .objective
        .smoothness()
        .ok_or_else(|| NotApplicable::new(ID, "smoothness constant L unknown"))?;
    let f_star = spec
        .objective
        .f_star()
        .ok_or_else(|| NotApplicable::new(ID, "optimal value unknown"))?;
    Ok(sample_domain_points(spec, n, seed).iter().all(|x| {
        let lhs = norm_sq(&spec.objective.gradient(x));
        let rhs = 2.0 * l * (spec.objective.value(x) - f_star);
        lhs <= rhs * (1.0 + 1e-9)
    }))
}

/// Largest relative error between the gradient and central finite differences
/// (step `1e-6`) over `n` random domain points. Smooth problems only.
pub fn check_gradient_fd(spec: &ProblemSpec, n: usize, seed: u64) -> Result<f64, NotApplicable> {
    if !spec.is_smooth() {
        return Err(NotApplicable::new("gradient-fd", "objective is not smooth"));
    }
    let obj = &spec.objective;
    let mut worst: f64 = 0.0;
    for x in sample_domain_points(spec, n, seed) {
        let g = obj.gradient(&x);
        let mut fd = vec![0.0; x.len()];
        let mut probe = x.clone();
        for i in 0..x.len() {
            probe[i] = x[i] + FD_STEP;
            let up = obj.value(&probe);
            probe[i] = x[i] - FD_STEP;
            let down = obj.value(&probe);
            probe[i] = x[i];
            fd[i] = (up - down) / (2.0 * FD_STEP);
        }
        let scale = norm(&g);
        let err = dist(&fd, &g);
        worst = worst.max(if scale > 0.0 { err / scale } else { err });
    }
    Ok(worst)
}

/// Largest `|subgrad f(x)| - G` over `n` random domain points; at most `1e-12` when `G` is valid.
pub fn check_lipschitz(spec: &ProblemSpec, n: usize, seed: u64) -> Result<f64, NotApplicable> {
    let g = spec
        .objective
        .lipschitz()
        .ok_or_else(|| NotApplicable::new("lipschitz", "Lipschitz constant G unknown"))?;
    Ok(sample_domain_points(spec, n, seed)
        .iter()
        .map(|x| norm(&spec.objective.gradient(x)) - g)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Largest midpoint-convexity violation `f((x+y)/2) - (f(x)+f(y))/2` over `n`
/// random pairs, relative to `max(1, |f(x)| + |f(y)|)`.
pub fn check_convexity(spec: &ProblemSpec, n: usize, seed: u64) -> f64 {
    let pts = sample_domain_points(spec, 2 * n, seed);
    let obj = &spec.objective;
    pts.chunks(2)
        .map(|pair| {
            let (x, y) = (&pair[0], &pair[1]);
            let mid: Vec<f64> = x.iter().zip(y).map(|(a, b)| (a + b) / 2.0).collect();
            let (fx, fy) = (obj.value(x), obj.value(y));
            (obj.value(&mid) - (fx + fy) / 2.0) / (fx.abs() + fy.abs()).max(1.0)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Projection properties measured on random pairs of points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionCheck {
    /// Largest `|P(x) - P(y)| - |x - y|`.
    pub max_expansion: f64,
    /// Largest `|P(P(x)) - P(x)|`.
    pub max_idempotence_error: f64,
    /// Whether every projected point lies in the domain (tolerance `1e-12`).
    pub feasible: bool,
}

/// Checks nonexpansiveness, idempotence and feasibility of the projection on
/// `n_pairs` random pairs drawn well outside and inside the set.
pub fn check_projection(domain: &Domain, dim: usize, n_pairs: usize, seed: u64) -> ProjectionCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = domain.diameter().unwrap_or(1.0).max(1.0) * 3.0;
    let mut out = ProjectionCheck {
        max_expansion: f64::NEG_INFINITY,
        max_idempotence_error: 0.0,
        feasible: true,
    };
    for _ in 0..n_pairs {
        let x: Vec<f64> = gaussian(dim, &mut rng).iter().map(|v| v * scale).collect();
        let y: Vec<f64> = gaussian(dim, &mut rng).iter().map(|v| v * scale).collect();
        let (px, py) = (domain.project(&x).expect("dim"), domain.project(&y).expect("dim"));
        out.max_expansion = out.max_expansion.max(dist(&px, &py) - dist(&x, &y));
        let ppx = domain.project(&px).expect("dim");
        out.max_idempotence_error = out.max_idempotence_error.max(dist(&ppx, &px));
        out.feasible &= domain.contains(&px, 1e-12) && domain.contains(&py, 1e-12);
    }
    out
}
