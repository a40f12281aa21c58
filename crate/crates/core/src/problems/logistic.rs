use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::design::Design;
use super::ProblemSpec;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::numeric::{axpy, dot, norm, norm_sq};
use crate::objective::{KnownConstants, Objective, Optimum, Oracle};

const REFERENCE_MAX_STEPS: usize = 1_000_000;
const REFERENCE_GRAD_TOL: f64 = 1e-12;

/// `log(1 + exp(z))` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `f(x) = (1/n) sum log(1 + exp(-y_i a_i^T x)) + lambda |x|^2 / 2`, labels in {-1, +1}.
#[derive(Clone, Debug)]
struct Logistic {
    a: Design,
    y: Vec<f64>,
    lambda: f64,
}

impl Oracle for Logistic {
    fn dim(&self) -> usize {
        self.a.cols()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let n = self.a.rows() as f64;
        let loss: f64 = (0..self.a.rows())
            .map(|i| softplus(-self.y[i] * dot(self.a.row(i), x)))
            .sum();
        loss / n + self.lambda * norm_sq(x) / 2.0
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        let n = self.a.rows() as f64;
        out.fill(0.0);
        for i in 0..self.a.rows() {
            let yi = self.y[i];
            let coef = -yi * sigmoid(-yi * dot(self.a.row(i), x));
            axpy(coef, self.a.row(i), out);
        }
        for (o, xi) in out.iter_mut().zip(x) {
            *o = *o / n + self.lambda * xi;
        }
    }
}

/// Logistic regression on given data. `x*` comes from gradient descent with
/// stepsize `1/L`, run until the gradient norm drops to `1e-12`.
pub fn logistic_from_data(id: impl Into<String>, a: Design, y: Vec<f64>, lambda: f64) -> Result<ProblemSpec> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Config(format!("logistic requires lambda >= 0, got {lambda}")));
    }
    if y.len() != a.rows() {
        return Err(Error::Dimension {
            expected: a.rows(),
            got: y.len(),
        });
    }
    if let Some(bad) = y.iter().find(|v| **v != 1.0 && **v != -1.0) {
        return Err(Error::Data(format!("logistic labels must be +1 or -1, got {bad}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let start: Vec<f64> = (0..a.cols()).map(|_| rng.sample(StandardNormal)).collect();
    let l = a.top_gram_eigenvalue(&start, 10_000)? / 4.0 + lambda;
    let d = a.cols();
    let oracle = Logistic { a, y, lambda };

    let mut x = vec![0.0; d];
    let mut g = vec![0.0; d];
    let mut grad_norm = f64::INFINITY;
    for _ in 0..REFERENCE_MAX_STEPS {
        oracle.gradient(&x, &mut g);
        grad_norm = norm(&g);
        if grad_norm <= REFERENCE_GRAD_TOL {
            break;
        }
        axpy(-1.0 / l, &g, &mut x);
    }
    let f_star = oracle.value(&x);
    let known = KnownConstants {
        optimum: Some(Optimum {
            point: x,
            value: f_star,
        }),
        smoothness: Some(l),
        lipschitz: None,
    };
    Ok(ProblemSpec {
        id: id.into(),
        seed: 0,
        objective: Objective::new(oracle, known),
        domain: Domain::full(),
        initial_point: vec![0.0; d],
        notes: format!(
            "smooth (L = {l:.6e}); reference optimum with gradient norm {grad_norm:.3e}; unconstrained"
        ),
    })
}

/// Synthetic logistic regression: `N(0, 1/d)` features and labels from a
/// random linear model with Gaussian label noise.
pub fn make_logistic(n: usize, d: usize, lambda: f64, seed: u64) -> Result<ProblemSpec> {
    if n == 0 || d == 0 {
        return Err(Error::Config("logistic requires n, d >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = Design::gaussian(n, d, &mut rng);
    let w: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
    let y = (0..n)
        .map(|i| {
            let noise: f64 = rng.sample(StandardNormal);
            if dot(a.row(i), &w) + 0.5 * noise >= 0.0 {
                1.0
            } else {
                -1.0
            }
        })
        .collect();
    let mut spec = logistic_from_data("logistic", a, y, lambda)?;
    spec.seed = seed;
    Ok(spec)
}
