use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::design::{ridge_normal_solve, Design};
use super::ProblemSpec;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::numeric::norm_sq;
use crate::objective::{KnownConstants, Objective, Optimum, Oracle};

const POWER_ITERATIONS: usize = 10_000;

/// `f(x) = |Ax - b|^2 / (2n) + lambda |x|^2 / 2`
#[derive(Clone, Debug)]
struct Ridge {
    a: Design,
    b: Vec<f64>,
    lambda: f64,
}

impl Ridge {
    fn residual(&self, x: &[f64]) -> Vec<f64> {
        let mut r = vec![0.0; self.a.rows()];
        self.a.matvec(x, &mut r);
        for (ri, bi) in r.iter_mut().zip(&self.b) {
            *ri -= bi;
        }
        r
    }
}

impl Oracle for Ridge {
    fn dim(&self) -> usize {
        self.a.cols()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let n = self.a.rows() as f64;
        norm_sq(&self.residual(x)) / (2.0 * n) + self.lambda * norm_sq(x) / 2.0
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        let n = self.a.rows() as f64;
        let r = self.residual(x);
        self.a.rmatvec(&r, out);
        for (o, xi) in out.iter_mut().zip(x) {
            *o = *o / n + self.lambda * xi;
        }
    }
}

/// Ridge regression on given data: `L` by power iteration, `x*` by a
/// Cholesky solve of the normal equations.
pub fn ridge_from_data(id: impl Into<String>, a: Design, b: Vec<f64>, lambda: f64) -> Result<ProblemSpec> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Config(format!("ridge requires lambda > 0, got {lambda}")));
    }
    if b.len() != a.rows() {
        return Err(Error::Dimension {
            expected: a.rows(),
            got: b.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let start: Vec<f64> = (0..a.cols()).map(|_| rng.sample(StandardNormal)).collect();
    let l = a.top_gram_eigenvalue(&start, POWER_ITERATIONS)? + lambda;
    let x_star = ridge_normal_solve(&a, &b, lambda)?;
    let d = a.cols();
    let oracle = Ridge { a, b, lambda };
    let f_star = oracle.value(&x_star);
    let known = KnownConstants {
        optimum: Some(Optimum {
            point: x_star,
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
        notes: format!("smooth (L = {l:.6e}), strongly convex (lambda = {lambda}); unconstrained"),
    })
}

/// Synthetic ridge regression: `A` has i.i.d. `N(0, 1/d)` entries and `b`
/// i.i.d. `N(0, 1)` entries, both drawn from `seed`.
pub fn make_ridge_regression(n: usize, d: usize, lambda: f64, seed: u64) -> Result<ProblemSpec> {
    if n == 0 || d == 0 {
        return Err(Error::Config("ridge requires n, d >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = Design::gaussian(n, d, &mut rng);
    let b = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let mut spec = ridge_from_data("ridge", a, b, lambda)?;
    spec.seed = seed;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_closed_form() {
        let a = Design::from_rows(&[vec![2.0]]).unwrap();
        let p = ridge_from_data("scalar", a, vec![2.0], 2.0).unwrap();
        // x* = a b / (a^2 + n lambda)
        let xs = p.objective.x_star().unwrap()[0];
        assert!((xs - 2.0 / 3.0).abs() < 1e-15);
        let f = |x: f64| (2.0 * x - 2.0).powi(2) / 2.0 + x * x;
        assert!((p.objective.f_star().unwrap() - f(2.0 / 3.0)).abs() < 1e-15);
        assert!((p.objective.value(&[0.3]) - f(0.3)).abs() < 1e-15);
        // L = a^2 / n + lambda
        assert!((p.objective.smoothness().unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn optimum_beats_origin() {
        for seed in 0..5 {
            let p = make_ridge_regression(30, 4, 1e-2, seed).unwrap();
            assert!(p.objective.f_star().unwrap() <= p.objective.value(&[0.0; 4]));
            let g = p.objective.gradient(p.objective.x_star().unwrap());
            assert!(norm_sq(&g).sqrt() < 1e-12);
        }
    }

    #[test]
    fn smoothness_matches_dense_eigensolver() {
        let p = make_ridge_regression(50, 5, 1e-2, 7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = Design::gaussian(50, 5, &mut rng);
        let dense = a.gram().symmetric_eigen().eigenvalues.max() + 1e-2;
        let l = p.objective.smoothness().unwrap();
        assert!((l - dense).abs() <= 1e-6 * dense);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = make_ridge_regression(20, 3, 0.1, 11).unwrap();
        let b = make_ridge_regression(20, 3, 0.1, 11).unwrap();
        assert_eq!(a.objective.known(), b.objective.known());
        let x = [0.1, -0.2, 0.3];
        assert_eq!(a.objective.value(&x).to_bits(), b.objective.value(&x).to_bits());
    }

    #[test]
    fn invalid_parameters() {
        assert!(make_ridge_regression(0, 3, 0.1, 0).is_err());
        assert!(make_ridge_regression(10, 3, 0.0, 0).is_err());
    }
}
