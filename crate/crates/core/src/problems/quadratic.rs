use super::ProblemSpec;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::objective::{KnownConstants, Objective, Optimum, Oracle};

/// `f(x) = L x^2 / 2` on the real line.
#[derive(Clone, Debug)]
struct Quadratic1d {
    l: f64,
}

impl Oracle for Quadratic1d {
    fn dim(&self) -> usize {
        1
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.l * x[0] * x[0] / 2.0
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        out[0] = self.l * x[0];
    }
}

/// One-dimensional quadratic with smoothness exactly `l`, started at `x0 = 1`.
pub fn make_quadratic_1d(l: f64) -> Result<ProblemSpec> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::Config(format!("smoothness must be positive, got {l}")));
    }
    let known = KnownConstants {
        optimum: Some(Optimum {
            point: vec![0.0],
            value: 0.0,
        }),
        smoothness: Some(l),
        lipschitz: None,
    };
    Ok(ProblemSpec {
        id: "quadratic1d".into(),
        seed: 0,
        objective: Objective::new(Quadratic1d { l }, known),
        domain: Domain::full(),
        initial_point: vec![1.0],
        notes: format!(
            "smooth (L = {l}); not globally Lipschitz, but G = L*R on a radius-R ball around 0"
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_and_gradients() {
        let p = make_quadratic_1d(100.0).unwrap();
        assert_eq!(p.objective.value(&[1.0]), 50.0);
        assert_eq!(p.objective.gradient(&[1.0]), vec![100.0]);
        assert_eq!(p.objective.value(&[0.0]), 0.0);
        assert_eq!(p.objective.gradient(&[0.0]), vec![0.0]);

        let p = make_quadratic_1d(2.0).unwrap();
        assert_eq!(p.objective.value(&[3.0]), 9.0);
        assert_eq!(p.objective.gradient(&[3.0]), vec![6.0]);
    }

    #[test]
    fn rejects_nonpositive_smoothness() {
        assert!(make_quadratic_1d(0.0).is_err());
    }
}
