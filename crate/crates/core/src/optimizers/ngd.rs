use super::{base_record, Optimizer, StepOutcome, UniformAverage};
use crate::domain::Domain;
use crate::numeric::{axpy, max_abs, norm};
use crate::objective::Objective;

/// Normalized gradient descent: a step of length `eta` along `-g / |g|`.
#[derive(Clone, Debug)]
pub struct NgdState {
    x: Vec<f64>,
    eta: f64,
    t: usize,
    grad: Vec<f64>,
    avg: UniformAverage,
}

impl NgdState {
    pub fn new(x0: Vec<f64>, eta: f64) -> Self {
        let d = x0.len();
        Self {
            x: x0,
            eta,
            t: 0,
            grad: vec![0.0; d],
            avg: UniformAverage::new(d),
        }
    }
}

/// Rescales `g` in place to a unit vector and returns the original norm,
/// or `None` when `g` is zero.
///
/// Dividing by the largest magnitude first keeps the norm free of
/// overflow/underflow, and makes the direction exactly invariant under
/// `g -> alpha * g` whenever the scaled components are exact (one-dimensional
/// problems, sign-vector subgradients).
pub(crate) fn normalize(g: &mut [f64]) -> Option<f64> {
    let m = max_abs(g);
    if m == 0.0 || !m.is_finite() {
        return if m == 0.0 { None } else { Some(f64::INFINITY) };
    }
    for gi in g.iter_mut() {
        *gi /= m;
    }
    let s = norm(g);
    for gi in g.iter_mut() {
        *gi /= s;
    }
    Some(m * s)
}

impl Optimizer for NgdState {
    fn iterate(&self) -> &[f64] {
        &self.x
    }

    fn step(&mut self, obj: &Objective, dom: &Domain) -> StepOutcome {
        obj.gradient_into(&self.x, &mut self.grad);
        let Some(grad_norm) = normalize(&mut self.grad) else {
            return StepOutcome::Stationary;
        };
        let mut rec = base_record(self.t, obj, &self.x, grad_norm, self.eta);
        rec.effective_stepsize = self.eta / grad_norm;
        self.avg.push(&self.x);
        axpy(-self.eta, &self.grad, &mut self.x);
        dom.project_in_place(&mut self.x);
        self.t += 1;
        StepOutcome::Moved(rec)
    }

    fn averaged_iterate(&self) -> Option<Vec<f64>> {
        self.avg.mean()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::KnownConstants;

    fn quad() -> Objective {
        Objective::from_fns(1, |x| 50.0 * x[0] * x[0], |x, g| g[0] = 100.0 * x[0], KnownConstants::default())
    }

    #[test]
    fn moves_a_fixed_distance() {
        let mut s = NgdState::new(vec![1.0], 0.1);
        let StepOutcome::Moved(rec) = s.step(&quad(), &Domain::full()) else { panic!() };
        assert_eq!(s.iterate(), &[0.9]);
        assert_eq!(rec.grad_norm, 100.0);
        assert_eq!(rec.effective_stepsize, 0.1 / 100.0);
    }

    #[test]
    fn overshoots_near_the_optimum() {
        let mut s = NgdState::new(vec![-0.05], 0.1);
        s.step(&quad(), &Domain::full());
        assert!((s.iterate()[0] - 0.05).abs() < 1e-16);
    }

    #[test]
    fn zero_gradient_is_stationary() {
        let mut s = NgdState::new(vec![0.0], 0.1);
        assert_eq!(s.step(&quad(), &Domain::full()), StepOutcome::Stationary);
        assert_eq!(s.iterate(), &[0.0]);
    }

    #[test]
    fn normalize_handles_extreme_magnitudes() {
        let mut g = vec![3e-320, 4e-320];
        let n = normalize(&mut g).unwrap();
        assert!((g[0] - 0.6).abs() < 1e-15 && (g[1] - 0.8).abs() < 1e-15);
        assert!(n > 0.0);
        let mut g = vec![3e300, 4e300];
        assert!((normalize(&mut g).unwrap() - 5e300).abs() < 1e286);
        assert_eq!(normalize(&mut [0.0, 0.0]), None);
    }
}
