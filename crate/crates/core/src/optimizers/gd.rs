use super::{base_record, Optimizer, StepOutcome, UniformAverage};
use crate::domain::Domain;
use crate::numeric::{axpy, norm};
use crate::objective::Objective;

/// Projected gradient descent with a fixed stepsize.
#[derive(Clone, Debug)]
pub struct GdState {
    x: Vec<f64>,
    eta: f64,
    t: usize,
    grad: Vec<f64>,
    avg: UniformAverage,
}

impl GdState {
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

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

impl Optimizer for GdState {
    fn iterate(&self) -> &[f64] {
        &self.x
    }

    fn step(&mut self, obj: &Objective, dom: &Domain) -> StepOutcome {
        obj.gradient_into(&self.x, &mut self.grad);
        let rec = base_record(self.t, obj, &self.x, norm(&self.grad), self.eta);
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
    fn stable_stepsize_contracts() {
        let mut s = GdState::new(vec![1.0], 1.9 / 100.0);
        let StepOutcome::Moved(rec) = s.step(&quad(), &Domain::full()) else { panic!() };
        // (1 - 1.9) * 1
        assert!((s.iterate()[0] + 0.9).abs() < 1e-15);
        assert_eq!(rec.stepsize, 0.019);
        assert_eq!(rec.effective_stepsize, 0.019);
    }

    #[test]
    fn unstable_stepsize_expands() {
        let mut s = GdState::new(vec![1.0], 2.1 / 100.0);
        s.step(&quad(), &Domain::full());
        assert!((s.iterate()[0] + 1.1).abs() < 1e-15);
        let mut prev = s.iterate()[0].abs();
        for _ in 0..10 {
            s.step(&quad(), &Domain::full());
            assert!(s.iterate()[0].abs() > prev);
            prev = s.iterate()[0].abs();
        }
    }

    #[test]
    fn minimizer_is_a_fixed_point() {
        let mut s = GdState::new(vec![0.0], 0.5);
        s.step(&quad(), &Domain::full());
        assert_eq!(s.iterate(), &[0.0]);
    }

    #[test]
    fn projection_keeps_iterates_feasible() {
        let dom = Domain::ball(vec![0.0], 0.5).unwrap();
        let mut s = GdState::new(vec![0.5], 2.1 / 100.0);
        for _ in 0..20 {
            s.step(&quad(), &dom);
            assert!(dom.contains(s.iterate(), 1e-15));
        }
    }
}
