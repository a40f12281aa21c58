use super::{base_record, Optimizer, StepOutcome, UniformAverage};
use crate::domain::Domain;
use crate::numeric::{axpy, dist, norm_sq};
use crate::objective::Objective;

/// Distance over Gradients: `eta_t = rbar_t / sqrt(sum_{k<=t} |g_k|^2)`.
#[derive(Clone, Debug)]
pub struct DogState {
    x: Vec<f64>,
    x0: Vec<f64>,
    rbar: f64,
    grad_sq_sum: f64,
    r_eps: f64,
    t: usize,
    grad: Vec<f64>,
    avg: UniformAverage,
}

impl DogState {
    pub fn new(x0: Vec<f64>, r_eps: f64) -> Self {
        let d = x0.len();
        Self {
            x: x0.clone(),
            x0,
            rbar: r_eps,
            grad_sq_sum: 0.0,
            r_eps,
            t: 0,
            grad: vec![0.0; d],
            avg: UniformAverage::new(d),
        }
    }

    pub fn rbar(&self) -> f64 {
        self.rbar
    }

    pub fn grad_sq_sum(&self) -> f64 {
        self.grad_sq_sum
    }

    pub fn r_eps(&self) -> f64 {
        self.r_eps
    }
}

impl Optimizer for DogState {
    fn iterate(&self) -> &[f64] {
        &self.x
    }

    fn step(&mut self, obj: &Objective, dom: &Domain) -> StepOutcome {
        self.rbar = self.rbar.max(dist(&self.x, &self.x0));
        obj.gradient_into(&self.x, &mut self.grad);
        let g_sq = norm_sq(&self.grad);
        if g_sq == 0.0 {
            return StepOutcome::Stationary;
        }
        self.grad_sq_sum += g_sq;
        let eta = self.rbar / self.grad_sq_sum.sqrt();

        let mut rec = base_record(self.t, obj, &self.x, g_sq.sqrt(), eta);
        rec.rbar = Some(self.rbar);

        self.avg.push(&self.x);
        axpy(-eta, &self.grad, &mut self.x);
        dom.project_in_place(&mut self.x);
        self.t += 1;
        StepOutcome::Moved(rec)
    }

    fn averaged_iterate(&self) -> Option<Vec<f64>> {
        self.avg.mean()
    }
}
