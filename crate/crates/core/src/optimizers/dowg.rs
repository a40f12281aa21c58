use super::{base_record, Optimizer, StepOutcome};
use crate::domain::Domain;
use crate::numeric::{axpy, dist, norm_sq};
use crate::objective::Objective;

/// Distance over Weighted Gradients.
///
/// Per step: `rbar <- max(|x - x0|, rbar)`, `v <- v + rbar^2 |g|^2`,
/// `eta <- rbar^2 / sqrt(v)`, then a projected gradient step. The averaged
/// iterate weights `x_k` by `rbar_k^2`.
#[derive(Clone, Debug)]
pub struct DowgState {
    x: Vec<f64>,
    x0: Vec<f64>,
    rbar: f64,
    v: f64,
    avg_num: Vec<f64>,
    avg_den: f64,
    r_eps: f64,
    t: usize,
    grad: Vec<f64>,
}

impl DowgState {
    pub fn new(x0: Vec<f64>, r_eps: f64) -> Self {
        let d = x0.len();
        Self {
            x: x0.clone(),
            x0,
            rbar: r_eps,
            v: 0.0,
            avg_num: vec![0.0; d],
            avg_den: 0.0,
            r_eps,
            t: 0,
            grad: vec![0.0; d],
        }
    }

    pub fn rbar(&self) -> f64 {
        self.rbar
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn r_eps(&self) -> f64 {
        self.r_eps
    }
}

impl Optimizer for DowgState {
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
        let w = self.rbar * self.rbar;
        self.v += w * g_sq;
        assert!(self.v > 0.0, "weighted gradient sum vanished with a nonzero gradient");
        let eta = w / self.v.sqrt();

        let mut rec = base_record(self.t, obj, &self.x, g_sq.sqrt(), eta);
        rec.rbar = Some(self.rbar);
        rec.v = Some(self.v);

        axpy(w, &self.x, &mut self.avg_num);
        self.avg_den += w;
        if obj.f_star().is_some() {
            let avg = self.averaged_iterate().expect("avg_den > 0");
            rec.avg_f_gap = obj.gap(&avg);
        }

        axpy(-eta, &self.grad, &mut self.x);
        dom.project_in_place(&mut self.x);
        self.t += 1;
        StepOutcome::Moved(rec)
    }

    fn averaged_iterate(&self) -> Option<Vec<f64>> {
        (self.avg_den > 0.0).then(|| self.avg_num.iter().map(|s| s / self.avg_den).collect())
    }
}
