//! Closed convex feasible sets with Euclidean projection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::dist;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    FullSpace,
    Ball { center: Vec<f64>, radius: f64 },
    Box { lower: Vec<f64>, upper: Vec<f64> },
}

impl Domain {
    pub fn full() -> Self {
        Domain::FullSpace
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Config(format!(
                "ball radius must be positive and finite, got {radius}"
            )));
        }
        if center.is_empty() || center.iter().any(|c| !c.is_finite()) {
            return Err(Error::Config("ball center must be a finite, nonempty point".into()));
        }
        Ok(Domain::Ball { center, radius })
    }

    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::Dimension {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::Config("box must have at least one coordinate".into()));
        }
        for (l, u) in lower.iter().zip(&upper) {
            if !(l.is_finite() && u.is_finite() && l < u) {
                return Err(Error::Config(format!("invalid box side [{l}, {u}]")));
            }
        }
        Ok(Domain::Box { lower, upper })
    }

    /// Dimension fixed by the set, if any.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Domain::FullSpace => None,
            Domain::Ball { center, .. } => Some(center.len()),
            Domain::Box { lower, .. } => Some(lower.len()),
        }
    }

    pub fn diameter(&self) -> Option<f64> {
        match self {
            Domain::FullSpace => None,
            Domain::Ball { radius, .. } => Some(2.0 * radius),
            Domain::Box { lower, upper } => Some(dist(lower, upper)),
        }
    }

    pub fn is_compact(&self) -> bool {
        !matches!(self, Domain::FullSpace)
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self.dim() {
            Some(expected) if expected != dim => Err(Error::Dimension { expected, got: dim }),
            _ => Ok(()),
        }
    }

    /// Euclidean projection of `x` onto the set.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x.len())?;
        let mut y = x.to_vec();
        self.project_in_place(&mut y);
        Ok(y)
    }

    /// In-place projection. The caller guarantees `x.len()` matches the set.
    pub fn project_in_place(&self, x: &mut [f64]) {
        match self {
            Domain::FullSpace => {}
            Domain::Ball { center, radius } => {
                let r = dist(x, center);
                if r > *radius {
                    for (xi, ci) in x.iter_mut().zip(center) {
                        *xi = ci + (*xi - ci) * radius / r;
                    }
                }
            }
            Domain::Box { lower, upper } => {
                for ((xi, l), u) in x.iter_mut().zip(lower).zip(upper) {
                    *xi = xi.clamp(*l, *u);
                }
            }
        }
    }

    /// Membership up to an absolute slack `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if self.check_dim(x.len()).is_err() {
            return false;
        }
        match self {
            Domain::FullSpace => true,
            Domain::Ball { center, radius } => dist(x, center) <= radius + tol,
            Domain::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(xi, (l, u))| *xi >= l - tol && *xi <= u + tol),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_space_is_identity() {
        let d = Domain::full();
        assert_eq!(d.project(&[3.0, -1.0]).unwrap(), vec![3.0, -1.0]);
        assert_eq!(d.diameter(), None);
    }

    #[test]
    fn ball_fixes_interior_points() {
        let d = Domain::ball(vec![0.0, 0.0], 1.0).unwrap();
        assert_eq!(d.project(&[0.5, 0.0]).unwrap(), vec![0.5, 0.0]);
    }

    #[test]
    fn ball_scales_exterior_points_radially() {
        let d = Domain::ball(vec![0.0, 0.0], 1.0).unwrap();
        let p = d.project(&[3.0, 4.0]).unwrap();
        assert!((p[0] - 0.6).abs() < 1e-15 && (p[1] - 0.8).abs() < 1e-15);

        // Grid search over the ball for the closest point to (3, 4).
        let n = 2000;
        let mut best = (f64::INFINITY, [0.0, 0.0]);
        for i in 0..=n {
            let theta = std::f64::consts::FRAC_PI_2 * i as f64 / n as f64;
            for rad in [0.98, 0.99, 1.0] {
                let y = [rad * theta.cos(), rad * theta.sin()];
                let dd = dist(&y, &[3.0, 4.0]);
                if dd < best.0 {
                    best = (dd, y);
                }
            }
        }
        assert!(dist(&best.1, &p) < 1e-3);
        assert!(dist(&p, &[3.0, 4.0]) <= best.0 + 1e-12);
    }

    #[test]
    fn box_clamps_coordinates() {
        let d = Domain::boxed(vec![-1.0, 0.0], vec![1.0, 2.0]).unwrap();
        assert_eq!(d.project(&[5.0, -3.0]).unwrap(), vec![1.0, 0.0]);
        assert_eq!(d.diameter().unwrap(), 8f64.sqrt());
    }

    #[test]
    fn diameters() {
        assert_eq!(Domain::ball(vec![1.0], 2.5).unwrap().diameter(), Some(5.0));
    }

    #[test]
    fn dimension_mismatch_is_a_config_error() {
        let d = Domain::ball(vec![0.0, 0.0], 1.0).unwrap();
        assert!(matches!(
            d.project(&[1.0, 2.0, 3.0]),
            Err(Error::Dimension { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn invalid_sets_are_rejected() {
        assert!(Domain::ball(vec![0.0], 0.0).is_err());
        assert!(Domain::ball(vec![0.0], f64::INFINITY).is_err());
        assert!(Domain::boxed(vec![1.0], vec![0.0]).is_err());
        assert!(Domain::boxed(vec![0.0, 0.0], vec![1.0]).is_err());
    }
}
