//! Value/gradient oracles and the constants known about them.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A convex function on `R^dim` with a (sub)gradient oracle.
///
/// Implementations must be deterministic: the same input gives bit-identical
/// output. Where the function is not differentiable, `gradient` writes a
/// subgradient, and it writes zero whenever zero is a subgradient.
pub trait Oracle: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    /// Writes a (sub)gradient at `x` into `out` (`out.len() == dim`).
    fn gradient(&self, x: &[f64], out: &mut [f64]);
}

/// A minimizer and the minimal value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub point: Vec<f64>,
    pub value: f64,
}

/// Constants that are known analytically or from a reference solve.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct KnownConstants {
    pub optimum: Option<Optimum>,
    /// Gradient Lipschitz constant `L`.
    pub smoothness: Option<f64>,
    /// Function Lipschitz constant `G` (bound on subgradient norms over the domain).
    pub lipschitz: Option<f64>,
}

/// A shareable oracle together with its known constants.
#[derive(Clone)]
pub struct Objective {
    oracle: Arc<dyn Oracle>,
    known: KnownConstants,
}

impl fmt::Debug for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective")
            .field("dim", &self.dim())
            .field("known", &self.known)
            .finish()
    }
}

impl Objective {
    pub fn new(oracle: impl Oracle + 'static, known: KnownConstants) -> Self {
        Self {
            oracle: Arc::new(oracle),
            known,
        }
    }

    /// Builds an objective from a pair of closures. Mostly useful in tests.
    pub fn from_fns<F, G>(dim: usize, value: F, gradient: G, known: KnownConstants) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        G: Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
    {
        Self::new(
            FnOracle {
                dim,
                value,
                gradient,
            },
            known,
        )
    }

    pub fn dim(&self) -> usize {
        self.oracle.dim()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        self.oracle.value(x)
    }

    pub fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim());
        debug_assert_eq!(out.len(), self.dim());
        self.oracle.gradient(x, out)
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dim()];
        self.gradient_into(x, &mut g);
        g
    }

    pub fn known(&self) -> &KnownConstants {
        &self.known
    }

    pub fn optimum(&self) -> Option<&Optimum> {
        self.known.optimum.as_ref()
    }

    pub fn f_star(&self) -> Option<f64> {
        self.known.optimum.as_ref().map(|o| o.value)
    }

    pub fn x_star(&self) -> Option<&[f64]> {
        self.known.optimum.as_ref().map(|o| o.point.as_slice())
    }

    pub fn smoothness(&self) -> Option<f64> {
        self.known.smoothness
    }

    pub fn lipschitz(&self) -> Option<f64> {
        self.known.lipschitz
    }

    /// `f(x) - f*` when `f*` is known.
    pub fn gap(&self, x: &[f64]) -> Option<f64> {
        self.f_star().map(|fs| self.value(x) - fs)
    }

    pub fn with_constants(mut self, known: KnownConstants) -> Self {
        self.known = known;
        self
    }

    /// `alpha * f`, with every known constant rescaled accordingly.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Config(format!(
                "scale factor must be positive and finite, got {alpha}"
            )));
        }
        let known = KnownConstants {
            optimum: self.known.optimum.as_ref().map(|o| Optimum {
                point: o.point.clone(),
                value: alpha * o.value,
            }),
            smoothness: self.known.smoothness.map(|l| alpha * l),
            lipschitz: self.known.lipschitz.map(|g| alpha * g),
        };
        Ok(Self {
            oracle: Arc::new(Scaled {
                inner: Arc::clone(&self.oracle),
                alpha,
            }),
            known,
        })
    }
}

struct FnOracle<F, G> {
    dim: usize,
    value: F,
    gradient: G,
}

impl<F, G> Oracle for FnOracle<F, G>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
    G: Fn(&[f64], &mut [f64]) + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        (self.gradient)(x, out)
    }
}

struct Scaled {
    inner: Arc<dyn Oracle>,
    alpha: f64,
}

impl Oracle for Scaled {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.alpha * self.inner.value(x)
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        self.inner.gradient(x, out);
        for g in out.iter_mut() {
            *g *= self.alpha;
        }
    }
}
