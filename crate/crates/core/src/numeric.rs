//! Small dense-vector helpers and scalar utilities.
//!
//! Points are plain `[f64]` slices. Every helper sums left to right so
//! results are reproducible bit-for-bit.

use crate::error::{Error, Result};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_sq(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
}

pub fn all_finite(a: &[f64]) -> bool {
    a.iter().all(|x| x.is_finite())
}

/// Natural logarithm shifted by one: `log_+(x) = ln(x) + 1`.
pub fn log_plus(x: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(x.ln() + 1.0)
    } else {
        Err(Error::Domain(format!("log_plus requires x > 0, got {x}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_plus_values() {
        assert_eq!(log_plus(1.0).unwrap(), 1.0);
        assert!((log_plus(std::f64::consts::E).unwrap() - 2.0).abs() < 1e-15);
        // ln(10) + 1
        let expected = 10f64.ln() + 1.0;
        assert_eq!(log_plus(10.0).unwrap(), expected);
        assert!((expected - 3.302_585_092_994_046).abs() < 1e-15);
    }

    #[test]
    fn log_plus_rejects_nonpositive() {
        assert!(matches!(log_plus(0.0), Err(Error::Domain(_))));
        assert!(matches!(log_plus(-2.0), Err(Error::Domain(_))));
        assert!(log_plus(f64::NAN).is_err());
    }

    #[test]
    fn vector_helpers() {
        let a = [3.0, 4.0];
        assert_eq!(norm(&a), 5.0);
        assert_eq!(dot(&a, &[1.0, -1.0]), -1.0);
        assert_eq!(dist(&a, &[0.0, 0.0]), 5.0);
        let mut y = [1.0, 1.0];
        axpy(2.0, &a, &mut y);
        assert_eq!(y, [7.0, 9.0]);
        assert_eq!(max_abs(&[-7.0, 2.0]), 7.0);
    }
}
