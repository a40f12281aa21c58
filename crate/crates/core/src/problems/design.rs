//! Dense row-major design matrices and the linear algebra the generators need.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numeric::{dot, norm};

#[derive(Clone, Debug, PartialEq)]
pub struct Design {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Design {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 {
            return Err(Error::Data("design matrix must be nonempty".into()));
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Dimension {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Entries i.i.d. standard normal, scaled by `1/sqrt(cols)`.
    pub fn gaussian(rows: usize, cols: usize, rng: &mut impl Rng) -> Self {
        let scale = 1.0 / (cols as f64).sqrt();
        let data = (0..rows * cols)
            .map(|_| rng.sample::<f64, _>(StandardNormal) * scale)
            .collect();
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// `out = A x`
    pub fn matvec(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(self.row(i), x);
        }
    }

    /// `out = A^T y`
    pub fn rmatvec(&self, y: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (i, yi) in y.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += yi * a;
            }
        }
    }

    /// `A^T A / rows` as a dense nalgebra matrix.
    pub fn gram(&self) -> DMatrix<f64> {
        let n = self.rows as f64;
        let mut g = DMatrix::zeros(self.cols, self.cols);
        for i in 0..self.rows {
            let r = self.row(i);
            for j in 0..self.cols {
                for k in 0..self.cols {
                    g[(j, k)] += r[j] * r[k] / n;
                }
            }
        }
        g
    }

    /// Largest eigenvalue of `A^T A / rows` by power iteration.
    ///
    /// Returns the Rayleigh quotient plus the final residual norm, which
    /// bounds the distance to the nearest eigenvalue from above. Fails if the
    /// residual has not dropped below `1e-8` relative after `max_iter` rounds.
    pub fn top_gram_eigenvalue(&self, start: &[f64], max_iter: usize) -> Result<f64> {
        let n = self.rows as f64;
        let mut v = start.to_vec();
        let nv = norm(&v);
        if nv == 0.0 {
            return Err(Error::Generation("power iteration start vector is zero".into()));
        }
        v.iter_mut().for_each(|x| *x /= nv);
        let mut av = vec![0.0; self.rows];
        let mut w = vec![0.0; self.cols];
        let mut rel_residual = f64::INFINITY;
        let mut estimate = 0.0;
        for _ in 0..max_iter {
            self.matvec(&v, &mut av);
            self.rmatvec(&av, &mut w);
            w.iter_mut().for_each(|x| *x /= n);
            let rho = dot(&v, &w);
            if !(rho > 0.0) {
                return Err(Error::Generation("design matrix is zero along the iterate".into()));
            }
            let residual = w
                .iter()
                .zip(&v)
                .map(|(wi, vi)| (wi - rho * vi).powi(2))
                .sum::<f64>()
                .sqrt();
            estimate = rho + residual;
            rel_residual = residual / rho;
            if rel_residual <= 1e-13 {
                break;
            }
            let nw = norm(&w);
            v.iter_mut().zip(&w).for_each(|(vi, wi)| *vi = wi / nw);
        }
        if rel_residual > 1e-8 || !estimate.is_finite() {
            return Err(Error::Generation(format!(
                "power iteration did not converge in {max_iter} iterations (relative residual {rel_residual:.3e})"
            )));
        }
        Ok(estimate)
    }
}

/// Solves `(A^T A / n + lambda I) x = A^T b / n` by Cholesky factorization.
pub fn ridge_normal_solve(a: &Design, b: &[f64], lambda: f64) -> Result<Vec<f64>> {
    let mut m = a.gram();
    for j in 0..a.cols() {
        m[(j, j)] += lambda;
    }
    let mut rhs = vec![0.0; a.cols()];
    a.rmatvec(b, &mut rhs);
    let n = a.rows() as f64;
    let rhs = DVector::from_iterator(a.cols(), rhs.into_iter().map(|v| v / n));
    let chol = m
        .cholesky()
        .ok_or_else(|| Error::Generation("normal equations are not positive definite".into()))?;
    Ok(chol.solve(&rhs).iter().copied().collect())
}
