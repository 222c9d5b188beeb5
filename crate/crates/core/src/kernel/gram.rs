//! Sampled covariance (Gram) matrices Sigma[i][j] = k((i-j) T/m) on the
//! equispaced points t_k = kT/m, k = 0..m.

use crate::error::{Error, Result};
use crate::kernel::eval_1d;
use crate::spectral::Measure1d;
use nalgebra::DMatrix;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct GramMatrix {
    pub m: usize,
    pub t_total: f64,
    pub points: Vec<f64>,
    matrix: DMatrix<f64>,
}

/// Build the (m+1) x (m+1) Toeplitz Gram matrix from m+1 kernel values.
pub fn gram_matrix(mu: &Measure1d, m: usize, t_total: f64) -> Result<GramMatrix> {
    if m < 1 {
        return Err(Error::precondition("m", "must be >= 1"));
    }
    if !(t_total > 0.0) {
        return Err(Error::precondition("T", "must be > 0"));
    }
    let step = t_total / m as f64;
    let first_row: Vec<f64> = (0..=m)
        .map(|j| eval_1d(mu, step * j as f64))
        .collect::<Result<_>>()?;
    let n = m + 1;
    let matrix = DMatrix::from_fn(n, n, |i, j| first_row[i.abs_diff(j)]);
    let points = (0..=m).map(|k| step * k as f64).collect();
    Ok(GramMatrix { m, t_total, points, matrix })
}

impl GramMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.m + 1
    }

    /// LDL^T pivots; the factorization form of "is PSD up to tolerance".
    fn ldl_pivots(&self) -> Vec<f64> {
        let n = self.size();
        let mut a = self.matrix.clone();
        let mut pivots = Vec::with_capacity(n);
        for k in 0..n {
            let d = a[(k, k)];
            pivots.push(d);
            if d.abs() < 1e-300 {
                // exactly singular from here on; remaining pivots are what is
                // left on the diagonal
                continue;
            }
            for i in (k + 1)..n {
                let l = a[(i, k)] / d;
                for j in (k + 1)..=i {
                    let v = a[(i, j)] - l * a[(j, k)];
                    a[(i, j)] = v;
                    a[(j, i)] = v;
                }
            }
        }
        pivots
    }

    /// Attempted factorization with pivot tolerance; `NotPsd` when a pivot is
    /// more negative than `-pivot_tol` (signals quadrature error in the
    /// kernel values, not a failure of the mathematics).
    pub fn psd_check(&self, pivot_tol: f64) -> Result<()> {
        for (index, p) in self.ldl_pivots().into_iter().enumerate() {
            if p < -pivot_tol {
                return Err(Error::NotPsd { index, pivot: p });
            }
        }
        Ok(())
    }

    /// Determinant as the product of LDL^T pivots (clamped at zero); Gram
    /// matrices with unit diagonal always satisfy det <= 1.
    pub fn det(&self) -> f64 {
        self.ldl_pivots().iter().map(|p| p.max(0.0)).product()
    }

    pub fn det_ln(&self) -> f64 {
        self.ldl_pivots().iter().map(|p| p.max(0.0).ln()).sum()
    }

    /// Smallest eigenvalue from the dense symmetric eigensolver; accuracy is
    /// limited to about 1e-15 in f64, see the certificate module for the
    /// high-precision path.
    pub fn lambda_min(&self) -> f64 {
        self.matrix
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_csv(&self) -> String {
        let n = self.size();
        let mut out = String::new();
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| format!("{:.17e}", self.matrix[(i, j)])).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn audit_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Audit {
            m: usize,
            t_total: f64,
            det: f64,
            lambda_min_f64: f64,
        }
        serde_json::to_value(Audit {
            m: self.m,
            t_total: self.t_total,
            det: self.det(),
            lambda_min_f64: self.lambda_min(),
        })
        .expect("audit serializes")
    }
}
