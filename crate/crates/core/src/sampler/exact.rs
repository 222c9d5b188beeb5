//! Exact finite-dimensional sampler: values = L z with Sigma = L L^T built
//! from the covariance kernel on the grid.

use crate::error::{Error, Result};
use crate::kernel::{eval_1d, eval_2d};
use crate::rng::SeedSequence;
use crate::sampler::{FieldSample, GridSpec1d, GridSpec2d, PathSample, SampleMethod};
use crate::spectral::{Measure1d, Measure2d};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

const MAX_POINTS: usize = 8192;
const RIDGE: f64 = 1e-12;

/// LDL^T square-root factor with a small ridge and pivot clamping, so
/// near-singular covariances (periodic processes) still sample.
fn factor(mut sigma: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = sigma.nrows();
    for i in 0..n {
        sigma[(i, i)] += RIDGE;
    }
    let mut l = DMatrix::zeros(n, n);
    let mut d = vec![0.0f64; n];
    for j in 0..n {
        let mut dj = sigma[(j, j)];
        for k in 0..j {
            dj -= l[(j, k)] * l[(j, k)] * d[k];
        }
        if dj < -1e-8 {
            return Err(Error::NotPsd { index: j, pivot: dj });
        }
        d[j] = dj.max(0.0);
        l[(j, j)] = 1.0;
        for i in (j + 1)..n {
            if d[j] == 0.0 {
                l[(i, j)] = 0.0;
                continue;
            }
            let mut v = sigma[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)] * d[k];
            }
            l[(i, j)] = v / d[j];
        }
    }
    // fold sqrt(D) into L
    for j in 0..n {
        let s = d[j].sqrt();
        for i in j..n {
            l[(i, j)] *= s;
        }
    }
    Ok(l)
}

pub fn sample_exact_1d(mu: &Measure1d, grid: GridSpec1d, seed: u64) -> Result<PathSample> {
    if grid.points > MAX_POINTS {
        return Err(Error::GridTooLarge { points: grid.points, limit: MAX_POINTS });
    }
    let n = grid.points;
    let h = grid.spacing();
    let first_row: Vec<f64> = (0..n)
        .map(|j| eval_1d(mu, h * j as f64))
        .collect::<Result<_>>()?;
    let sigma = DMatrix::from_fn(n, n, |i, j| first_row[i.abs_diff(j)]);
    let l = factor(sigma)?;
    let seq = SeedSequence::new(seed);
    let mut rng = seq.stream(0);
    let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let mut values = vec![0.0; n];
    for i in 0..n {
        let mut acc = 0.0;
        for j in 0..=i {
            acc += l[(i, j)] * z[j];
        }
        values[i] = acc;
    }
    Ok(PathSample {
        grid,
        values,
        seed,
        method: SampleMethod::CholeskyExact,
        measure_id: mu.label().to_string(),
    })
}

pub fn sample_exact_2d(mu: &Measure2d, grid: GridSpec2d, seed: u64) -> Result<FieldSample> {
    let n_total = grid.points * grid.points;
    if n_total > MAX_POINTS {
        return Err(Error::GridTooLarge { points: n_total, limit: MAX_POINTS });
    }
    let n = grid.points;
    let mut sigma = DMatrix::zeros(n_total, n_total);
    for a in 0..n_total {
        let (ax, ay) = (a % n, a / n);
        let pa = grid.at(ax, ay);
        for bidx in a..n_total {
            let (bx, by) = (bidx % n, bidx / n);
            let pb = grid.at(bx, by);
            let k = eval_2d(mu, (pa.0 - pb.0, pa.1 - pb.1))?;
            sigma[(a, bidx)] = k;
            sigma[(bidx, a)] = k;
        }
    }
    let l = factor(sigma)?;
    let seq = SeedSequence::new(seed);
    let mut rng = seq.stream(0);
    let z: Vec<f64> = (0..n_total).map(|_| rng.sample(StandardNormal)).collect();
    let mut values = vec![0.0; n_total];
    for i in 0..n_total {
        let mut acc = 0.0;
        for j in 0..=i {
            acc += l[(i, j)] * z[j];
        }
        values[i] = acc;
    }
    Ok(FieldSample {
        grid,
        values,
        seed,
        method: SampleMethod::CholeskyExact,
        measure_id: mu.label().to_string(),
    })
}
