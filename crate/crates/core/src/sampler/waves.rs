//! Random-wave superposition sampler.
//!
//! X(t) = (1/sqrt(J)) Σ_j [ a_j cos(λ_j t) + b_j sin(λ_j t) ] with λ_j iid
//! from mu and a_j, b_j standard normal. At every fixed point X(t) is exactly
//! N(0,1); the ensemble covariance converges to k at rate O(1/sqrt(J)).
//! Purely atomic measures collapse to one wave per atom with sqrt(weight)
//! amplitudes, which reproduces the covariance exactly.
//!
//! The representation is kept analytic so downstream zero counting and the
//! derivative-cascade certificates can evaluate X and any X^(n) between grid
//! nodes without interpolation error.

use crate::rng::SeedSequence;
use crate::sampler::{FieldSample, GridSpec1d, GridSpec2d, PathSample, SampleMethod};
use crate::spectral::{Measure1d, Measure2d};
use rand::Rng;
use rand_distr::StandardNormal;

#[derive(Clone, Debug)]
pub struct WavePath {
    pub freqs: Vec<f64>,
    pub amp_cos: Vec<f64>,
    pub amp_sin: Vec<f64>,
    pub scale: f64,
}

impl WavePath {
    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for j in 0..self.freqs.len() {
            let (s, c) = (self.freqs[j] * t).sin_cos();
            acc += self.amp_cos[j] * c + self.amp_sin[j] * s;
        }
        self.scale * acc
    }

    /// n-th derivative: each wave picks up λ^n and a phase shift of n·π/2.
    pub fn derivative(&self, order: usize, t: f64) -> f64 {
        if order == 0 {
            return self.eval(t);
        }
        let mut acc = 0.0;
        let shift = order % 4;
        for j in 0..self.freqs.len() {
            let lam = self.freqs[j];
            let pow = lam.powi(order as i32);
            let (s, c) = (lam * t).sin_cos();
            // cos^(n) = cos(x + nπ/2), sin^(n) = sin(x + nπ/2)
            let (dc, ds) = match shift {
                0 => (c, s),
                1 => (-s, c),
                2 => (-c, -s),
                _ => (s, -c),
            };
            acc += pow * (self.amp_cos[j] * dc + self.amp_sin[j] * ds);
        }
        self.scale * acc
    }

    /// Evaluate on a uniform grid by incremental rotation; refreshes the
    /// recurrence every 1024 steps to stop drift.
    pub fn eval_grid(&self, origin: f64, spacing: f64, count: usize, out: &mut [f64]) {
        assert!(out.len() >= count);
        out[..count].fill(0.0);
        for j in 0..self.freqs.len() {
            let lam = self.freqs[j];
            let (ac, as_) = (self.amp_cos[j], self.amp_sin[j]);
            let (dsin, dcos) = (lam * spacing).sin_cos();
            let mut k = 0;
            while k < count {
                let t = origin + spacing * k as f64;
                let (mut s, mut c) = (lam * t).sin_cos();
                let block_end = (k + 1024).min(count);
                while k < block_end {
                    out[k] += ac * c + as_ * s;
                    let c2 = c * dcos - s * dsin;
                    s = s * dcos + c * dsin;
                    c = c2;
                    k += 1;
                }
            }
        }
        for v in out[..count].iter_mut() {
            *v *= self.scale;
        }
    }
}

/// Draw the wave representation of one path sample.
pub fn draw_wave_path(mu: &Measure1d, seed: u64, n_waves: usize) -> WavePath {
    let seq = SeedSequence::new(seed);
    let mut rng = seq.stream(0);
    if mu.is_purely_atomic() {
        // exact: one wave per atom pair with sqrt(weight) amplitude
        let atoms = mu.atoms();
        let freqs: Vec<f64> = atoms.iter().map(|a| a.freq).collect();
        let amp_cos: Vec<f64> = atoms
            .iter()
            .map(|a| {
                let z: f64 = rng.sample(StandardNormal);
                z * a.weight.sqrt()
            })
            .collect();
        let amp_sin: Vec<f64> = atoms
            .iter()
            .map(|a| {
                let z: f64 = rng.sample(StandardNormal);
                z * a.weight.sqrt()
            })
            .collect();
        return WavePath { freqs, amp_cos, amp_sin, scale: 1.0 };
    }
    assert!(n_waves >= 1);
    let freqs: Vec<f64> = (0..n_waves).map(|_| mu.sample_freq(&mut rng)).collect();
    let amp_cos: Vec<f64> = (0..n_waves).map(|_| rng.sample(StandardNormal)).collect();
    let amp_sin: Vec<f64> = (0..n_waves).map(|_| rng.sample(StandardNormal)).collect();
    WavePath {
        freqs,
        amp_cos,
        amp_sin,
        scale: 1.0 / (n_waves as f64).sqrt(),
    }
}

#[derive(Clone, Debug)]
pub struct WaveField {
    pub freqs: Vec<(f64, f64)>,
    pub amp_cos: Vec<f64>,
    pub amp_sin: Vec<f64>,
    pub scale: f64,
}

impl WaveField {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for j in 0..self.freqs.len() {
            let (lx, ly) = self.freqs[j];
            let (s, c) = (lx * x + ly * y).sin_cos();
            acc += self.amp_cos[j] * c + self.amp_sin[j] * s;
        }
        self.scale * acc
    }

    /// Mixed partial ∂_1^dx ∂_2^dy X.
    pub fn partial(&self, dx: usize, dy: usize, x: f64, y: f64) -> f64 {
        if dx == 0 && dy == 0 {
            return self.eval(x, y);
        }
        let order = dx + dy;
        let shift = order % 4;
        let mut acc = 0.0;
        for j in 0..self.freqs.len() {
            let (lx, ly) = self.freqs[j];
            let pow = lx.powi(dx as i32) * ly.powi(dy as i32);
            if pow == 0.0 {
                continue;
            }
            let (s, c) = (lx * x + ly * y).sin_cos();
            let (dc, ds) = match shift {
                0 => (c, s),
                1 => (-s, c),
                2 => (-c, -s),
                _ => (s, -c),
            };
            acc += pow * (self.amp_cos[j] * dc + self.amp_sin[j] * ds);
        }
        self.scale * acc
    }

    /// Restriction to the horizontal line y = y0, as a 1D wave path in x.
    pub fn slice_x(&self, y0: f64) -> WavePath {
        let mut freqs = Vec::with_capacity(self.freqs.len());
        let mut amp_cos = Vec::with_capacity(self.freqs.len());
        let mut amp_sin = Vec::with_capacity(self.freqs.len());
        for j in 0..self.freqs.len() {
            let (lx, ly) = self.freqs[j];
            // a cos(lx x + ly y0) + b sin(lx x + ly y0): rotate amplitudes
            let (s, c) = (ly * y0).sin_cos();
            freqs.push(lx);
            amp_cos.push(self.amp_cos[j] * c + self.amp_sin[j] * s);
            amp_sin.push(-self.amp_cos[j] * s + self.amp_sin[j] * c);
        }
        WavePath { freqs, amp_cos, amp_sin, scale: self.scale }
    }

    /// Restriction to the vertical line x = x0, as a 1D wave path in y.
    pub fn slice_y(&self, x0: f64) -> WavePath {
        let mut freqs = Vec::with_capacity(self.freqs.len());
        let mut amp_cos = Vec::with_capacity(self.freqs.len());
        let mut amp_sin = Vec::with_capacity(self.freqs.len());
        for j in 0..self.freqs.len() {
            let (lx, ly) = self.freqs[j];
            let (s, c) = (lx * x0).sin_cos();
            freqs.push(ly);
            amp_cos.push(self.amp_cos[j] * c + self.amp_sin[j] * s);
            amp_sin.push(-self.amp_cos[j] * s + self.amp_sin[j] * c);
        }
        WavePath { freqs, amp_cos, amp_sin, scale: self.scale }
    }

    /// Row-major evaluation on a square grid via per-row rotation.
    pub fn eval_grid(&self, grid: &GridSpec2d, out: &mut [f64]) {
        let n = grid.points;
        assert!(out.len() >= n * n);
        out[..n * n].fill(0.0);
        let h = grid.spacing();
        for j in 0..self.freqs.len() {
            let (lx, ly) = self.freqs[j];
            let (ac, as_) = (self.amp_cos[j], self.amp_sin[j]);
            let (dsin, dcos) = (lx * h).sin_cos();
            for iy in 0..n {
                let y = grid.origin.1 + h * iy as f64;
                let phase0 = lx * grid.origin.0 + ly * y;
                let (mut s, mut c) = phase0.sin_cos();
                let row = &mut out[iy * n..(iy + 1) * n];
                for v in row.iter_mut() {
                    *v += ac * c + as_ * s;
                    let c2 = c * dcos - s * dsin;
                    s = s * dcos + c * dsin;
                    c = c2;
                }
            }
        }
        for v in out[..n * n].iter_mut() {
            *v *= self.scale;
        }
    }
}

pub fn draw_wave_field(mu: &Measure2d, seed: u64, n_waves: usize) -> WaveField {
    let seq = SeedSequence::new(seed);
    let mut rng = seq.stream(0);
    if let crate::spectral::Variant2d::Atomic2d(atoms) = mu.variant() {
        let freqs: Vec<(f64, f64)> = atoms.iter().map(|a| (a.x, a.y)).collect();
        let amp_cos: Vec<f64> = atoms
            .iter()
            .map(|a| {
                let z: f64 = rng.sample(StandardNormal);
                z * a.weight.sqrt()
            })
            .collect();
        let amp_sin: Vec<f64> = atoms
            .iter()
            .map(|a| {
                let z: f64 = rng.sample(StandardNormal);
                z * a.weight.sqrt()
            })
            .collect();
        return WaveField { freqs, amp_cos, amp_sin, scale: 1.0 };
    }
    assert!(n_waves >= 1);
    let freqs: Vec<(f64, f64)> = (0..n_waves).map(|_| mu.sample_freq(&mut rng)).collect();
    let amp_cos: Vec<f64> = (0..n_waves).map(|_| rng.sample(StandardNormal)).collect();
    let amp_sin: Vec<f64> = (0..n_waves).map(|_| rng.sample(StandardNormal)).collect();
    WaveField {
        freqs,
        amp_cos,
        amp_sin,
        scale: 1.0 / (n_waves as f64).sqrt(),
    }
}

/// Spectral-superposition path sample on a grid.
pub fn sample_spectral_1d(
    mu: &Measure1d,
    grid: GridSpec1d,
    seed: u64,
    n_waves: usize,
) -> PathSample {
    let wave = draw_wave_path(mu, seed, n_waves);
    let mut values = vec![0.0; grid.points];
    wave.eval_grid(grid.origin, grid.spacing(), grid.points, &mut values);
    PathSample {
        grid,
        values,
        seed,
        method: SampleMethod::Spectral { n_waves },
        measure_id: mu.label().to_string(),
    }
}

/// Spectral-superposition field sample on a square grid.
pub fn sample_spectral_2d(
    mu: &Measure2d,
    grid: GridSpec2d,
    seed: u64,
    n_waves: usize,
) -> FieldSample {
    let wave = draw_wave_field(mu, seed, n_waves);
    let mut values = vec![0.0; grid.points * grid.points];
    wave.eval_grid(&grid, &mut values);
    FieldSample {
        grid,
        values,
        seed,
        method: SampleMethod::Spectral { n_waves },
        measure_id: mu.label().to_string(),
    }
}

/// Joint sample of the path and the requested derivative orders, all driven
/// by the same waves (so order 0 agrees with `sample_spectral_1d`).
pub fn sample_derivative_paths(
    mu: &Measure1d,
    grid: GridSpec1d,
    seed: u64,
    n_waves: usize,
    orders: &[usize],
) -> Vec<PathSample> {
    let wave = draw_wave_path(mu, seed, n_waves);
    orders
        .iter()
        .map(|&ord| {
            let values: Vec<f64> = (0..grid.points)
                .map(|i| wave.derivative(ord, grid.at(i)))
                .collect();
            PathSample {
                grid,
                values,
                seed,
                method: SampleMethod::Spectral { n_waves },
                measure_id: mu.label().to_string(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn atomic_two_atom_is_exact_cosine_process() {
        let mu = Measure1d::atomic(&[(1.0, 1.0)]).unwrap();
        let w = draw_wave_path(&mu, 7, 999);
        assert_eq!(w.freqs.len(), 1);
        // X(t) = a cos t + b sin t, so X'' = -X exactly
        for t in [0.0, 0.3, 2.0] {
            assert_relative_eq!(w.derivative(2, t), -w.eval(t), epsilon = 1e-12);
        }
    }

    #[test]
    fn grid_eval_matches_pointwise_eval() {
        let mu = Measure1d::std_normal();
        let w = draw_wave_path(&mu, 42, 64);
        let grid = GridSpec1d::new(0.0, 3.0, 2000);
        let mut vals = vec![0.0; grid.points];
        w.eval_grid(grid.origin, grid.spacing(), grid.points, &mut vals);
        for i in [0usize, 1, 500, 1234, 1999] {
            assert_relative_eq!(vals[i], w.eval(grid.at(i)), epsilon = 1e-10);
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let mu = Measure1d::uniform(1.0).unwrap();
        let w = draw_wave_path(&mu, 3, 128);
        let h = 1e-5;
        for t in [0.1, 1.7] {
            let fd = (w.eval(t + h) - w.eval(t - h)) / (2.0 * h);
            assert_relative_eq!(w.derivative(1, t), fd, epsilon = 1e-7);
            let fd2 = (w.eval(t + h) - 2.0 * w.eval(t) + w.eval(t - h)) / (h * h);
            assert_relative_eq!(w.derivative(2, t), fd2, epsilon = 1e-4);
        }
    }

    #[test]
    fn same_seed_reproduces_bit_for_bit() {
        let mu = Measure1d::std_normal();
        let grid = GridSpec1d::new(0.0, 1.0, 64);
        let a = sample_spectral_1d(&mu, grid, 123, 256);
        let b = sample_spectral_1d(&mu, grid, 123, 256);
        assert_eq!(a.values, b.values);
        let c = sample_spectral_1d(&mu, grid, 124, 256);
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn field_slices_agree_with_field_eval() {
        let mu = Measure2d::unit_circle();
        let f = draw_wave_field(&mu, 5, 32);
        let sx = f.slice_x(0.7);
        let sy = f.slice_y(-0.3);
        for u in [0.0, 0.4, 1.9] {
            assert_relative_eq!(sx.eval(u), f.eval(u, 0.7), epsilon = 1e-12);
            assert_relative_eq!(sy.eval(u), f.eval(-0.3, u), epsilon = 1e-12);
        }
        // derivative of slice matches mixed partial of field
        for u in [0.2, 1.1] {
            assert_relative_eq!(sx.derivative(1, u), f.partial(1, 0, u, 0.7), epsilon = 1e-10);
        }
    }

    #[test]
    fn order_zero_matches_plain_sample() {
        let mu = Measure1d::std_normal();
        let grid = GridSpec1d::new(0.0, 2.0, 33);
        let plain = sample_spectral_1d(&mu, grid, 5, 64);
        let derivs = sample_derivative_paths(&mu, grid, 5, 64, &[0, 1]);
        for i in 0..grid.points {
            assert_relative_eq!(plain.values[i], derivs[0].values[i], epsilon = 1e-12);
        }
    }
}
