//! Path and field samplers for the stationary Gaussian process with a given
//! spectral measure: dense Cholesky for exact small grids, random-wave
//! superposition for everything else (with analytic derivatives).

pub mod exact;
pub mod waves;

pub use exact::{sample_exact_1d, sample_exact_2d};
pub use waves::{
    draw_wave_field, draw_wave_path, sample_derivative_paths, sample_spectral_1d,
    sample_spectral_2d, WaveField, WavePath,
};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct GridSpec1d {
    pub origin: f64,
    pub extent: f64,
    pub points: usize,
}

impl GridSpec1d {
    pub fn new(origin: f64, extent: f64, points: usize) -> Self {
        assert!(points >= 2 && extent > 0.0);
        GridSpec1d { origin, extent, points }
    }

    pub fn spacing(&self) -> f64 {
        self.extent / (self.points - 1) as f64
    }

    pub fn at(&self, i: usize) -> f64 {
        self.origin + self.spacing() * i as f64
    }
}

/// Square grid [origin, origin+extent]^2, `points` per axis, row-major values.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct GridSpec2d {
    pub origin: (f64, f64),
    pub extent: f64,
    pub points: usize,
}

impl GridSpec2d {
    pub fn new(origin: (f64, f64), extent: f64, points: usize) -> Self {
        assert!(points >= 2 && extent > 0.0);
        GridSpec2d { origin, extent, points }
    }

    pub fn spacing(&self) -> f64 {
        self.extent / (self.points - 1) as f64
    }

    pub fn at(&self, ix: usize, iy: usize) -> (f64, f64) {
        let h = self.spacing();
        (self.origin.0 + h * ix as f64, self.origin.1 + h * iy as f64)
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum SampleMethod {
    CholeskyExact,
    Spectral { n_waves: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct PathSample {
    pub grid: GridSpec1d,
    pub values: Vec<f64>,
    pub seed: u64,
    pub method: SampleMethod,
    pub measure_id: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldSample {
    pub grid: GridSpec2d,
    /// Row-major: values[iy * points + ix].
    pub values: Vec<f64>,
    pub seed: u64,
    pub method: SampleMethod,
    pub measure_id: String,
}

impl FieldSample {
    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.grid.points + ix]
    }
}
