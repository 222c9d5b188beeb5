//! Folded spectral density of the discretized process Y_l = X_{lT/m}.
//!
//! The spectral measure of Y is the pushforward of mu under
//! x -> (T/m) x  (mod 2π), so its density on [-π, π] is
//! f_{m,T}(x) = Σ_n (m/T) f((m/T)(x + 2πn)).

use crate::error::{Error, Result};
use crate::spectral::assumptions::AssumptionReport;
use crate::spectral::Measure1d;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Clone, Debug, Serialize)]
pub struct FoldedDensity {
    pub m: usize,
    pub t_total: f64,
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    /// ∫_{-π}^{π} f_{m,T}; equals the a.c. mass of mu (folding conserves it).
    pub folded_mass: f64,
    /// Level m δ0 / T of the discretized level-set inequality.
    pub level: f64,
    /// |{f_{m,T} >= level}| measured on the grid.
    pub level_set_measure: f64,
    /// Required lower bound T δ0 / (2m).
    pub level_target: f64,
    pub level_ok: bool,
}

/// Wrapped density on a uniform grid over [-π, π] with the level-set check
/// |{f_{m,T} >= m δ0/T}| >= T δ0/(2m). Needs T <= b*m so the shrunken set
/// (T/m) S stays inside one period.
pub fn folded_density(
    mu: &Measure1d,
    m: usize,
    t_total: f64,
    grid_points: usize,
    a1: &AssumptionReport,
) -> Result<FoldedDensity> {
    if mu.is_purely_atomic() {
        return Err(Error::AssumptionViolated {
            assumption: "A1",
            detail: "folded density needs an absolutely continuous part".into(),
        });
    }
    if !a1.satisfied {
        return Err(Error::AssumptionViolated {
            assumption: "A1",
            detail: "assumption report is unsatisfied".into(),
        });
    }
    if m < 1 || grid_points < 16 {
        return Err(Error::precondition("grid", "m >= 1 and grid_points >= 16"));
    }
    let b = a1.b().expect("satisfied report");
    if t_total > b * m as f64 {
        return Err(Error::precondition(
            "T_le_bm",
            format!("T = {t_total} > b*m = {}", b * m as f64),
        ));
    }

    let scale = m as f64 / t_total; // m/T
    let window = mu.density_window(1e-15);
    // f((m/T)(x + 2πn)) is nonzero only while |x + 2πn| <= W T/m
    let n_max = ((window / scale + PI) / (2.0 * PI)).ceil() as i64;

    let eval = |x: f64| -> f64 {
        let mut acc = 0.0;
        for n in -n_max..=n_max {
            let arg = scale * (x + 2.0 * PI * n as f64);
            acc += scale * mu.ac_density(arg);
        }
        acc
    };

    let h = 2.0 * PI / grid_points as f64;
    let xs: Vec<f64> = (0..=grid_points).map(|i| -PI + h * i as f64).collect();
    let values: Vec<f64> = xs.iter().map(|&x| eval(x)).collect();

    let folded_mass: f64 = values.windows(2).map(|w| 0.5 * (w[0] + w[1]) * h).sum();

    let delta0 = a1.delta0.expect("satisfied report");
    let level = scale * delta0;
    // midpoint count of the super-level set
    let mut hits = 0usize;
    for i in 0..grid_points {
        let xm = -PI + h * (i as f64 + 0.5);
        if eval(xm) >= level {
            hits += 1;
        }
    }
    let level_set_measure = h * hits as f64;
    let level_target = t_total * delta0 / (2.0 * m as f64);
    Ok(FoldedDensity {
        m,
        t_total,
        xs,
        values,
        folded_mass,
        level,
        level_set_measure,
        level_target,
        level_ok: level_set_measure >= level_target,
    })
}
