//! Zero counting on an interval: sign-change scan with refinement until the
//! count stabilizes, then bisection for locations.

use crate::error::{Error, Result};
use crate::sampler::WavePath;
use serde::Serialize;

/// Anything that can be evaluated pointwise and (cheaply) on a uniform grid.
/// Wave paths override the grid path with an incremental-rotation evaluation,
/// which is what keeps large Monte Carlo campaigns affordable.
pub trait GridEval: Sync {
    fn eval(&self, t: f64) -> f64;

    fn eval_grid(&self, origin: f64, spacing: f64, count: usize, out: &mut [f64]) {
        for (k, v) in out.iter_mut().take(count).enumerate() {
            *v = self.eval(origin + spacing * k as f64);
        }
    }
}

impl<F: Fn(f64) -> f64 + Sync> GridEval for F {
    fn eval(&self, t: f64) -> f64 {
        self(t)
    }
}

impl GridEval for WavePath {
    fn eval(&self, t: f64) -> f64 {
        WavePath::eval(self, t)
    }

    fn eval_grid(&self, origin: f64, spacing: f64, count: usize, out: &mut [f64]) {
        WavePath::eval_grid(self, origin, spacing, count, out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroCount {
    pub t_max: f64,
    pub count: usize,
    /// Refined zero locations, strictly increasing.
    pub locations: Vec<f64>,
    /// Grid points where |f| dips below tolerance without a sign change;
    /// flagged, never counted.
    pub tangencies: Vec<f64>,
    pub resolution_used: usize,
    pub identically_zero: bool,
}

struct ScanOutcome {
    count: usize,
    brackets: Vec<(f64, f64)>, // sign-change brackets for refinement
    node_zeros: Vec<f64>,
    tangencies: Vec<f64>,
    identically_zero: bool,
}

fn scan(f: &impl GridEval, t_max: f64, k: usize, vals: &mut Vec<f64>) -> ScanOutcome {
    let h = t_max / k as f64;
    vals.resize(k + 1, 0.0);
    f.eval_grid(0.0, h, k + 1, vals);
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return ScanOutcome {
            count: 0,
            brackets: Vec::new(),
            node_zeros: Vec::new(),
            tangencies: Vec::new(),
            identically_zero: true,
        };
    }
    let atol = 1e-12 * scale;
    let sign = |v: f64| -> i8 {
        if v > atol {
            1
        } else if v < -atol {
            -1
        } else {
            0
        }
    };

    let mut count = 0usize;
    let mut brackets = Vec::new();
    let mut node_zeros = Vec::new();
    let mut tangencies = Vec::new();
    let mut prev_sign: Option<i8> = None;
    let mut zero_run: Option<(usize, usize)> = None;

    for i in 0..=k {
        let s = sign(vals[i]);
        if s == 0 {
            zero_run = Some(match zero_run {
                Some((a, _)) => (a, i),
                None => (i, i),
            });
            continue;
        }
        if let Some((a, b)) = zero_run.take() {
            let mid = 0.5 * (a + b) as f64 * h;
            match prev_sign {
                None => {
                    // run starting at the left endpoint
                    count += 1;
                    node_zeros.push(mid);
                }
                Some(p) if p != s => {
                    count += 1;
                    node_zeros.push(mid);
                }
                Some(_) => tangencies.push(mid),
            }
        } else if let Some(p) = prev_sign {
            if p != s {
                count += 1;
                brackets.push((h * (i - 1) as f64, h * i as f64));
            }
        }
        prev_sign = Some(s);
    }
    if let Some((a, b)) = zero_run {
        // run reaching the right endpoint counts once
        count += 1;
        node_zeros.push(0.5 * (a + b) as f64 * h);
    }

    ScanOutcome {
        count,
        brackets,
        node_zeros,
        tangencies,
        identically_zero: false,
    }
}

const MAX_REFINEMENTS: usize = 6;

fn stabilized_scan(
    f: &impl GridEval,
    t_max: f64,
    initial_resolution: usize,
) -> Result<(ScanOutcome, usize)> {
    let mut k = initial_resolution.max(8);
    let mut vals = Vec::new();
    let mut history: Vec<usize> = Vec::new();
    let mut last = scan(f, t_max, k, &mut vals);
    history.push(last.count);
    for _ in 0..MAX_REFINEMENTS {
        if last.identically_zero {
            return Ok((last, k));
        }
        // stable twice: three consecutive resolutions agree
        let h = history.len();
        if h >= 3 && history[h - 1] == history[h - 2] && history[h - 2] == history[h - 3] {
            return Ok((last, k));
        }
        k *= 2;
        last = scan(f, t_max, k, &mut vals);
        history.push(last.count);
    }
    let h = history.len();
    if h >= 3 && history[h - 1] == history[h - 2] && history[h - 2] == history[h - 3] {
        return Ok((last, k));
    }
    Err(Error::NoConvergence { refinements: MAX_REFINEMENTS })
}

/// Count only (no bisection); used by the Monte Carlo campaigns.
pub fn count_zeros_fast(
    f: &impl GridEval,
    t_max: f64,
    initial_resolution: usize,
) -> Result<usize> {
    let (outcome, _) = stabilized_scan(f, t_max, initial_resolution)?;
    Ok(outcome.count)
}

/// Full zero count with refined locations: sign-change brackets are bisected
/// to 1e-12, endpoint zeros counted once, tangencies flagged.
pub fn count_zeros(
    f: &impl GridEval,
    t_max: f64,
    initial_resolution: usize,
) -> Result<ZeroCount> {
    if !(t_max > 0.0) {
        return Err(Error::precondition("T", "must be > 0"));
    }
    let (outcome, resolution_used) = stabilized_scan(f, t_max, initial_resolution)?;
    if outcome.identically_zero {
        return Ok(ZeroCount {
            t_max,
            count: 0,
            locations: Vec::new(),
            tangencies: Vec::new(),
            resolution_used,
            identically_zero: true,
        });
    }
    let tol = 1e-12 * t_max.max(1.0);
    let mut locations: Vec<f64> = outcome.node_zeros.clone();
    for &(mut a, mut b) in &outcome.brackets {
        let mut fa = f.eval(a);
        for _ in 0..200 {
            if b - a <= tol {
                break;
            }
            let m = 0.5 * (a + b);
            let fm = f.eval(m);
            if fm == 0.0 {
                a = m;
                b = m;
                break;
            }
            if (fa > 0.0) != (fm > 0.0) {
                b = m;
            } else {
                a = m;
                fa = fm;
            }
        }
        locations.push(0.5 * (a + b));
    }
    locations.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(ZeroCount {
        t_max,
        count: outcome.count,
        locations,
        tangencies: outcome.tangencies,
        resolution_used,
        identically_zero: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sine_on_unit_interval_counts_endpoints_once() {
        let f = |x: f64| (2.0 * std::f64::consts::PI * x).sin();
        let z = count_zeros(&f, 1.0, 16).unwrap();
        assert_eq!(z.count, 3, "zeros at 0, 1/2, 1: {:?}", z.locations);
        assert_relative_eq!(z.locations[1], 0.5, epsilon = 1e-10);
    }

    #[test]
    fn positive_function_has_no_zeros() {
        let f = |x: f64| x * x + 1.0;
        let z = count_zeros(&f, 1.0, 8).unwrap();
        assert_eq!(z.count, 0);
        assert!(z.tangencies.is_empty());
    }

    #[test]
    fn cosine_process_has_two_zeros_per_period() {
        use crate::sampler::draw_wave_path;
        use crate::spectral::Measure1d;
        let mu = Measure1d::atomic(&[(1.0, 1.0)]).unwrap();
        for seed in 0..200u64 {
            let w = draw_wave_path(&mu, seed, 1);
            let z = count_zeros(&w, 2.0 * std::f64::consts::PI, 16).unwrap();
            // a cos t + b sin t on [0, 2π]: two zeros a.s. (three only when a
            // zero lands exactly on both endpoints)
            assert!(
                z.count == 2 || z.count == 3,
                "seed {seed}: count {}",
                z.count
            );
        }
    }

    #[test]
    fn tangency_flagged_not_counted() {
        let f = |x: f64| (x - 0.5) * (x - 0.5);
        let z = count_zeros(&f, 1.0, 16).unwrap();
        assert_eq!(z.count, 0);
        assert!(!z.tangencies.is_empty());
        assert!((z.tangencies[0] - 0.5).abs() < 0.1);
    }

    #[test]
    fn clustered_roots_resolved_by_refinement() {
        let f = |x: f64| (x - 0.500).sin() * (x - 0.501) * (x - 0.502);
        let z = count_zeros(&f, 1.0, 8).unwrap();
        assert_eq!(z.count, 3);
    }

    #[test]
    fn locations_strictly_increasing_and_accurate() {
        let f = |x: f64| (3.0 * x).sin() - 0.2;
        let z = count_zeros(&f, 3.0, 16).unwrap();
        for w in z.locations.windows(2) {
            assert!(w[0] < w[1]);
        }
        for &loc in &z.locations {
            assert!(f(loc).abs() < 1e-9, "f({loc}) = {}", f(loc));
        }
    }

    #[test]
    fn identically_zero_flagged() {
        let f = |_x: f64| 0.0;
        let z = count_zeros(&f, 1.0, 8).unwrap();
        assert!(z.identically_zero);
    }
}
