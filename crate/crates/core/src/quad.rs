//! Adaptive Gauss–Kronrod quadrature (G7,K15) with oscillation-aware
//! splitting and a log-domain variant for sharply peaked integrands.

use crate::error::{Error, Result};
use crate::logspace::LogVal;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

// Standard QUADPACK 15-point Kronrod nodes on [-1,1] and weights, with the
// embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_2,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct QuadEstimate {
    pub value: f64,
    pub abs_err: f64,
}

/// One G7/K15 pass over [a,b].
fn kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> QuadEstimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);

    let mut result_gauss = WG[3] * fc;
    let mut result_kronrod = WGK[7] * fc;
    let mut resabs = result_kronrod.abs();

    let mut fv = [0.0f64; 15];
    fv[7] = fc;
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        result_kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = result_kronrod * 0.5;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let value = result_kronrod * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((result_kronrod - result_gauss) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    QuadEstimate { value, abs_err: err }
}

struct Segment {
    a: f64,
    b: f64,
    est: QuadEstimate,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.est.abs_err == other.est.abs_err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est
            .abs_err
            .partial_cmp(&other.est.abs_err)
            .unwrap_or(Ordering::Equal)
    }
}

const MAX_SEGMENTS: usize = 4000;

/// Adaptive integration of `f` over the union of `[breaks[i], breaks[i+1]]`.
///
/// Splits the worst segment first until the summed error estimate is below
/// `abs_tol` (or `rel_tol` relative to the running value).
pub fn adaptive_segments<F: Fn(f64) -> f64>(
    f: &F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadEstimate> {
    assert!(breaks.len() >= 2);
    let mut heap = BinaryHeap::new();
    let mut value = 0.0;
    let mut err = 0.0;
    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let est = kronrod_15(f, w[0], w[1]);
        value += est.value;
        err += est.abs_err;
        heap.push(Segment { a: w[0], b: w[1], est });
    }
    while err > abs_tol.max(rel_tol * value.abs()) {
        if heap.len() >= MAX_SEGMENTS {
            return Err(Error::QuadratureFailure(format!(
                "error {err:.3e} above tolerance after {MAX_SEGMENTS} segments"
            )));
        }
        let worst = heap.pop().expect("heap cannot be empty while err > 0");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at machine precision
            heap.push(worst);
            break;
        }
        let left = kronrod_15(f, worst.a, mid);
        let right = kronrod_15(f, mid, worst.b);
        value += left.value + right.value - worst.est.value;
        err += left.abs_err + right.abs_err - worst.est.abs_err;
        heap.push(Segment { a: worst.a, b: mid, est: left });
        heap.push(Segment { a: mid, b: worst.b, est: right });
    }
    Ok(QuadEstimate { value, abs_err: err })
}

pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64) -> Result<QuadEstimate> {
    adaptive_segments(f, &[a, b], abs_tol, 1e-13)
}

/// Integrate `f(x)` over [a,b] where `f` oscillates with angular frequency
/// about `omega` (e.g. contains cos(omega x)). Seeds the worklist with
/// half-period segments so the error estimator sees each lobe.
pub fn adaptive_oscillatory<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    omega: f64,
    abs_tol: f64,
) -> Result<QuadEstimate> {
    let len = b - a;
    let half_period = if omega.abs() > 1e-12 {
        std::f64::consts::PI / omega.abs()
    } else {
        f64::INFINITY
    };
    let n_seg = if half_period.is_finite() && len > half_period {
        ((len / half_period).ceil() as usize).min(1024)
    } else {
        1
    };
    let breaks: Vec<f64> = (0..=n_seg)
        .map(|i| a + len * (i as f64) / (n_seg as f64))
        .collect();
    adaptive_segments(f, &breaks, abs_tol, 1e-13)
}

/// Compute `ln ∫_a^b exp(g(u)) du` for a sharply peaked exponent `g`,
/// shifting by the maximum so the working integrand stays in [0,1].
pub fn log_peak_integral<G: Fn(f64) -> f64>(g: &G, a: f64, b: f64) -> Result<LogVal> {
    assert!(b > a);
    // locate the peak on a coarse grid, then refine by golden section
    let coarse = 512;
    let mut best_x = a;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=coarse {
        let x = a + (b - a) * (i as f64) / (coarse as f64);
        let v = g(x);
        if v > best {
            best = v;
            best_x = x;
        }
    }
    let h = (b - a) / (coarse as f64);
    let (mut lo, mut hi) = ((best_x - h).max(a), (best_x + h).min(b));
    let phi = 0.5 * (3.0 - 5.0_f64.sqrt());
    for _ in 0..60 {
        let x1 = lo + phi * (hi - lo);
        let x2 = hi - phi * (hi - lo);
        if g(x1) < g(x2) {
            lo = x1;
        } else {
            hi = x2;
        }
    }
    let peak = g(0.5 * (lo + hi)).max(best);
    if !peak.is_finite() {
        return Err(Error::QuadratureFailure(
            "peak of log-integrand not finite".into(),
        ));
    }
    let shifted = |u: f64| {
        let e = g(u) - peak;
        if e < -745.0 {
            0.0
        } else {
            e.exp()
        }
    };
    let est = adaptive_segments(&shifted, &[a, best_x.max(a + 1e-300), b], 1e-12, 1e-11)?;
    if est.value <= 0.0 {
        return Ok(LogVal::ZERO);
    }
    Ok(LogVal::from_ln(peak + est.value.ln()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        let est = adaptive(&|x: f64| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert_relative_eq!(est.value, 1.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn gaussian_matches_erf() {
        let est = adaptive(&|x: f64| (-0.5 * x * x).exp(), -10.0, 10.0, 1e-12).unwrap();
        assert_relative_eq!(est.value, (2.0 * std::f64::consts::PI).sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn oscillatory_sinc_tail() {
        // ∫_0^1 cos(50 x) dx = sin(50)/50
        let est = adaptive_oscillatory(&|x: f64| (50.0 * x).cos(), 0.0, 1.0, 1e-12).unwrap();
        assert_relative_eq!(est.value, 50f64.sin() / 50.0, epsilon = 1e-12);
    }

    #[test]
    fn log_peak_recovers_gaussian_mass() {
        // ∫ exp(-(x-3)^2 * 1e6) dx = sqrt(pi)/1e3
        let g = |x: f64| -(x - 3.0) * (x - 3.0) * 1e6;
        let v = log_peak_integral(&g, 0.0, 10.0).unwrap();
        assert_relative_eq!(
            v.ln(),
            (std::f64::consts::PI.sqrt() / 1e3).ln(),
            epsilon = 1e-8
        );
    }

    #[test]
    fn log_peak_handles_enormous_peaks() {
        // exponent peaks around 5000; direct evaluation would overflow
        let g = |x: f64| 2000.0 * x - x * x * 200.0;
        // peak at x = 5, value 5000
        let v = log_peak_integral(&g, 0.0, 20.0).unwrap();
        let expected = 5000.0 + (std::f64::consts::PI / 200.0).sqrt().ln();
        assert_relative_eq!(v.ln(), expected, epsilon = 1e-9);
    }
}
