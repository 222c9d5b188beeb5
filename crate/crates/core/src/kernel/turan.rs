//! Empirical Turan ratios for exponential polynomials p(t) = Σ c_k e^{iλ_k t}:
//! the norm comparison ||p||_{L^q(I)} <= (A|I|/|E|)^{n-1} ||p||_{L^q(E)}.

use crate::error::{Error, Result};
use crate::quad::adaptive_oscillatory;
use nalgebra::Complex;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LNorm {
    P(f64),
    Inf,
}

fn abs_p(coeffs: &[(Complex<f64>, f64)], t: f64) -> f64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for (c, lambda) in coeffs {
        let (s, co) = (lambda * t).sin_cos();
        re += c.re * co - c.im * s;
        im += c.re * s + c.im * co;
    }
    re.hypot(im)
}

fn norm_on_intervals(
    coeffs: &[(Complex<f64>, f64)],
    intervals: &[(f64, f64)],
    q: LNorm,
) -> Result<f64> {
    let omega = coeffs
        .iter()
        .map(|(_, l)| l.abs())
        .fold(0.0f64, f64::max);
    match q {
        LNorm::P(p) => {
            if !(p > 0.0) {
                return Err(Error::precondition("q", "norm exponent must be > 0"));
            }
            let mut total = 0.0;
            for &(a, b) in intervals {
                let est =
                    adaptive_oscillatory(&|t| abs_p(coeffs, t).powf(p), a, b, omega, 1e-13)?;
                total += est.value;
            }
            Ok(total.powf(1.0 / p))
        }
        LNorm::Inf => {
            let mut best: f64 = 0.0;
            for &(a, b) in intervals {
                // dense scan then golden polish around the best cell
                let n = 4096;
                let h = (b - a) / n as f64;
                let mut bi = 0usize;
                let mut bv = 0.0;
                for i in 0..=n {
                    let v = abs_p(coeffs, a + h * i as f64);
                    if v > bv {
                        bv = v;
                        bi = i;
                    }
                }
                let (mut lo, mut hi) = (
                    a + h * (bi.saturating_sub(1)) as f64,
                    (a + h * (bi + 1) as f64).min(b),
                );
                let phi = 0.5 * (3.0 - 5.0f64.sqrt());
                for _ in 0..50 {
                    let x1 = lo + phi * (hi - lo);
                    let x2 = hi - phi * (hi - lo);
                    if abs_p(coeffs, x1) < abs_p(coeffs, x2) {
                        lo = x1;
                    } else {
                        hi = x2;
                    }
                }
                best = best.max(bv).max(abs_p(coeffs, 0.5 * (lo + hi)));
            }
            Ok(best)
        }
    }
}

/// Empirical ratio ||p||_{L^q(I)} / ||p||_{L^q(E)} for E ⊆ I a finite union
/// of intervals with positive total length.
pub fn turan_ratio(
    coeffs: &[(Complex<f64>, f64)],
    interval: (f64, f64),
    subset: &[(f64, f64)],
    q: LNorm,
) -> Result<f64> {
    if coeffs.is_empty() {
        return Err(Error::precondition("coeffs", "need at least one term"));
    }
    let (i_lo, i_hi) = interval;
    if !(i_hi > i_lo) {
        return Err(Error::precondition("interval", "must have positive length"));
    }
    let mut e_len = 0.0;
    for &(a, b) in subset {
        if b <= a {
            continue;
        }
        if a < i_lo - 1e-12 || b > i_hi + 1e-12 {
            return Err(Error::precondition("subset", "E must be contained in I"));
        }
        e_len += b - a;
    }
    if e_len <= 0.0 {
        return Err(Error::EmptySubset);
    }
    let denom = norm_on_intervals(coeffs, subset, q)?;
    if denom == 0.0 {
        return Err(Error::EmptySubset);
    }
    let num = norm_on_intervals(coeffs, &[interval], q)?;
    Ok(num / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn constant_function_ratio_is_length_ratio() {
        let coeffs = [(c(1.0, 0.0), 0.0)];
        for q in [1.0, 2.0, 3.5] {
            let r = turan_ratio(&coeffs, (0.0, 2.0), &[(0.0, 0.5)], LNorm::P(q)).unwrap();
            assert_relative_eq!(r, 4.0f64.powf(1.0 / q), epsilon = 1e-10);
        }
        let r_inf = turan_ratio(&coeffs, (0.0, 2.0), &[(0.0, 0.5)], LNorm::Inf).unwrap();
        assert_relative_eq!(r_inf, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn unimodular_exponential_l2() {
        // |e^{it}| = 1, so the L2 ratio over [0,2π] vs [0,π] is sqrt(2)
        let coeffs = [(c(1.0, 0.0), 1.0)];
        let r = turan_ratio(&coeffs, (0.0, 2.0 * PI), &[(0.0, PI)], LNorm::P(2.0)).unwrap();
        assert_relative_eq!(r, 2.0f64.sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn empty_subset_rejected() {
        let coeffs = [(c(1.0, 0.0), 0.0)];
        assert!(matches!(
            turan_ratio(&coeffs, (0.0, 1.0), &[], LNorm::P(2.0)),
            Err(Error::EmptySubset)
        ));
        assert!(turan_ratio(&coeffs, (0.0, 1.0), &[(0.5, 2.0)], LNorm::P(2.0)).is_err());
    }

    #[test]
    fn random_trigonometric_sums_respect_turan_constant() {
        use crate::rng::SeedSequence;
        use rand::Rng;
        // n = 3 terms: ratio <= (A |I| / |E|)^{n-1} with A = 14
        let seq = SeedSequence::new(2024);
        let mut rng = seq.stream(0);
        let interval = (0.0, 1.0);
        let subset = [(0.1, 0.35), (0.6, 0.85)]; // |E| = 0.5
        let cap = (14.0 * 1.0 / 0.5) * (14.0 * 1.0 / 0.5);
        for trial in 0..300 {
            let coeffs: Vec<(Complex<f64>, f64)> = (0..3)
                .map(|_| {
                    (
                        c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
                        (rng.random::<f64>() - 0.5) * 40.0,
                    )
                })
                .collect();
            let r = turan_ratio(&coeffs, interval, &subset, LNorm::P(2.0)).unwrap();
            assert!(r <= cap, "trial {trial}: ratio {r} above cap {cap}");
        }
    }
}
