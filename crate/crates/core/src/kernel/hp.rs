//! High-precision arithmetic for the eigenvalue certificate.
//!
//! The smallest eigenvalue of a sampled covariance matrix decays like
//! (cT/m)^{2(m-1)}, far below f64 resolution for moderate m, so both the
//! kernel entries and the Jacobi eigensolver run in multi-precision floats.
//! Jacobi is used because it determines tiny eigenvalues of positive
//! definite matrices to high relative accuracy.

use crate::kernel::ClosedForm1d;
use astro_float::{BigFloat, Consts, RoundingMode};
use std::cmp::Ordering;

const RM: RoundingMode = RoundingMode::None;

pub struct HpCtx {
    pub prec: usize,
    consts: Consts,
}

fn lt(a: &BigFloat, b: &BigFloat) -> bool {
    matches!(a.partial_cmp(b), Some(Ordering::Less))
}

impl HpCtx {
    pub fn new(prec: usize) -> HpCtx {
        HpCtx {
            prec,
            consts: Consts::new().expect("constants cache"),
        }
    }

    fn from_f64(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.prec)
    }

    /// (1/2)^k by repeated squaring; used as the Jacobi stopping threshold.
    fn pow2_neg(&self, k: usize) -> BigFloat {
        let p = self.prec;
        let mut base = self.from_f64(0.5);
        let mut acc = self.from_f64(1.0);
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, p, RM);
            }
            base = base.mul(&base, p, RM);
            e >>= 1;
        }
        acc
    }

    /// Closed-form kernel value at t = step * j.
    pub fn kernel_at(&mut self, cf: &ClosedForm1d, step: f64, j: usize) -> BigFloat {
        let p = self.prec;
        let t = self.from_f64(step).mul(&self.from_f64(j as f64), p, RM);
        match cf {
            ClosedForm1d::Sinc { q } => {
                if j == 0 {
                    return self.from_f64(1.0);
                }
                let u = t.mul(&self.from_f64(*q), p, RM);
                u.sin(p, RM, &mut self.consts).div(&u, p, RM)
            }
            ClosedForm1d::Gauss => {
                let half = self.from_f64(-0.5);
                t.mul(&t, p, RM)
                    .mul(&half, p, RM)
                    .exp(p, RM, &mut self.consts)
            }
            ClosedForm1d::Cauchy => {
                let one = self.from_f64(1.0);
                let denom = one.add(&t.mul(&t, p, RM), p, RM);
                one.div(&denom, p, RM)
            }
            ClosedForm1d::Cosine(atoms) => {
                let mut acc = self.from_f64(0.0);
                for a in atoms {
                    let arg = t.mul(&self.from_f64(a.freq), p, RM);
                    let term = arg
                        .cos(p, RM, &mut self.consts)
                        .mul(&self.from_f64(a.weight), p, RM);
                    acc = acc.add(&term, p, RM);
                }
                acc
            }
        }
    }

    /// Natural log of a positive BigFloat, returned as f64.
    pub fn ln_f64(&mut self, v: &BigFloat) -> f64 {
        let l = v.ln(self.prec, RM, &mut self.consts);
        big_to_f64(&l)
    }
}

pub fn big_to_f64(v: &BigFloat) -> f64 {
    // decimal round-trip; values reaching f64 here are moderate (logs,
    // fitted constants), so the parse never saturates
    format!("{v}").parse::<f64>().unwrap_or(f64::NAN)
}

/// Smallest eigenvalue of a symmetric positive semidefinite Toeplitz matrix
/// given by its first row, by cyclic Jacobi with a relative off-diagonal
/// threshold.
pub fn toeplitz_lambda_min(first_row: &[BigFloat], ctx: &mut HpCtx) -> BigFloat {
    let n = first_row.len();
    let p = ctx.prec;
    let mut a: Vec<Vec<BigFloat>> = (0..n)
        .map(|i| (0..n).map(|j| first_row[i.abs_diff(j)].clone()).collect())
        .collect();

    let one = BigFloat::from_f64(1.0, p);
    let zero = BigFloat::from_f64(0.0, p);
    // stop once |a_pq| <= 2^-(prec-8) sqrt(a_pp a_qq)
    let thresh = ctx.pow2_neg(p.saturating_sub(8));

    for _sweep in 0..80 {
        let mut rotated = false;
        for q in 1..n {
            for pp in 0..q {
                let apq = a[pp][q].clone();
                if apq.is_zero() {
                    continue;
                }
                let scale = a[pp][pp].mul(&a[q][q], p, RM).abs().sqrt(p, RM);
                let gate = scale.mul(&thresh, p, RM);
                if lt(&apq.abs(), &gate) {
                    continue;
                }
                rotated = true;
                // stable rotation: theta = (a_qq - a_pp) / (2 a_pq)
                let diff = a[q][q].sub(&a[pp][pp], p, RM);
                let two_apq = apq.add(&apq, p, RM);
                let theta = diff.div(&two_apq, p, RM);
                let t_val = {
                    let at = theta.abs();
                    let denom = at.add(
                        &at.mul(&at, p, RM).add(&one, p, RM).sqrt(p, RM),
                        p,
                        RM,
                    );
                    let t_abs = one.div(&denom, p, RM);
                    if theta.is_negative() {
                        zero.sub(&t_abs, p, RM)
                    } else {
                        t_abs
                    }
                };
                let c = one.div(&t_val.mul(&t_val, p, RM).add(&one, p, RM).sqrt(p, RM), p, RM);
                let s = t_val.mul(&c, p, RM);
                let tau = s.div(&one.add(&c, p, RM), p, RM);

                let t_apq = t_val.mul(&apq, p, RM);
                a[pp][pp] = a[pp][pp].sub(&t_apq, p, RM);
                a[q][q] = a[q][q].add(&t_apq, p, RM);
                a[pp][q] = zero.clone();
                a[q][pp] = zero.clone();
                for i in 0..n {
                    if i == pp || i == q {
                        continue;
                    }
                    let aip = a[i][pp].clone();
                    let aiq = a[i][q].clone();
                    let new_ip =
                        aip.sub(&s.mul(&aiq.add(&tau.mul(&aip, p, RM), p, RM), p, RM), p, RM);
                    let new_iq =
                        aiq.add(&s.mul(&aip.sub(&tau.mul(&aiq, p, RM), p, RM), p, RM), p, RM);
                    a[i][pp] = new_ip.clone();
                    a[pp][i] = new_ip;
                    a[i][q] = new_iq.clone();
                    a[q][i] = new_iq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut min = a[0][0].clone();
    for (i, row) in a.iter().enumerate().skip(1) {
        if lt(&row[i], &min) {
            min = row[i].clone();
        }
    }
    min
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn from_f64s(vals: &[f64], p: usize) -> Vec<BigFloat> {
        vals.iter().map(|&v| BigFloat::from_f64(v, p)).collect()
    }

    #[test]
    fn identity_matrix() {
        let mut ctx = HpCtx::new(192);
        let row = from_f64s(&[1.0, 0.0, 0.0], 192);
        let lam = toeplitz_lambda_min(&row, &mut ctx);
        assert_relative_eq!(big_to_f64(&lam), 1.0, epsilon = 1e-30);
    }

    #[test]
    fn two_by_two_toeplitz() {
        // [[1, r], [r, 1]] has lambda_min = 1 - r
        let mut ctx = HpCtx::new(256);
        let row = from_f64s(&[1.0, 0.25], 256);
        let lam = toeplitz_lambda_min(&row, &mut ctx);
        assert_relative_eq!(big_to_f64(&lam), 0.75, epsilon = 1e-14);
    }

    #[test]
    fn matches_f64_eigensolver_on_benign_matrix() {
        let mu = crate::spectral::Measure1d::uniform(1.0).unwrap();
        let g = crate::kernel::gram_matrix(&mu, 4, 3.0).unwrap();
        let lam_f64 = g.lambda_min();
        let mut ctx = HpCtx::new(256);
        let cf = crate::kernel::closed_form_1d(&mu).unwrap();
        let row: Vec<BigFloat> = (0..=4).map(|j| ctx.kernel_at(&cf, 3.0 / 4.0, j)).collect();
        let lam_hp = big_to_f64(&toeplitz_lambda_min(&row, &mut ctx));
        assert_relative_eq!(lam_f64, lam_hp, max_relative = 1e-9);
    }

    #[test]
    fn resolves_eigenvalues_far_below_f64() {
        // Gaussian kernel at fine spacing: lambda_min of the 13x13 matrix is
        // far below f64 noise, exactly the regime the certificate must
        // handle; it must come out positive with a sane log-magnitude.
        let mu = crate::spectral::Measure1d::std_normal();
        let cf = crate::kernel::closed_form_1d(&mu).unwrap();
        let mut ctx = HpCtx::new(640);
        let m = 12usize;
        let step = 0.25 / m as f64;
        let row: Vec<BigFloat> = (0..=m).map(|j| ctx.kernel_at(&cf, step, j)).collect();
        let lam = toeplitz_lambda_min(&row, &mut ctx);
        assert!(!lam.is_negative(), "hp lambda_min must be positive");
        let ln_lam = ctx.ln_f64(&lam);
        assert!(ln_lam < -40.0, "expected extremely small lambda, got ln = {ln_lam}");
        assert!(ln_lam > -400.0, "ln lambda suspiciously small: {ln_lam}");
    }
}
