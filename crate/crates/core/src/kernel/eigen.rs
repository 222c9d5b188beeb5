//! Eigenvalue lower-bound certificates: lambda_min(Sigma) >= (cT/m)^{2(m-1)}.
//!
//! `lambda_min` is computed in high precision whenever the kernel has a
//! closed form, because the certified quantity routinely sits hundreds of
//! digits below f64. `c_fitted` is the largest constant the measured
//! eigenvalue supports; the proof only asserts such a constant exists.

use crate::error::{Error, Result};
use crate::kernel::hp::{big_to_f64, toeplitz_lambda_min, HpCtx};
use crate::kernel::{closed_form_1d, gram_matrix};
use crate::spectral::assumptions::AssumptionReport;
use crate::spectral::Measure1d;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EigenMethod {
    HighPrecision { bits: usize },
    F64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenCertificate {
    pub m: usize,
    pub t_total: f64,
    /// ln lambda_min; the plain value underflows to 0 for deep certificates.
    pub lambda_min_ln: f64,
    pub lambda_min: f64,
    /// Supplied constant, when checking rather than fitting.
    pub c: Option<f64>,
    /// ln (cT/m)^{2(m-1)} for the supplied c.
    pub bound_ln: Option<f64>,
    /// lambda_min >= bound, present iff `c` was supplied.
    pub valid: Option<bool>,
    /// Largest c the measurement supports: (m/T) lambda_min^{1/(2(m-1))}.
    pub c_fitted: f64,
    pub method: EigenMethod,
}

const MAX_M: usize = 512;

/// Certificate for the (m+1)x(m+1) Gram matrix on t_k = kT/m. Requires the
/// measure to satisfy the a.c.-part assumption (pass its report) and the
/// spacing regime T <= b*m with b = pi/M0 from that report.
pub fn eigen_certificate(
    mu: &Measure1d,
    m: usize,
    t_total: f64,
    c: Option<f64>,
    a1: &AssumptionReport,
) -> Result<EigenCertificate> {
    if !a1.satisfied {
        return Err(Error::AssumptionViolated {
            assumption: "A1",
            detail: format!("{} has no absolutely continuous part", mu.label()),
        });
    }
    if m < 2 {
        return Err(Error::precondition("m", "certificate needs m >= 2"));
    }
    if m > MAX_M {
        return Err(Error::precondition(
            "m",
            format!("m = {m} beyond the dense-solver limit {MAX_M}"),
        ));
    }
    if !(t_total > 0.0) {
        return Err(Error::precondition("T", "must be > 0"));
    }
    let b = a1.b().expect("satisfied report carries M0");
    if t_total > b * m as f64 {
        return Err(Error::precondition(
            "T_le_bm",
            format!("T = {t_total} > b*m = {}", b * m as f64),
        ));
    }

    let (lambda_min_ln, method) = match closed_form_1d(mu) {
        Some(cf) => {
            let bits = precision_for(mu, m, t_total, a1);
            let mut ctx = HpCtx::new(bits);
            let step = t_total / m as f64;
            let row: Vec<_> = (0..=m).map(|j| ctx.kernel_at(&cf, step, j)).collect();
            let lam = toeplitz_lambda_min(&row, &mut ctx);
            if lam.is_negative() || lam.is_zero() {
                return Err(Error::NotPsd {
                    index: m,
                    pivot: big_to_f64(&lam),
                });
            }
            (ctx.ln_f64(&lam), EigenMethod::HighPrecision { bits })
        }
        None => {
            // no closed form to evaluate in high precision; the f64 solver
            // floor limits how deep a certificate can be checked
            let g = gram_matrix(mu, m, t_total)?;
            let lam = g.lambda_min();
            if lam <= 1e-10 {
                return Err(Error::precondition(
                    "f64_floor",
                    format!(
                        "lambda_min = {lam:.3e} at the f64 noise floor; certificate for \
                         quadrature-kernel measures needs lambda_min > 1e-10"
                    ),
                ));
            }
            (lam.ln(), EigenMethod::F64)
        }
    };

    let exponent = 2.0 * (m as f64 - 1.0);
    let c_fitted = (m as f64 / t_total) * (lambda_min_ln / exponent).exp();
    let (bound_ln, valid) = match c {
        Some(c) => {
            let bl = exponent * (c * t_total / m as f64).ln();
            (Some(bl), Some(lambda_min_ln >= bl))
        }
        None => (None, None),
    };
    Ok(EigenCertificate {
        m,
        t_total,
        lambda_min_ln,
        lambda_min: lambda_min_ln.exp(),
        c,
        bound_ln,
        valid,
        c_fitted,
        method,
    })
}

/// Working precision: predicted from the proof's own lower bound
/// lambda >= 2π (m δ0 / T) (T δ0 / (4π m A))^{2(m-1)} with A = 14.
fn precision_for(_mu: &Measure1d, m: usize, t_total: f64, a1: &AssumptionReport) -> usize {
    let delta0 = a1.delta0.unwrap_or(0.1);
    let a_turan = 14.0;
    let inner = (t_total * delta0) / (4.0 * std::f64::consts::PI * m as f64 * a_turan);
    let ln_lambda = (2.0 * std::f64::consts::PI * m as f64 * delta0 / t_total).ln()
        + 2.0 * (m as f64 - 1.0) * inner.ln();
    let bits = 192.0 + 1.5 * (-ln_lambda).max(0.0) / std::f64::consts::LN_2;
    (bits as usize).min(16384)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::check_assumption_a1;

    #[test]
    fn uniform_small_certificate_positive() {
        let mu = Measure1d::uniform(1.0).unwrap();
        let a1 = check_assumption_a1(&mu);
        let cert = eigen_certificate(&mu, 2, 0.5, None, &a1).unwrap();
        assert!(cert.lambda_min > 0.0);
        assert!(cert.c_fitted > 0.0);
        // fitted constant certifies itself
        let cert2 = eigen_certificate(&mu, 2, 0.5, Some(cert.c_fitted * 0.999_999), &a1).unwrap();
        assert_eq!(cert2.valid, Some(true));
    }

    #[test]
    fn deep_certificate_stays_positive() {
        let mu = Measure1d::std_normal();
        let a1 = check_assumption_a1(&mu);
        let b = a1.b().unwrap();
        let m = 16;
        let cert = eigen_certificate(&mu, m, 0.5 * b * m as f64, None, &a1).unwrap();
        assert!(cert.lambda_min_ln.is_finite());
        assert!(cert.c_fitted > 0.0 && cert.c_fitted.is_finite());
        match cert.method {
            EigenMethod::HighPrecision { bits } => assert!(bits >= 192),
            EigenMethod::F64 => panic!("expected the high-precision path"),
        }
    }

    #[test]
    fn atomic_measure_rejected() {
        let mu = Measure1d::atomic(&[(1.0, 1.0)]).unwrap();
        let a1 = check_assumption_a1(&mu);
        let err = eigen_certificate(&mu, 4, 1.0, None, &a1).unwrap_err();
        assert!(matches!(err, Error::AssumptionViolated { .. }));
    }

    #[test]
    fn spacing_regime_enforced() {
        let mu = Measure1d::uniform(1.0).unwrap();
        let a1 = check_assumption_a1(&mu);
        let b = a1.b().unwrap();
        let err = eigen_certificate(&mu, 4, 4.0 * b + 1.0, None, &a1).unwrap_err();
        assert!(matches!(err, Error::PreconditionFailed { .. }));
    }
}
