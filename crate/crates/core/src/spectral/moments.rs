//! Moment tables: C_n / D_n in one dimension, C_{m,n} / R_n / L_n in two.
//!
//! Values are cached in log space; plain accessors exponentiate on the way
//! out and may overflow to `inf` for very high orders, which is fine for
//! display but the bound evaluators always consume the log form.

use crate::error::{Error, Result};
use crate::logspace::LogVal;
use crate::special::ln_binomial;
use crate::spectral::measure::{Measure1d, Measure2d, Variant1d};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MomentMethod {
    ClosedForm,
    Quadrature,
}

#[derive(Clone, Debug)]
pub struct MomentTable {
    pub dimension: u8,
    pub max_order: usize,
    pub method: MomentMethod,
    /// 1D: C_0 .. C_{max_order+2}
    c1: Vec<LogVal>,
    /// 1D: D_0 .. D_{max_order/2}
    d: Vec<LogVal>,
    /// 2D: C_{m,n} for m+n <= 2*max_order+2, indexed [m][n]
    c2: Vec<Vec<LogVal>>,
    rtilde: Vec<LogVal>,
    r: Vec<LogVal>,
    ltilde: Vec<LogVal>,
    l: Vec<LogVal>,
}

impl MomentTable {
    pub fn c(&self, n: usize) -> f64 {
        self.c_ln(n).value()
    }

    pub fn c_ln(&self, n: usize) -> LogVal {
        self.c1[n]
    }

    pub fn d(&self, n: usize) -> f64 {
        self.d_ln(n).value()
    }

    pub fn d_ln(&self, n: usize) -> LogVal {
        self.d[n]
    }

    /// D_n^{1/n}.
    pub fn d_root(&self, n: usize) -> f64 {
        self.d[n].root(n).value()
    }

    pub fn c2(&self, m: usize, n: usize) -> f64 {
        self.c2_ln(m, n).value()
    }

    pub fn c2_ln(&self, m: usize, n: usize) -> LogVal {
        self.c2[m][n]
    }

    pub fn rtilde_ln(&self, n: usize) -> LogVal {
        self.rtilde[n]
    }

    pub fn r_ln(&self, n: usize) -> LogVal {
        self.r[n]
    }

    pub fn ltilde_ln(&self, n: usize) -> LogVal {
        self.ltilde[n]
    }

    pub fn l_ln(&self, n: usize) -> LogVal {
        self.l[n]
    }

    pub fn r(&self, n: usize) -> f64 {
        self.r[n].value()
    }

    pub fn l(&self, n: usize) -> f64 {
        self.l[n].value()
    }

    /// L_n^{1/n}.
    pub fn l_root(&self, n: usize) -> f64 {
        self.l[n].root(n).value()
    }

    pub fn r_root(&self, n: usize) -> f64 {
        self.r[n].root(n).value()
    }

    /// Largest n for which D_n is tabulated.
    pub fn d_max(&self) -> usize {
        self.d.len().saturating_sub(1)
    }

    /// Largest n for which R_n, L_n are tabulated.
    pub fn rl_max(&self) -> usize {
        self.l.len().saturating_sub(1)
    }
}

/// C_n for 0 <= n <= max_order+2 and D_n for n <= max_order/2.
pub fn moments_1d(mu: &Measure1d, max_order: usize) -> Result<MomentTable> {
    if max_order < 2 {
        return Err(Error::precondition("max_order", "must be >= 2"));
    }
    let method = match mu.variant() {
        Variant1d::Grid(_) | Variant1d::LogType { .. } => MomentMethod::Quadrature,
        _ => MomentMethod::ClosedForm,
    };
    let mut c1 = Vec::with_capacity(max_order + 3);
    for n in 0..=max_order + 2 {
        c1.push(mu.moment_ln(n)?);
    }
    let c0 = c1[0].value();
    if (c0 - 1.0).abs() > 1e-8 {
        return Err(Error::QuadratureFailure(format!(
            "C_0 = {c0}, expected 1 (normalization lost)"
        )));
    }
    let mut d = Vec::new();
    for n in 0..=max_order / 2 {
        d.push(LogVal::ONE.max(c1[2 * n].sqrt()).max(c1[2 * n + 2].sqrt()));
    }
    Ok(MomentTable {
        dimension: 1,
        max_order,
        method,
        c1,
        d,
        c2: Vec::new(),
        rtilde: Vec::new(),
        r: Vec::new(),
        ltilde: Vec::new(),
        l: Vec::new(),
    })
}

/// C_{m,n} for m+n <= 2*max_order+2, R~_n / R_n / L~_n / L_n for n up to
/// max_order (R, L up to max_order-1 since they need index n+1).
pub fn moments_2d(mu: &Measure2d, max_order: usize) -> Result<MomentTable> {
    if max_order < 2 {
        return Err(Error::precondition("max_order", "must be >= 2"));
    }
    let deg = 2 * max_order + 2;
    let mut c2 = vec![vec![LogVal::ZERO; deg + 1]; deg + 1];
    for m in 0..=deg {
        for n in 0..=deg - m {
            c2[m][n] = mu.moment_ln(m, n)?;
        }
    }
    let c00 = c2[0][0].value();
    if (c00 - 1.0).abs() > 1e-8 {
        return Err(Error::QuadratureFailure(format!(
            "C_00 = {c00}, expected 1 (normalization lost)"
        )));
    }

    // R~_n = max over k of sqrt(C_{k, 2n-k})
    let mut rtilde = Vec::with_capacity(max_order + 2);
    for n in 0..=max_order + 1 {
        let mut best = LogVal::ZERO;
        for k in 0..=2 * n {
            best = best.max(c2[k][2 * n - k]);
        }
        rtilde.push(best.sqrt());
    }

    // L~_n^2 = sum_k C(n,k) C_{2k, 2n-2k}  (binomial expansion of (x²+y²)^n)
    let mut ltilde = Vec::with_capacity(max_order + 2);
    for n in 0..=max_order + 1 {
        let sq = LogVal::sum((0..=n).map(|k| {
            c2[2 * k][2 * (n - k)].mul(LogVal::from_ln(ln_binomial(n, k)))
        }));
        ltilde.push(sq.sqrt());
    }

    let mut r = Vec::with_capacity(max_order);
    let mut l = Vec::with_capacity(max_order);
    for n in 0..=max_order.saturating_sub(1) {
        r.push(
            LogVal::ONE
                .max(rtilde[1])
                .max(rtilde[n])
                .max(rtilde[n + 1]),
        );
        l.push(
            LogVal::ONE
                .max(ltilde[1])
                .max(ltilde[n])
                .max(ltilde[n + 1]),
        );
    }

    Ok(MomentTable {
        dimension: 2,
        max_order,
        method: MomentMethod::ClosedForm,
        c1: Vec::new(),
        d: Vec::new(),
        c2,
        rtilde,
        r,
        ltilde,
        l,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn uniform_table() {
        let mu = Measure1d::uniform(1.0).unwrap();
        let t = moments_1d(&mu, 6).unwrap();
        assert_relative_eq!(t.c(2), 1.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(t.c(4), 1.0 / 5.0, epsilon = 1e-12);
        // D_1 = max(1, sqrt(C2), sqrt(C4)) = 1
        assert_relative_eq!(t.d(1), 1.0);
        assert!(t.d(1) >= 1.0 && t.d(2) >= 1.0);
    }

    #[test]
    fn even_moment_log_convexity() {
        for mu in [
            Measure1d::uniform(2.0).unwrap(),
            Measure1d::std_normal(),
            Measure1d::stretched_exp(1.3).unwrap(),
            Measure1d::log_type(1.0).unwrap(),
        ] {
            let t = moments_1d(&mu, 16).unwrap();
            for n in 1..=8 {
                let lhs = 2.0 * t.c_ln(2 * n).ln();
                let rhs = t.c_ln(2 * n - 2).ln() + t.c_ln(2 * n + 2).ln();
                assert!(
                    lhs <= rhs + 1e-8,
                    "log-convexity violated for {} at n={n}: {lhs} > {rhs}",
                    mu.label()
                );
            }
        }
    }

    #[test]
    fn unit_circle_ltilde_is_one() {
        let mu = Measure2d::unit_circle();
        let t = moments_2d(&mu, 8).unwrap();
        for n in 0..=8 {
            assert_relative_eq!(t.ltilde_ln(n).value(), 1.0, epsilon = 1e-10);
        }
        assert_relative_eq!(t.c2(2, 0), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn momrel_sandwich_for_named_families() {
        for mu in [
            Measure2d::unit_circle(),
            Measure2d::std_normal(),
            Measure2d::radial_stretched_exp(0.8).unwrap(),
        ] {
            let t = moments_2d(&mu, 13).unwrap();
            for n in 1..=12 {
                let r_root = t.r_ln(n).ln() / n as f64;
                let l_root = t.l_ln(n).ln() / n as f64;
                assert!(
                    r_root <= l_root + 1e-8,
                    "{}: R_n^(1/n) > L_n^(1/n) at n={n}",
                    mu.label()
                );
                assert!(
                    l_root <= r_root + 0.5 * 2.0f64.ln() + 1e-8,
                    "{}: L_n^(1/n) > sqrt(2) R_n^(1/n) at n={n}",
                    mu.label()
                );
            }
        }
    }

    #[test]
    fn radial_ltilde_matches_pushforward_moment() {
        let mu = Measure2d::radial_stretched_exp(1.0).unwrap();
        let t = moments_2d(&mu, 6).unwrap();
        let p = mu.radial_pushforward().unwrap();
        for n in 1..=6 {
            let via_binomial = 2.0 * t.ltilde_ln(n).ln();
            let direct = p.moment_ln(2 * n).unwrap().ln();
            assert!(
                (via_binomial - direct).abs() < 1e-9,
                "n={n}: {via_binomial} vs {direct}"
            );
        }
    }
}
