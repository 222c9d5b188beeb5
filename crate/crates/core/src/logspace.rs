//! Nonnegative reals carried as natural logarithms.
//!
//! Moments beyond order ~40 and bound factors like `(2T)^n / n!` overflow or
//! underflow f64, so every quantity that can leave the representable range is
//! stored as a [`LogVal`].

use serde::{Deserialize, Serialize};

/// A nonnegative real number `exp(ln)`. `ln = -inf` encodes zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogVal {
    ln: f64,
}

impl LogVal {
    pub const ZERO: LogVal = LogVal { ln: f64::NEG_INFINITY };
    pub const ONE: LogVal = LogVal { ln: 0.0 };

    pub fn from_value(v: f64) -> LogVal {
        debug_assert!(v >= 0.0, "LogVal requires a nonnegative value, got {v}");
        LogVal { ln: v.ln() }
    }

    pub fn from_ln(ln: f64) -> LogVal {
        LogVal { ln }
    }

    /// Natural log; `-inf` for zero.
    pub fn ln(self) -> f64 {
        self.ln
    }

    /// Back to a plain float; overflows to `inf` past ~1e308.
    pub fn value(self) -> f64 {
        self.ln.exp()
    }

    pub fn is_zero(self) -> bool {
        self.ln == f64::NEG_INFINITY
    }

    pub fn mul(self, rhs: LogVal) -> LogVal {
        if self.is_zero() || rhs.is_zero() {
            return LogVal::ZERO;
        }
        LogVal { ln: self.ln + rhs.ln }
    }

    pub fn div(self, rhs: LogVal) -> LogVal {
        LogVal { ln: self.ln - rhs.ln }
    }

    pub fn powi(self, k: i32) -> LogVal {
        if self.is_zero() {
            return if k == 0 { LogVal::ONE } else { LogVal::ZERO };
        }
        LogVal { ln: self.ln * f64::from(k) }
    }

    pub fn powf(self, p: f64) -> LogVal {
        if self.is_zero() {
            return if p == 0.0 { LogVal::ONE } else { LogVal::ZERO };
        }
        LogVal { ln: self.ln * p }
    }

    pub fn sqrt(self) -> LogVal {
        self.powf(0.5)
    }

    /// n-th root, `n >= 1`.
    pub fn root(self, n: usize) -> LogVal {
        self.powf(1.0 / n as f64)
    }

    pub fn max(self, rhs: LogVal) -> LogVal {
        if self.ln >= rhs.ln {
            self
        } else {
            rhs
        }
    }

    /// Sum in log space (log-sum-exp of two terms).
    pub fn add(self, rhs: LogVal) -> LogVal {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (hi, lo) = if self.ln >= rhs.ln {
            (self.ln, rhs.ln)
        } else {
            (rhs.ln, self.ln)
        };
        LogVal { ln: hi + (lo - hi).exp().ln_1p() }
    }

    /// Sum of many log-space terms, stable against spread-out magnitudes.
    pub fn sum(terms: impl IntoIterator<Item = LogVal>) -> LogVal {
        let lns: Vec<f64> = terms
            .into_iter()
            .filter(|t| !t.is_zero())
            .map(|t| t.ln)
            .collect();
        if lns.is_empty() {
            return LogVal::ZERO;
        }
        let hi = lns.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let s: f64 = lns.iter().map(|l| (l - hi).exp()).sum();
        LogVal { ln: hi + s.ln() }
    }
}

impl PartialOrd for LogVal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.ln.partial_cmp(&other.ln)
    }
}
