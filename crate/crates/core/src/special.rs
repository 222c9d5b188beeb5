//! Small wrappers around special functions used across the crate.

use statrs::function::gamma::ln_gamma;

pub fn ln_factorial(n: usize) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

pub fn ln_gamma_f(x: f64) -> f64 {
    ln_gamma(x)
}

/// ln of binomial coefficient C(n, k).
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// ln of the angular moment of a rotation-invariant measure on the unit
/// circle: (1/2π) ∫ |cos θ|^m |sin θ|^n dθ = Γ((m+1)/2) Γ((n+1)/2) / (π Γ((m+n)/2 + 1)).
pub fn ln_angular_moment(m: usize, n: usize) -> f64 {
    ln_gamma((m as f64 + 1.0) / 2.0) + ln_gamma((n as f64 + 1.0) / 2.0)
        - std::f64::consts::PI.ln()
        - ln_gamma((m + n) as f64 / 2.0 + 1.0)
}

/// Bessel J0, used for the unit-circle (random plane wave) kernel.
pub fn bessel_j0(x: f64) -> f64 {
    libm::j0(x)
}

/// Standard normal inverse CDF.
pub fn normal_inverse_cdf(p: f64) -> f64 {
    use statrs::distribution::ContinuousCDF;
    let n = statrs::distribution::Normal::new(0.0, 1.0).unwrap();
    n.inverse_cdf(p)
}

pub fn normal_pdf(x: f64) -> f64 {
    (-(x * x) / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn angular_moments() {
        // m=n=0 -> 1, m=2,n=0 -> 1/2, m=n=2 -> 1/8
        assert_relative_eq!(ln_angular_moment(0, 0).exp(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(ln_angular_moment(2, 0).exp(), 0.5, epsilon = 1e-12);
        assert_relative_eq!(ln_angular_moment(2, 2).exp(), 0.125, epsilon = 1e-12);
    }

    #[test]
    fn j0_zero_and_first_root() {
        assert_relative_eq!(bessel_j0(0.0), 1.0);
        // first zero of J0 near 2.404825557695773
        assert!(bessel_j0(2.404825557695773).abs() < 1e-12);
    }

    #[test]
    fn factorial_ln() {
        assert_relative_eq!(ln_factorial(5).exp(), 120.0, max_relative = 1e-12);
    }
}
