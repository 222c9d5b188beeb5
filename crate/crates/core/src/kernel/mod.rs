//! Covariance kernels k = mu-hat: evaluation, derivatives, sampled Gram
//! matrices, folded spectral densities, eigenvalue certificates and Turan
//! ratio measurements.

pub mod eigen;
pub mod folded;
pub mod gram;
pub mod hp;
pub mod turan;

pub use eigen::{eigen_certificate, EigenCertificate, EigenMethod};
pub use folded::{folded_density, FoldedDensity};
pub use gram::{gram_matrix, GramMatrix};
pub use turan::{turan_ratio, LNorm};

use crate::error::{Error, Result};
use crate::quad::adaptive_oscillatory;
use crate::special::bessel_j0;
use crate::spectral::measure::{Measure1d, Measure2d, Variant1d, Variant2d};
use crate::spectral::Atom;

/// Closed-form kernels, also consumed by the high-precision certificate path.
#[derive(Clone, Debug)]
pub enum ClosedForm1d {
    /// Uniform([-q,q]): k(t) = sin(qt)/(qt).
    Sinc { q: f64 },
    /// Standard normal: k(t) = exp(-t^2/2).
    Gauss,
    /// Two-sided exponential density (stretched exp with alpha = 1):
    /// k(t) = 1/(1+t^2).
    Cauchy,
    /// Atomic measure: k(t) = sum w_i cos(lambda_i t).
    Cosine(Vec<Atom>),
}

pub fn closed_form_1d(mu: &Measure1d) -> Option<ClosedForm1d> {
    match mu.variant() {
        Variant1d::Uniform { q } => Some(ClosedForm1d::Sinc { q: *q }),
        Variant1d::StdNormal => Some(ClosedForm1d::Gauss),
        Variant1d::StretchedExp { alpha } if (*alpha - 1.0).abs() < 1e-15 => {
            Some(ClosedForm1d::Cauchy)
        }
        Variant1d::Atomic(atoms) => Some(ClosedForm1d::Cosine(atoms.clone())),
        _ => None,
    }
}

impl ClosedForm1d {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            ClosedForm1d::Sinc { q } => {
                let u = q * t;
                if u.abs() < 1e-8 {
                    1.0 - u * u / 6.0
                } else {
                    u.sin() / u
                }
            }
            ClosedForm1d::Gauss => (-0.5 * t * t).exp(),
            ClosedForm1d::Cauchy => 1.0 / (1.0 + t * t),
            ClosedForm1d::Cosine(atoms) => {
                atoms.iter().map(|a| a.weight * (a.freq * t).cos()).sum()
            }
        }
    }
}

/// k(t) = ∫ cos(tx) dμ(x); closed form when the family has one, adaptive
/// quadrature with half-period splitting otherwise.
pub fn eval_1d(mu: &Measure1d, t: f64) -> Result<f64> {
    if let Some(cf) = closed_form_1d(mu) {
        return Ok(cf.eval(t));
    }
    let mut out = 0.0;
    for a in mu.atoms() {
        out += a.weight * (a.freq * t).cos();
    }
    if mu.ac_mass() > 0.0 {
        let w = mu.density_window(1e-14);
        let f = |x: f64| (t * x).cos() * mu.ac_density(x);
        let est = adaptive_oscillatory(&f, 0.0, w, t.abs(), 1e-12)?;
        out += 2.0 * est.value;
    }
    Ok(out)
}

pub fn eval_many_1d(mu: &Measure1d, points: &[f64]) -> Result<Vec<f64>> {
    points.iter().map(|&t| eval_1d(mu, t)).collect()
}

/// n-th derivative of the covariance kernel:
/// k^(n)(t) = (-1)^ceil(n/2) ∫ x^n trig(tx) dμ with trig = cos for even n and
/// sin for odd n. The value is checked against |k^(n)| <= C_n.
pub fn derivative_1d(mu: &Measure1d, order: usize, t: f64) -> Result<f64> {
    if order == 0 {
        return eval_1d(mu, t);
    }
    let even = order % 2 == 0;
    let sign = if even {
        if (order / 2) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    } else if ((order + 1) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    };
    let mut integral = 0.0;
    for a in mu.atoms() {
        let trig = if even { (a.freq * t).cos() } else { (a.freq * t).sin() };
        integral += a.weight * a.freq.powi(order as i32) * trig;
    }
    if mu.ac_mass() > 0.0 {
        let w = mu.moment_cutoff(order);
        let f = |x: f64| {
            let trig = if even { (t * x).cos() } else { (t * x).sin() };
            x.powi(order as i32) * trig * mu.ac_density(x)
        };
        let c_n = mu.moment_ln(order)?.value();
        if !c_n.is_finite() {
            return Err(Error::OrderTooLarge { order });
        }
        let est = adaptive_oscillatory(&f, 0.0, w, t.abs(), (1e-12 * c_n.max(1.0)).min(1e-8))?;
        integral += 2.0 * est.value;
    }
    let value = sign * integral;
    let c_n = mu.moment_ln(order)?.value();
    if value.abs() > c_n * (1.0 + 1e-9) + 1e-9 {
        return Err(Error::QuadratureFailure(format!(
            "derivative bound violated: |k^({order})({t})| = {value:.6e} > C_{order} = {c_n:.6e}"
        )));
    }
    Ok(value)
}

/// 2D kernel k(z) = ∫ cos(<z, lambda>) dμ(lambda).
pub fn eval_2d(mu: &Measure2d, z: (f64, f64)) -> Result<f64> {
    let r = z.0.hypot(z.1);
    match mu.variant() {
        Variant2d::UnitCircle => Ok(bessel_j0(r)),
        Variant2d::StdNormal2d => Ok((-0.5 * r * r).exp()),
        Variant2d::Atomic2d(atoms) => Ok(atoms
            .iter()
            .map(|a| a.weight * (a.x * z.0 + a.y * z.1).cos())
            .sum()),
        Variant2d::Product(mx, my) => Ok(eval_1d(mx, z.0)? * eval_1d(my, z.1)?),
        Variant2d::Radial(p) => {
            let mut out = 0.0;
            for &(rad, w) in p.atom_list() {
                out += w * bessel_j0(rad * r);
            }
            if !p.is_atomic() {
                let cutoff = p.cutoff(2);
                let f = |t: f64| bessel_j0(t * r) * p.density(t);
                let est = adaptive_oscillatory(&f, 0.0, cutoff, r, 1e-12)?;
                out += est.value;
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn uniform_kernel_is_sinc() {
        let mu = Measure1d::uniform(1.0).unwrap();
        assert_relative_eq!(eval_1d(&mu, 0.0).unwrap(), 1.0);
        assert!(eval_1d(&mu, std::f64::consts::PI).unwrap().abs() < 1e-12);
        assert_relative_eq!(
            eval_1d(&mu, 1.0).unwrap(),
            1f64.sin(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn quadrature_matches_closed_forms() {
        // force the quadrature path through a grid approximation of uniform
        let n = 4001;
        let vals: Vec<f64> = (0..n).map(|_| 1.0).collect();
        let grid = Measure1d::grid_density(1.0, &vals).unwrap();
        for t in [0.0, 0.5, 1.0, 3.0, 10.0, 40.0] {
            let sinc = if t == 0.0 { 1.0 } else { t.sin() / t };
            let got = eval_1d(&grid, t).unwrap();
            assert!(
                (got - sinc).abs() < 1e-9,
                "t={t}: grid kernel {got} vs sinc {sinc}"
            );
        }
    }

    #[test]
    fn gauss_kernel_second_derivative_at_zero() {
        // k(t) = exp(-t^2/2) so k''(0) = -1 = -C_2; exercise the quadrature
        // path via a grid density approximating the normal
        let mu = Measure1d::std_normal();
        let k2 = derivative_1d(&mu, 2, 0.0).unwrap();
        assert_relative_eq!(k2, -1.0, epsilon = 1e-8);
        // and the closed-form check: d²/dt² e^{-t²/2} = (t²-1) e^{-t²/2}
        let k2_at_1 = derivative_1d(&mu, 2, 1.0).unwrap();
        assert_relative_eq!(k2_at_1, 0.0f64, epsilon = 1e-8);
    }

    #[test]
    fn odd_derivatives_vanish_at_zero() {
        for mu in [
            Measure1d::uniform(2.0).unwrap(),
            Measure1d::std_normal(),
            Measure1d::atomic(&[(1.0, 1.0)]).unwrap(),
        ] {
            for order in [1usize, 3, 5] {
                assert_relative_eq!(derivative_1d(&mu, order, 0.0).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn uniform_second_derivative_is_minus_c2() {
        let mu = Measure1d::uniform(1.0).unwrap();
        let k2 = derivative_1d(&mu, 2, 0.0).unwrap();
        assert_relative_eq!(k2, -1.0 / 3.0, epsilon = 1e-10);
    }

    #[test]
    fn derivative_bounded_by_moments_on_grid() {
        let mu = Measure1d::std_normal();
        for n in 0..=8usize {
            let c_n = mu.moment_ln(n).unwrap().value();
            for i in 0..40 {
                let t = -4.0 + 8.0 * (i as f64) / 39.0;
                let v = derivative_1d(&mu, n, t).unwrap();
                assert!(v.abs() <= c_n + 1e-9, "n={n} t={t}: {v} vs C_n={c_n}");
            }
        }
    }

    #[test]
    fn kernel_2d_closed_forms() {
        let rpw = Measure2d::unit_circle();
        assert_relative_eq!(eval_2d(&rpw, (0.0, 0.0)).unwrap(), 1.0);
        // J0 first zero
        let z0 = 2.404825557695773;
        assert!(eval_2d(&rpw, (z0, 0.0)).unwrap().abs() < 1e-12);

        let gauss = Measure2d::std_normal();
        let prod = Measure2d::product(Measure1d::std_normal(), Measure1d::std_normal());
        for z in [(0.3, -0.7), (1.5, 0.2)] {
            assert_relative_eq!(
                eval_2d(&gauss, z).unwrap(),
                eval_2d(&prod, z).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn radial_kernel_matches_named() {
        // radial profile = atom at 1 should reproduce the plane-wave kernel
        let p = crate::spectral::RadialProfile::atoms(&[(1.0, 1.0)]).unwrap();
        let mu = Measure2d::radial(p);
        let rpw = Measure2d::unit_circle();
        for z in [(0.5, 0.0), (1.0, 2.0)] {
            assert_relative_eq!(
                eval_2d(&mu, z).unwrap(),
                eval_2d(&rpw, z).unwrap(),
                epsilon = 1e-12
            );
        }
    }
}
