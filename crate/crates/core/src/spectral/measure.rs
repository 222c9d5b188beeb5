//! Spectral measures: symmetric Borel probability measures on R and R^2.
//!
//! Every constructor normalizes total mass to 1 and enforces symmetry, so the
//! covariance kernel k = mu-hat is real and even. Named families carry closed
//! forms for densities, moments and kernels where they exist.

use crate::error::{Error, Result};
use crate::logspace::LogVal;
use crate::quad::{adaptive, log_peak_integral};
use crate::special::{ln_gamma_f, normal_pdf};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// One symmetric atom pair: mass `weight` split evenly between `+freq` and
/// `-freq` (all of it at 0 when `freq == 0`).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Atom {
    pub freq: f64,
    pub weight: f64,
}

/// Piecewise-linear density on a uniform symmetric grid over [-half, half].
#[derive(Clone, Debug)]
pub struct GridDensity {
    half: f64,
    values: Vec<f64>, // odd length, symmetric, trapezoid mass 1
}

impl GridDensity {
    pub fn half(&self) -> f64 {
        self.half
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half / (self.values.len() - 1) as f64
    }

    pub fn eval(&self, x: f64) -> f64 {
        let x = x.abs();
        if x > self.half {
            return 0.0;
        }
        let pos = (x + self.half) / self.spacing();
        let i = (pos.floor() as usize).min(self.values.len() - 2);
        let frac = pos - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }
}

/// Density-table sampler: inverse CDF by table lookup over |x|.
#[derive(Clone, Debug)]
pub(crate) struct CdfTable {
    xs: Vec<f64>,
    cdf: Vec<f64>, // normalized to 1 at the end
}

impl CdfTable {
    pub(crate) fn build(density: impl Fn(f64) -> f64, x_max: f64, n: usize) -> CdfTable {
        let mut xs = Vec::with_capacity(n + 1);
        let mut cdf = Vec::with_capacity(n + 1);
        let h = x_max / n as f64;
        let mut acc = 0.0;
        let mut prev = density(0.0);
        xs.push(0.0);
        cdf.push(0.0);
        for i in 1..=n {
            let x = h * i as f64;
            let cur = density(x);
            acc += 0.5 * (prev + cur) * h;
            prev = cur;
            xs.push(x);
            cdf.push(acc);
        }
        let total = acc;
        for c in cdf.iter_mut() {
            *c /= total;
        }
        CdfTable { xs, cdf }
    }

    pub(crate) fn sample(&self, u: f64) -> f64 {
        let idx = self.cdf.partition_point(|c| *c < u);
        if idx == 0 {
            return self.xs[0];
        }
        if idx >= self.cdf.len() {
            return *self.xs.last().unwrap();
        }
        let (c0, c1) = (self.cdf[idx - 1], self.cdf[idx]);
        let frac = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
        self.xs[idx - 1] + frac * (self.xs[idx] - self.xs[idx - 1])
    }
}

#[derive(Clone, Debug)]
pub enum Variant1d {
    Atomic(Vec<Atom>),
    Grid(GridDensity),
    Uniform { q: f64 },
    StdNormal,
    StretchedExp { alpha: f64 },
    LogType { gamma: f64, ln_half_norm: f64 },
}

/// Symmetric Borel probability measure on R.
#[derive(Debug)]
pub struct Measure1d {
    variant: Variant1d,
    label: String,
    cdf: OnceLock<CdfTable>,
}

impl Clone for Measure1d {
    fn clone(&self) -> Self {
        Measure1d {
            variant: self.variant.clone(),
            label: self.label.clone(),
            cdf: OnceLock::new(),
        }
    }
}

impl Measure1d {
    /// Atoms given as (frequency, weight) pairs; frequencies may carry either
    /// sign and are folded onto their |freq| representative. Weights are
    /// normalized to total mass 1.
    pub fn atomic(pairs: &[(f64, f64)]) -> Result<Measure1d> {
        if pairs.is_empty() {
            return Err(Error::Config("atomic measure needs at least one atom".into()));
        }
        let mut atoms: Vec<Atom> = Vec::new();
        for &(freq, weight) in pairs {
            if !(weight > 0.0) || !freq.is_finite() {
                return Err(Error::Config(format!(
                    "atom ({freq}, {weight}) must have finite frequency and positive weight"
                )));
            }
            let f = freq.abs();
            match atoms.iter_mut().find(|a| (a.freq - f).abs() <= 1e-12 * (1.0 + f)) {
                Some(a) => a.weight += weight,
                None => atoms.push(Atom { freq: f, weight }),
            }
        }
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        for a in atoms.iter_mut() {
            a.weight /= total;
        }
        atoms.sort_by(|a, b| a.freq.partial_cmp(&b.freq).unwrap());
        let label = format!("atomic({})", atoms.len());
        Ok(Measure1d::new(Variant1d::Atomic(atoms), label))
    }

    /// Density values on the uniform grid over [-half, half]; symmetrized and
    /// normalized to mass 1 under the trapezoid rule.
    pub fn grid_density(half: f64, values: &[f64]) -> Result<Measure1d> {
        if !(half > 0.0) || values.len() < 3 {
            return Err(Error::Config(
                "grid density needs half > 0 and at least 3 values".into(),
            ));
        }
        let n = values.len();
        let mut v: Vec<f64> = (0..n)
            .map(|i| 0.5 * (values[i] + values[n - 1 - i]))
            .collect();
        if let Some(bad) = v.iter().find(|x| **x < -1e-12 || !x.is_finite()) {
            return Err(Error::Config(format!("negative or non-finite density value {bad}")));
        }
        for x in v.iter_mut() {
            *x = x.max(0.0);
        }
        let h = 2.0 * half / (n - 1) as f64;
        let mass: f64 = v
            .windows(2)
            .map(|w| 0.5 * (w[0] + w[1]) * h)
            .sum();
        if mass <= 0.0 {
            return Err(Error::Config("grid density has zero mass".into()));
        }
        for x in v.iter_mut() {
            *x /= mass;
        }
        let label = format!("griddensity({n},{half})");
        Ok(Measure1d::new(
            Variant1d::Grid(GridDensity { half, values: v }),
            label,
        ))
    }

    /// Uniform density on [-q, q].
    pub fn uniform(q: f64) -> Result<Measure1d> {
        if !(q > 0.0) {
            return Err(Error::Config(format!("uniform needs q > 0, got {q}")));
        }
        Ok(Measure1d::new(Variant1d::Uniform { q }, format!("uniform({q})")))
    }

    pub fn std_normal() -> Measure1d {
        Measure1d::new(Variant1d::StdNormal, "stdnormal".into())
    }

    /// Density proportional to exp(-|x|^(1/alpha)).
    pub fn stretched_exp(alpha: f64) -> Result<Measure1d> {
        if !(alpha > 0.0) {
            return Err(Error::Config(format!("stretched_exp needs alpha > 0, got {alpha}")));
        }
        Ok(Measure1d::new(
            Variant1d::StretchedExp { alpha },
            format!("stretchedexp({alpha})"),
        ))
    }

    /// Density proportional to exp(-(log|x|)^{1+gamma}) on |x| >= 1.
    pub fn log_type(gamma: f64) -> Result<Measure1d> {
        if !(gamma > 0.0) {
            return Err(Error::Config(format!("log_type needs gamma > 0, got {gamma}")));
        }
        // one-sided normalizer I0 = ∫_0^∞ exp(u - u^{1+γ}) du (u = log x)
        let g = move |u: f64| u - u.powf(1.0 + gamma);
        let u_max = log_type_u_cutoff(1, gamma);
        let ln_i0 = log_peak_integral(&g, 0.0, u_max)?.ln();
        Ok(Measure1d::new(
            Variant1d::LogType { gamma, ln_half_norm: ln_i0 },
            format!("logtype({gamma})"),
        ))
    }

    fn new(variant: Variant1d, label: String) -> Measure1d {
        Measure1d {
            variant,
            label,
            cdf: OnceLock::new(),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn variant(&self) -> &Variant1d {
        &self.variant
    }

    pub fn is_purely_atomic(&self) -> bool {
        matches!(self.variant, Variant1d::Atomic(_))
    }

    pub fn atoms(&self) -> &[Atom] {
        match &self.variant {
            Variant1d::Atomic(a) => a,
            _ => &[],
        }
    }

    /// Mass of the absolutely continuous part (0 or 1 here; mixtures are out
    /// of scope).
    pub fn ac_mass(&self) -> f64 {
        if self.is_purely_atomic() {
            0.0
        } else {
            1.0
        }
    }

    /// Density of the absolutely continuous part at `x`.
    pub fn ac_density(&self, x: f64) -> f64 {
        match &self.variant {
            Variant1d::Atomic(_) => 0.0,
            Variant1d::Grid(g) => g.eval(x),
            Variant1d::Uniform { q } => {
                if x.abs() <= *q {
                    0.5 / q
                } else {
                    0.0
                }
            }
            Variant1d::StdNormal => normal_pdf(x),
            Variant1d::StretchedExp { alpha } => {
                let ln_c = -(2.0f64.ln() + ln_gamma_f(alpha + 1.0));
                (ln_c - x.abs().powf(1.0 / alpha)).exp()
            }
            Variant1d::LogType { gamma, ln_half_norm } => {
                let ax = x.abs();
                if ax < 1.0 {
                    0.0
                } else {
                    (-(ax.ln().powf(1.0 + gamma)) - ln_half_norm - 2.0f64.ln()).exp()
                }
            }
        }
    }

    /// Recomputed total mass (atoms plus quadrature of the density); equals 1
    /// up to quadrature error by construction.
    pub fn total_mass(&self) -> f64 {
        match &self.variant {
            Variant1d::Atomic(atoms) => atoms.iter().map(|a| a.weight).sum(),
            _ => {
                let w = self.density_window(1e-14);
                2.0 * adaptive(&|x| self.ac_density(x), 0.0, w, 1e-12)
                    .map(|e| e.value)
                    .unwrap_or(f64::NAN)
            }
        }
    }

    /// |x| beyond which the density stays below `delta`.
    pub fn density_window(&self, delta: f64) -> f64 {
        let delta = delta.max(1e-300);
        match &self.variant {
            Variant1d::Atomic(atoms) => atoms.last().map(|a| a.freq).unwrap_or(0.0) + 1.0,
            Variant1d::Grid(g) => g.half,
            Variant1d::Uniform { q } => *q,
            Variant1d::StdNormal => {
                let arg = -2.0 * (delta * (2.0 * std::f64::consts::PI).sqrt()).ln();
                if arg <= 0.0 {
                    0.0
                } else {
                    arg.sqrt() + 1.0
                }
            }
            Variant1d::StretchedExp { alpha } => {
                let ln_c = -(2.0f64.ln() + ln_gamma_f(alpha + 1.0));
                let arg = ln_c - delta.ln();
                if arg <= 0.0 {
                    0.0
                } else {
                    arg.powf(*alpha) + 1.0
                }
            }
            Variant1d::LogType { gamma, ln_half_norm } => {
                // solve (log x)^{1+γ} = -ln δ - ln_half_norm - ln 2
                let arg = -delta.ln() - ln_half_norm - 2.0f64.ln();
                if arg <= 0.0 {
                    1.0
                } else {
                    arg.powf(1.0 / (1.0 + gamma)).exp() + 1.0
                }
            }
        }
    }

    /// Truncation cutoff for |x|^n moments: tail beyond it is negligible at
    /// the 1e-14 level relative to the moment.
    pub fn moment_cutoff(&self, order: usize) -> f64 {
        let n = order as f64;
        match &self.variant {
            Variant1d::Atomic(atoms) => atoms.last().map(|a| a.freq).unwrap_or(0.0),
            Variant1d::Grid(g) => g.half,
            Variant1d::Uniform { q } => *q,
            Variant1d::StdNormal => {
                // solve x^2/2 ≳ n ln x + 45
                let mut lam: f64 = 10.0 + n.sqrt();
                for _ in 0..40 {
                    lam = (2.0 * (45.0 + n * lam.max(2.0).ln())).sqrt();
                }
                lam
            }
            Variant1d::StretchedExp { alpha } => {
                // solve x^{1/α} ≳ n ln x + 45
                let mut lam: f64 = (45.0f64).powf(*alpha);
                for _ in 0..60 {
                    lam = (45.0 + n * lam.max(2.0).ln()).powf(*alpha);
                }
                lam
            }
            Variant1d::LogType { gamma, .. } => log_type_u_cutoff(order + 1, *gamma).exp(),
        }
    }

    /// ln C_n = ln ∫ |x|^n dμ. Closed forms for the named families, log-space
    /// quadrature otherwise.
    pub fn moment_ln(&self, n: usize) -> Result<LogVal> {
        match &self.variant {
            Variant1d::Atomic(atoms) => Ok(LogVal::sum(atoms.iter().map(|a| {
                if a.freq == 0.0 && n > 0 {
                    LogVal::ZERO
                } else {
                    LogVal::from_value(a.weight).mul(LogVal::from_value(a.freq).powi(n as i32))
                }
            }))),
            Variant1d::Grid(_) => self.moment_ln_quadrature(n),
            Variant1d::Uniform { q } => {
                // C_n = q^n / (n+1)
                Ok(LogVal::from_ln(n as f64 * q.ln() - ((n + 1) as f64).ln()))
            }
            Variant1d::StdNormal => {
                // E|x|^n = 2^{n/2} Γ((n+1)/2) / sqrt(π)
                let ln = (n as f64 / 2.0) * 2.0f64.ln() + ln_gamma_f((n as f64 + 1.0) / 2.0)
                    - 0.5 * std::f64::consts::PI.ln();
                Ok(LogVal::from_ln(ln))
            }
            Variant1d::StretchedExp { alpha } => {
                // C_n = Γ(α(n+1)) / Γ(α)
                let a = *alpha;
                let ln = ln_gamma_f(a * (n as f64 + 1.0)) - ln_gamma_f(a);
                if !ln.is_finite() {
                    return Err(Error::OrderTooLarge { order: n });
                }
                Ok(LogVal::from_ln(ln))
            }
            Variant1d::LogType { gamma, ln_half_norm } => {
                // C_n = I_n / I_0 with I_n = ∫ exp((n+1)u - u^{1+γ}) du
                let g = *gamma;
                let coeff = n as f64 + 1.0;
                let f = move |u: f64| coeff * u - u.powf(1.0 + g);
                let u_max = log_type_u_cutoff(n + 1, g);
                let ln_in = log_peak_integral(&f, 0.0, u_max)?.ln();
                Ok(LogVal::from_ln(ln_in - ln_half_norm))
            }
        }
    }

    /// Moment via quadrature regardless of closed-form availability; the
    /// cross-check oracle for the named families.
    pub fn moment_ln_quadrature(&self, n: usize) -> Result<LogVal> {
        match &self.variant {
            Variant1d::Atomic(_) => self.moment_ln(n),
            _ => {
                let cutoff = self.moment_cutoff(n).max(1e-6);
                let g = |x: f64| {
                    let f = self.ac_density(x);
                    if f <= 0.0 {
                        f64::NEG_INFINITY
                    } else {
                        n as f64 * x.ln() + f.ln()
                    }
                };
                // split off the |x| -> 0 end so the peak finder is not fooled
                // by -inf plateaus
                let v = log_peak_integral(&g, 0.0, cutoff)?;
                Ok(LogVal::from_ln(v.ln() + 2.0f64.ln()))
            }
        }
    }

    /// D_n^{1/n} = max{1, √C_{2n}, √C_{2n+2}}^{1/n}, computed directly so it
    /// stays available for very large n.
    pub fn d_n_root(&self, n: usize) -> Result<f64> {
        let d = self.d_n_ln(n)?;
        Ok((d.ln() / n as f64).exp())
    }

    pub fn d_n_ln(&self, n: usize) -> Result<LogVal> {
        let c2n = self.moment_ln(2 * n)?;
        let c2n2 = self.moment_ln(2 * n + 2)?;
        Ok(LogVal::ONE.max(c2n.sqrt()).max(c2n2.sqrt()))
    }

    /// Draw one frequency lambda ~ mu (its |.| representative; the symmetric
    /// sign is irrelevant for the wave representation).
    pub fn sample_freq<R: Rng>(&self, rng: &mut R) -> f64 {
        match &self.variant {
            Variant1d::Atomic(atoms) => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for a in atoms {
                    acc += a.weight;
                    if u <= acc {
                        return a.freq;
                    }
                }
                atoms.last().unwrap().freq
            }
            Variant1d::Uniform { q } => rng.random::<f64>() * q,
            Variant1d::StdNormal => {
                let z: f64 = rng.sample(rand_distr::StandardNormal);
                z.abs()
            }
            Variant1d::StretchedExp { alpha } => {
                // |x| = U^alpha with U ~ Gamma(alpha, 1)
                let g = rand_distr::Gamma::new(*alpha, 1.0).expect("alpha > 0");
                let u: f64 = rng.sample(g);
                u.powf(*alpha)
            }
            Variant1d::Grid(_) | Variant1d::LogType { .. } => {
                let table = self.cdf.get_or_init(|| {
                    let w = self.density_window(1e-12);
                    CdfTable::build(|x| self.ac_density(x), w, 1 << 14)
                });
                table.sample(rng.random())
            }
        }
    }
}

fn log_type_u_cutoff(n_plus_1: usize, gamma: f64) -> f64 {
    // peak of (n+1)u - u^{1+γ} at u* = ((n+1)/(1+γ))^{1/γ}; extend until the
    // exponent is 120 e-folds below the peak
    let c = n_plus_1 as f64;
    let u_star = (c / (1.0 + gamma)).powf(1.0 / gamma);
    let peak = c * u_star - u_star.powf(1.0 + gamma);
    let mut u = (u_star + 1.0) * 2.0;
    for _ in 0..200 {
        if c * u - u.powf(1.0 + gamma) < peak - 120.0 {
            break;
        }
        u *= 1.5;
    }
    u
}

// ---------------------------------------------------------------------------
// 2D measures
// ---------------------------------------------------------------------------

/// One symmetric atom pair in the plane: mass `weight` split between
/// `(x, y)` and `(-x, -y)`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Atom2d {
    pub x: f64,
    pub y: f64,
    pub weight: f64,
}

/// Measure on [0, ∞): the radial profile of a rotation-invariant measure.
#[derive(Clone, Debug)]
pub enum RadialProfile {
    Atoms(Vec<(f64, f64)>), // (radius, weight), weights sum to 1
    Rayleigh,
    StretchedExp { alpha: f64 },
    LogType { gamma: f64, ln_norm: f64 },
    Grid { r_max: f64, values: Vec<f64> },
}

impl RadialProfile {
    pub fn stretched_exp(alpha: f64) -> Result<RadialProfile> {
        if !(alpha > 0.0) {
            return Err(Error::Config("radial stretched_exp needs alpha > 0".into()));
        }
        Ok(RadialProfile::StretchedExp { alpha })
    }

    pub fn log_type(gamma: f64) -> Result<RadialProfile> {
        if !(gamma > 0.0) {
            return Err(Error::Config("radial log_type needs gamma > 0".into()));
        }
        let g = move |u: f64| u - u.powf(1.0 + gamma);
        let u_max = log_type_u_cutoff(1, gamma);
        let ln_norm = log_peak_integral(&g, 0.0, u_max)?.ln();
        Ok(RadialProfile::LogType { gamma, ln_norm })
    }

    pub fn atoms(pairs: &[(f64, f64)]) -> Result<RadialProfile> {
        if pairs.is_empty() {
            return Err(Error::Config("radial atoms empty".into()));
        }
        let mut v: Vec<(f64, f64)> = Vec::new();
        for &(r, w) in pairs {
            if r < 0.0 || !(w > 0.0) {
                return Err(Error::Config("radial atom needs r >= 0 and w > 0".into()));
            }
            match v.iter_mut().find(|(rr, _)| (*rr - r).abs() <= 1e-12 * (1.0 + r)) {
                Some((_, ww)) => *ww += w,
                None => v.push((r, w)),
            }
        }
        let total: f64 = v.iter().map(|(_, w)| w).sum();
        for (_, w) in v.iter_mut() {
            *w /= total;
        }
        v.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        Ok(RadialProfile::Atoms(v))
    }

    pub fn grid(r_max: f64, values: &[f64]) -> Result<RadialProfile> {
        if !(r_max > 0.0) || values.len() < 3 {
            return Err(Error::Config("radial grid needs r_max > 0, >= 3 values".into()));
        }
        let h = r_max / (values.len() - 1) as f64;
        let mass: f64 = values.windows(2).map(|w| 0.5 * (w[0] + w[1]) * h).sum();
        if mass <= 0.0 {
            return Err(Error::Config("radial grid density has zero mass".into()));
        }
        let v = values.iter().map(|x| x / mass).collect();
        Ok(RadialProfile::Grid { r_max, values: v })
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, RadialProfile::Atoms(_))
    }

    pub fn atom_list(&self) -> &[(f64, f64)] {
        match self {
            RadialProfile::Atoms(a) => a,
            _ => &[],
        }
    }

    pub fn density(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        match self {
            RadialProfile::Atoms(_) => 0.0,
            RadialProfile::Rayleigh => t * (-0.5 * t * t).exp(),
            RadialProfile::StretchedExp { alpha } => {
                (-t.powf(1.0 / alpha) - ln_gamma_f(alpha + 1.0)).exp()
            }
            RadialProfile::LogType { gamma, ln_norm } => {
                if t < 1.0 {
                    0.0
                } else {
                    (-(t.ln().powf(1.0 + gamma)) - ln_norm).exp()
                }
            }
            RadialProfile::Grid { r_max, values } => {
                if t > *r_max {
                    return 0.0;
                }
                let h = r_max / (values.len() - 1) as f64;
                let pos = t / h;
                let i = (pos.floor() as usize).min(values.len() - 2);
                let frac = pos - i as f64;
                values[i] * (1.0 - frac) + values[i + 1] * frac
            }
        }
    }

    pub fn cutoff(&self, order: usize) -> f64 {
        let n = order as f64;
        match self {
            RadialProfile::Atoms(a) => a.last().map(|(r, _)| *r).unwrap_or(0.0),
            RadialProfile::Rayleigh => {
                let mut lam: f64 = 10.0 + n.sqrt();
                for _ in 0..40 {
                    lam = (2.0 * (45.0 + (n + 1.0) * lam.max(2.0).ln())).sqrt();
                }
                lam
            }
            RadialProfile::StretchedExp { alpha } => {
                let mut lam: f64 = (45.0f64).powf(*alpha);
                for _ in 0..60 {
                    lam = (45.0 + n * lam.max(2.0).ln()).powf(*alpha);
                }
                lam
            }
            RadialProfile::LogType { gamma, .. } => log_type_u_cutoff(order + 1, *gamma).exp(),
            RadialProfile::Grid { r_max, .. } => *r_max,
        }
    }

    /// ln T_k = ln ∫ t^k dμ_r.
    pub fn moment_ln(&self, k: usize) -> Result<LogVal> {
        match self {
            RadialProfile::Atoms(atoms) => Ok(LogVal::sum(atoms.iter().map(|&(r, w)| {
                if r == 0.0 && k > 0 {
                    LogVal::ZERO
                } else {
                    LogVal::from_value(w).mul(LogVal::from_value(r).powi(k as i32))
                }
            }))),
            RadialProfile::Rayleigh => {
                // ∫ t^k · t e^{-t²/2} dt = 2^{k/2} Γ(k/2 + 1)
                Ok(LogVal::from_ln(
                    (k as f64 / 2.0) * 2.0f64.ln() + ln_gamma_f(k as f64 / 2.0 + 1.0),
                ))
            }
            RadialProfile::StretchedExp { alpha } => {
                let ln = ln_gamma_f(alpha * (k as f64 + 1.0)) - ln_gamma_f(*alpha);
                if !ln.is_finite() {
                    return Err(Error::OrderTooLarge { order: k });
                }
                Ok(LogVal::from_ln(ln))
            }
            RadialProfile::LogType { gamma, ln_norm } => {
                let g = *gamma;
                let coeff = k as f64 + 1.0;
                let f = move |u: f64| coeff * u - u.powf(1.0 + g);
                let u_max = log_type_u_cutoff(k + 1, g);
                Ok(LogVal::from_ln(
                    log_peak_integral(&f, 0.0, u_max)?.ln() - ln_norm,
                ))
            }
            RadialProfile::Grid { .. } => {
                let cutoff = self.cutoff(k).max(1e-9);
                let g = |t: f64| {
                    let f = self.density(t);
                    if f <= 0.0 {
                        f64::NEG_INFINITY
                    } else {
                        k as f64 * t.ln() + f.ln()
                    }
                };
                log_peak_integral(&g, 0.0, cutoff)
            }
        }
    }

    pub fn sample_radius<R: Rng>(&self, rng: &mut R, cache: &OnceLock<CdfTable>) -> f64 {
        match self {
            RadialProfile::Atoms(atoms) => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for &(r, w) in atoms {
                    acc += w;
                    if u <= acc {
                        return r;
                    }
                }
                atoms.last().unwrap().0
            }
            RadialProfile::Rayleigh => {
                let e: f64 = rng.random::<f64>();
                (-2.0 * (1.0 - e).ln()).sqrt()
            }
            RadialProfile::StretchedExp { alpha } => {
                let g = rand_distr::Gamma::new(*alpha, 1.0).expect("alpha > 0");
                let u: f64 = rng.sample(g);
                u.powf(*alpha)
            }
            _ => {
                let table = cache.get_or_init(|| {
                    CdfTable::build(|t| self.density(t), self.cutoff(2), 1 << 14)
                });
                table.sample(rng.random())
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum Variant2d {
    Atomic2d(Vec<Atom2d>),
    Product(Box<Measure1d>, Box<Measure1d>),
    Radial(RadialProfile),
    UnitCircle,
    StdNormal2d,
}

/// Symmetric Borel probability measure on R^2.
#[derive(Debug)]
pub struct Measure2d {
    variant: Variant2d,
    label: String,
    radial_cdf: OnceLock<CdfTable>,
}

impl Clone for Measure2d {
    fn clone(&self) -> Self {
        Measure2d {
            variant: self.variant.clone(),
            label: self.label.clone(),
            radial_cdf: OnceLock::new(),
        }
    }
}

impl Measure2d {
    pub fn atomic(list: &[(f64, f64, f64)]) -> Result<Measure2d> {
        if list.is_empty() {
            return Err(Error::Config("atomic 2d measure needs atoms".into()));
        }
        let mut atoms: Vec<Atom2d> = Vec::new();
        for &(x, y, w) in list {
            if !(w > 0.0) || !x.is_finite() || !y.is_finite() {
                return Err(Error::Config("2d atom needs finite coords, positive weight".into()));
            }
            // fold (x,y) and (-x,-y) onto one representative
            let (rx, ry) = if x < 0.0 || (x == 0.0 && y < 0.0) { (-x, -y) } else { (x, y) };
            match atoms.iter_mut().find(|a| {
                (a.x - rx).abs() <= 1e-12 * (1.0 + rx.abs()) && (a.y - ry).abs() <= 1e-12 * (1.0 + ry.abs())
            }) {
                Some(a) => a.weight += w,
                None => atoms.push(Atom2d { x: rx, y: ry, weight: w }),
            }
        }
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        for a in atoms.iter_mut() {
            a.weight /= total;
        }
        let label = format!("atomic2d({})", atoms.len());
        Ok(Measure2d::new(Variant2d::Atomic2d(atoms), label))
    }

    pub fn product(mx: Measure1d, my: Measure1d) -> Measure2d {
        let label = format!("product({},{})", mx.label(), my.label());
        Measure2d::new(Variant2d::Product(Box::new(mx), Box::new(my)), label)
    }

    pub fn radial(profile: RadialProfile) -> Measure2d {
        Measure2d::new(Variant2d::Radial(profile), "radial".into())
    }

    /// Random plane wave: uniform measure on the unit circle.
    pub fn unit_circle() -> Measure2d {
        Measure2d::new(Variant2d::UnitCircle, "unitcircle".into())
    }

    pub fn std_normal() -> Measure2d {
        Measure2d::new(Variant2d::StdNormal2d, "stdnormal2d".into())
    }

    pub fn radial_stretched_exp(alpha: f64) -> Result<Measure2d> {
        let p = RadialProfile::stretched_exp(alpha)?;
        Ok(Measure2d::new(
            Variant2d::Radial(p),
            format!("radialstretchedexp({alpha})"),
        ))
    }

    pub fn radial_log_type(gamma: f64) -> Result<Measure2d> {
        let p = RadialProfile::log_type(gamma)?;
        Ok(Measure2d::new(
            Variant2d::Radial(p),
            format!("radiallogtype({gamma})"),
        ))
    }

    fn new(variant: Variant2d, label: String) -> Measure2d {
        Measure2d {
            variant,
            label,
            radial_cdf: OnceLock::new(),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn variant(&self) -> &Variant2d {
        &self.variant
    }

    pub fn is_purely_atomic(&self) -> bool {
        match &self.variant {
            Variant2d::Atomic2d(_) => true,
            Variant2d::Radial(p) => p.is_atomic(),
            Variant2d::UnitCircle => false, // a.c. on the circle; marginals have densities
            _ => false,
        }
    }

    /// Whether supp(mu) is contained in a line R·v; the degenerate case of
    /// the nodal-length theorem and the hypothesis check for singular zeros.
    pub fn degenerate_line(&self) -> Option<(f64, f64)> {
        match &self.variant {
            Variant2d::Atomic2d(atoms) => {
                let pivot = atoms
                    .iter()
                    .find(|a| a.x.hypot(a.y) > 1e-12)?;
                let (px, py) = (pivot.x, pivot.y);
                for a in atoms {
                    if (a.x * py - a.y * px).abs() > 1e-10 * (1.0 + a.x.hypot(a.y)) {
                        return None;
                    }
                }
                let norm = px.hypot(py);
                Some((px / norm, py / norm))
            }
            Variant2d::Radial(p) => {
                // radial measures are line-supported only if all mass sits at 0
                if p.atom_list().iter().all(|(r, _)| *r <= 1e-14) && p.is_atomic() {
                    Some((1.0, 0.0))
                } else {
                    None
                }
            }
            Variant2d::Product(mx, my) => {
                let point_at_zero = |m: &Measure1d| {
                    m.is_purely_atomic() && m.atoms().iter().all(|a| a.freq <= 1e-14)
                };
                if point_at_zero(mx) {
                    Some((0.0, 1.0))
                } else if point_at_zero(my) {
                    Some((1.0, 0.0))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// ln C_{m,n} = ln ∫ |x|^m |y|^n dμ.
    pub fn moment_ln(&self, m: usize, n: usize) -> Result<LogVal> {
        use crate::special::ln_angular_moment;
        match &self.variant {
            Variant2d::Atomic2d(atoms) => Ok(LogVal::sum(atoms.iter().map(|a| {
                let px = if a.x == 0.0 && m > 0 {
                    return LogVal::ZERO;
                } else {
                    LogVal::from_value(a.x.abs()).powi(m as i32)
                };
                let py = if a.y == 0.0 && n > 0 {
                    return LogVal::ZERO;
                } else {
                    LogVal::from_value(a.y.abs()).powi(n as i32)
                };
                LogVal::from_value(a.weight).mul(px).mul(py)
            }))),
            Variant2d::Product(mx, my) => Ok(mx.moment_ln(m)?.mul(my.moment_ln(n)?)),
            Variant2d::Radial(p) => {
                let t = p.moment_ln(m + n)?;
                Ok(t.mul(LogVal::from_ln(ln_angular_moment(m, n))))
            }
            Variant2d::UnitCircle => Ok(LogVal::from_ln(ln_angular_moment(m, n))),
            Variant2d::StdNormal2d => {
                let mx = Measure1d::std_normal();
                Ok(mx.moment_ln(m)?.mul(mx.moment_ln(n)?))
            }
        }
    }

    /// Marginal density along the given axis (0 = x, 1 = y).
    pub fn marginal_density(&self, axis: usize, x: f64) -> f64 {
        match &self.variant {
            Variant2d::Atomic2d(_) => 0.0,
            Variant2d::Product(mx, my) => {
                if axis == 0 {
                    mx.ac_density(x)
                } else {
                    my.ac_density(x)
                }
            }
            Variant2d::StdNormal2d => normal_pdf(x),
            Variant2d::UnitCircle => {
                let ax = x.abs();
                if ax >= 1.0 {
                    0.0
                } else {
                    1.0 / (std::f64::consts::PI * (1.0 - ax * ax).sqrt())
                }
            }
            Variant2d::Radial(p) => radial_marginal_density(p, x),
        }
    }

    /// Effective support half-width of the marginal density.
    pub fn marginal_window(&self, axis: usize) -> f64 {
        match &self.variant {
            Variant2d::Atomic2d(atoms) => {
                atoms
                    .iter()
                    .map(|a| if axis == 0 { a.x.abs() } else { a.y.abs() })
                    .fold(0.0, f64::max)
                    + 1.0
            }
            Variant2d::Product(mx, my) => {
                if axis == 0 {
                    mx.density_window(1e-12)
                } else {
                    my.density_window(1e-12)
                }
            }
            Variant2d::StdNormal2d => Measure1d::std_normal().density_window(1e-12),
            Variant2d::UnitCircle => 1.0,
            Variant2d::Radial(p) => p.cutoff(2),
        }
    }

    /// Push-forward of mu under (x,y) -> sqrt(x^2+y^2).
    pub fn radial_pushforward(&self) -> Result<RadialProfile> {
        match &self.variant {
            Variant2d::Atomic2d(atoms) => RadialProfile::atoms(
                &atoms
                    .iter()
                    .map(|a| (a.x.hypot(a.y), a.weight))
                    .collect::<Vec<_>>(),
            ),
            Variant2d::Radial(p) => Ok(p.clone()),
            Variant2d::UnitCircle => RadialProfile::atoms(&[(1.0, 1.0)]),
            Variant2d::StdNormal2d => Ok(RadialProfile::Rayleigh),
            Variant2d::Product(mx, my) => {
                // numeric angular integration of the product density
                let wx = mx.density_window(1e-13);
                let wy = my.density_window(1e-13);
                if mx.is_purely_atomic() || my.is_purely_atomic() {
                    return Err(Error::SamplingUnsupported(
                        "radial pushforward of atomic-by-continuous products not implemented"
                            .into(),
                    ));
                }
                let r_max = wx.hypot(wy);
                let n = 2048;
                let mut values = Vec::with_capacity(n + 1);
                for i in 0..=n {
                    let r = r_max * i as f64 / n as f64;
                    let dens = |theta: f64| {
                        mx.ac_density(r * theta.cos()) * my.ac_density(r * theta.sin())
                    };
                    let quarter =
                        adaptive(&dens, 0.0, std::f64::consts::FRAC_PI_2, 1e-11).map(|e| e.value)?;
                    // density of the radius: r ∫_0^{2π} f = 4 r ∫_0^{π/2} f by symmetry
                    values.push(4.0 * r * quarter);
                }
                RadialProfile::grid(r_max, &values)
            }
        }
    }

    /// Draw a frequency vector lambda ~ mu.
    pub fn sample_freq<R: Rng>(&self, rng: &mut R) -> (f64, f64) {
        match &self.variant {
            Variant2d::Atomic2d(atoms) => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for a in atoms {
                    acc += a.weight;
                    if u <= acc {
                        return (a.x, a.y);
                    }
                }
                let a = atoms.last().unwrap();
                (a.x, a.y)
            }
            Variant2d::Product(mx, my) => (mx.sample_freq(rng), my.sample_freq(rng)),
            Variant2d::StdNormal2d => {
                let z1: f64 = rng.sample(rand_distr::StandardNormal);
                let z2: f64 = rng.sample(rand_distr::StandardNormal);
                (z1, z2)
            }
            Variant2d::UnitCircle => {
                let theta = rng.random::<f64>() * std::f64::consts::TAU;
                (theta.cos(), theta.sin())
            }
            Variant2d::Radial(p) => {
                let r = p.sample_radius(rng, &self.radial_cdf);
                let theta = rng.random::<f64>() * std::f64::consts::TAU;
                (r * theta.cos(), r * theta.sin())
            }
        }
    }
}

/// Marginal density of a rotation-invariant measure with radial profile `p`:
/// f(x) = (1/π) [ Σ w_t / sqrt(t² - x²) + ∫ ρ(sqrt(x²+w²)) / sqrt(x²+w²) dw ].
fn radial_marginal_density(p: &RadialProfile, x: f64) -> f64 {
    let ax = x.abs();
    let mut out = 0.0;
    for &(t, w) in p.atom_list() {
        if t > ax {
            out += w / (std::f64::consts::PI * (t * t - ax * ax).sqrt());
        }
    }
    if !p.is_atomic() {
        let r_max = p.cutoff(2);
        if ax < r_max {
            let w_max = (r_max * r_max - ax * ax).sqrt();
            let integrand = |w: f64| {
                let r = ax.hypot(w);
                if r <= 0.0 {
                    0.0
                } else {
                    p.density(r) / r
                }
            };
            if let Ok(est) = adaptive(&integrand, 0.0, w_max.max(1e-12), 1e-11) {
                out += 2.0 * est.value / std::f64::consts::PI;
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// JSON experiment configuration
// ---------------------------------------------------------------------------

/// Declarative measure spec as it appears in experiment configs.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum MeasureConfig {
    Uniform { q: f64 },
    StdNormal,
    StretchedExp { alpha: f64 },
    LogType { gamma: f64 },
    Atomic { atoms: Vec<(f64, f64)> },
    GridDensity { half: f64, values: Vec<f64> },
}

impl MeasureConfig {
    pub fn build(&self) -> Result<Measure1d> {
        match self {
            MeasureConfig::Uniform { q } => Measure1d::uniform(*q),
            MeasureConfig::StdNormal => Ok(Measure1d::std_normal()),
            MeasureConfig::StretchedExp { alpha } => Measure1d::stretched_exp(*alpha),
            MeasureConfig::LogType { gamma } => Measure1d::log_type(*gamma),
            MeasureConfig::Atomic { atoms } => Measure1d::atomic(atoms),
            MeasureConfig::GridDensity { half, values } => Measure1d::grid_density(*half, values),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum MeasureConfig2d {
    UnitCircle,
    StdNormal2d,
    RadialStretchedExp { alpha: f64 },
    RadialLogType { gamma: f64 },
    Atomic2d { atoms: Vec<(f64, f64, f64)> },
    Product { x: MeasureConfig, y: MeasureConfig },
    Radial { atoms: Option<Vec<(f64, f64)>>, r_max: Option<f64>, values: Option<Vec<f64>> },
}

impl MeasureConfig2d {
    pub fn build(&self) -> Result<Measure2d> {
        match self {
            MeasureConfig2d::UnitCircle => Ok(Measure2d::unit_circle()),
            MeasureConfig2d::StdNormal2d => Ok(Measure2d::std_normal()),
            MeasureConfig2d::RadialStretchedExp { alpha } => Measure2d::radial_stretched_exp(*alpha),
            MeasureConfig2d::RadialLogType { gamma } => Measure2d::radial_log_type(*gamma),
            MeasureConfig2d::Atomic2d { atoms } => Measure2d::atomic(atoms),
            MeasureConfig2d::Product { x, y } => Ok(Measure2d::product(x.build()?, y.build()?)),
            MeasureConfig2d::Radial { atoms, r_max, values } => {
                let profile = match (atoms, r_max, values) {
                    (Some(a), None, None) => RadialProfile::atoms(a)?,
                    (None, Some(r), Some(v)) => RadialProfile::grid(*r, v)?,
                    _ => {
                        return Err(Error::Config(
                            "radial config needs either atoms or (r_max, values)".into(),
                        ))
                    }
                };
                Ok(Measure2d::radial(profile))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn atomic_normalizes_and_folds_signs() {
        let mu = Measure1d::atomic(&[(1.0, 1.0), (-1.0, 1.0), (2.0, 2.0)]).unwrap();
        let atoms = mu.atoms();
        assert_eq!(atoms.len(), 2);
        assert_relative_eq!(atoms[0].freq, 1.0);
        assert_relative_eq!(atoms[0].weight, 0.5);
        assert_relative_eq!(atoms[1].weight, 0.5);
        assert_relative_eq!(mu.total_mass(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn named_densities_integrate_to_one() {
        for mu in [
            Measure1d::uniform(1.0).unwrap(),
            Measure1d::std_normal(),
            Measure1d::stretched_exp(0.5).unwrap(),
            Measure1d::stretched_exp(2.0).unwrap(),
            Measure1d::log_type(1.0).unwrap(),
        ] {
            assert_relative_eq!(mu.total_mass(), 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn grid_density_symmetrizes() {
        let mu = Measure1d::grid_density(1.0, &[0.0, 1.0, 2.0, 3.0, 0.0]).unwrap();
        assert_relative_eq!(mu.ac_density(0.5), mu.ac_density(-0.5), epsilon = 1e-14);
        assert_relative_eq!(mu.total_mass(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn uniform_moments_closed_form() {
        let mu = Measure1d::uniform(1.0).unwrap();
        assert_relative_eq!(mu.moment_ln(2).unwrap().value(), 1.0 / 3.0, epsilon = 1e-14);
        assert_relative_eq!(mu.moment_ln(4).unwrap().value(), 1.0 / 5.0, epsilon = 1e-14);
        assert_relative_eq!(mu.moment_ln(0).unwrap().value(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn stdnormal_moments_double_factorial() {
        let mu = Measure1d::std_normal();
        assert_relative_eq!(mu.moment_ln(2).unwrap().value(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(mu.moment_ln(4).unwrap().value(), 3.0, epsilon = 1e-12);
        assert_relative_eq!(mu.moment_ln(6).unwrap().value(), 15.0, epsilon = 1e-12);
    }

    #[test]
    fn quadrature_matches_closed_forms() {
        for mu in [
            Measure1d::uniform(1.5).unwrap(),
            Measure1d::std_normal(),
            Measure1d::stretched_exp(1.0).unwrap(),
        ] {
            for n in [0usize, 1, 2, 3, 4, 8] {
                let cf = mu.moment_ln(n).unwrap().ln();
                let q = mu.moment_ln_quadrature(n).unwrap().ln();
                assert!(
                    (cf - q).abs() < 1e-8,
                    "family {} order {n}: closed {cf} vs quad {q}",
                    mu.label()
                );
            }
        }
    }

    #[test]
    fn unit_circle_moments() {
        let mu = Measure2d::unit_circle();
        assert_relative_eq!(mu.moment_ln(2, 0).unwrap().value(), 0.5, epsilon = 1e-12);
        assert_relative_eq!(mu.moment_ln(0, 0).unwrap().value(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn stdnormal2d_c22() {
        let mu = Measure2d::std_normal();
        assert_relative_eq!(mu.moment_ln(2, 2).unwrap().value(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_line_detection() {
        let mu = Measure2d::atomic(&[(1.0, 0.0, 0.5), (-1.0, 0.0, 0.5)]).unwrap();
        let v = mu.degenerate_line().unwrap();
        assert_relative_eq!(v.0.abs(), 1.0);
        let mu2 = Measure2d::atomic(&[(1.0, 0.0, 0.5), (0.0, 1.0, 0.5)]).unwrap();
        assert!(mu2.degenerate_line().is_none());
    }

    #[test]
    fn radial_pushforward_atoms() {
        let mu = Measure2d::atomic(&[(3.0, 4.0, 0.5), (-3.0, -4.0, 0.5)]).unwrap();
        let p = mu.radial_pushforward().unwrap();
        let atoms = p.atom_list();
        assert_eq!(atoms.len(), 1);
        assert_relative_eq!(atoms[0].0, 5.0);
    }

    #[test]
    fn rayleigh_pushforward_moments_match_product() {
        // StdNormal2d radial moments: ∫ t^{2n} dμ_r = 2^n n!
        let p = Measure2d::std_normal().radial_pushforward().unwrap();
        assert_relative_eq!(p.moment_ln(2).unwrap().value(), 2.0, epsilon = 1e-12);
        assert_relative_eq!(p.moment_ln(4).unwrap().value(), 8.0, epsilon = 1e-12);
    }

    #[test]
    fn unit_circle_marginal_is_arcsine() {
        let mu = Measure2d::unit_circle();
        let f = mu.marginal_density(0, 0.0);
        assert_relative_eq!(f, 1.0 / std::f64::consts::PI, epsilon = 1e-12);
        // integrates to 1
        let est = adaptive(&|x| mu.marginal_density(0, x), -0.999_999, 0.999_999, 1e-10).unwrap();
        assert!((est.value - 1.0).abs() < 1e-3);
    }

    #[test]
    fn product_pushforward_matches_rayleigh() {
        let mu = Measure2d::product(Measure1d::std_normal(), Measure1d::std_normal());
        let p = mu.radial_pushforward().unwrap();
        // grid approximation of the Rayleigh radial law
        for k in [2usize, 4] {
            let got = p.moment_ln(k).unwrap().value();
            let want = RadialProfile::Rayleigh.moment_ln(k).unwrap().value();
            assert!(
                (got - want).abs() / want < 1e-4,
                "k={k}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn measure_config_round_trip() {
        let cfg: MeasureConfig = serde_json::from_str(r#"{"family":"uniform","q":1.0}"#).unwrap();
        let mu = cfg.build().unwrap();
        assert_eq!(mu.label(), "uniform(1)");
        let bad: std::result::Result<MeasureConfig, _> =
            serde_json::from_str(r#"{"family":"uniform","q":1.0,"zzz":2}"#);
        assert!(bad.is_err(), "unknown keys must be rejected");
    }

    #[test]
    fn sampling_matches_moments() {
        use crate::rng::SeedSequence;
        let seq = SeedSequence::new(1234);
        for mu in [
            Measure1d::uniform(1.0).unwrap(),
            Measure1d::std_normal(),
            Measure1d::stretched_exp(0.7).unwrap(),
        ] {
            let mut rng = seq.stream(0);
            let n = 200_000;
            let mean2: f64 = (0..n)
                .map(|_| {
                    let l = mu.sample_freq(&mut rng);
                    l * l
                })
                .sum::<f64>()
                / n as f64;
            let c2 = mu.moment_ln(2).unwrap().value();
            assert!(
                (mean2 - c2).abs() < 0.05 * (1.0 + c2),
                "family {}: sample second moment {mean2} vs C2 {c2}",
                mu.label()
            );
        }
    }
}
