//! Executable checks for the spectral assumptions: a nontrivial absolutely
//! continuous part in 1D, and the same for both axis marginals in 2D.
//!
//! The report realizes the existential constants: delta0 is pushed as high as
//! bisection allows subject to |{f >= delta0}| >= delta0, and M0 is the
//! smallest admissible value > pi, so b = pi/M0 is as generous as possible.

use crate::spectral::measure::{Measure1d, Measure2d};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct AssumptionReport {
    pub satisfied: bool,
    /// Level with |{f >= delta0}| >= delta0 (bisection-maximal).
    pub delta0: Option<f64>,
    /// Smallest M > pi with |{f >= delta0} ∩ (-M, M)| >= delta0/2.
    pub m0: Option<f64>,
    /// Measure of S = {f >= delta0} ∩ (-M0, M0).
    pub s_mass: Option<f64>,
    /// Mass of the absolutely continuous part.
    pub ac_mass: f64,
}

impl AssumptionReport {
    fn unsatisfied() -> Self {
        AssumptionReport {
            satisfied: false,
            delta0: None,
            m0: None,
            s_mass: None,
            ac_mass: 0.0,
        }
    }

    /// b = pi / M0, the spacing threshold `T <= b m` used by the folded
    /// density and the eigenvalue certificate.
    pub fn b(&self) -> Option<f64> {
        self.m0.map(|m0| std::f64::consts::PI / m0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AssumptionReport2d {
    pub marginal_x: AssumptionReport,
    pub marginal_y: AssumptionReport,
    pub satisfied: bool,
    /// Some(v) when supp(mu) is contained in the line R*v.
    pub degenerate_line: Option<(f64, f64)>,
}

/// Sampled even density on [0, window]: all level-set queries run against
/// this cache so the bisection stays cheap even when a single density
/// evaluation needs quadrature (radial marginals).
struct SampledDensity {
    h: f64,
    mids: Vec<f64>,        // density at cell midpoints
    sorted_desc: Vec<f64>, // midpoint values, descending
}

impl SampledDensity {
    fn build(f: impl Fn(f64) -> f64, window: f64, cells: usize) -> SampledDensity {
        let h = window / cells as f64;
        let mids: Vec<f64> = (0..cells).map(|i| f((i as f64 + 0.5) * h)).collect();
        let mut sorted_desc = mids.clone();
        sorted_desc.sort_by(|a, b| b.partial_cmp(a).unwrap());
        SampledDensity { h, mids, sorted_desc }
    }

    /// |{f >= level}| over the whole line (doubled by symmetry).
    fn level_set_measure(&self, level: f64) -> f64 {
        let count = self.sorted_desc.partition_point(|v| *v >= level);
        2.0 * self.h * count as f64
    }

    /// |{f >= level} ∩ (-m, m)|.
    fn level_set_measure_within(&self, level: f64, m: f64) -> f64 {
        let cells = ((m / self.h).floor() as usize).min(self.mids.len());
        let count = self.mids[..cells].iter().filter(|v| **v >= level).count();
        2.0 * self.h * count as f64
    }

    fn max_value(&self) -> f64 {
        self.sorted_desc.first().copied().unwrap_or(0.0)
    }
}

fn analyze_density(f: impl Fn(f64) -> f64, window: f64, ac_mass: f64) -> AssumptionReport {
    let cells = 1 << 17;
    let sampled = SampledDensity::build(f, window.max(1e-6), cells);
    if sampled.max_value() <= 0.0 {
        return AssumptionReport::unsatisfied();
    }

    // maximize delta subject to |{f >= delta}| >= delta
    let mut lo = 0.0f64;
    let mut hi = sampled.max_value() * (1.0 + 1e-9) + 1.0;
    debug_assert!(sampled.level_set_measure(hi) < hi);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if sampled.level_set_measure(mid) >= mid {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // step back slightly so the inequality holds with margin despite the
    // finite sampling resolution
    let delta0 = lo * (1.0 - 1e-6);
    if delta0 <= 0.0 || sampled.level_set_measure(delta0) < delta0 {
        return AssumptionReport::unsatisfied();
    }

    // smallest M > pi with |S ∩ (-M, M)| >= delta0 / 2
    let target = delta0 / 2.0;
    let mut m_lo = std::f64::consts::PI;
    let mut m_hi = window.max(std::f64::consts::PI * 2.0);
    if sampled.level_set_measure_within(delta0, m_lo) >= target {
        // already enough mass inside (-pi, pi); keep M0 just above pi
        let m0 = std::f64::consts::PI * (1.0 + 1e-9);
        let s = sampled.level_set_measure_within(delta0, m0);
        return AssumptionReport {
            satisfied: true,
            delta0: Some(delta0),
            m0: Some(m0),
            s_mass: Some(s),
            ac_mass,
        };
    }
    while sampled.level_set_measure_within(delta0, m_hi) < target && m_hi < 1e9 {
        m_hi *= 2.0;
    }
    for _ in 0..80 {
        let mid = 0.5 * (m_lo + m_hi);
        if sampled.level_set_measure_within(delta0, mid) >= target {
            m_hi = mid;
        } else {
            m_lo = mid;
        }
    }
    let m0 = m_hi * (1.0 + 1e-9);
    let s = sampled.level_set_measure_within(delta0, m0);
    AssumptionReport {
        satisfied: true,
        delta0: Some(delta0),
        m0: Some(m0),
        s_mass: Some(s),
        ac_mass,
    }
}

/// Check that mu has a nontrivial absolutely continuous part and realize the
/// constants (delta0, M0, |S|) used downstream.
pub fn check_assumption_a1(mu: &Measure1d) -> AssumptionReport {
    if mu.is_purely_atomic() {
        return AssumptionReport::unsatisfied();
    }
    let window = mu.density_window(1e-9);
    analyze_density(|x| mu.ac_density(x), window, mu.ac_mass())
}

/// Check both axis marginals of mu (v1 = (1,0), v2 = (0,1)), and report
/// whether the support degenerates onto a single line.
pub fn check_assumption_a2(mu: &Measure2d) -> AssumptionReport2d {
    let degenerate_line = mu.degenerate_line();
    let marginal = |axis: usize| {
        if mu.is_purely_atomic() {
            return AssumptionReport::unsatisfied();
        }
        let window = mu.marginal_window(axis);
        analyze_density(|x| mu.marginal_density(axis, x), window, 1.0)
    };
    let marginal_x = marginal(0);
    let marginal_y = marginal(1);
    let satisfied =
        marginal_x.satisfied && marginal_y.satisfied && degenerate_line.is_none();
    AssumptionReport2d {
        marginal_x,
        marginal_y,
        satisfied,
        degenerate_line,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::measure::Measure1d;

    #[test]
    fn atomic_fails_a1() {
        let mu = Measure1d::atomic(&[(1.0, 0.5), (-1.0, 0.5)]).unwrap();
        let r = check_assumption_a1(&mu);
        assert!(!r.satisfied);
        assert!(r.delta0.is_none());
    }

    #[test]
    fn uniform_delta0_is_half() {
        // density 1/2 on [-1,1]: level sets have measure 2 up to delta = 1/2
        let mu = Measure1d::uniform(1.0).unwrap();
        let r = check_assumption_a1(&mu);
        assert!(r.satisfied);
        let d0 = r.delta0.unwrap();
        assert!((d0 - 0.5).abs() < 1e-3, "delta0 = {d0}");
        // support is inside (-pi,pi) already
        let m0 = r.m0.unwrap();
        assert!(m0 > std::f64::consts::PI && m0 < std::f64::consts::PI + 1e-6);
        assert!(r.s_mass.unwrap() >= d0 / 2.0);
        assert!(r.b().unwrap() <= 1.0);
    }

    #[test]
    fn stdnormal_delta0_from_level_sets() {
        // oracle: |{phi >= d}| = 2 sqrt(-2 ln(d sqrt(2 pi))); bisect the same
        // fixed point independently
        let mu = Measure1d::std_normal();
        let r = check_assumption_a1(&mu);
        assert!(r.satisfied);
        let d0 = r.delta0.unwrap();
        let of = |d: f64| 2.0 * (-2.0 * (d * (2.0 * std::f64::consts::PI).sqrt()).ln()).sqrt();
        let (mut lo, mut hi) = (1e-6, 0.39894);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if of(mid) >= mid {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((d0 - lo).abs() < 2e-3, "bisection delta0 {d0} vs oracle {lo}");
    }

    #[test]
    fn a2_unit_circle_and_degenerate_atoms() {
        let mu = Measure2d::unit_circle();
        let r = check_assumption_a2(&mu);
        assert!(r.satisfied, "{r:?}");
        assert!(r.degenerate_line.is_none());

        let line = Measure2d::atomic(&[(1.0, 0.0, 1.0)]).unwrap();
        let r2 = check_assumption_a2(&line);
        assert!(!r2.satisfied);
        assert!(r2.degenerate_line.is_some());
    }

    #[test]
    fn a2_product_of_normals() {
        let mu = Measure2d::product(Measure1d::std_normal(), Measure1d::std_normal());
        let r = check_assumption_a2(&mu);
        assert!(r.satisfied);
        // marginals are standard normal: compare against the 1D report
        let r1 = check_assumption_a1(&Measure1d::std_normal());
        let dx = r.marginal_x.delta0.unwrap();
        let d1 = r1.delta0.unwrap();
        assert!((dx - d1).abs() < 1e-6);
    }
}
