//! Spectral measures, their moments, and the assumption checks.

pub mod assumptions;
pub mod measure;
pub mod moments;

pub use assumptions::{check_assumption_a1, check_assumption_a2, AssumptionReport, AssumptionReport2d};
pub use measure::{
    Atom, Atom2d, GridDensity, Measure1d, Measure2d, MeasureConfig, MeasureConfig2d,
    RadialProfile, Variant1d, Variant2d,
};
pub use moments::{moments_1d, moments_2d, MomentMethod, MomentTable};
