use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("moment of order {order} diverges or cannot be resolved: {detail}")]
    DivergentMoment { order: usize, detail: String },

    #[error("moment order {order} exceeds the working float range")]
    OrderTooLarge { order: usize },

    #[error("adaptive quadrature failed to converge: {0}")]
    QuadratureFailure(String),

    #[error("matrix not positive semidefinite within tolerance (pivot {pivot:.3e} at index {index})")]
    NotPsd { index: usize, pivot: f64 },

    #[error("assumption {assumption} violated: {detail}")]
    AssumptionViolated {
        assumption: &'static str,
        detail: String,
    },

    #[error("subset E is empty or has zero measure")]
    EmptySubset,

    #[error("grid of {points} points exceeds the dense-solver limit of {limit}")]
    GridTooLarge { points: usize, limit: usize },

    #[error("sampling unsupported for this measure: {0}")]
    SamplingUnsupported(String),

    #[error("zero count did not stabilize after {refinements} refinements (possible tangential zero)")]
    NoConvergence { refinements: usize },

    #[error("degenerate cell at ({i},{j}): all four corners vanish")]
    DegenerateCell { i: usize, j: usize },

    #[error("precondition `{name}` failed: {detail}")]
    PreconditionFailed { name: &'static str, detail: String },

    #[error("line enumeration needs {count:.3e} lines, beyond the cap of {cap}")]
    LineCountOverflow { count: f64, cap: u64 },

    #[error("unknown regime row: {0}")]
    UnknownRow(String),

    #[error("calibration infeasible: {0}")]
    InfeasibleCalibration(String),

    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    pub fn precondition(name: &'static str, detail: impl Into<String>) -> Self {
        Error::PreconditionFailed {
            name,
            detail: detail.into(),
        }
    }

    /// Exit-code bucket used by the CLI: 2 config, 3 numeric, 4 precondition,
    /// 5 falsified invariant.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            Config(_) | UnknownRow(_) => 2,
            DivergentMoment { .. }
            | OrderTooLarge { .. }
            | QuadratureFailure(_)
            | NotPsd { .. }
            | NoConvergence { .. }
            | DegenerateCell { .. }
            | GridTooLarge { .. }
            | SamplingUnsupported(_)
            | LineCountOverflow { .. }
            | EmptySubset => 3,
            PreconditionFailed { .. } | AssumptionViolated { .. } => 4,
            InfeasibleCalibration(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
