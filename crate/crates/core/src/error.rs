use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rate `{field}` must be positive (got {value})")]
    NonPositiveRate { field: String, value: f64 },

    #[error("at least one mechanical mode is required")]
    EmptyModeList,

    #[error("frequency `{field}` must be positive (got {value})")]
    NonPositiveFrequency { field: String, value: f64 },

    #[error("inconsistent drive: {0}")]
    InconsistentDrive(String),

    #[error("bad frequency grid: {0}")]
    BadGrid(String),

    #[error("response denominator vanishes at omega = {omega}")]
    PoleOnRealAxis { omega: f64 },

    #[error("operation needs {expected} mechanical modes, system has {found}")]
    WrongModeCount { expected: usize, found: usize },

    #[error("poles {first} and {second} coincide to within {tolerance}")]
    DegeneratePoles { first: usize, second: usize, tolerance: f64 },

    #[error("bifurcation estimates disagree: analytic {analytic}, numeric {numeric}")]
    BifurcationMismatch { analytic: f64, numeric: f64 },

    #[error("modes are not degenerate: {0}")]
    NotDegenerate(String),

    #[error("operation requires {0:?} driving")]
    WrongSideband(crate::model::Sideband),

    #[error("system is unstable (stability margin {margin})")]
    UnstableSystem { margin: f64 },

    #[error("time step {dt} too coarse, must not exceed {max_dt}")]
    StepTooCoarse { dt: f64, max_dt: f64 },

    #[error("demodulated output has not converged (window drift {drift:e})")]
    NotConverged { drift: f64 },

    #[error("eigenvalue iteration did not converge")]
    EigenFailure,
}

impl Error {
    /// Stable identifier used in machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonPositiveRate { .. } => "NonPositiveRate",
            Error::EmptyModeList => "EmptyModeList",
            Error::NonPositiveFrequency { .. } => "NonPositiveFrequency",
            Error::InconsistentDrive(_) => "InconsistentDrive",
            Error::BadGrid(_) => "BadGrid",
            Error::PoleOnRealAxis { .. } => "PoleOnRealAxis",
            Error::WrongModeCount { .. } => "WrongModeCount",
            Error::DegeneratePoles { .. } => "DegeneratePoles",
            Error::BifurcationMismatch { .. } => "BifurcationMismatch",
            Error::NotDegenerate(_) => "NotDegenerate",
            Error::WrongSideband(_) => "WrongSideband",
            Error::UnstableSystem { .. } => "UnstableSystem",
            Error::StepTooCoarse { .. } => "StepTooCoarse",
            Error::NotConverged { .. } => "NotConverged",
            Error::EigenFailure => "EigenFailure",
        }
    }

    /// True when the error stems from the caller's parameters rather than
    /// from the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::NonPositiveRate { .. }
                | Error::EmptyModeList
                | Error::NonPositiveFrequency { .. }
                | Error::InconsistentDrive(_)
                | Error::BadGrid(_)
                | Error::WrongModeCount { .. }
                | Error::NotDegenerate(_)
                | Error::WrongSideband(_)
                | Error::StepTooCoarse { .. }
        )
    }
}
