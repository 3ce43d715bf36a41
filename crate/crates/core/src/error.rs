use thiserror::Error;

/// Which density-operator invariant a candidate matrix violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityDefect {
    Hermiticity,
    Trace,
    Positivity,
}

impl std::fmt::Display for DensityDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DensityDefect::Hermiticity => "not Hermitian",
            DensityDefect::Trace => "trace differs from 1",
            DensityDefect::Positivity => "negative eigenvalue",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("operator is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("operator is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("invalid density operator: {defect} ({value:.3e})")]
    InvalidDensity { defect: DensityDefect, value: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("rotation axis is undefined when omega_int = 0")]
    DegenerateAxis,

    #[error("post-selected gate blocks basis input {0}")]
    BlockedInput(usize),

    #[error("empirical table is empty")]
    EmptySample,

    #[error("grids do not match: {0}")]
    GridMismatch(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("numeric invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParam {
        name,
        reason: reason.into(),
    }
}
