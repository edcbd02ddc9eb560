use thiserror::Error;

/// Errors raised by state, family, metric and curvature computations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("grid mismatch: states live on different grids")]
    GridMismatch,

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("zero state cannot be normalized")]
    ZeroState,

    #[error("chart mismatch: {0}")]
    ChartMismatch(String),

    #[error("coordinate `{coord}` = {value} lies outside the domain")]
    OutOfDomain { coord: String, value: f64 },

    #[error("stencil leaves the domain along `{coord}` (reaches {value})")]
    StencilExitsDomain { coord: String, value: f64 },

    #[error("singular metric (condition number {condition:.3e})")]
    SingularMetric { condition: f64 },

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by evaluating outside a declared domain or at
    /// a degenerate point, as opposed to malformed inputs.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::OutOfDomain { .. }
                | Error::StencilExitsDomain { .. }
                | Error::SingularMetric { .. }
                | Error::ZeroState
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
