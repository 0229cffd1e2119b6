use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by fitting, evaluation and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("sample set is empty")]
    EmptyData,

    #[error("points and values have different lengths ({points} vs {values})")]
    LengthMismatch { points: usize, values: usize },

    #[error("non-finite entry at sample {index}")]
    NonFinite { index: usize },

    #[error("duplicate sample point {point} at rows {first} and {second}")]
    DuplicatePoint {
        point: Complex64,
        first: usize,
        second: usize,
    },

    #[error("no active samples left")]
    NoActiveSamples,

    #[error("sample {index} is already interpolated")]
    AlreadyInterpolated { index: usize },

    #[error("evaluation point {z} coincides with support point {support}")]
    SupportCoincidence { z: Complex64, support: usize },

    #[error("denominator vanishes at {z}: pole at evaluation point")]
    PoleAtPoint { z: Complex64 },

    #[error("denominator vanishes at active sample {index}")]
    VanishingDenominator { index: usize },

    #[error("all weights are zero")]
    ZeroWeights,

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("realization needs a barycentric model with at least one support point")]
    EmptyRealization,

    #[error("normalization undefined: all data values are zero")]
    ZeroData,

    #[error("no active sample has a nonzero data value")]
    NoNonzeroData,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown test function `{0}`")]
    UnknownFunction(String),

    #[error("sampling grid needs at least two points, got {0}")]
    GridTooSmall(usize),

    #[error("singular value decomposition did not converge")]
    SvdFailed,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Numerical failures (poles at points, undefined normalization) as
    /// opposed to malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::PoleAtPoint { .. }
                | Error::VanishingDenominator { .. }
                | Error::ZeroData
                | Error::ZeroWeights
                | Error::SvdFailed
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
