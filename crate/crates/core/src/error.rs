use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("chain length {l} exceeds the configured capacity of {cap} sites")]
    Capacity { l: usize, cap: usize },

    #[error("chain length must be at least 1")]
    EmptyChain,

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    /// Biorthonormalization of the eigenvector system failed; the matrix is
    /// numerically close to an exceptional point.
    #[error("near-defective matrix: biorthonormality residual {residual:.3e} exceeds {threshold:.1e}")]
    NearDefective { residual: f64, threshold: f64 },

    #[error("eigensolver failed to converge")]
    EigenFailure,

    #[error("state norm {norm:.3e} vanished under evolution")]
    ZeroNorm { norm: f64 },

    #[error("propagator exponent {exponent:.3e} would overflow")]
    Overflow { exponent: f64 },

    #[error("operator has vanishing Hilbert-Schmidt norm")]
    ZeroOperator,

    #[error("analytic long-time average is undefined: {which} bracket is {value:.3e}")]
    NonPositive { which: &'static str, value: f64 },

    #[error("expected a {expected} state")]
    StateKind { expected: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("malformed matrix dump: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures that come from the numerics rather than from bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NearDefective { .. }
                | Error::EigenFailure
                | Error::ZeroNorm { .. }
                | Error::Overflow { .. }
                | Error::ZeroOperator
                | Error::NonPositive { .. }
        )
    }
}
