use thiserror::Error;

/// Errors raised by the simulation core.
///
/// The variants fall into two families: invalid input (`Config`,
/// `GridMismatch`, `Ordering`, `InsufficientData`) and violated numerical
/// contracts (`Solver`, `NormDrift`, `Contract`, `Evolution`). Callers such as
/// the CLI map the second family to a distinct exit status.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("fields or operators live on different grids")]
    GridMismatch,

    #[error("mode ordering mismatch: expected dimension {expected}, got {found}")]
    Ordering { expected: usize, found: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("eigensolver failed: {0}")]
    Solver(String),

    #[error("norm drift {drift:.3e} exceeds the allowed {limit:.1e}")]
    NormDrift { drift: f64, limit: f64 },

    #[error("numerical contract violated: {0}")]
    Contract(String),

    #[error("evolution of mode {mode} failed: {source}")]
    Evolution {
        mode: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for failures of a numerical invariant rather than of the input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Solver(_) | Error::NormDrift { .. } | Error::Contract(_) => true,
            Error::Evolution { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
