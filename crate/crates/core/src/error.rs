use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: wrong lengths, out-of-range parameters, bad files.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The graph or matrix does not have the structure an operation needs
    /// (e.g. a disconnected graph handed to the eigensolver).
    #[error("structure error: {0}")]
    Structure(String),

    #[error("sensor graph not connected after {attempts} placement attempts")]
    Generation { attempts: usize },

    /// No conjugate-paired eigenbasis exists for this spectrum.
    #[error("no normal Fourier basis: nonzero eigenvalue groups of odd multiplicity {offending:?} (at most one allowed, exactly {required} for N = {n})")]
    NoNormalBasis {
        n: usize,
        required: usize,
        offending: Vec<(f64, usize)>,
    },

    #[error("frequency response is not atomic: minimum pairwise gap {min_gap:e}")]
    NotAtomic { min_gap: f64 },

    /// Rows of the response matrix are not orthonormal.
    #[error("frame condition violated: ||A A* - I||_max = {residual:e}")]
    FrameCondition { residual: f64 },

    /// `vertex` is 1-based.
    #[error("degenerate window: C_{vertex} = {weight:e}")]
    DegenerateWindow { vertex: usize, weight: f64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of a mathematical precondition, as opposed to bad input.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::NoNormalBasis { .. }
                | Error::FrameCondition { .. }
                | Error::DegenerateWindow { .. }
                | Error::NotAtomic { .. }
        )
    }
}

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
