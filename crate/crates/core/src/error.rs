use thiserror::Error;

pub type Result<T> = std::result::Result<T, QelError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QelError {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("degenerate projection: overlap {overlap:e} is below the floor {floor:e}")]
    DegenerateProjection { overlap: f64, floor: f64 },

    #[error("no codebook entry has fidelity above {floor:e} with the target state")]
    NoWitness { floor: f64 },

    #[error(
        "no sample reached the overlap threshold {threshold:e} after {samples} draws \
         (best overlap {best_overlap:e})"
    )]
    ThresholdMiss {
        threshold: f64,
        samples: u64,
        best_overlap: f64,
    },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("decode error at bit {position}: {reason}")]
    Decode { position: usize, reason: String },
}

impl QelError {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        QelError::Argument(msg.into())
    }

    pub(crate) fn decode(position: usize, reason: impl Into<String>) -> Self {
        QelError::Decode {
            position,
            reason: reason.into(),
        }
    }
}
