use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid deformation parameter: {0}")]
    InvalidQ(String),

    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),

    #[error("cannot delete a part equal to {part} from {weight:?}: multiplicity is zero")]
    MissingPart { weight: Vec<i64>, part: i64 },

    #[error("grade mismatch: expected {expected}, found {found}")]
    GradeMismatch { expected: usize, found: usize },

    #[error("invalid q-binomial arguments ({m}, {k})")]
    InvalidBinomial { m: i64, k: i64 },

    #[error("spectral point {0:?} has coinciding components")]
    Singular(Vec<f64>),

    #[error("spectral point {0:?} is outside the fundamental alcove")]
    OutsideAlcove(Vec<f64>),

    #[error("gradient at {0:?} is not regular")]
    NotRegular(Vec<f64>),

    #[error("wave packet support violates the regular-domain invariant at {point:?}: {reason}")]
    PacketSupport { point: Vec<f64>, reason: String },

    #[error("classical region is undefined at t = 0")]
    ZeroTime,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
