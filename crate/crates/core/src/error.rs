use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} outside the supported range 1..=4096")]
    DimensionOutOfRange(usize),

    #[error("state not normalized: squared norm {0}")]
    NotNormalized(f64),

    #[error("matrix not Hermitian: max |H - H^dagger| = {0:e}")]
    NotHermitian(f64),

    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("not a projector: max |P^2 - P| = {0:e}")]
    NotProjector(f64),

    #[error("vectors not orthonormal: max Gram deviation {0:e}")]
    NotOrthonormal(f64),

    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("probabilities sum to {0}, expected 1")]
    NotNormalizedProbabilities(f64),

    #[error("ensemble has no states")]
    EmptyEnsemble,

    #[error("states linearly dependent: state {index} has residual norm {residual:e} after Gram-Schmidt")]
    LinearlyDependent { index: usize, residual: f64 },

    #[error("states linearly dependent: Gram matrix minimum eigenvalue {0:e} <= 1e-10")]
    SingularGram(f64),

    #[error("subspaces not orthogonal: H1 basis vector {i} and H2 basis vector {j} overlap {overlap:.6}")]
    NotOrthogonal { i: usize, j: usize, overlap: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("coding infeasible: q^m = {capacity} < D = {required}")]
    Infeasible { capacity: String, required: String },

    #[error("stream truncated: {0}")]
    Truncated(String),

    #[error("block symbol {0} has no codeword")]
    UnknownSymbol(u32),

    #[error("duplicate word {0:?}")]
    DuplicateWord(Vec<usize>),

    #[error("{path}: {message}")]
    SourceFile { path: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
