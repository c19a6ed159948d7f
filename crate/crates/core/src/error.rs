use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate register label `{0}`")]
    DuplicateRegister(String),
    #[error("unknown register `{0}`")]
    UnknownRegister(String),
    #[error("register `{label}` has dimension {dim}; dimensions must be at least 2")]
    BadDimension { label: String, dim: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("register lists differ: {0}")]
    RegisterMismatch(String),
    #[error("empty register selection")]
    EmptySelection,
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("operator is not a valid density operator: {0}")]
    InvalidDensity(String),
    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("basis is not orthonormal (max Gram deviation {0:e})")]
    NotOrthonormal(f64),
    #[error("basis has {vectors} vectors but {labels} labels")]
    LabelCount { vectors: usize, labels: usize },
    #[error("basis does not span the {0}-dimensional target space")]
    IncompleteBasis(usize),
    #[error("ancilla `{0}` is not in its initial state")]
    AncillaNotInitial(String),
    #[error("inverse unavailable: decoherence has touched registers of this pre-measurement")]
    InverseUnavailable,
    #[error("mutually unbiased basis index {0} out of range (1, 2 or 3)")]
    MubIndex(u8),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("malformed constraint: {0}")]
    MalformedConstraint(String),
    #[error("configured memory cap exceeded: {0}")]
    MemoryCap(String),
}
