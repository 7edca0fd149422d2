use thiserror::Error;

/// Errors produced anywhere in the pipeline, from document parsing down to
/// the matrix kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertexId(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("edge `{0}` has a non-positive length")]
    NonpositiveEdgeLength(String),
    #[error("graph is not connected: vertex `{0}` is unreachable from `{1}`")]
    DisconnectedGraph(String, String),
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("canonical divisor is not effective at vertices {0:?}")]
    NonEffectiveCanonicalDivisor(Vec<String>),
    #[error("graph is not adequate: {0}")]
    NotAdequate(String),
    #[error("matrix is singular; a disconnected graph reached the solver")]
    SingularMatrix,
    #[error("polarized genus must be at least 1, got {0}")]
    InvalidGenus(i64),
    #[error("correction ledger was built for polarized genus {ledger} but the core has {core}")]
    GenusMismatch { ledger: i64, core: i64 },
    #[error("the simple-graph theta form requires q = 0 on every vertex")]
    NonzeroPolarization,
    #[error("the regular-graph theta form requires every vertex to have the same valence")]
    NotRegular,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("expected {expected} parameters, got {got}")]
    BadParameterCount { expected: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precision arithmetic needs at least 18 digits, got {0}")]
    PrecisionTooLow(u32),
    #[error("precision loss: inverse residual {residual:e} exceeds tolerance {tolerance:e}")]
    PrecisionLoss { residual: f64, tolerance: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
