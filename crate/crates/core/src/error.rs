use thiserror::Error;

/// Errors raised by the counting toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed map: {0}")]
    Parse(String),
    #[error("half-edge reused: {0}")]
    HalfEdgeReused(u64),
    #[error("dangling half-edge: {0}")]
    DanglingHalfEdge(u64),
    #[error("duplicate vertex id: {0}")]
    DuplicateVertex(u64),
    #[error("external labels must be exactly 0..{expected}, found label {found}")]
    ExternalLabels { expected: usize, found: u64 },
    #[error("vertex {vertex} has odd degree {degree}")]
    OddDegree { vertex: u64, degree: usize },
    #[error("a-trail mode requires a map (rotation system)")]
    NotAMap,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("expected {expected} external half-edges, found {found}")]
    ExternalCount { expected: String, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("rotation system is not plane (genus {genus})")]
    NotPlane { genus: i64 },
    #[error("faces are not 2-colorable")]
    Coloring,
    #[error("invalid gadget network: {0}")]
    Network(String),
    #[error("value {value} is not invertible modulo {modulus}")]
    NotInvertible { value: String, modulus: u64 },
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("degenerate: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
