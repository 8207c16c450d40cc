use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sequence exhausted at index {index} (prefix length {prefix_len}, no tail)")]
    SequenceExhausted { index: usize, prefix_len: usize },

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("self loop at vertex {index} of sphere {sphere}")]
    SelfLoop { sphere: usize, index: usize },

    #[error("disconnected vertex {index} of sphere {sphere}: no neighbor in sphere {}", .sphere - 1)]
    DisconnectedVertex { sphere: usize, index: usize },

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("zero-degree vertex {index} of sphere {sphere}; normalized Laplacian undefined")]
    ZeroDegree { sphere: usize, index: usize },

    #[error("mismatched spheres: {0} vs {1}")]
    MismatchedSpheres(usize, usize),

    #[error("radius {radius} out of range at sphere {sphere} (depth {depth})")]
    RadiusOutOfRange {
        sphere: usize,
        radius: usize,
        depth: usize,
    },

    #[error("integer overflow in exact path arithmetic")]
    Overflow,

    #[error("residual violation at sphere {sphere}: norm {norm:e} exceeds tolerance {tol:e}")]
    ResidualViolation { sphere: usize, norm: f64, tol: f64 },

    #[error("joint diagonalization failed at sphere {sphere}: residual {residual:e}")]
    JointDiagonalization { sphere: usize, residual: f64 },

    #[error("not an antitree: {0}")]
    NotAntitree(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
