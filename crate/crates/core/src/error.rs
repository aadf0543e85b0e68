//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { u: usize, v: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph needs at least {min} vertices, got {got}")]
    TooFewVertices { min: usize, got: usize },

    #[error("vertex {v} out of range for {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },

    #[error("weight matrix is not symmetric")]
    NotSymmetric,

    #[error("edge {{{u}, {v}}} has non-positive weight {w}")]
    NonPositiveWeight { u: usize, v: usize, w: f64 },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("{what} limited to {limit}, got {got}")]
    SizeLimit {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    #[error("particle count {k} must satisfy 1 <= k <= n - 1 with n = {n}")]
    BadParticleCount { k: usize, n: usize },

    #[error("bad color counts: {0}")]
    BadColorCounts(String),

    #[error("{what} needs n >= {min}, got {got}")]
    TooSmall {
        what: &'static str,
        min: usize,
        got: usize,
    },

    #[error("matching process needs an even vertex count, got {n}")]
    OddVertexCount { n: usize },

    #[error("no projection from {from} onto {to}")]
    IncompatibleKinds { from: String, to: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("zero eigenvalue is not simple (cluster multiplicity {multiplicity})")]
    ZeroNotSimple { multiplicity: usize },

    #[error("bad rate vector: {0}")]
    BadRates(String),

    #[error("bad vertex subset: {0}")]
    BadSubset(String),

    #[error("subspace is not invariant under the generator (residual {residual:e})")]
    InvarianceViolated { residual: f64 },

    #[error("numerical certification failed: {0}")]
    Certification(String),
}
