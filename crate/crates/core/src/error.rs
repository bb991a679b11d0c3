use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("unknown builtin family `{0}`")]
    UnknownFamily(String),

    #[error("invalid parameters for `{family}`: {msg}")]
    InvalidParams { family: String, msg: String },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("search budget exhausted after {nodes} nodes")]
    Budget { nodes: u64 },

    #[error("orbit exceeds cap of {cap} embeddings")]
    OrbitCap { cap: usize },

    #[error("non-uniform pair coverage: pair {pair_a:?} covered {count_a} times, pair {pair_b:?} covered {count_b} times")]
    NonUniformCoverage {
        pair_a: (usize, usize),
        count_a: u32,
        pair_b: (usize, usize),
        count_b: u32,
    },

    #[error("certificate invalid: {0}")]
    CertificateInvalid(String),

    #[error("value {num}/{den} is not an integer")]
    NonIntegral { num: u64, den: u64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
