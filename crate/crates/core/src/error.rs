use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("index {index} out of range [1, {norb}] at line {line}")]
    Index { line: usize, index: usize, norb: usize },

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid metadata: {0}")]
    Metadata(#[from] serde_json::Error),

    #[error("orbital index {index} out of range for {n} qubits")]
    OrbitalRange { index: usize, n: usize },

    #[error("cannot build a dense matrix for {0} qubits (limit 12)")]
    DimensionOverflow(usize),

    #[error("invalid term: {0}")]
    InvalidTerm(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("empty sector: {0}")]
    Sector(String),

    #[error("objective returned NaN at evaluation {eval}")]
    NanObjective { eval: usize },
}
