use std::path::PathBuf;
use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ground-set size {n} exceeds the enumeration bound {max}")]
    SizeLimit { n: usize, max: usize },

    #[error("{what}: order {n} exceeds the supported bound {max}")]
    OrderLimit {
        what: &'static str,
        n: usize,
        max: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("distribution model error: {0}")]
    Model(String),

    #[error("point {value} lies outside the truncated support ({lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("denominator guard tripped: {0}")]
    Guard(String),

    #[error("tensor grid of {points} nodes exceeds the memory budget of {budget} nodes")]
    MemoryBudget { points: usize, budget: usize },

    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path}: {msg}")]
    Parse { path: PathBuf, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
