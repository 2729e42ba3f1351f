use std::io;

use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("illegal action: node {node} is not a candidate")]
    IllegalAction { node: usize },

    #[error("no candidate actions; teleport required")]
    NoCandidates,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("did not converge: {0}")]
    NonConvergence(String),

    #[error("training diverged: {0}")]
    Divergence(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
