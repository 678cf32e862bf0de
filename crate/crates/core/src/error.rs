use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by graph construction, diagonalization, and sweeps.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("site index {index} out of range for {n_spins} spins")]
    SiteOutOfRange { index: usize, n_spins: usize },

    #[error("invalid pair ({0}, {1}): need two distinct sites")]
    InvalidPair(usize, usize),

    #[error("invalid sector: n_up = {n_up} with {n_spins} spins")]
    InvalidSector { n_spins: usize, n_up: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("invalid mixture: {0}")]
    InvalidMixture(String),

    #[error("eigensolver did not converge on a {dim}x{dim} block within {max_iterations} sweeps")]
    NoConvergence { dim: usize, max_iterations: usize },

    #[error("{n_spins} spins exceeds the solver cap of {cap}")]
    SizeCap { n_spins: usize, cap: usize },

    #[error("no connected graph found after {attempts} attempts")]
    NoConnectedGraph { attempts: usize },

    #[error("matrix is not in the restricted X form (entry {row},{col} = {value:e})")]
    NotXForm { row: usize, col: usize, value: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
