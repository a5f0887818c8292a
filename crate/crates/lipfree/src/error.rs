//! Crate-wide error type. Solver outcomes that are *answers* (infeasible,
//! unbounded) are returned as data by the solvers themselves; this type is for
//! conditions that make a request unanswerable.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Construction-time validation failure (bad norm directions, empty
    /// domain, non-positive radius or grid spacing, inconsistent lengths...).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A point that must lie in the open domain does not.
    #[error("point {point:?} is not inside the domain")]
    OutsideDomain { point: Vec<f64> },

    /// The discrete source cannot balance: a molecule atom (or the base
    /// point) resolves to no grid cell.
    #[error("atom at {point:?} does not resolve to any grid cell")]
    AtomUnresolved { point: Vec<f64> },

    /// The grid's cell adjacency graph is disconnected while the source
    /// places imbalance across components.
    #[error("grid is disconnected: no flow can balance the source")]
    DisconnectedGrid,

    /// A flow problem's supplies do not sum to zero (beyond tolerance).
    #[error("source is unbalanced: total mass {total:e}")]
    UnbalancedSource { total: f64 },

    /// The requested discrete problem is infeasible (no flow matches the
    /// divergence constraint).
    #[error("discrete problem is infeasible: {0}")]
    Infeasible(String),

    /// Problem size exceeds what the selected backend can handle.
    #[error("problem too large for the {backend} backend: {detail}")]
    TooLarge { backend: &'static str, detail: String },

    /// Problem-file parse failure, with position information.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// File IO failure.
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// A check battery ran but an assertion failed.
    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// Process exit code for the CLI: 2 for malformed input files, 3 for
    /// mathematical infeasibility, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 2,
            Error::OutsideDomain { .. }
            | Error::AtomUnresolved { .. }
            | Error::DisconnectedGrid
            | Error::UnbalancedSource { .. }
            | Error::Infeasible(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
