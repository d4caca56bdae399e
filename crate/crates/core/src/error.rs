use thiserror::Error;

/// Errors produced by code construction, decoding and simulation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("row {row} is empty")]
    ZeroRow { row: usize },

    #[error("column index {index} out of range for {cols} columns")]
    IndexOutOfRange { index: usize, cols: usize },

    #[error("duplicate column index {index} in row {row}")]
    DuplicateIndex { row: usize, index: usize },

    #[error("matrix is singular over GF(2) (rank {rank} < {size})")]
    Singular { rank: usize, size: usize },

    #[error("variable node type {vn_type} has no edges")]
    Unconnected { vn_type: usize },

    #[error("protograph cannot be lifted: {0}")]
    Infeasible(String),

    #[error("row {row} is not type consistent towards variable node type {vn_type}")]
    NotTypeConsistent { row: usize, vn_type: usize },

    #[error("no intermediate protograph from {from} to {to} check node types")]
    EmptyFamily { from: usize, to: usize },

    #[error("no disjoint candidate row left while merging check types {0} and {1}")]
    NoDisjointCandidate(usize, usize),

    #[error("crossover probability {0} is outside (0, 1/2)")]
    DegenerateChannel(f64),

    #[error("rate {num}/{den} is not on the ladder grid")]
    RateOffGrid { num: usize, den: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("alist parse error at line {line}: {msg}")]
    Alist { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
