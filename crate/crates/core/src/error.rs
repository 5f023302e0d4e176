use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph sides must be non-empty (got {n_left}x{n_right})")]
    EmptySide { n_left: usize, n_right: usize },

    #[error("vertex ({u}, {v}) out of range for a {n_left}x{n_right} graph")]
    VertexOutOfRange {
        u: usize,
        v: usize,
        n_left: usize,
        n_right: usize,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("({u}, {v}) is already an edge")]
    AlreadyEdge { u: usize, v: usize },

    #[error("graph is not square ({n_left}x{n_right}); {what} needs equal sides")]
    NotSquare {
        n_left: usize,
        n_right: usize,
        what: &'static str,
    },

    #[error("graph already contains a forbidden biclique")]
    NotFree,

    #[error("side of {size} vertices exceeds the limit of {limit} for {what}")]
    TooLarge {
        size: usize,
        limit: usize,
        what: &'static str,
    },

    #[error("canonical labeling would need {leaves} leaves (budget {budget})")]
    CanonicalBudget { leaves: u128, budget: u128 },

    #[error("bmat parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid construction: {0}")]
    InvalidConstruction(String),

    #[error("invalid core: {0}")]
    InvalidCore(String),

    #[error("minimum degree {min_degree} is below t-1 = {required}")]
    MinDegreeTooLow { min_degree: usize, required: usize },

    #[error("search refused: estimated 2^{log2_estimate} nodes exceeds budget 2^{log2_budget}")]
    Infeasible {
        log2_estimate: u32,
        log2_budget: u32,
    },
}
