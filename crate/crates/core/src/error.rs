use thiserror::Error;

/// Errors shared across the simulator and the mechanism layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph format error at line {line}: {message}")]
    GraphFormat { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("no termination within {cap} rounds")]
    NonTermination { cap: u64 },

    #[error(
        "congestion violation in round {round}: node {sender} sent {bits} bits (budget {budget})"
    )]
    CongestionViolation {
        round: u64,
        sender: usize,
        bits: u64,
        budget: u64,
    },

    #[error("monotonicity violation for node {node}: selected at bid {selected_bid}, not at {unselected_bid}")]
    MonotonicityViolation {
        node: usize,
        selected_bid: u32,
        unselected_bid: u32,
    },

    #[error("brute-force cap exceeded: {0}")]
    BruteForceCap(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
