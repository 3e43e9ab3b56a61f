//! Truthful distributed mechanisms on weighted graphs, executed on a
//! deterministic round-synchronous message-passing simulator (LOCAL and
//! CONGEST models).
//!
//! The crate is organised around four mechanisms — greedy maximum-weight
//! independent set, local-ratio vertex cover, greedy dominating set, and
//! slot assignment — plus the generic critical-price payment machinery
//! that turns their monotone allocation rules into truthful mechanisms.
//! The [`oracle`] module provides brute-force optima and exhaustive
//! monotonicity/truthfulness sweeps used by the verification suites.

pub mod coloring;
pub mod error;
pub mod graph;
pub mod mutants;
pub mod mwds;
pub mod mwis;
pub mod mwvc;
pub mod myerson;
pub mod oracle;
pub mod sim;
pub mod slot;

pub use error::Error;
pub use graph::{BidVector, NodeId, TieKey, WeightedGraph};
pub use myerson::{Mechanism, MechanismResult, Objective};
pub use sim::{ExecutionModel, RoundTrace};

/// Exact rational arithmetic used for utilities, payments, and ratio checks.
pub type Rat = num_rational::Rational64;
