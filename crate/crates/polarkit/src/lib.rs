//! Polar-like codes with generalized (accept/reject) decoding.
//!
//! The crate bundles everything needed to study joint error correction and
//! detection for codes defined by the polar transform plus per-index frozen
//! constraints (static or dynamic):
//!
//! - [`code`]: code construction (Reed-Muller and 5G information sets,
//!   dynamic frozen rules, CRC outer codes), encoding and membership tests.
//! - [`channel`]: BPSK over binary-input AWGN with Eb/N0 bookkeeping and
//!   LLR production.
//! - [`scl`]: LLR-domain successive cancellation list decoding with exact
//!   path metrics and a running approximation of the codebook probability,
//!   from which per-decision confidence metrics are derived.
//! - [`oracles`]: brute-force and syndrome-trellis ground truth used to
//!   validate every approximation in the crate.
//! - [`decision`]: accept/reject rules, CRC candidate selection, outcome
//!   classification and streaming BLER/UER/MDR/LER statistics.
//! - [`soft`]: bitwise APP/extrinsic extraction from a decode result.
//! - [`turbo`]: block turbo decoding of product codes built from identical
//!   component codes.
//! - [`estimate`]: pilot-free scalar channel-gain estimation.
//! - [`sim`]: Monte Carlo experiment driver behind the `polarkit` CLI.
//!
//! A narrative guide lives in `book/` at the repository root; its chapters
//! are embedded under [`guide`] so the examples compile as doc-tests.

pub mod channel;
pub mod code;
pub mod decision;
pub mod estimate;
pub mod guide;
pub mod oracles;
pub mod scl;
pub mod sim;
pub mod soft;
pub mod turbo;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A code specification violated a structural invariant.
    #[error("invalid code spec: {0}")]
    InvalidSpec(String),
    /// A parameter was outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A resource guard for an exponential-cost oracle was exceeded.
    #[error("{what} = {actual} exceeds the guard {limit}")]
    GuardExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    /// The operation is undefined for the given code.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Experiment configuration error.
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
