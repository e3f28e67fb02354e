//! Outer bounds for exact-repair regenerating codes.
//!
//! The crate generates cut-set and improved linear bounds `c·B ≤ a·α + b·β`
//! for an `(n, k, d)` code together with certificates that can be checked
//! mechanically, computes exact envelopes and trade-off boundaries of bound
//! sets, and builds and verifies small explicit codes over GF(2).

pub mod cli;
pub mod codes;
pub mod envelope;
pub mod error;
pub mod generators;
pub mod model;

pub use error::{Error, Result};
