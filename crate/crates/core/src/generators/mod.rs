//! Outer bounds with machine-checkable certificates: cut-set bounds, chains
//! of min-cut copies, rectangle packings and their combinations.

pub mod bound;
pub mod chain;
pub mod combine;
pub mod config;
pub mod enumerate;
pub mod packing;
pub mod verify;

pub use bound::{cutset_bounds, BoundKey, LinearBound, Provenance};
pub use chain::{
    thm_rs_bound, thm_rs_bound_unit, thm_rs_bound_with, ChainCertificate, ChainClosing,
    ChainOrigin, ChainStep, RsOptions,
};
pub use combine::{combine_rs_p0, CombinationCertificate, Refinement};
pub use config::MinimalConfiguration;
pub use enumerate::{enumerate_bounds, enumerate_packings, Enumeration, EnumerationLimits};
pub use packing::{
    as_stated_term, p0_term, rectangle_term, thm_lm_bound, LmMode, PackingCertificate, Rectangle,
};
pub use verify::{verify_certificate, Failure, Verdict, VerificationReport};
