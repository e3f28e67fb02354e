//! Exact piecewise-linear geometry of bound sets: the envelope in
//! `(α/β, B/β)`, the dual trade-off boundary in `(α/B, β/B)` and gap
//! reports against the functional-repair envelope.

pub mod families;
pub mod gap;
pub mod lines;
pub mod tradeoff;
pub mod upper;

pub use families::{figure_families, Family};
pub use gap::{gap_report, GapInterval, GapReport, GapRow};
pub use tradeoff::{tradeoff_boundary, TradeoffBoundary};
pub use upper::{evaluate_best, upper_envelope, EnvelopeSegment, PiecewiseLinearEnvelope};
