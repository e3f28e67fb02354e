//! Exact arithmetic, system parameters, symbolic variables and the
//! dependency closure shared by every other module.

pub mod closure;
pub mod cutset;
pub mod form;
pub mod params;
pub mod rational;
pub mod vars;

pub use closure::{dependency_closure, universe};
pub use cutset::{bq, functional_envelope_value, var_weight};
pub use form::LinearForm;
pub use params::SystemParams;
pub use rational::Rational;
pub use vars::{VarSet, Variable};
