//! GF(2) linear algebra, explicit regenerating codes and their verifiers.

mod construct;
mod gf2;
mod spec;
mod verify;

pub use construct::{
    build_congruence_family, builtin_code_423, builtin_code_433, congruence_parity,
};
pub use gf2::{gf2_rank, gf2_solve, Gf2Matrix};
pub use spec::RegeneratingCodeSpec;
pub use verify::{
    parity_block_ranks, verify_parity_structure, verify_recovery, verify_repair, CodeCheck,
    CodeReport,
};

#[cfg(test)]
mod tests;
