//! Polynomial-time evaluators, the effective-support oracle, and the
//! `Δ`-removal reductions.

pub mod affine;
pub mod fpnp;
pub mod interp;
pub mod oracle;
pub mod product;

pub use affine::{eval_affine, eval_affine_enumerate, Z4Form};
pub use fpnp::{eval_fpnp, eval_fpnp_report, FpnpReport};
pub use interp::{
    find_asymmetric_gate, interpolate_delta, interpolate_delta_with_gadget, realize_delta_copies,
    reduce_single_delta, reduce_single_delta_report, SingleDeltaReport, DEFAULT_GATE_BOUND,
};
pub use oracle::{
    effective_support, prune_effective, prune_with_report, support_cnf, support_oracle, Cnf,
    EffectiveSupportReport, OracleBackend,
};
pub use product::eval_product;
