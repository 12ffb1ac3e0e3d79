//! Exact solvers and MIP model emission.

mod brute;
mod dp;
pub mod mip;

pub use brute::{brute_force, BRUTE_FORCE_MAX_N};
pub use dp::{dp_exact, dp_optimum, DpOutcome, DEFAULT_STATE_BUDGET};
pub use mip::{emit_mip, MipModel, MipOptions, Precedence, Variant};
