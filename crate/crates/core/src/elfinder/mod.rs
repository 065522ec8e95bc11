//! Certified search for simple states inside projector images.
//!
//! For a projector of rank at least `2^m` on `n` qubits, Haar samples have mean
//! overlap at least `2^(m−n)`. Drawing `N = d·2^(2(n−m)+1)` rounded samples from
//! a seeded stream makes a sample with overlap `>= 2^(m−n−1)` overwhelmingly
//! likely; its normalized projection `φ` lies in the image and is described by
//! the stream position of the sample plus `−log₂ overlap` bits of fidelity.

mod computable;
mod finder;
mod hoeffding;

pub use computable::{
    approximate_projector, approximation_index, find_simple_state_computable, limit_slack,
    verify_program, ApproxProjectorProgram, ComputableWitness,
};
pub use finder::{
    find_simple_state, rationalization_fidelity_bound, rationalize, sample_budget, ElSearchConfig,
    SearchMode, SimpleStateWitness,
};
pub use hoeffding::{hoeffding_tail, overlap_threshold, sample_budget_for};
