//! Block compression of quantum sources and the entropy-versus-simplicity sweep.
//!
//! A source emits single-qubit pure states with fixed probabilities. Its
//! density matrix `ρ` sets the compression rate `S(ρ)`; blocks of `k` symbols
//! are projected onto leading eigenspaces of `ρ^{⊗k}`, and the resulting
//! projectors feed the simple-state search.

mod claim;
mod compression;
mod entropy;
mod source;
mod spectrum;
mod typical;

pub use claim::{claim_exponent, claim_experiment, trend_by_seed, ClaimConfig, ClaimRow, ClaimStatus};
pub use compression::{coding_rank, compression_fidelity, BINOMIAL_MAX_K};
pub use entropy::{binary_entropy, entropy_of_spectrum, von_neumann_entropy};
pub use source::{density_matrix, QuantumSource, SourceFamily};
pub use typical::{coding_projector, typical_projector, TypicalSubspace};
