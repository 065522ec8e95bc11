//! Simulation library for finding low-description-complexity pure states inside
//! large-rank projectors, and for typical-subspace (block) quantum data compression.
//!
//! Module map:
//!
//! * [`qcore`]: dense complex states, projectors, density matrices, Haar sampling.
//! * [`codec`]: prefix-free encodings, the encoding-length complexity proxy `K̂`,
//!   codebooks, the pure-state complexity upper bound `Ĥ` and randomness deficiency.
//! * [`elfinder`]: Hoeffding sample budgets and the simple-state search procedure,
//!   including the computable-projection (approximation sequence) variant.
//! * [`schumacher`]: quantum sources, von Neumann entropy, typical projectors,
//!   compression fidelity and the entropy-vs-complexity sweep.
//!
//! Monte Carlo loops are sharded with deterministic per-shard seeds, see
//! [`parallel`]. With the `parallel` feature (default) shards run on rayon.

pub mod codec;
pub mod config;
pub mod elfinder;
mod error;
pub mod parallel;
pub mod qcore;
pub mod schumacher;
pub mod stats;

pub use error::{QelError, Result};
