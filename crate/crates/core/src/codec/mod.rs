//! Prefix-free encodings, the encoding-length complexity proxy `K̂`, codebooks,
//! the pure-state complexity upper bound `Ĥ`, and randomness deficiency.
//!
//! `K̂` is computable and only ever an upper-bound surrogate for prefix
//! Kolmogorov complexity; every `Ĥ` reported by this crate is a proxy upper
//! bound relative to `K̂` and the candidate set searched.

mod bits;
mod codebook;
mod complexity;
mod deficiency;
mod elementary;

pub use bits::{
    prefix_decode, prefix_encode, read_prefixed, read_signed, read_unsigned, signed_len,
    unsigned_len, write_signed, write_unsigned, BitReader, BitString,
};
pub use codebook::{basis_state_len, enumerate_codebook, Codebook};
pub use complexity::{
    complexity_upper_bound, complexity_upper_bound_with, ComplexityEstimate, ComplexityProxy,
    MinComplexity,
};
pub use deficiency::{deficiency, floor_neg_log2, string_complexity, ElementaryProbability};
pub use elementary::{
    decode_elementary_state, encode_elementary_state, encode_f64_amplitudes, literal_encoded_len,
    read_elementary_state, round_dyadic, ComplexRational, Description, ElementaryState, StreamRef,
};
