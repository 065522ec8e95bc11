use super::spectrum::TensorEigenbasis;
use super::{density_matrix, QuantumSource};
use crate::qcore::eigen_hermitian;
use crate::{QelError, Result};

/// Longest block the binomial path handles (multiplicities stay in `u128`).
pub const BINOMIAL_MAX_K: u32 = 64;

/// `⌊2^{k·rate}⌋`, saturating at `u128::MAX`.
pub fn coding_rank(k: u32, rate: f64) -> u128 {
    let bits = k as f64 * rate;
    if bits >= 127.0 {
        u128::MAX
    } else {
        bits.exp2().floor() as u128
    }
}

/// Expected success probability of projecting a length-`k` block onto the span
/// `T` of the `⌊2^{k·rate}⌋` leading eigenvectors of `ρ^{⊗k}`:
/// `Σ_blocks p_block ⟨block|T|block⟩ = Tr(T ρ^{⊗k})`.
///
/// Single-qubit sources use the weight-class structure of the spectrum and
/// work up to `k = 64` without building any matrix.
pub fn compression_fidelity(source: &QuantumSource, k: u32, rate: f64) -> Result<f64> {
    if k == 0 {
        return Err(QelError::arg("block length k must be at least 1"));
    }
    let per_symbol = source.qubits_per_symbol() as f64;
    if !(0.0..=per_symbol).contains(&rate) {
        return Err(QelError::arg(format!(
            "rate {rate} outside [0, {per_symbol}]"
        )));
    }
    let rho = density_matrix(source);
    let rank = coding_rank(k, rate);
    if source.dim() == 2 && k <= BINOMIAL_MAX_K {
        let values = eigen_hermitian(rho.matrix())?.values;
        return Ok(binomial_top_mass(values[0].max(0.0), values[1].max(0.0), k, rank));
    }
    let tb = TensorEigenbasis::new(&rho, k)?;
    let order = tb.sorted_tuples();
    let keep = rank.min(order.len() as u128) as usize;
    Ok(order[..keep].iter().map(|&t| tb.eigenvalue(t)).sum::<f64>().min(1.0))
}

/// Sum of the `rank` largest eigenvalues of `diag(l0, l1)^{⊗k}` with `l0 ≥ l1`.
fn binomial_top_mass(l0: f64, l1: f64, k: u32, rank: u128) -> f64 {
    let mut remaining = rank;
    let mut multiplicity: u128 = 1;
    let mut mass = 0.0;
    for w in 0..=k {
        if remaining == 0 {
            break;
        }
        let take = remaining.min(multiplicity);
        mass += take as f64 * l0.powi((k - w) as i32) * l1.powi(w as i32);
        remaining -= take;
        multiplicity = multiplicity * (k - w) as u128 / (w + 1) as u128;
    }
    mass.min(1.0)
}
