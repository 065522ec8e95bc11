use super::spectrum::TensorEigenbasis;
use super::von_neumann_entropy;
use crate::qcore::{DensityMatrix, Projector};
use crate::{QelError, Result};

/// Projector onto the ε-typical eigenspace of `ρ^{⊗k}`.
#[derive(Debug, Clone)]
pub struct TypicalSubspace {
    pub k: u32,
    pub epsilon: f64,
    /// `S(ρ)` in bits.
    pub entropy: f64,
    pub projector: Projector,
}

impl TypicalSubspace {
    pub fn rank(&self) -> usize {
        self.projector.rank()
    }

    /// `log₂(rank) / k`, qubits per symbol needed to hold the subspace.
    pub fn rate(&self) -> f64 {
        (self.rank() as f64).log2() / self.k as f64
    }
}

/// Span of eigenvectors `|e_t⟩` of `ρ^{⊗k}` with `|−(1/k) log₂ λ_t − S(ρ)| ≤ ε`.
pub fn typical_projector(rho: &DensityMatrix, k: u32, epsilon: f64) -> Result<TypicalSubspace> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(QelError::arg(format!("epsilon must be positive, got {epsilon}")));
    }
    let entropy = von_neumann_entropy(rho)?;
    let tb = TensorEigenbasis::new(rho, k)?;
    let tuples: Vec<usize> = (0..tb.dim)
        .filter(|&t| (tb.rate_of(t) - entropy).abs() <= epsilon)
        .collect();
    if tuples.is_empty() {
        return Err(QelError::arg(format!(
            "no typical eigenvectors for k = {k}, epsilon = {epsilon}; increase epsilon or k"
        )));
    }
    // Each typical eigenvalue is at least 2^{-k(S+ε)} and they sum to at most 1.
    let bound = (k as f64 * (entropy + epsilon)).exp2();
    if tuples.len() as f64 > bound * (1.0 + 1e-9) {
        return Err(QelError::ContractViolation(format!(
            "typical rank {} exceeds 2^(k(S+eps)) = {bound}",
            tuples.len()
        )));
    }
    let projector = Projector::from_orthonormal_basis(tb.basis_matrix(&tuples))?;
    Ok(TypicalSubspace {
        k,
        epsilon,
        entropy,
        projector,
    })
}

/// Projector onto the eigenvectors of the `rank` largest eigenvalues of `ρ^{⊗k}`,
/// ties resolved by ascending tuple label.
pub fn coding_projector(rho: &DensityMatrix, k: u32, rank: usize) -> Result<Projector> {
    let tb = TensorEigenbasis::new(rho, k)?;
    if rank == 0 || rank > tb.dim {
        return Err(QelError::arg(format!("rank {rank} out of range 1..={}", tb.dim)));
    }
    let order = tb.sorted_tuples();
    Projector::from_orthonormal_basis(tb.basis_matrix(&order[..rank]))
}
