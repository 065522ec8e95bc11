//! Numerical tolerances and resource limits shared by every module.

use std::sync::OnceLock;

/// Tolerances used by invariant checks and property tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Unit-norm check for pure states.
    pub norm: f64,
    /// Entrywise algebraic identities (hermiticity, idempotency, trace).
    pub algebraic: f64,
    /// Distance of projector eigenvalues from {0, 1}.
    pub spectral: f64,
    /// Hermiticity required before an eigensolve.
    pub eigen_input: f64,
    /// Smallest overlap accepted by `project_into_image`.
    pub overlap_floor: f64,
    /// Smallest fidelity accepted as a complexity witness.
    pub fidelity_floor: f64,
    /// Most negative eigenvalue tolerated in a density matrix.
    pub psd: f64,
}

pub const TOLERANCES: Tolerances = Tolerances {
    norm: 1e-12,
    algebraic: 1e-9,
    spectral: 1e-7,
    eigen_input: 1e-8,
    overlap_floor: 1e-12,
    fidelity_floor: 1e-15,
    psd: 1e-10,
};

/// Default cap on the Hilbert-space dimension (14 qubits).
pub const DEFAULT_MAX_DIM: usize = 1 << 14;

/// Environment variable overriding [`DEFAULT_MAX_DIM`].
pub const MAX_DIM_ENV: &str = "QEL_MAX_DIM";

/// Default cap on the number of Haar samples a single search may draw.
pub const DEFAULT_SAMPLE_CAP: u64 = 1 << 26;

/// Largest dyadic precision supported by the rational amplitude representation.
pub const MAX_PRECISION_BITS: u32 = 60;

static MAX_DIM: OnceLock<usize> = OnceLock::new();

/// Process-wide dimension cap, read once from `QEL_MAX_DIM`.
pub fn max_dim() -> usize {
    *MAX_DIM.get_or_init(|| {
        std::env::var(MAX_DIM_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&v| v >= 2)
            .unwrap_or(DEFAULT_MAX_DIM)
    })
}

/// `2^n_qubits` if it fits under the dimension cap.
pub fn checked_dim(n_qubits: u32) -> crate::Result<usize> {
    let cap = max_dim();
    if n_qubits >= usize::BITS - 1 || (1usize << n_qubits) > cap {
        return Err(crate::QelError::Resource(format!(
            "2^{n_qubits} exceeds the maximum dimension {cap} (set {MAX_DIM_ENV} to raise it)"
        )));
    }
    Ok(1usize << n_qubits)
}
