use rand_distr::{Distribution, StandardNormal};

use super::{CVector, QRng, C64};
use crate::config::{checked_dim, TOLERANCES};
use crate::parallel::{shard_seed, SHARD_SIZE};
use crate::{QelError, Result};

/// Unit vector in a `2^n`-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: u32,
    amplitudes: CVector,
}

impl PureState {
    /// Wrap amplitudes that are already normalized (within 1e-12).
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amplitudes.len())?;
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > TOLERANCES.norm {
            return Err(QelError::arg(format!(
                "amplitudes are not normalized (squared norm {norm_sq})"
            )));
        }
        Ok(Self {
            n_qubits,
            amplitudes: CVector::from_vec(amplitudes),
        })
    }

    /// Scale arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amplitudes.len())?;
        let mut v = CVector::from_vec(amplitudes);
        let norm = v.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(QelError::arg("cannot normalize a zero or non-finite vector"));
        }
        v.unscale_mut(norm);
        Ok(Self {
            n_qubits,
            amplitudes: v,
        })
    }

    pub(crate) fn from_vector_unchecked(n_qubits: u32, amplitudes: CVector) -> Self {
        Self {
            n_qubits,
            amplitudes,
        }
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: u32, index: usize) -> Result<Self> {
        let dim = checked_dim(n_qubits)?;
        if index >= dim {
            return Err(QelError::arg(format!("basis index {index} out of range for dim {dim}")));
        }
        let mut v = CVector::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes: v,
        })
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(QelError::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }
}

fn qubits_for_len(len: usize) -> Result<u32> {
    if len < 2 || !len.is_power_of_two() {
        return Err(QelError::arg(format!(
            "state length {len} is not a power of two >= 2"
        )));
    }
    let n = len.trailing_zeros();
    checked_dim(n)?;
    Ok(n)
}

/// Haar-random pure state: `2^(n+1)` independent standard normals (real and
/// imaginary parts, interleaved per amplitude) followed by normalization.
pub fn haar_sample(n_qubits: u32, rng: &mut QRng) -> Result<PureState> {
    if n_qubits == 0 {
        return Err(QelError::arg("haar_sample needs n_qubits >= 1"));
    }
    let dim = checked_dim(n_qubits)?;
    Ok(draw(n_qubits, dim, rng))
}

pub(crate) fn draw(n_qubits: u32, dim: usize, rng: &mut QRng) -> PureState {
    loop {
        let v = CVector::from_fn(dim, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        });
        let norm = v.norm();
        // A zero draw has probability zero but would poison the stream.
        if norm > 0.0 {
            return PureState::from_vector_unchecked(n_qubits, v.unscale(norm));
        }
    }
}

/// Sample at position `index` of the sharded Haar stream rooted at `master_seed`.
///
/// Equivalent to seeding shard `index / SHARD_SIZE` and drawing
/// `index % SHARD_SIZE + 1` states.
pub fn haar_stream_sample(n_qubits: u32, master_seed: u64, index: u64) -> Result<PureState> {
    if n_qubits == 0 {
        return Err(QelError::arg("haar_stream_sample needs n_qubits >= 1"));
    }
    let dim = checked_dim(n_qubits)?;
    let mut rng = QRng::new(shard_seed(master_seed, index / SHARD_SIZE));
    let mut state = draw(n_qubits, dim, &mut rng);
    for _ in 0..index % SHARD_SIZE {
        state = draw(n_qubits, dim, &mut rng);
    }
    Ok(state)
}
