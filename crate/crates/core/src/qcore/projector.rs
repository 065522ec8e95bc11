use super::{eigen_hermitian, hermiticity_defect, max_norm, CMatrix, CVector, PureState, QRng, C64};
use crate::config::{checked_dim, TOLERANCES};
use crate::{QelError, Result};

/// Hermitian idempotent matrix together with an orthonormal basis of its image.
#[derive(Debug, Clone)]
pub struct Projector {
    n_qubits: u32,
    matrix: CMatrix,
    /// `dim × rank`, orthonormal columns spanning the image.
    basis: CMatrix,
    elementary: bool,
}

impl Projector {
    /// Projector onto the span of orthonormal columns.
    pub fn from_orthonormal_basis(basis: CMatrix) -> Result<Self> {
        let dim = basis.nrows();
        let n_qubits = qubits_for_dim(dim)?;
        let rank = basis.ncols();
        if rank == 0 || rank > dim {
            return Err(QelError::arg(format!("rank {rank} out of range 1..={dim}")));
        }
        let gram = basis.adjoint() * &basis;
        let defect = max_norm(&(gram - CMatrix::identity(rank, rank)));
        if defect > TOLERANCES.algebraic {
            return Err(QelError::arg(format!(
                "basis columns are not orthonormal (defect {defect:e})"
            )));
        }
        let matrix = &basis * basis.adjoint();
        Ok(Self {
            n_qubits,
            matrix,
            basis,
            elementary: false,
        })
    }

    /// Validate a dense matrix as a projector and recover its image basis.
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        let n_qubits = qubits_for_dim(matrix.nrows())?;
        if !matrix.is_square() {
            return Err(QelError::arg("projector matrix must be square"));
        }
        let herm = hermiticity_defect(&matrix);
        if herm > TOLERANCES.algebraic {
            return Err(QelError::arg(format!("matrix is not Hermitian (defect {herm:e})")));
        }
        let idem = max_norm(&(&matrix * &matrix - &matrix));
        if idem > TOLERANCES.algebraic {
            return Err(QelError::arg(format!("matrix is not idempotent (defect {idem:e})")));
        }
        let eig = eigen_hermitian(&matrix)?;
        let mut rank = 0;
        for &l in &eig.values {
            if (l - 1.0).abs() <= TOLERANCES.spectral {
                rank += 1;
            } else if l.abs() > TOLERANCES.spectral {
                return Err(QelError::arg(format!("eigenvalue {l} is not 0 or 1")));
            }
        }
        if rank == 0 {
            return Err(QelError::arg("zero-rank projector"));
        }
        let basis = eig.vectors.columns(0, rank).into_owned();
        Ok(Self {
            n_qubits,
            matrix,
            basis,
            elementary: false,
        })
    }

    pub fn identity(n_qubits: u32) -> Result<Self> {
        let dim = checked_dim(n_qubits)?;
        let id = CMatrix::identity(dim, dim);
        Ok(Self {
            n_qubits,
            matrix: id.clone(),
            basis: id,
            elementary: true,
        })
    }

    /// Projector onto the span of the given computational basis states.
    pub fn from_basis_indices(n_qubits: u32, indices: &[usize]) -> Result<Self> {
        let dim = checked_dim(n_qubits)?;
        let mut basis = CMatrix::zeros(dim, indices.len());
        for (col, &i) in indices.iter().enumerate() {
            if i >= dim {
                return Err(QelError::arg(format!("basis index {i} out of range")));
            }
            basis[(i, col)] = C64::new(1.0, 0.0);
        }
        let mut p = Self::from_orthonormal_basis(basis)?;
        p.elementary = true;
        Ok(p)
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// True when built from exactly representable (dyadic) data.
    pub fn is_elementary(&self) -> bool {
        self.elementary
    }

    pub(crate) fn mark_elementary(mut self) -> Self {
        self.elementary = true;
        self
    }

    /// `P x` through the image basis.
    pub fn apply(&self, x: &CVector) -> CVector {
        &self.basis * (self.basis.adjoint() * x)
    }

    /// `⟨ψ|P|ψ⟩ = ‖B*ψ‖²` through the image basis, `O(dim · rank)`.
    pub fn overlap_via_basis(&self, psi: &PureState) -> Result<f64> {
        self.check_dim(psi.dim())?;
        Ok((self.basis.adjoint() * psi.amplitudes()).norm_squared())
    }

    /// Re-check hermiticity, idempotency and the {0,1} spectrum with rank.
    pub fn validate(&self) -> Result<()> {
        let checked = Self::from_matrix(self.matrix.clone())?;
        if checked.rank() != self.rank() {
            return Err(QelError::ContractViolation(format!(
                "stored rank {} but spectrum has {} unit eigenvalues",
                self.rank(),
                checked.rank()
            )));
        }
        Ok(())
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.dim() {
            return Err(QelError::DimensionMismatch {
                expected: self.dim(),
                actual: dim,
            });
        }
        Ok(())
    }
}

fn qubits_for_dim(dim: usize) -> Result<u32> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(QelError::arg(format!("dimension {dim} is not a power of two >= 2")));
    }
    let n = dim.trailing_zeros();
    checked_dim(n)?;
    Ok(n)
}

/// `⟨ψ|P|ψ⟩` computed from the dense matrix.
///
/// The imaginary residue must stay below 1e-10 and is then dropped.
pub fn overlap(psi: &PureState, p: &Projector) -> Result<f64> {
    p.check_dim(psi.dim())?;
    let v = psi.amplitudes();
    let z = v.dotc(&(p.matrix() * v));
    if z.im.abs() > 1e-10 {
        return Err(QelError::ContractViolation(format!(
            "overlap has imaginary residue {:e}",
            z.im
        )));
    }
    Ok(z.re.clamp(0.0, 1.0))
}

/// `φ = Pψ / √⟨ψ|P|ψ⟩`, the normalized component of `ψ` in the image of `P`.
pub fn project_into_image(p: &Projector, psi: &PureState) -> Result<PureState> {
    let ov = p.overlap_via_basis(psi)?;
    if ov <= TOLERANCES.overlap_floor {
        return Err(QelError::DegenerateProjection {
            overlap: ov,
            floor: TOLERANCES.overlap_floor,
        });
    }
    let image = p.apply(psi.amplitudes()).unscale(ov.sqrt());
    Ok(PureState::from_vector_unchecked(psi.n_qubits(), image))
}

/// Rank-`rank` projector onto the span of Haar vectors whose entries were
/// rounded to multiples of `2^-precision_bits`, then Gram–Schmidt orthonormalized.
/// Full rank returns the identity exactly.
pub fn random_elementary_projector(
    n_qubits: u32,
    rank: usize,
    precision_bits: u32,
    rng: &mut QRng,
) -> Result<Projector> {
    if n_qubits == 0 {
        return Err(QelError::arg("n_qubits must be >= 1"));
    }
    let dim = checked_dim(n_qubits)?;
    if rank == 0 || rank > dim {
        return Err(QelError::arg(format!("rank {rank} out of range 1..={dim}")));
    }
    if !(1..=crate::config::MAX_PRECISION_BITS).contains(&precision_bits) {
        return Err(QelError::arg(format!("precision_bits {precision_bits} out of range")));
    }
    if rank == dim {
        return Projector::identity(n_qubits);
    }
    let scale = (precision_bits as f64).exp2();
    let mut basis = CMatrix::zeros(dim, rank);
    let mut col = 0;
    while col < rank {
        let raw = super::state::draw(n_qubits, dim, rng);
        let mut v = raw
            .amplitudes()
            .map(|z| C64::new((z.re * scale).round() / scale, (z.im * scale).round() / scale));
        // two Gram–Schmidt passes
        for _ in 0..2 {
            for k in 0..col {
                let b = basis.column(k);
                let c = b.dotc(&v);
                v -= b * c;
            }
        }
        let norm = v.norm();
        // rounding can make a draw nearly dependent on the columns so far; redraw
        if norm < 1e-6 {
            continue;
        }
        basis.set_column(col, &v.unscale(norm));
        col += 1;
    }
    Ok(Projector::from_orthonormal_basis(basis)?.mark_elementary())
}
