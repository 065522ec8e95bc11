use super::{eigen_hermitian, hermiticity_defect, kron, CMatrix};
use crate::config::{max_dim, TOLERANCES};
use crate::{QelError, Result};

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let rho = Self { matrix };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    /// `I / dim` on `n_qubits` qubits.
    pub fn maximally_mixed(n_qubits: u32) -> Result<Self> {
        let dim = crate::config::checked_dim(n_qubits)?;
        Ok(Self {
            matrix: CMatrix::identity(dim, dim).unscale(dim as f64),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.matrix;
        if !m.is_square() || m.nrows() == 0 {
            return Err(QelError::arg("density matrix must be square and nonempty"));
        }
        let herm = hermiticity_defect(m);
        if herm > TOLERANCES.algebraic {
            return Err(QelError::arg(format!("density matrix not Hermitian ({herm:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TOLERANCES.algebraic || tr.im.abs() > TOLERANCES.algebraic {
            return Err(QelError::arg(format!("density matrix trace {tr} != 1")));
        }
        let low = eigen_hermitian(m)?.values.last().copied().unwrap_or(0.0);
        if low < -TOLERANCES.psd {
            return Err(QelError::arg(format!("density matrix has eigenvalue {low}")));
        }
        Ok(())
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(eigen_hermitian(&self.matrix)?.values)
    }
}

/// `ρ^{⊗k}`.
pub fn tensor_power(rho: &DensityMatrix, k: u32) -> Result<DensityMatrix> {
    if k == 0 {
        return Err(QelError::arg("tensor power needs k >= 1"));
    }
    let cap = max_dim();
    let dim = (rho.dim() as u128).checked_pow(k).unwrap_or(u128::MAX);
    if dim > cap as u128 {
        return Err(QelError::Resource(format!(
            "dim {}^{k} exceeds the maximum dimension {cap}",
            rho.dim()
        )));
    }
    let mut out = rho.matrix.clone();
    for _ in 1..k {
        out = kron(&out, &rho.matrix);
    }
    Ok(DensityMatrix::from_matrix_unchecked(out))
}
