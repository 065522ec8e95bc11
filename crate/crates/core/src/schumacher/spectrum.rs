//! Eigen-structure of `ρ^{⊗k}` built from one eigendecomposition of `ρ`.
//!
//! Eigenvectors of the tensor power are tensor products `|e_{t_1}⟩ ⊗ … ⊗ |e_{t_k}⟩`
//! labelled by index tuples `t`, ordered as base-`d` numbers with the first
//! symbol most significant (the same order as the Kronecker product).
//! Eigenvalues are computed from the occupation counts of `t` so that tuples
//! sharing a multiset get bit-identical values.

use crate::config::max_dim;
use crate::qcore::{eigen_hermitian, CMatrix, DensityMatrix, HermitianEigen, C64};
use crate::{QelError, Result};

pub(crate) struct TensorEigenbasis {
    pub eig: HermitianEigen,
    pub k: u32,
    pub dim: usize,
}

impl TensorEigenbasis {
    pub fn new(rho: &DensityMatrix, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(QelError::arg("block length k must be at least 1"));
        }
        let cap = max_dim();
        let dim = (rho.dim() as u128).checked_pow(k).unwrap_or(u128::MAX);
        if dim > cap as u128 {
            return Err(QelError::Resource(format!(
                "dim {}^{k} exceeds the maximum dimension {cap}",
                rho.dim()
            )));
        }
        let mut eig = eigen_hermitian(rho.matrix())?;
        for v in eig.values.iter_mut() {
            *v = v.max(0.0);
        }
        Ok(Self {
            eig,
            k,
            dim: dim as usize,
        })
    }

    fn symbol_dim(&self) -> usize {
        self.eig.values.len()
    }

    fn counts(&self, mut tuple: usize) -> Vec<u32> {
        let d = self.symbol_dim();
        let mut counts = vec![0u32; d];
        for _ in 0..self.k {
            counts[tuple % d] += 1;
            tuple /= d;
        }
        counts
    }

    pub fn eigenvalue(&self, tuple: usize) -> f64 {
        self.counts(tuple)
            .iter()
            .zip(&self.eig.values)
            .map(|(&c, &l)| l.powi(c as i32))
            .product()
    }

    /// `−(1/k) log₂ λ_t`, infinite when `λ_t = 0`.
    pub fn rate_of(&self, tuple: usize) -> f64 {
        let mut sum = 0.0;
        for (&c, &l) in self.counts(tuple).iter().zip(&self.eig.values) {
            if c == 0 {
                continue;
            }
            if l <= 0.0 {
                return f64::INFINITY;
            }
            sum -= c as f64 * l.log2();
        }
        sum / self.k as f64
    }

    pub fn eigenvector(&self, tuple: usize) -> Vec<C64> {
        let d = self.symbol_dim();
        let mut digits = vec![0usize; self.k as usize];
        let mut t = tuple;
        for slot in digits.iter_mut().rev() {
            *slot = t % d;
            t /= d;
        }
        let mut v = vec![C64::new(1.0, 0.0)];
        for &digit in &digits {
            let col = self.eig.vectors.column(digit);
            let mut next = Vec::with_capacity(v.len() * d);
            for a in &v {
                for b in col.iter() {
                    next.push(a * b);
                }
            }
            v = next;
        }
        v
    }

    /// Tuple labels sorted by descending eigenvalue, ties by ascending label.
    pub fn sorted_tuples(&self) -> Vec<usize> {
        let values: Vec<f64> = (0..self.dim).map(|t| self.eigenvalue(t)).collect();
        let mut order: Vec<usize> = (0..self.dim).collect();
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
        order
    }

    /// `dim × len` matrix whose columns are the eigenvectors of `tuples`.
    pub fn basis_matrix(&self, tuples: &[usize]) -> CMatrix {
        let mut basis = CMatrix::zeros(self.dim, tuples.len());
        for (col, &t) in tuples.iter().enumerate() {
            for (row, a) in self.eigenvector(t).into_iter().enumerate() {
                basis[(row, col)] = a;
            }
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{max_norm, tensor_power};
    use crate::schumacher::{density_matrix, SourceFamily};

    #[test]
    fn reproduces_dense_tensor_power() {
        let rho = density_matrix(&SourceFamily::Tilted.source(0.7).unwrap());
        for k in 1..=4 {
            let tb = TensorEigenbasis::new(&rho, k).unwrap();
            let dense = tensor_power(&rho, k).unwrap();
            let all: Vec<usize> = (0..tb.dim).collect();
            let b = tb.basis_matrix(&all);
            let lambda = CMatrix::from_diagonal(&crate::qcore::CVector::from_iterator(
                tb.dim,
                all.iter().map(|&t| C64::new(tb.eigenvalue(t), 0.0)),
            ));
            let rebuilt = &b * lambda * b.adjoint();
            assert!(max_norm(&(rebuilt - dense.matrix())) < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn sorted_order_is_descending() {
        let rho = density_matrix(&SourceFamily::Diagonal.source(0.8).unwrap());
        let tb = TensorEigenbasis::new(&rho, 5).unwrap();
        let order = tb.sorted_tuples();
        assert_eq!(order[0], 0);
        assert_eq!(&order[1..6], &[1, 2, 4, 8, 16]);
        for w in order.windows(2) {
            assert!(tb.eigenvalue(w[0]) >= tb.eigenvalue(w[1]));
        }
    }
}
