use crate::config::TOLERANCES;
use crate::qcore::{CMatrix, DensityMatrix, PureState, C64};
use crate::{QelError, Result};

/// Pure states emitted with fixed probabilities; states need not be orthogonal.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumSource {
    states: Vec<PureState>,
    probs: Vec<f64>,
}

impl QuantumSource {
    pub fn new(states: Vec<PureState>, probs: Vec<f64>) -> Result<Self> {
        if states.is_empty() || states.len() != probs.len() {
            return Err(QelError::arg(format!(
                "{} states but {} probabilities",
                states.len(),
                probs.len()
            )));
        }
        let dim = states[0].dim();
        if let Some(s) = states.iter().find(|s| s.dim() != dim) {
            return Err(QelError::DimensionMismatch {
                expected: dim,
                actual: s.dim(),
            });
        }
        if probs.iter().any(|&p| !(p > 0.0) || !p.is_finite()) {
            return Err(QelError::arg("probabilities must be positive"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > TOLERANCES.norm {
            return Err(QelError::arg(format!("probabilities sum to {total}")));
        }
        Ok(Self { states, probs })
    }

    /// Build from `(state, probability)` pairs, dropping zero-probability entries.
    pub fn from_pairs(pairs: Vec<(PureState, f64)>) -> Result<Self> {
        let (states, probs) = pairs.into_iter().filter(|(_, p)| *p != 0.0).unzip();
        Self::new(states, probs)
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn qubits_per_symbol(&self) -> u32 {
        self.states[0].n_qubits()
    }
}

/// Shipped single-qubit source families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceFamily {
    /// `{|0⟩: p, |1⟩: 1 − p}`.
    Diagonal,
    /// `{|0⟩: p, |+⟩: 1 − p}`.
    Tilted,
}

impl SourceFamily {
    pub fn name(&self) -> &'static str {
        match self {
            SourceFamily::Diagonal => "diagonal",
            SourceFamily::Tilted => "tilted",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "diagonal" => Some(SourceFamily::Diagonal),
            "tilted" => Some(SourceFamily::Tilted),
            _ => None,
        }
    }

    pub fn source(&self, p: f64) -> Result<QuantumSource> {
        if !(0.0..=1.0).contains(&p) {
            return Err(QelError::arg(format!("source parameter p = {p} outside [0, 1]")));
        }
        let zero = PureState::basis(1, 0)?;
        let other = match self {
            SourceFamily::Diagonal => PureState::basis(1, 1)?,
            SourceFamily::Tilted => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                PureState::new(vec![C64::new(h, 0.0), C64::new(h, 0.0)])?
            }
        };
        QuantumSource::from_pairs(vec![(zero, p), (other, 1.0 - p)])
    }
}

/// `ρ = Σ p_i |ψ_i⟩⟨ψ_i|`.
pub fn density_matrix(source: &QuantumSource) -> DensityMatrix {
    let dim = source.dim();
    let mut rho = CMatrix::zeros(dim, dim);
    for (psi, &p) in source.states.iter().zip(&source.probs) {
        let v = psi.amplitudes();
        rho += (v * v.adjoint()) * C64::new(p, 0.0);
    }
    DensityMatrix::from_matrix_unchecked(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{haar_sample, max_norm, QRng};
    use proptest::prelude::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn density_examples() {
        let single = QuantumSource::new(vec![PureState::basis(1, 0).unwrap()], vec![1.0]).unwrap();
        let rho = density_matrix(&single);
        assert_eq!(rho.matrix(), &CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]));

        let rho = density_matrix(&SourceFamily::Diagonal.source(0.5).unwrap());
        assert!(max_norm(&(rho.matrix() - CMatrix::identity(2, 2) * c(0.5))) < 1e-15);

        // ½|0⟩⟨0| + ½|+⟩⟨+| = [[3/4, 1/4], [1/4, 1/4]]
        let rho = density_matrix(&SourceFamily::Tilted.source(0.5).unwrap());
        let expected = CMatrix::from_row_slice(2, 2, &[c(0.75), c(0.25), c(0.25), c(0.25)]);
        assert!(max_norm(&(rho.matrix() - expected)) < 1e-15);
    }

    #[test]
    fn invalid_sources() {
        let s = PureState::basis(1, 0).unwrap();
        assert!(QuantumSource::new(vec![s.clone()], vec![0.5]).is_err());
        assert!(QuantumSource::new(vec![s.clone(), s.clone()], vec![1.0]).is_err());
        assert!(QuantumSource::new(vec![s.clone(), PureState::basis(2, 0).unwrap()], vec![0.5, 0.5]).is_err());
        assert!(SourceFamily::Diagonal.source(1.5).is_err());
        assert_eq!(SourceFamily::Diagonal.source(1.0).unwrap().states().len(), 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn density_is_psd_unit_trace(seed in any::<u64>(), count in 1usize..6, n in 1u32..=3) {
            let mut rng = QRng::new(seed);
            let states: Vec<_> = (0..count).map(|_| haar_sample(n, &mut rng).unwrap()).collect();
            let weights: Vec<f64> = (0..count).map(|i| 1.0 + ((seed >> (i * 3)) & 7) as f64).collect();
            let total: f64 = weights.iter().sum();
            let mut probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
            let drift: f64 = 1.0 - probs.iter().sum::<f64>();
            probs[0] += drift;
            let source = QuantumSource::new(states, probs).unwrap();
            let rho = density_matrix(&source);
            prop_assert!(rho.validate().is_ok());
            prop_assert!((rho.trace() - 1.0).abs() <= 1e-9);
        }
    }
}
