use crate::qcore::DensityMatrix;
use crate::Result;

/// `−Σ λ log₂ λ` with `0 log 0 = 0`; tiny negative eigenvalues count as zero.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Binary entropy `H₂(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_of_spectrum(&[p, 1.0 - p])
}

/// Von Neumann entropy `S(ρ)` in bits, in `[0, log₂ dim]`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let s = entropy_of_spectrum(&rho.eigenvalues()?);
    Ok(s.min((rho.dim() as f64).log2()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{tensor_power, CMatrix, DensityMatrix, C64};
    use crate::schumacher::{density_matrix, SourceFamily};

    #[test]
    fn anchors() {
        let pure = density_matrix(&SourceFamily::Tilted.source(1.0).unwrap());
        assert!(von_neumann_entropy(&pure).unwrap().abs() < 1e-10);
        for n in 1..=5 {
            let s = von_neumann_entropy(&DensityMatrix::maximally_mixed(n).unwrap()).unwrap();
            assert!((s - n as f64).abs() < 1e-10);
        }
        let rho = density_matrix(&SourceFamily::Diagonal.source(0.75).unwrap());
        // H₂(1/4) = 2 − (3/4)·log₂3 = 0.8112781244591328...
        let oracle = 2.0 - 0.75 * 3f64.log2();
        let s = von_neumann_entropy(&rho).unwrap();
        assert!((s - 0.811278).abs() < 1e-5);
        assert!((s - oracle).abs() < 1e-12);
    }

    #[test]
    fn additivity_over_tensor_powers() {
        for p in [0.6, 0.8, 0.93] {
            for family in [SourceFamily::Diagonal, SourceFamily::Tilted] {
                let rho = density_matrix(&family.source(p).unwrap());
                let s = von_neumann_entropy(&rho).unwrap();
                assert!(s >= 0.0 && s <= 1.0);
                for k in 1..=3 {
                    let sk = von_neumann_entropy(&tensor_power(&rho, k).unwrap()).unwrap();
                    assert!((sk / k as f64 - s).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn tilted_entropy_matches_closed_form() {
        // ρ = [[p + (1−p)/2, (1−p)/2], [(1−p)/2, (1−p)/2]], eigenvalues (1 ± √(1 − 4 det))/2
        let p: f64 = 0.7;
        let a = p + (1.0 - p) / 2.0;
        let b = (1.0 - p) / 2.0;
        let det = a * b - b * b;
        let l = (1.0 + (1.0 - 4.0 * det).sqrt()) / 2.0;
        let rho = density_matrix(&SourceFamily::Tilted.source(p).unwrap());
        assert!((von_neumann_entropy(&rho).unwrap() - binary_entropy(l)).abs() < 1e-12);
        let m = CMatrix::from_row_slice(2, 2, &[C64::new(a, 0.0), C64::new(b, 0.0), C64::new(b, 0.0), C64::new(b, 0.0)]);
        assert!((rho.matrix() - m).norm() < 1e-15);
    }
}
