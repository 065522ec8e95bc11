//! Projectors given only through approximation sequences `P_1, P_2, ...` with
//! `‖P − P_i‖ <= 2^-i` in the entrywise max norm.

use super::finder::{find_simple_state, ElSearchConfig, SimpleStateWitness};
use crate::config::TOLERANCES;
use crate::qcore::{eigen_hermitian, max_norm, CMatrix, Projector, C64};
use crate::{QelError, Result};

type Generator = dyn Fn(u32) -> Result<Projector> + Send + Sync;

/// A rule emitting rank-`rank` projectors `P_i` for `i >= 1`.
pub struct ApproxProjectorProgram {
    n_qubits: u32,
    rank: usize,
    generator: Box<Generator>,
}

impl std::fmt::Debug for ApproxProjectorProgram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ApproxProjectorProgram")
            .field("n_qubits", &self.n_qubits)
            .field("rank", &self.rank)
            .finish_non_exhaustive()
    }
}

impl ApproxProjectorProgram {
    pub fn new(
        n_qubits: u32,
        rank: usize,
        generator: impl Fn(u32) -> Result<Projector> + Send + Sync + 'static,
    ) -> Self {
        Self {
            n_qubits,
            rank,
            generator: Box::new(generator),
        }
    }

    /// `P_i = P` for every `i`.
    pub fn constant(p: Projector) -> Self {
        let (n, rank) = (p.n_qubits(), p.rank());
        Self::new(n, rank, move |_| Ok(p.clone()))
    }

    /// `P_i` = projector onto the top-`rank` eigenvectors of `P + 2^(−i−1)·E`,
    /// with the Hermitian `E` rescaled to spectral norm `1/4`.
    ///
    /// The eigenvalue gap of `P` is 1, so the rotated projector moves by at most
    /// `δ/(1 − 2δ)` in operator norm for `δ = 2^(−i−3)`, which is below `2^-i`;
    /// the max norm is bounded by the operator norm.
    pub fn perturbed(p: Projector, perturbation: CMatrix) -> Result<Self> {
        if perturbation.shape() != p.matrix().shape() {
            return Err(QelError::DimensionMismatch {
                expected: p.dim(),
                actual: perturbation.nrows(),
            });
        }
        let eig = eigen_hermitian(&perturbation)?;
        let spectral = eig.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let e = if spectral > 0.0 {
            perturbation.unscale(4.0 * spectral)
        } else {
            perturbation
        };
        let (n, rank) = (p.n_qubits(), p.rank());
        Ok(Self::new(n, rank, move |i| {
            let delta = (-(i as f64) - 1.0).exp2();
            let m = p.matrix() + &e * C64::new(delta, 0.0);
            let eig = eigen_hermitian(&m)?;
            Projector::from_orthonormal_basis(eig.vectors.columns(0, rank).into_owned())
        }))
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn emit_checked(&self, i: u32) -> Result<Projector> {
        let p = (self.generator)(i)?;
        if p.n_qubits() != self.n_qubits {
            return Err(QelError::ContractViolation(format!(
                "P_{i} acts on {} qubits, program declares {}",
                p.n_qubits(),
                self.n_qubits
            )));
        }
        if p.rank() != self.rank {
            return Err(QelError::ContractViolation(format!(
                "P_{i} has rank {}, program declares {}",
                p.rank(),
                self.rank
            )));
        }
        p.validate()
            .map_err(|e| QelError::ContractViolation(format!("P_{i} is not a projector: {e}")))?;
        Ok(p)
    }
}

/// `P_i`, after checking its rank and projector invariants and, for `i >= 2`,
/// the Cauchy bound `‖P_i − P_(i−1)‖ <= 2^-i + 2^-(i−1)` against its predecessor.
pub fn approximate_projector(prog: &ApproxProjectorProgram, i: u32) -> Result<Projector> {
    if i == 0 {
        return Err(QelError::arg("approximation index must be >= 1"));
    }
    let p = prog.emit_checked(i)?;
    if i >= 2 {
        let prev = prog.emit_checked(i - 1)?;
        check_cauchy(&p, i, &prev, i - 1)?;
    }
    Ok(p)
}

fn check_cauchy(a: &Projector, i: u32, b: &Projector, j: u32) -> Result<()> {
    let dist = max_norm(&(a.matrix() - b.matrix()));
    let bound = (-(i as f64)).exp2() + (-(j as f64)).exp2();
    if dist > bound + TOLERANCES.algebraic {
        return Err(QelError::ContractViolation(format!(
            "‖P_{i} − P_{j}‖ = {dist:e} exceeds 2^-{i} + 2^-{j}"
        )));
    }
    Ok(())
}

/// Check the Cauchy bound for every pair `1 <= i < j <= up_to`.
pub fn verify_program(prog: &ApproxProjectorProgram, up_to: u32) -> Result<()> {
    let emitted = (1..=up_to).map(|i| prog.emit_checked(i)).collect::<Result<Vec<_>>>()?;
    for (a, pa) in emitted.iter().enumerate() {
        for (b, pb) in emitted.iter().enumerate().skip(a + 1) {
            check_cauchy(pb, b as u32 + 1, pa, a as u32 + 1)?;
        }
    }
    Ok(())
}

/// Smallest `i` with `2^-i < 2^(m−n−4)`, i.e. `n − m + 5`.
pub fn approximation_index(n: u32, m: u32) -> u32 {
    n - m + 5
}

/// Slack between the overlap certified against `P_(i*)` and the limit `P`.
pub fn limit_slack(n: u32, m: u32) -> f64 {
    (m as f64 - n as f64 - 2.0).exp2()
}

/// Witness for a projector known only through an approximation program.
#[derive(Debug, Clone)]
pub struct ComputableWitness {
    pub witness: SimpleStateWitness,
    /// Index `i*` of the approximation that was searched.
    pub index: u32,
    /// `2^-i*`.
    pub approximation_bound: f64,
    /// `2^(m−n−2)`.
    pub slack: f64,
    /// `overlap − slack`, the floor claimed for the limit projector.
    pub limit_overlap_floor: f64,
}

/// Run [`find_simple_state`] on `P_(i*)` with `i* = n − m + 5`.
pub fn find_simple_state_computable(
    prog: &ApproxProjectorProgram,
    config: &ElSearchConfig,
) -> Result<ComputableWitness> {
    config.validate()?;
    if prog.n_qubits() != config.n {
        return Err(QelError::DimensionMismatch {
            expected: 1usize << config.n,
            actual: 1usize << prog.n_qubits(),
        });
    }
    let index = approximation_index(config.n, config.m);
    let p = approximate_projector(prog, index)?;
    let witness = find_simple_state(&p, config)?;
    let slack = limit_slack(config.n, config.m);
    Ok(ComputableWitness {
        limit_overlap_floor: witness.overlap - slack,
        witness,
        index,
        approximation_bound: (-(index as f64)).exp2(),
        slack,
    })
}
