use std::cmp::Ordering;

use super::codebook::Codebook;
use super::elementary::ElementaryState;
use crate::config::TOLERANCES;
use crate::qcore::PureState;
use crate::{QelError, Result};

/// Computable stand-in for prefix Kolmogorov complexity of an elementary state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ComplexityProxy {
    /// `K̂ = ‖encoding‖`.
    #[default]
    EncodingLength,
    /// Bits of the byte-packed encoding after DEFLATE (level 10).
    Deflate,
}

impl ComplexityProxy {
    pub fn bits(&self, state: &ElementaryState) -> u64 {
        match self {
            ComplexityProxy::EncodingLength => state.proxy_complexity(),
            ComplexityProxy::Deflate => {
                let bytes = state.encoding().to_bytes();
                8 * miniz_oxide::deflate::compress_to_vec(&bytes, 10).len() as u64
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ComplexityProxy::EncodingLength => "encoding-length",
            ComplexityProxy::Deflate => "deflate",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "encoding-length" | "length" => Some(ComplexityProxy::EncodingLength),
            "deflate" => Some(ComplexityProxy::Deflate),
            _ => None,
        }
    }
}

/// Upper bound `Ĥ(φ) = K̂(ψ) − log₂|⟨φ|ψ⟩|²` realized by `witness`.
///
/// This bounds the pure-state complexity only relative to the proxy and the
/// candidate set; it is a proxy upper bound, never the true value.
#[derive(Debug, Clone)]
pub struct ComplexityEstimate {
    pub value: f64,
    pub witness: ElementaryState,
    /// Proxy complexity of the witness in bits.
    pub k_hat: u64,
    /// `−log₂|⟨φ|ψ⟩|²`.
    pub fidelity_term: f64,
}

impl ComplexityEstimate {
    fn order(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.k_hat.cmp(&other.k_hat))
            .then_with(|| self.witness.encoding().cmp(other.witness.encoding()))
    }
}

/// Running minimum of `K̂(ψ) − log₂|⟨φ|ψ⟩|²` over offered candidates.
///
/// Ties go to lower `K̂`, then to the lexicographically smaller encoding, so the
/// result does not depend on offer order and shard minima can be merged.
#[derive(Debug, Clone)]
pub struct MinComplexity<'a> {
    target: &'a PureState,
    proxy: ComplexityProxy,
    best: Option<ComplexityEstimate>,
}

impl<'a> MinComplexity<'a> {
    pub fn new(target: &'a PureState, proxy: ComplexityProxy) -> Self {
        Self {
            target,
            proxy,
            best: None,
        }
    }

    pub fn offer(&mut self, candidate: &ElementaryState) -> Result<()> {
        let fidelity = self.target.fidelity(candidate.state())?;
        if fidelity < TOLERANCES.fidelity_floor {
            return Ok(());
        }
        let k_hat = self.proxy.bits(candidate);
        let fidelity_term = -fidelity.min(1.0).log2();
        let value = k_hat as f64 + fidelity_term;
        if let Some(best) = &self.best {
            // cheap reject before cloning the candidate
            if value > best.value {
                return Ok(());
            }
        }
        self.consider(ComplexityEstimate {
            value,
            witness: candidate.clone(),
            k_hat,
            fidelity_term,
        });
        Ok(())
    }

    fn consider(&mut self, estimate: ComplexityEstimate) {
        match &self.best {
            Some(best) if best.order(&estimate) != Ordering::Greater => {}
            _ => self.best = Some(estimate),
        }
    }

    pub fn merge(&mut self, other: MinComplexity<'_>) {
        if let Some(e) = other.best {
            self.consider(e);
        }
    }

    pub fn best(&self) -> Option<&ComplexityEstimate> {
        self.best.as_ref()
    }

    pub fn finish(self) -> Result<ComplexityEstimate> {
        self.best.ok_or(QelError::NoWitness {
            floor: TOLERANCES.fidelity_floor,
        })
    }
}

/// `Ĥ(φ)` over a codebook with the default encoding-length proxy.
pub fn complexity_upper_bound(phi: &PureState, book: &Codebook) -> Result<ComplexityEstimate> {
    complexity_upper_bound_with(phi, book.entries(), ComplexityProxy::EncodingLength)
}

pub fn complexity_upper_bound_with<'s>(
    phi: &PureState,
    candidates: impl IntoIterator<Item = &'s ElementaryState>,
    proxy: ComplexityProxy,
) -> Result<ComplexityEstimate> {
    let mut acc = MinComplexity::new(phi, proxy);
    for c in candidates {
        acc.offer(c)?;
    }
    acc.finish()
}
