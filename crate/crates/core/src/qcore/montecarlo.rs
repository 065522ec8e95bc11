use super::{state_draw, Projector, QRng};
use crate::parallel::{shard_ranges, shard_seed, Execution};
use crate::stats::mean_and_se;
use crate::{QelError, Result};

/// Sample mean of `⟨ψ|P|ψ⟩` over Haar-random `ψ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapEstimate {
    pub samples: u64,
    pub mean: f64,
    /// Standard error of the mean.
    pub se: f64,
    /// `rank / 2^n`.
    pub expected: f64,
}

impl OverlapEstimate {
    /// `(mean − expected) / se`.
    pub fn z_score(&self) -> f64 {
        (self.mean - self.expected) / self.se
    }
}

/// Overlaps of the first `samples` states of the sharded Haar stream rooted at
/// `seed`, in stream order.
pub fn haar_overlaps(p: &Projector, samples: u64, seed: u64, execution: Execution) -> Result<Vec<f64>> {
    if samples == 0 {
        return Err(QelError::arg("need at least one sample"));
    }
    let shards: Vec<_> = shard_ranges(samples).collect();
    let n = p.n_qubits();
    let dim = p.dim();
    let chunks = execution.map_slice(&shards, |(shard, range)| {
        let mut rng = QRng::new(shard_seed(seed, *shard));
        range
            .clone()
            .map(|_| p.overlap_via_basis(&state_draw(n, dim, &mut rng)))
            .collect::<Result<Vec<f64>>>()
    });
    let mut out = Vec::with_capacity(samples as usize);
    for c in chunks {
        out.extend(c?);
    }
    Ok(out)
}

pub fn estimate_mean_overlap(
    p: &Projector,
    samples: u64,
    seed: u64,
    execution: Execution,
) -> Result<OverlapEstimate> {
    let values = haar_overlaps(p, samples, seed, execution)?;
    let (mean, se) = mean_and_se(&values);
    Ok(OverlapEstimate {
        samples,
        mean,
        se,
        expected: p.rank() as f64 / p.dim() as f64,
    })
}
