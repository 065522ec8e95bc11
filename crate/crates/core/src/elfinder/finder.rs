use super::hoeffding::{overlap_threshold, sample_budget_for};
use crate::codec::{
    enumerate_codebook, ComplexityEstimate, ComplexityProxy, ElementaryState, MinComplexity,
    StreamRef,
};
use crate::config::{checked_dim, DEFAULT_SAMPLE_CAP, MAX_PRECISION_BITS};
use crate::parallel::{shard_ranges, shard_seed, Execution};
use crate::qcore::{project_into_image, PureState, Projector, QRng};
use crate::{QelError, Result};

/// Which qualifying sample the search returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchMode {
    /// First sample in stream order whose overlap reaches the threshold.
    #[default]
    FirstHit,
    /// Largest overlap among all `N` samples (lowest index on ties).
    BestOfN,
}

/// Parameters of one simple-state search.
#[derive(Debug, Clone, PartialEq)]
pub struct ElSearchConfig {
    pub n: u32,
    /// The projector must have rank at least `2^m`.
    pub m: u32,
    /// Confidence knob: the Hoeffding tail at the budget is `exp(−d)`.
    pub d: u64,
    pub precision_bits: u32,
    pub seed: u64,
    /// Largest admissible `N`.
    pub sample_cap: u64,
    pub mode: SearchMode,
    pub proxy: ComplexityProxy,
    pub execution: Execution,
}

impl ElSearchConfig {
    /// Defaults: `precision_bits = n + d + 8` (capped), first-hit mode,
    /// encoding-length proxy, parallel execution.
    pub fn new(n: u32, m: u32, d: u64, seed: u64) -> Self {
        let precision = (n as u64 + d + 8).min(MAX_PRECISION_BITS as u64) as u32;
        Self {
            n,
            m,
            d,
            precision_bits: precision,
            seed,
            sample_cap: DEFAULT_SAMPLE_CAP,
            mode: SearchMode::FirstHit,
            proxy: ComplexityProxy::EncodingLength,
            execution: Execution::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(QelError::arg("n must be >= 1"));
        }
        checked_dim(self.n)?;
        sample_budget_for(self.n, self.m, self.d)?;
        if !(2..=MAX_PRECISION_BITS).contains(&self.precision_bits) {
            return Err(QelError::arg(format!(
                "precision_bits {} outside 2..={MAX_PRECISION_BITS}",
                self.precision_bits
            )));
        }
        Ok(())
    }

    pub fn threshold(&self) -> f64 {
        overlap_threshold(self.n, self.m)
    }

    fn stream_ref(&self, index: u64) -> StreamRef {
        StreamRef {
            n_qubits: self.n,
            m: self.m,
            d: self.d,
            precision_bits: self.precision_bits,
            seed: self.seed,
            index,
        }
    }
}

/// `N = ceil(d·2^(2(n−m)+1))`, refused when above the config's sample cap.
pub fn sample_budget(config: &ElSearchConfig) -> Result<u64> {
    let n = sample_budget_for(config.n, config.m, config.d)?;
    if n > config.sample_cap {
        return Err(QelError::Resource(format!(
            "sample budget N = {n} exceeds the cap {}",
            config.sample_cap
        )));
    }
    Ok(n)
}

/// Round each amplitude component to the nearest multiple of `2^-precision_bits`.
///
/// Fidelity to the input is at least `1 − 2^(n+2−2·precision_bits)`, see
/// [`rationalization_fidelity_bound`].
pub fn rationalize(psi: &PureState, precision_bits: u32) -> Result<ElementaryState> {
    if precision_bits < 2 {
        return Err(QelError::arg("precision_bits must be >= 2"));
    }
    ElementaryState::from_dyadic_rounding(psi, precision_bits)
}

/// `1 − 2^(n+2−2p)`: each of the `2^(n+1)` real components moves by at most
/// `2^(−p−1)`, so the rounding error has squared norm at most `2^(n−1−2p)`.
pub fn rationalization_fidelity_bound(n_qubits: u32, precision_bits: u32) -> f64 {
    1.0 - (n_qubits as f64 + 2.0 - 2.0 * precision_bits as f64).exp2()
}

/// Output of [`find_simple_state`].
#[derive(Debug, Clone)]
pub struct SimpleStateWitness {
    /// The rounded Haar sample `ψ_i`.
    pub sampled: ElementaryState,
    /// `φ = Pψ_i / √⟨ψ_i|P|ψ_i⟩`.
    pub image_state: PureState,
    /// `⟨ψ_i|P|ψ_i⟩ = |⟨ψ_i|φ⟩|²`.
    pub overlap: f64,
    pub threshold: f64,
    /// Stream position of `ψ_i`.
    pub sample_index: u64,
    /// Samples examined until the returned one was fixed.
    pub samples_used: u64,
    /// The budget `N`; all `N` samples are candidates for `ĥ_bound`.
    pub budget: u64,
    pub log2_n: f64,
    /// Proxy upper bound `Ĥ(φ)` over the `N` samples plus simple states.
    pub h_bound: ComplexityEstimate,
    /// Proxy complexity of `ψ_i` under the configured proxy.
    pub k_hat_sampled: u64,
}

impl SimpleStateWitness {
    /// `3(n − m)`, the scale of the bound the search realizes.
    pub fn reference_bits(n: u32, m: u32) -> f64 {
        3.0 * (n as f64 - m as f64)
    }
}

#[derive(Debug, Clone, Copy)]
struct Hit {
    index: u64,
    overlap: f64,
}

fn for_each_sample(
    config: &ElSearchConfig,
    shard: u64,
    range: std::ops::Range<u64>,
    mut f: impl FnMut(u64, ElementaryState) -> Result<bool>,
) -> Result<()> {
    let dim = 1usize << config.n;
    let mut rng = QRng::new(shard_seed(config.seed, shard));
    for index in range {
        let psi = crate::qcore::state_draw(config.n, dim, &mut rng);
        let elem = ElementaryState::from_stream_sample(config.stream_ref(index), &psi)?;
        if !f(index, elem)? {
            break;
        }
    }
    Ok(())
}

/// Scan shard for the first qualifying sample (or the best one in best-of-N
/// mode). Returns the chosen hit, if any, and the best overlap seen.
fn scan_shard(
    config: &ElSearchConfig,
    p: &Projector,
    shard: u64,
    range: std::ops::Range<u64>,
) -> Result<(Option<Hit>, f64)> {
    let threshold = config.threshold();
    let mut best = f64::NEG_INFINITY;
    let mut best_index = 0;
    let mut first = None;
    for_each_sample(config, shard, range, |index, elem| {
        let ov = p.overlap_via_basis(elem.state())?;
        if ov > best {
            best = ov;
            best_index = index;
        }
        if ov >= threshold && config.mode == SearchMode::FirstHit {
            first = Some(Hit { index, overlap: ov });
            return Ok(false);
        }
        Ok(true)
    })?;
    let chosen = match config.mode {
        SearchMode::FirstHit => first,
        SearchMode::BestOfN => (best >= threshold).then_some(Hit {
            index: best_index,
            overlap: best,
        }),
    };
    Ok((chosen, best))
}

const SHARDS_PER_BATCH: u64 = 16;

/// Draw up to `N` rounded Haar samples and return the first (by stream
/// position) whose overlap with `P` reaches `2^(m−n−1)`, together with its
/// normalized image in `P` and `Ĥ` of that image.
///
/// Requires `rank(P) >= 2^m`. A miss after `N` draws is a
/// [`QelError::ThresholdMiss`] carrying the best overlap seen.
pub fn find_simple_state(p: &Projector, config: &ElSearchConfig) -> Result<SimpleStateWitness> {
    config.validate()?;
    if p.n_qubits() != config.n {
        return Err(QelError::DimensionMismatch {
            expected: 1usize << config.n,
            actual: p.dim(),
        });
    }
    if (p.rank() as u64) < (1u64 << config.m) {
        return Err(QelError::arg(format!(
            "projector rank {} is below 2^m = {}",
            p.rank(),
            1u64 << config.m
        )));
    }
    let budget = sample_budget(config)?;
    let threshold = config.threshold();
    let shards: Vec<_> = shard_ranges(budget).collect();

    let mut chosen: Option<Hit> = None;
    let mut best_overlap = f64::NEG_INFINITY;
    for batch in shards.chunks(SHARDS_PER_BATCH as usize) {
        let results = config
            .execution
            .map_slice(batch, |(shard, range)| scan_shard(config, p, *shard, range.clone()));
        for r in results {
            let (hit, best) = r?;
            best_overlap = best_overlap.max(best);
            if let Some(h) = hit {
                chosen = match (chosen, config.mode) {
                    (None, _) => Some(h),
                    (Some(c), SearchMode::BestOfN) if h.overlap > c.overlap => Some(h),
                    (c, _) => c,
                };
            }
        }
        if chosen.is_some() && config.mode == SearchMode::FirstHit {
            break;
        }
    }
    let Some(hit) = chosen else {
        return Err(QelError::ThresholdMiss {
            threshold,
            samples: budget,
            best_overlap,
        });
    };

    let sampled = ElementaryState::from_stream(config.stream_ref(hit.index))?;
    let image_state = project_into_image(p, sampled.state())?;
    let overlap = sampled.state().fidelity(&image_state)?;
    debug_assert!((overlap - hit.overlap).abs() < 1e-9);

    let h_bound = image_complexity(config, &image_state, budget, &sampled)?;
    let k_hat_sampled = config.proxy.bits(&sampled);
    let samples_used = match config.mode {
        SearchMode::FirstHit => hit.index + 1,
        SearchMode::BestOfN => budget,
    };
    Ok(SimpleStateWitness {
        sampled,
        image_state,
        overlap,
        threshold,
        sample_index: hit.index,
        samples_used,
        budget,
        log2_n: (budget as f64).log2(),
        h_bound,
        k_hat_sampled,
    })
}

/// `Ĥ(φ)` over all `N` stream samples and the enumerated simple states that
/// could still beat the sampled witness.
fn image_complexity(
    config: &ElSearchConfig,
    phi: &PureState,
    budget: u64,
    sampled: &ElementaryState,
) -> Result<ComplexityEstimate> {
    let mut acc = MinComplexity::new(phi, config.proxy);
    acc.offer(sampled)?;
    let ceiling = acc.best().map(|b| b.value).unwrap_or(f64::INFINITY);

    let shards: Vec<_> = shard_ranges(budget).collect();
    let partials = config.execution.map_slice(&shards, |(shard, range)| {
        let mut local = MinComplexity::new(phi, config.proxy);
        for_each_sample(config, *shard, range.clone(), |_, elem| {
            local.offer(&elem)?;
            Ok(true)
        })?;
        Ok::<_, QelError>(local)
    });
    for partial in partials {
        acc.merge(partial?);
    }

    if ceiling.is_finite() {
        let book = enumerate_codebook(config.n, ceiling.floor() as u64)?;
        for e in book.entries() {
            acc.offer(e)?;
        }
    }
    acc.finish()
}
