//! Typed parameters and runners for every experiment.

use std::time::Instant;

use num_rational::Rational64;
use qel_core::codec::{deficiency, floor_neg_log2, string_complexity, BitString, ComplexityProxy, ElementaryProbability};
use qel_core::config::{checked_dim, DEFAULT_SAMPLE_CAP, MAX_PRECISION_BITS};
use qel_core::elfinder::{find_simple_state, sample_budget, ElSearchConfig, SearchMode, SimpleStateWitness};
use qel_core::parallel::Execution;
use qel_core::qcore::{estimate_mean_overlap, random_elementary_projector, QRng};
use qel_core::schumacher::{
    claim_experiment, coding_rank, compression_fidelity, density_matrix, typical_projector,
    von_neumann_entropy, ClaimConfig, ClaimStatus, SourceFamily, BINOMIAL_MAX_K,
};
use qel_core::QelError;

use crate::config::{ExperimentConfig, ExperimentKind, Params};
use crate::error::{HarnessError, Result};
use crate::output::{Field, ResultRow};

/// Default dyadic precision of random projector basis vectors.
pub const DEFAULT_PROJECTOR_PRECISION: u32 = 20;
const PROJECTOR_STREAM: u64 = 1;

/// Independent seed for a named sub-stream of a row seed (splitmix64 finalizer).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn usage(msg: impl Into<String>) -> HarnessError {
    HarnessError::usage(msg)
}

fn execution(p: &mut Params) -> Result<Execution> {
    match p.string("execution")?.as_deref() {
        None | Some("parallel") => Ok(Execution::Parallel),
        Some("sequential") => Ok(Execution::Sequential),
        Some(other) => Err(usage(format!("execution: \"{other}\" is not parallel or sequential"))),
    }
}

fn family(p: &mut Params) -> Result<SourceFamily> {
    match p.string("family")? {
        None => Ok(SourceFamily::Diagonal),
        Some(s) => SourceFamily::parse(&s).ok_or_else(|| usage(format!("family: \"{s}\" is not diagonal or tilted"))),
    }
}

fn proxy(p: &mut Params) -> Result<ComplexityProxy> {
    match p.string("proxy")? {
        None => Ok(ComplexityProxy::EncodingLength),
        Some(s) => ComplexityProxy::parse(&s).ok_or_else(|| usage(format!("proxy: \"{s}\" is not encoding-length or deflate"))),
    }
}

fn probabilities(p: &mut Params, key: &str, default: Option<Vec<f64>>) -> Result<Vec<f64>> {
    let values = match p.f64_list(key)? {
        Some(v) => v,
        None => default.ok_or_else(|| p.missing(key))?,
    };
    if let Some(bad) = values.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(usage(format!("{key}: {bad} violates 0 <= p <= 1")));
    }
    Ok(values)
}

fn count(p: &mut Params, key: &str) -> Result<u64> {
    let c = p.u64(key)?.unwrap_or(1);
    if c == 0 {
        return Err(usage(format!("{key} must be at least 1")));
    }
    Ok(c)
}

fn row_seed(master: u64, i: u64) -> u64 {
    master.wrapping_add(i)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapCheck {
    pub n: u32,
    pub rank: usize,
    pub samples: u64,
    pub projector_precision: u32,
    pub instances: u64,
    pub execution: Execution,
}

impl OverlapCheck {
    fn parse(p: &mut Params) -> Result<Self> {
        let n = p.u32("n")?;
        let n = p.required("n", n)?;
        let rank = p.u64("rank")?;
        let rank = p.required("rank", rank)? as usize;
        let cfg = Self {
            n,
            rank,
            samples: p.u64("samples")?.unwrap_or(10_000),
            projector_precision: p.u32("projector_precision")?.unwrap_or(DEFAULT_PROJECTOR_PRECISION),
            instances: count(p, "instances")?,
            execution: execution(p)?,
        };
        if n == 0 {
            return Err(usage("n must be at least 1"));
        }
        let dim = checked_dim(n)?;
        if rank == 0 || rank > dim {
            return Err(usage(format!("rank = {rank} violates 1 <= rank <= 2^n = {dim}")));
        }
        if cfg.samples < 2 {
            return Err(usage("samples must be at least 2"));
        }
        check_precision("projector_precision", cfg.projector_precision)?;
        Ok(cfg)
    }

    fn run(&self, master: u64) -> Result<Vec<ResultRow>> {
        (0..self.instances)
            .map(|i| {
                let seed = row_seed(master, i);
                let start = Instant::now();
                let mut rng = QRng::new(derive_seed(seed, PROJECTOR_STREAM));
                let proj = random_elementary_projector(self.n, self.rank, self.projector_precision, &mut rng)?;
                let est = estimate_mean_overlap(&proj, self.samples, seed, self.execution)?;
                let mut row = ResultRow::new("overlap-check", seed)
                    .param("n", self.n)
                    .param("rank", self.rank as u64)
                    .param("samples", self.samples)
                    .param("projector_precision", self.projector_precision)
                    .param("seed", seed)
                    .metric("expected", est.expected)
                    .metric("mean_overlap", est.mean)
                    .metric("se", est.se)
                    .metric("z_score", est.z_score())
                    .metric("within_4se", est.z_score().abs() <= 4.0);
                row.wall_time_s = start.elapsed().as_secs_f64();
                Ok(row)
            })
            .collect()
    }
}

fn check_precision(key: &str, bits: u32) -> Result<()> {
    if !(2..=MAX_PRECISION_BITS).contains(&bits) {
        return Err(usage(format!("{key} = {bits} violates 2 <= {key} <= {MAX_PRECISION_BITS}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FindSimple {
    pub n: u32,
    pub m: u32,
    pub d: u64,
    pub rank: usize,
    pub precision_bits: u32,
    pub projector_precision: u32,
    pub mode: SearchMode,
    pub proxy: ComplexityProxy,
    pub sample_cap: u64,
    pub instances: u64,
    pub execution: Execution,
}

impl FindSimple {
    fn parse(p: &mut Params) -> Result<Self> {
        let n = p.u32("n")?;
        let n = p.required("n", n)?;
        let m = p.u32("m")?;
        let m = p.required("m", m)?;
        let d = p.u64("d")?;
        let d = p.required("d", d)?;
        if n == 0 {
            return Err(usage("n must be at least 1"));
        }
        if m >= n {
            return Err(usage(format!("m = {m} violates the constraint m < n (n = {n})")));
        }
        if d == 0 {
            return Err(usage("d must be at least 1"));
        }
        let dim = checked_dim(n)?;
        let rank = p.u64("rank")?.map_or(1usize << m, |r| r as usize);
        if rank < (1usize << m) || rank > dim {
            return Err(usage(format!("rank = {rank} violates 2^m <= rank <= 2^n ({} ..= {dim})", 1usize << m)));
        }
        let base = ElSearchConfig::new(n, m, d, 0);
        let mode = match p.string("mode")?.as_deref() {
            None | Some("first-hit") => SearchMode::FirstHit,
            Some("best-of-n") => SearchMode::BestOfN,
            Some(other) => return Err(usage(format!("mode: \"{other}\" is not first-hit or best-of-n"))),
        };
        let cfg = Self {
            n,
            m,
            d,
            rank,
            precision_bits: p.u32("precision_bits")?.unwrap_or(base.precision_bits),
            projector_precision: p.u32("projector_precision")?.unwrap_or(DEFAULT_PROJECTOR_PRECISION),
            mode,
            proxy: proxy(p)?,
            sample_cap: p.u64("sample_cap")?.unwrap_or(DEFAULT_SAMPLE_CAP),
            instances: count(p, "instances")?,
            execution: execution(p)?,
        };
        check_precision("precision_bits", cfg.precision_bits)?;
        check_precision("projector_precision", cfg.projector_precision)?;
        sample_budget(&cfg.search(0))?;
        Ok(cfg)
    }

    fn search(&self, seed: u64) -> ElSearchConfig {
        let mut s = ElSearchConfig::new(self.n, self.m, self.d, seed);
        s.precision_bits = self.precision_bits;
        s.mode = self.mode;
        s.proxy = self.proxy;
        s.sample_cap = self.sample_cap;
        s.execution = self.execution;
        s
    }

    fn run(&self, master: u64) -> Result<Vec<ResultRow>> {
        (0..self.instances).map(|i| self.run_one(row_seed(master, i))).collect()
    }

    fn run_one(&self, seed: u64) -> Result<ResultRow> {
        let start = Instant::now();
        let search = self.search(seed);
        let budget = sample_budget(&search)?;
        let mut rng = QRng::new(derive_seed(seed, PROJECTOR_STREAM));
        let proj = random_elementary_projector(self.n, self.rank, self.projector_precision, &mut rng)?;
        let result = find_simple_state(&proj, &search);
        let (w, best_overlap) = match result {
            Ok(w) => (Some(w), None),
            Err(QelError::ThresholdMiss { best_overlap, .. }) => (None, Some(best_overlap)),
            Err(e) => return Err(e.into()),
        };
        let w: Option<&SimpleStateWitness> = w.as_ref();
        let mode = match self.mode {
            SearchMode::FirstHit => "first-hit",
            SearchMode::BestOfN => "best-of-n",
        };
        let witness_format = w.map(|w| {
            if w.h_bound.witness.encoding().bits().first() == Some(&false) {
                "stream"
            } else {
                "literal"
            }
        });
        let mut row = ResultRow::new("find-simple", seed)
            .param("n", self.n)
            .param("m", self.m)
            .param("d", self.d)
            .metric("N", budget)
            .param("seed", seed)
            .metric("overlap", Field::opt_real(w.map(|w| w.overlap)))
            .metric("threshold", search.threshold())
            .metric("K_hat_sampled", Field::opt_uint(w.map(|w| w.k_hat_sampled)))
            .metric("H_hat_bound", Field::opt_real(w.map(|w| w.h_bound.value)))
            .metric("reference_3nm", SimpleStateWitness::reference_bits(self.n, self.m))
            .metric("samples_used", w.map_or(budget, |w| w.samples_used))
            .param("rank", self.rank as u64)
            .param("precision_bits", self.precision_bits)
            .param("projector_precision", self.projector_precision)
            .param("mode", mode)
            .param("proxy", self.proxy.name())
            .param("sample_cap", self.sample_cap)
            .metric("status", if w.is_some() { "found" } else { "threshold-miss" })
            .metric("sample_index", Field::opt_uint(w.map(|w| w.sample_index)))
            .metric("best_overlap", Field::opt_real(best_overlap.or(w.map(|w| w.overlap))))
            .metric("log2_N", (budget as f64).log2())
            .metric("witness_K_hat", Field::opt_uint(w.map(|w| w.h_bound.k_hat)))
            .metric("witness_fidelity_term", Field::opt_real(w.map(|w| w.h_bound.fidelity_term)))
            .metric("witness_format", witness_format.map_or(Field::Empty, Field::from));
        row.wall_time_s = start.elapsed().as_secs_f64();
        Ok(row)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entropy {
    pub family: SourceFamily,
    pub p: Vec<f64>,
}

impl Entropy {
    fn parse(p: &mut Params) -> Result<Self> {
        Ok(Self {
            family: family(p)?,
            p: probabilities(p, "p", None)?,
        })
    }

    fn run(&self, seed: u64) -> Result<Vec<ResultRow>> {
        self.p
            .iter()
            .map(|&prob| {
                let start = Instant::now();
                let rho = density_matrix(&self.family.source(prob)?);
                let eig = rho.eigenvalues()?;
                let s = von_neumann_entropy(&rho)?;
                let mut row = ResultRow::new("entropy", seed)
                    .param("family", self.family.name())
                    .param("p", prob)
                    .param("seed", seed)
                    .metric("S", s)
                    .metric("lambda_max", eig[0])
                    .metric("lambda_min", eig[eig.len() - 1].max(0.0));
                row.wall_time_s = start.elapsed().as_secs_f64();
                Ok(row)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Compression {
    pub family: SourceFamily,
    pub p: Vec<f64>,
    pub k: u32,
    pub rates: Vec<f64>,
    pub epsilon: Option<f64>,
}

impl Compression {
    fn parse(p: &mut Params) -> Result<Self> {
        let family = family(p)?;
        let probs = probabilities(p, "p", None)?;
        let k = p.u32("k")?;
        let k = p.required("k", k)?;
        let rates = p.f64_list("rates")?;
        let rates = p.required("rates", rates)?;
        let epsilon = p.f64("epsilon")?;
        if !(1..=BINOMIAL_MAX_K).contains(&k) {
            return Err(usage(format!("k = {k} violates 1 <= k <= {BINOMIAL_MAX_K}")));
        }
        if let Some(bad) = rates.iter().find(|r| !(0.0..=1.0).contains(*r)) {
            return Err(usage(format!("rates: {bad} violates 0 <= rate <= 1")));
        }
        if let Some(e) = epsilon {
            if !(e > 0.0) {
                return Err(usage(format!("epsilon = {e} violates epsilon > 0")));
            }
            checked_dim(k)?;
        }
        Ok(Self {
            family,
            p: probs,
            k,
            rates,
            epsilon,
        })
    }

    fn run(&self, seed: u64) -> Result<Vec<ResultRow>> {
        let mut rows = Vec::new();
        for &prob in &self.p {
            let source = self.family.source(prob)?;
            let s = von_neumann_entropy(&density_matrix(&source))?;
            let typical = match self.epsilon {
                Some(eps) => match typical_projector(&density_matrix(&source), self.k, eps) {
                    Ok(t) => Some((Field::UInt(t.rank() as u64), Field::Real(t.rate()))),
                    Err(QelError::Argument(_)) => Some((Field::UInt(0), Field::Empty)),
                    Err(e) => return Err(e.into()),
                },
                None => None,
            };
            for &rate in &self.rates {
                let start = Instant::now();
                let fidelity = compression_fidelity(&source, self.k, rate)?;
                let rank = coding_rank(self.k, rate).min(1u128 << self.k);
                let (t_rank, t_rate) = typical.clone().unwrap_or((Field::Empty, Field::Empty));
                let mut row = ResultRow::new("compression", seed)
                    .param("family", self.family.name())
                    .param("p", prob)
                    .param("k", self.k)
                    .param("rate", rate)
                    .param("epsilon", Field::opt_real(self.epsilon))
                    .param("seed", seed)
                    .metric("S", s)
                    .metric("coding_rank", Field::Big(rank))
                    .metric("fidelity", fidelity)
                    .metric("typical_rank", t_rank)
                    .metric("typical_rate", t_rate);
                row.wall_time_s = start.elapsed().as_secs_f64();
                rows.push(row);
            }
        }
        Ok(rows)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClaimSweep {
    pub family: SourceFamily,
    pub p: Vec<f64>,
    pub k: u32,
    pub d: u64,
    pub seeds: u64,
    pub proxy: ComplexityProxy,
    pub execution: Execution,
}

/// `0.5, 0.55, …, 0.95`.
pub fn default_claim_grid() -> Vec<f64> {
    (0..10).map(|i| (50.0 + 5.0 * i as f64) / 100.0).collect()
}

impl ClaimSweep {
    fn parse(p: &mut Params) -> Result<Self> {
        let cfg = Self {
            family: family(p)?,
            p: probabilities(p, "p", Some(default_claim_grid()))?,
            k: p.u32("k")?.unwrap_or(8),
            d: p.u64("d")?.unwrap_or(5),
            seeds: count(p, "seeds")?,
            proxy: proxy(p)?,
            execution: execution(p)?,
        };
        if cfg.k < 2 {
            return Err(usage(format!("k = {} violates k >= 2 (m < n needs n >= 2)", cfg.k)));
        }
        if cfg.d == 0 {
            return Err(usage("d must be at least 1"));
        }
        checked_dim(cfg.k)?;
        // The largest budget occurs at m = 0.
        let worst = ElSearchConfig::new(cfg.k, 0, cfg.d, 0);
        sample_budget(&worst)?;
        Ok(cfg)
    }

    fn run(&self, master: u64) -> Result<Vec<ResultRow>> {
        let mut rows = Vec::new();
        for i in 0..self.seeds {
            let seed = row_seed(master, i);
            for &prob in &self.p {
                let start = Instant::now();
                let mut cfg = ClaimConfig::new(self.family, vec![prob], self.k, self.d, vec![seed]);
                cfg.proxy = self.proxy;
                cfg.execution = self.execution;
                let r = claim_experiment(&cfg)?.remove(0);
                let (status, best) = match r.status {
                    ClaimStatus::Found => ("found", r.overlap),
                    ClaimStatus::ThresholdMiss { best_overlap } => ("threshold-miss", Some(best_overlap)),
                };
                let mut row = ResultRow::new("claim-sweep", seed)
                    .param("family", self.family.name())
                    .param("p", prob)
                    .param("k", self.k)
                    .param("d", self.d)
                    .param("proxy", self.proxy.name())
                    .param("seed", seed)
                    .metric("S", r.entropy)
                    .metric("m", r.m)
                    .metric("n", r.n)
                    .metric("captured_mass", r.captured_mass)
                    .metric("threshold", r.threshold)
                    .metric("overlap", Field::opt_real(r.overlap))
                    .metric("H_hat_bound", Field::opt_real(r.h_bound))
                    .metric("K_hat_sampled", Field::opt_uint(r.k_hat_sampled))
                    .metric("reference_3nm", r.reference_bits)
                    .metric("sample_index", Field::opt_uint(r.sample_index))
                    .metric("samples_used", r.samples_used)
                    .metric("N", r.budget)
                    .metric("status", status)
                    .metric("best_overlap", Field::opt_real(best));
                row.wall_time_s = start.elapsed().as_secs_f64();
                rows.push(row);
            }
        }
        Ok(rows)
    }
}

/// Largest `|x|` for which the default support `{0,1}^|x|` is enumerated.
pub const MAX_DEFAULT_SUPPORT_BITS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Deficiency {
    pub x: Vec<BitString>,
    /// Explicit support with integer weights; uniform over `{0,1}^|x|` when absent.
    pub support: Option<(Vec<BitString>, Vec<u64>)>,
}

fn bits(s: &str) -> Result<BitString> {
    s.parse().map_err(|e: QelError| usage(format!("\"{s}\" is not a bit string: {e}")))
}

impl Deficiency {
    fn parse(p: &mut Params) -> Result<Self> {
        let xs = p.string_list("x")?;
        let xs = p.required("x", xs)?;
        let x = xs.iter().map(|s| bits(s)).collect::<Result<Vec<_>>>()?;
        let support = p.string_list("support")?;
        let weights = p.u64_list("weights")?;
        let support = match (support, weights) {
            (None, None) => {
                if let Some(long) = x.iter().find(|s| s.len() > MAX_DEFAULT_SUPPORT_BITS) {
                    return Err(usage(format!(
                        "x = {long} violates |x| <= {MAX_DEFAULT_SUPPORT_BITS} for the default uniform support"
                    )));
                }
                None
            }
            (None, Some(_)) => return Err(usage("weights given without support")),
            (Some(s), w) => {
                let s = s.iter().map(|t| bits(t)).collect::<Result<Vec<_>>>()?;
                let w = w.unwrap_or_else(|| vec![1; s.len()]);
                if w.len() != s.len() || w.contains(&0) {
                    return Err(usage("weights must be positive and match support in length"));
                }
                Some((s, w))
            }
        };
        let cfg = Self { x, support };
        for x in &cfg.x {
            cfg.measure(x)?;
        }
        Ok(cfg)
    }

    fn measure(&self, x: &BitString) -> Result<ElementaryProbability> {
        match &self.support {
            None => {
                let len = x.len() as u32;
                let strings = (0..1u64 << len).map(|v| BitString::from_u64_fixed(v, len)).collect();
                Ok(ElementaryProbability::uniform(strings)?)
            }
            Some((s, w)) => {
                let total: u64 = w.iter().sum();
                let total = i64::try_from(total).map_err(|_| usage("weights sum overflows"))?;
                let q = ElementaryProbability::new(
                    s.iter().cloned().zip(w.iter().map(|&wi| Rational64::new(wi as i64, total))).collect(),
                )?;
                if q.probability(x).is_none() {
                    return Err(usage(format!("x = {x} is not in the support")));
                }
                Ok(q)
            }
        }
    }

    fn run(&self, seed: u64) -> Result<Vec<ResultRow>> {
        self.x
            .iter()
            .map(|x| {
                let start = Instant::now();
                let q = self.measure(x)?;
                let qx = q.probability(x).expect("checked during parsing");
                let mut row = ResultRow::new("deficiency", seed)
                    .param("x", x.to_string())
                    .param("support", if self.support.is_some() { "explicit" } else { "uniform" })
                    .param("seed", seed)
                    .metric("support_size", q.support().len() as u64)
                    .metric("Q_x", qx.to_string())
                    .metric("floor_neg_log2_Q", floor_neg_log2(qx)?)
                    .metric("K_hat", string_complexity(x))
                    .metric("deficiency", deficiency(x, &q)?);
                row.wall_time_s = start.elapsed().as_secs_f64();
                Ok(row)
            })
            .collect()
    }
}

/// A validated experiment ready to run.
#[derive(Debug, Clone, PartialEq)]
pub enum Experiment {
    OverlapCheck(OverlapCheck),
    FindSimple(FindSimple),
    Entropy(Entropy),
    Compression(Compression),
    ClaimSweep(ClaimSweep),
    Deficiency(Deficiency),
}

impl Experiment {
    /// Check required keys, reject unknown ones and validate ranges.
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self> {
        let mut p = Params::new(cfg);
        let exp = match cfg.experiment {
            ExperimentKind::OverlapCheck => Experiment::OverlapCheck(OverlapCheck::parse(&mut p)?),
            ExperimentKind::FindSimple => Experiment::FindSimple(FindSimple::parse(&mut p)?),
            ExperimentKind::Entropy => Experiment::Entropy(Entropy::parse(&mut p)?),
            ExperimentKind::Compression => Experiment::Compression(Compression::parse(&mut p)?),
            ExperimentKind::ClaimSweep => Experiment::ClaimSweep(ClaimSweep::parse(&mut p)?),
            ExperimentKind::Deficiency => Experiment::Deficiency(Deficiency::parse(&mut p)?),
        };
        p.finish()?;
        Ok(exp)
    }

    pub fn run(&self, master_seed: u64) -> Result<Vec<ResultRow>> {
        match self {
            Experiment::OverlapCheck(e) => e.run(master_seed),
            Experiment::FindSimple(e) => e.run(master_seed),
            Experiment::Entropy(e) => e.run(master_seed),
            Experiment::Compression(e) => e.run(master_seed),
            Experiment::ClaimSweep(e) => e.run(master_seed),
            Experiment::Deficiency(e) => e.run(master_seed),
        }
    }
}
