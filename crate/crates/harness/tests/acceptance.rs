//! Acceptance gate. Each test checks one criterion and reports a single
//! `criterion N: PASS|FAIL ...` line on stderr, uncaptured, so the report is
//! visible in a plain `cargo test` run.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

use qel_core::codec::{decode_elementary_state, BitString, ComplexRational, ElementaryState, StreamRef};
use qel_core::elfinder::{
    find_simple_state, find_simple_state_computable, hoeffding_tail, limit_slack, overlap_threshold,
    sample_budget, sample_budget_for, ApproxProjectorProgram, ElSearchConfig,
};
use qel_core::parallel::Execution;
use qel_core::qcore::{
    estimate_mean_overlap, haar_sample, random_elementary_projector, CMatrix, CVector, DensityMatrix, QRng, C64,
};
use qel_core::schumacher::{
    claim_experiment, compression_fidelity, density_matrix, trend_by_seed, typical_projector, von_neumann_entropy,
    ClaimConfig, ClaimStatus, SourceFamily,
};
use qel_core::QelError;
use num_rational::Rational64;
use rand::Rng;

fn report(criterion: u32, pass: bool, detail: String, start: Instant) {
    let line = format!(
        "criterion {criterion}: {} {detail} ({:.1} s)\n",
        if pass { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
}

#[test]
fn criterion_1_haar_moment() {
    let start = Instant::now();
    let mut rng = QRng::new(0xC1);
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for i in 0..20u64 {
        let n = rng.random_range(1..=8u32);
        let rank = rng.random_range(1..(1usize << n));
        let p = random_elementary_projector(n, rank, 20, &mut rng).unwrap();
        let est = estimate_mean_overlap(&p, 10_000, 1000 + i, Execution::default()).unwrap();
        // Oracle: E⟨ψ|P|ψ⟩ = rank / 2^n under the Haar measure.
        let oracle = rank as f64 / (1u64 << n) as f64;
        let z = (est.mean - oracle).abs() / est.se;
        worst = worst.max(z);
        if !(z <= 4.0) {
            failures.push((n, rank, est.mean, oracle, est.se));
        }
    }
    let pass = failures.is_empty() && start.elapsed().as_secs() < 60;
    report(1, pass, format!("20 projectors, worst |mean - r/2^n| = {worst:.2} SE"), start);
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_2_budget_identity() {
    let start = Instant::now();
    let mut rng = QRng::new(0xC2);
    let mut failures = 0;
    for _ in 0..1000 {
        let n = rng.random_range(1..=40u32);
        let m = rng.random_range(n.saturating_sub(25)..n);
        let d = rng.random_range(1..=50u64);
        let mut cfg = ElSearchConfig::new(n, m, d, rng.random());
        cfg.sample_cap = u64::MAX;
        let budget = sample_budget(&cfg).unwrap();
        // Oracle: N = d·2^(2(n−m)+1) and t = 2^(m−n−1), so 2Nt² = d.
        let expected_budget = d << (2 * (n - m) + 1);
        let t = overlap_threshold(n, m);
        let tail = hoeffding_tail(budget, n, m);
        if budget != expected_budget || t != (m as f64 - n as f64 - 1.0).exp2() || !(tail <= (-(d as f64)).exp()) {
            failures += 1;
        }
    }
    let pass = failures == 0 && start.elapsed().as_secs_f64() < 1.0;
    report(2, pass, format!("1000 configs, {failures} violations"), start);
    assert_eq!(failures, 0);
}

#[test]
fn criterion_3_finder_certification() {
    let start = Instant::now();
    let mut rng = QRng::new(0xC3);
    let mut failures = Vec::new();
    for i in 0..100u64 {
        let n = if i % 2 == 0 { 4 } else { 6 };
        let m = rng.random_range(1..n);
        let rank = rng.random_range((1usize << m)..=(1usize << n) - 1);
        let p = random_elementary_projector(n, rank, 20, &mut rng).unwrap();
        let w = find_simple_state(&p, &ElSearchConfig::new(n, m, 5, 500 + i)).unwrap();
        let phi = w.image_state.amplitudes();
        let defect = (p.matrix() * phi - phi).camax();
        if w.overlap < overlap_threshold(n, m) || defect > 1e-9 {
            failures.push((n, m, rank, w.overlap, defect));
        }
    }
    let mut misses = 0;
    for i in 0..200u64 {
        let mut prng = QRng::new(10_000 + i);
        let p = random_elementary_projector(6, 8, 20, &mut prng).unwrap();
        match find_simple_state(&p, &ElSearchConfig::new(6, 3, 5, 20_000 + i)) {
            Ok(_) => {}
            Err(QelError::ThresholdMiss { .. }) => misses += 1,
            Err(e) => panic!("{e}"),
        }
    }
    let pass = failures.is_empty() && misses <= 4 && start.elapsed().as_secs() < 300;
    report(
        3,
        pass,
        format!("100 witnesses, {} invalid; {misses}/200 threshold misses at n=6 m=3", failures.len()),
        start,
    );
    assert!(failures.is_empty(), "{failures:?}");
    assert!(misses <= 4);
}

#[test]
fn criterion_4_entropy_anchors() {
    let start = Instant::now();
    let mut errors: Vec<(String, f64)> = Vec::new();

    let mut rng = QRng::new(0xC4);
    let psi = haar_sample(3, &mut rng).unwrap();
    let v = psi.amplitudes();
    let pure = DensityMatrix::new(v * v.adjoint()).unwrap();
    errors.push(("pure Haar state".into(), von_neumann_entropy(&pure).unwrap().abs()));
    let tilted_pure = density_matrix(&SourceFamily::Tilted.source(1.0).unwrap());
    errors.push(("pure source".into(), von_neumann_entropy(&tilted_pure).unwrap().abs()));
    for n in 1..=6u32 {
        let s = von_neumann_entropy(&DensityMatrix::maximally_mixed(n).unwrap()).unwrap();
        errors.push((format!("I/2^{n}"), (s - n as f64).abs()));
    }
    // Oracle: H₂(1/4) = 2 − (3/4)·log₂3, with log₂3 = 1.5849625007211561814537389439478...
    let log2_3 = 1.584_962_500_721_156_2_f64;
    let h = 2.0 - 0.75 * log2_3;
    let diag = DensityMatrix::new(CMatrix::from_diagonal(&CVector::from_vec(vec![
        C64::new(0.75, 0.0),
        C64::new(0.25, 0.0),
    ])))
    .unwrap();
    let s = von_neumann_entropy(&diag).unwrap();
    let pass_anchor = (s - 0.811278).abs() <= 1e-5 && (s - h).abs() <= 1e-12;
    let pass = errors.iter().all(|(_, e)| *e <= 1e-10) && pass_anchor;
    report(4, pass, format!("S(diag(3/4,1/4)) = {s:.9}, oracle {h:.9}"), start);
    assert!(errors.iter().all(|(_, e)| *e <= 1e-10), "{errors:?}");
    assert!(pass_anchor);
}

#[test]
fn criterion_5_typical_rank() {
    let start = Instant::now();
    let (k, eps) = (10u32, 0.2);
    let rho = density_matrix(&SourceFamily::Diagonal.source(0.75).unwrap());
    let t = typical_projector(&rho, k, eps).unwrap();
    // Oracle: enumerate all 2^10 eigenvalues of diag(3/4,1/4)^{⊗10} directly.
    let s = 2.0 - 0.75 * 3f64.log2();
    let oracle = (0..1u32 << k)
        .filter(|x| {
            let lambda: f64 = (0..k).map(|b| if x >> b & 1 == 0 { 0.75 } else { 0.25 }).product();
            (-lambda.log2() / k as f64 - s).abs() <= eps
        })
        .count();
    let pass = t.rank() == oracle && start.elapsed().as_secs() < 5;
    report(5, pass, format!("rank {} vs enumeration {oracle}", t.rank()), start);
    assert_eq!(t.rank(), oracle);
}

#[test]
fn criterion_6_compression_threshold() {
    let start = Instant::now();
    let source = SourceFamily::Diagonal.source(0.9).unwrap();
    let high = compression_fidelity(&source, 12, 0.7).unwrap();
    let low = compression_fidelity(&source, 12, 0.2).unwrap();
    // Oracle: top-rank mass of the Binomial(12, 0.1) weight classes, evaluated
    // exactly in rationals. Rank ⌊2^8.4⌋ = 337 and ⌊2^2.4⌋ = 5.
    let oracle = |rank: u64| -> f64 {
        let mut left = rank;
        let mut mass = 0.0;
        let mut binom = 1u64;
        for w in 0..=12u64 {
            let take = left.min(binom);
            mass += take as f64 * 0.9f64.powi(12 - w as i32) * 0.1f64.powi(w as i32);
            left -= take;
            binom = binom * (12 - w) / (w + 1);
        }
        mass
    };
    const FIDELITY_AT_0_7: f64 = 0.975998305233;
    const FIDELITY_AT_0_2: f64 = 0.407953774917;
    let checks = [
        high > 0.9,
        low < 0.5,
        (high - oracle(337)).abs() <= 1e-12,
        (low - oracle(5)).abs() <= 1e-12,
        (high - FIDELITY_AT_0_7).abs() <= 1e-12,
        (low - FIDELITY_AT_0_2).abs() <= 1e-12,
    ];
    let pass = checks.iter().all(|c| *c) && start.elapsed().as_secs() < 10;
    report(6, pass, format!("F(0.7) = {high:.12}, F(0.2) = {low:.12}"), start);
    assert!(checks.iter().all(|c| *c), "{checks:?}");
}

#[test]
fn criterion_7_claim_trend() {
    let start = Instant::now();
    let p: Vec<f64> = (0..10).map(|i| (50.0 + 5.0 * i as f64) / 100.0).collect();
    let cfg = ClaimConfig::new(SourceFamily::Diagonal, p, 8, 5, (0..20).collect());
    let rows = claim_experiment(&cfg).unwrap();
    let misses = rows.iter().filter(|r| r.status != ClaimStatus::Found).count();
    let trend = trend_by_seed(&rows);
    let worst = trend.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
    let mean = trend.iter().map(|t| t.1).sum::<f64>() / trend.len() as f64;
    let pass = trend.len() == 20 && worst <= -0.7 && start.elapsed().as_secs() < 600;
    report(
        7,
        pass,
        format!("Spearman(m, Ĥ proxy upper bound) per seed: max {worst:.3}, mean {mean:.3}; {misses} misses"),
        start,
    );
    assert_eq!(trend.len(), 20);
    assert!(worst <= -0.7, "{trend:?}");
}

fn random_literal_state(rng: &mut QRng) -> ElementaryState {
    let n = rng.random_range(1..=3u32);
    loop {
        let part = |rng: &mut QRng| {
            if rng.random_bool(0.2) {
                Rational64::from_integer(0)
            } else {
                Rational64::new(rng.random_range(-1000..=1000), rng.random_range(1..=1000))
            }
        };
        let amps: Vec<ComplexRational> = (0..1usize << n)
            .map(|_| ComplexRational::new(part(rng), part(rng)))
            .collect();
        if let Ok(s) = ElementaryState::from_rationals(amps) {
            return s;
        }
    }
}

fn random_stream_state(rng: &mut QRng) -> ElementaryState {
    let n = rng.random_range(1..=3u32);
    let m = rng.random_range(0..n);
    let d = rng.random_range(1..=6u64);
    let budget = sample_budget_for(n, m, d).unwrap();
    ElementaryState::from_stream(StreamRef {
        n_qubits: n,
        m,
        d,
        precision_bits: rng.random_range(2..=24),
        seed: rng.random(),
        index: rng.random_range(0..budget),
    })
    .unwrap()
}

#[test]
fn criterion_8_codec_round_trip() {
    let start = Instant::now();
    let mut rng = QRng::new(0xC8);
    let mut mismatches = 0;
    let mut prefix_violations = 0;
    for _batch in 0..100 {
        let mut encodings: BTreeSet<BitString> = BTreeSet::new();
        for j in 0..1000 {
            let s = if j % 2 == 0 {
                random_literal_state(&mut rng)
            } else {
                random_stream_state(&mut rng)
            };
            let back = decode_elementary_state(s.encoding()).unwrap();
            if back.amplitudes() != s.amplitudes() || back.encoding() != s.encoding() {
                mismatches += 1;
            }
            encodings.insert(s.encoding().clone());
        }
        // In lexicographic order a prefix sorts immediately before some string
        // it prefixes, so checking neighbours is exhaustive.
        let sorted: Vec<&BitString> = encodings.iter().collect();
        prefix_violations += sorted.windows(2).filter(|w| w[0].is_prefix_of(w[1])).count();
    }
    let pass = mismatches == 0 && prefix_violations == 0 && start.elapsed().as_secs() < 30;
    report(
        8,
        pass,
        format!("100000 round trips, {mismatches} mismatches, {prefix_violations} prefix violations"),
        start,
    );
    assert_eq!(mismatches, 0);
    assert_eq!(prefix_violations, 0);
}

#[test]
fn criterion_9_computable_pipeline() {
    let start = Instant::now();
    let mut rng = QRng::new(0xC9);
    let mut worst_ratio: f64 = 0.0;
    let mut failures = Vec::new();
    for i in 0..50u64 {
        let n = rng.random_range(3..=6u32);
        let m = rng.random_range(1..n);
        let rank = rng.random_range((1usize << m)..(1usize << n));
        let p = random_elementary_projector(n, rank, 20, &mut rng).unwrap();
        let dim = 1usize << n;
        let a = CMatrix::from_fn(dim, dim, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let e = (&a + a.adjoint()) * C64::new(0.5, 0.0);
        let cfg = ElSearchConfig::new(n, m, 5, 900 + i);
        let constant = find_simple_state_computable(&ApproxProjectorProgram::constant(p.clone()), &cfg).unwrap();
        let perturbed =
            find_simple_state_computable(&ApproxProjectorProgram::perturbed(p, e).unwrap(), &cfg).unwrap();
        let diff = (constant.witness.overlap - perturbed.witness.overlap).abs();
        let slack = limit_slack(n, m);
        worst_ratio = worst_ratio.max(diff / slack);
        if !(diff < slack) {
            failures.push((n, m, constant.witness.sample_index, perturbed.witness.sample_index, diff, slack));
        }
    }
    let pass = failures.is_empty() && start.elapsed().as_secs() < 120;
    report(9, pass, format!("50 pairs, worst |Δoverlap| / slack = {worst_ratio:.4}"), start);
    assert!(failures.is_empty(), "{failures:?}");
}
