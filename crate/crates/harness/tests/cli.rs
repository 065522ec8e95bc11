use std::path::Path;
use std::process::{Command, Output};

fn qel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qel")).args(args).output().unwrap()
}

/// Drop the trailing `wall_time_s` column from every CSV line.
fn without_wall_time(csv: &str) -> Vec<String> {
    csv.lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head).to_string())
        .collect()
}

#[test]
fn repeated_runs_are_identical_modulo_wall_time() {
    let dir = tempfile::tempdir().unwrap();
    let outs: Vec<String> = (0..2)
        .map(|i| {
            let path = dir.path().join(format!("run{i}.csv"));
            let o = qel(&[
                "find-simple", "-p", "n=5", "-p", "m=2", "-p", "d=3", "-p", "instances=3", "--seed", "11",
                "--out", path.to_str().unwrap(),
            ]);
            assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
            std::fs::read_to_string(path).unwrap()
        })
        .collect();
    assert_eq!(without_wall_time(&outs[0]), without_wall_time(&outs[1]));
    assert_eq!(outs[0].lines().count(), 4);
    assert!(outs[0].starts_with(
        "n,m,d,N,seed,overlap,threshold,K_hat_sampled,H_hat_bound,reference_3nm,samples_used,"
    ));
}

#[test]
fn exit_codes() {
    let ok = qel(&["entropy", "-p", "p=1.0"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert_eq!(text.lines().nth(1).unwrap().split(',').nth(3), Some("0"));

    let bad = qel(&["find-simple", "-p", "n=4", "-p", "m=4", "-p", "d=2"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("m < n"));

    let unknown = qel(&["entropy", "-p", "p=0.5", "-p", "foo=1"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("unknown key \\\"foo\\\""));

    let missing = qel(&["compression", "-p", "p=0.5", "-p", "k=4"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("rates"));

    let huge = qel(&["overlap-check", "-p", "n=30", "-p", "rank=1"]);
    assert_eq!(huge.status.code(), Some(3));
    let cap = qel(&["find-simple", "-p", "n=8", "-p", "m=0", "-p", "d=5", "-p", "sample_cap=1000"]);
    assert_eq!(cap.status.code(), Some(3));

    let clap_error = qel(&["no-such-experiment"]);
    assert_eq!(clap_error.status.code(), Some(2));
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.conf");
    std::fs::write(
        &cfg,
        "# compression sweep\nexperiment = compression\nseed = 1\np = 0.9\nk = 12\nrates = 0.2, 0.7\nformat = csv\n",
    )
    .unwrap();
    let out = dir.path().join("result.json");
    let o = qel(&[
        "run", "--config", cfg.to_str().unwrap(), "-p", "k=10", "--format", "json", "--seed", "5",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["params"]["k"], 10);
    assert_eq!(rows[0]["seed"], 5);
    assert_eq!(rows[1]["params"]["rate"], 0.7);

    let wrong = qel(&["entropy", "--config", cfg.to_str().unwrap()]);
    assert_eq!(wrong.status.code(), Some(2));

    let broken = dir.path().join("broken.conf");
    std::fs::write(&broken, "experiment = entropy\np 0.5\n").unwrap();
    let o = qel(&["run", "--config", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn failed_run_leaves_no_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.csv");
    let o = qel(&["find-simple", "-p", "n=4", "-p", "m=9", "-p", "d=1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!Path::new(&out).exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}
