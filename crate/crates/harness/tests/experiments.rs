use qel_harness::output::Field;
use qel_harness::{parse_config, run, HarnessError};

fn run_text(text: &str) -> Vec<qel_harness::ResultRow> {
    run(&parse_config(text).unwrap()).unwrap()
}

#[test]
fn minimal_configs_parse() {
    for text in [
        "experiment = entropy\np = 0.5\n",
        "experiment = overlap-check\nn = 2\nrank = 1\n",
        "experiment = find-simple\nn = 3\nm = 1\nd = 2\n",
        "experiment = compression\np = 0.9\nk = 4\nrates = 0.5\n",
        "experiment = claim-sweep\n",
        "experiment = deficiency\nx = 0110\n",
        r#"{"experiment": "find-simple", "n": 3, "m": 1, "d": 2}"#,
    ] {
        parse_config(text).unwrap_or_else(|e| panic!("{text}: {e}"));
    }
}

#[test]
fn invalid_configs_name_the_problem() {
    let err = parse_config("experiment = entropy\np = 0.5\nfoo = 3\n").unwrap_err();
    assert!(matches!(err, HarnessError::Usage(_)));
    assert!(err.to_string().contains("\"foo\""));

    let err = parse_config("experiment = find-simple\nn = 4\nm = 4\nd = 1\n").unwrap_err();
    assert!(err.to_string().contains("m < n"), "{err}");

    let err = parse_config("experiment = find-simple\nn = 4\nd = 1\n").unwrap_err();
    assert!(err.to_string().contains("\"m\""), "{err}");

    let err = parse_config("experiment = entropy\np = 1.5\n").unwrap_err();
    assert!(err.to_string().contains("0 <= p <= 1"), "{err}");
}

#[test]
fn entropy_of_pure_source_is_zero() {
    let rows = run_text("experiment = entropy\np = 1.0, 0.75\n");
    assert_eq!(rows[0].real("S"), Some(0.0));
    assert!((rows[1].real("S").unwrap() - 0.811278).abs() < 1e-5);
}

#[test]
fn overlap_check_matches_rank_fraction() {
    let rows = run_text("experiment = overlap-check\nseed = 3\nn = 6\nrank = 8\nsamples = 10000\n");
    let r = &rows[0];
    assert_eq!(r.real("expected"), Some(0.125));
    let (mean, se) = (r.real("mean_overlap").unwrap(), r.real("se").unwrap());
    assert!((mean - 0.125).abs() <= 4.0 * se, "{mean} ± {se}");
    assert_eq!(r.get("within_4se"), Some(&Field::Bool(true)));
}

#[test]
fn rows_are_rerunnable_from_their_own_fields() {
    let rows = run_text("experiment = find-simple\nseed = 40\nn = 5\nm = 2\nd = 3\nrank = 6\ninstances = 3\n");
    assert_eq!(rows.len(), 3);
    let last = &rows[2];
    let mut text = String::from("experiment = find-simple\n");
    for c in last.cells.iter().filter(|c| c.role == qel_harness::output::Role::Param) {
        let value = match &c.value {
            Field::UInt(v) => v.to_string(),
            Field::Text(s) => s.clone(),
            other => panic!("unexpected parameter {other:?}"),
        };
        text.push_str(&format!("{} = {value}\n", c.name));
    }
    let again = run_text(&text);
    let strip = |r: &qel_harness::ResultRow| r.cells.clone();
    assert_eq!(strip(&again[0]), strip(last));
}

#[test]
fn find_simple_rows_certify_threshold() {
    let rows = run_text("experiment = find-simple\nseed = 1\nn = 6\nm = 3\nd = 5\ninstances = 4\n");
    for r in &rows {
        assert_eq!(r.get("status"), Some(&Field::Text("found".into())));
        assert!(r.real("overlap").unwrap() >= r.real("threshold").unwrap());
        assert_eq!(r.real("reference_3nm"), Some(9.0));
        assert_eq!(r.real("N"), Some(640.0));
        assert!(r.real("H_hat_bound").unwrap() > 0.0);
    }
}

#[test]
fn compression_rows_cover_the_grid() {
    let rows = run_text("experiment = compression\np = 0.9\nk = 12\nrates = 0.2, 0.7\nepsilon = 0.3\n");
    assert_eq!(rows.len(), 2);
    assert!(rows[0].real("fidelity").unwrap() < 0.5);
    assert!(rows[1].real("fidelity").unwrap() > 0.9);
    assert_eq!(rows[1].get("coding_rank"), Some(&Field::Big(337)));
    assert!(matches!(rows[0].get("typical_rank"), Some(Field::UInt(r)) if *r > 0));
}

#[test]
fn claim_sweep_rows() {
    let rows = run_text("experiment = claim-sweep\nseed = 2\nk = 4\nd = 2\np = 1.0, 0.8, 0.5\n");
    let ms: Vec<f64> = rows.iter().map(|r| r.real("m").unwrap()).collect();
    assert_eq!(ms, vec![0.0, 3.0, 3.0]);
    for r in &rows {
        assert_eq!(r.real("reference_3nm").unwrap(), 3.0 * (4.0 - r.real("m").unwrap()));
    }
}

#[test]
fn deficiency_rows() {
    let rows = run_text("experiment = deficiency\nx = 0110, 1\n");
    // uniform over {0,1}^4: ⌊−log₂ 2^-4⌋ − (2·4 + 1) = −5
    assert_eq!(rows[0].get("deficiency"), Some(&Field::Int(-5)));
    assert_eq!(rows[1].get("support_size"), Some(&Field::UInt(2)));

    let rows = run_text("experiment = deficiency\nx = 11\nsupport = 0, 11, 10\nweights = 6, 1, 1\n");
    assert_eq!(rows[0].get("Q_x"), Some(&Field::Text("1/8".into())));
    assert_eq!(rows[0].get("deficiency"), Some(&Field::Int(3 - 5)));
    assert!(parse_config("experiment = deficiency\nx = 01\nsupport = 0, 1\n").is_err());
}
