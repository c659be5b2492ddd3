use std::process::Command as Process;

use gapbound_cli::{run, RunConfig, EXIT_INVALID, EXIT_IO, EXIT_NONCONVERGENCE, EXIT_OK};
use proptest::prelude::*;
use serde_json::Value;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("gapbound").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = invoke(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn flat_eigenvalue() {
    let v = json(&[
        "eigen",
        "--n",
        "3",
        "--kappa",
        "0",
        "--diameter",
        "3.141592653589793",
        "--tol",
        "1e-9",
    ]);
    assert!((v["mu"].as_f64().unwrap() - 1.0).abs() <= 1e-8);
}

#[test]
fn bonnet_myers_violation_is_invalid() {
    let (code, out, err) = invoke(&["eigen", "--n", "2", "--kappa", "4", "--diameter", "2.0"]);
    assert_eq!(code, EXIT_INVALID);
    assert!(out.is_empty());
    assert!(err.contains("Bonnet-Myers"), "{err}");
}

#[test]
fn li_violation_is_flagged() {
    let v = json(&[
        "bounds",
        "--n",
        "2",
        "--kappa",
        "0.1",
        "--diameter",
        "3.141592653589793",
    ]);
    assert_eq!(v["li_violated"], Value::Bool(true));
    assert!(v["sharp_mu"].as_f64().unwrap() < v["li_conjecture"].as_f64().unwrap());
}

#[test]
fn lichnerowicz_absent_for_negative_curvature() {
    let v = json(&["bounds", "--n", "3", "--kappa", "-1", "--diameter", "2"]);
    assert!(v.get("lichnerowicz").is_none());
    let v = json(&["bounds", "--n", "3", "--kappa", "0.5", "--diameter", "2"]);
    assert_eq!(v["lichnerowicz"].as_f64(), Some(1.5));
}

#[test]
fn sphere_limit_flag() {
    let v = json(&["eigen", "--sphere-limit", "--n", "3", "--kappa", "2"]);
    assert_eq!(v["mu"].as_f64(), Some(6.0));
    assert_eq!(
        invoke(&["eigen", "--sphere-limit", "--n", "3", "--kappa", "-1"]).0,
        EXIT_INVALID
    );
}

#[test]
fn oracle_agrees_with_shooting() {
    let v = json(&[
        "eigen",
        "--oracle",
        "--grid",
        "1024",
        "--n",
        "3",
        "--kappa",
        "0.5",
        "--diameter",
        "3",
    ]);
    let (mu, oracle) = (v["mu"].as_f64().unwrap(), v["oracle_mu"].as_f64().unwrap());
    assert!((mu - oracle).abs() <= 1e-6 * mu);
    assert_eq!(v["oracle_grid"].as_u64(), Some(1024));
}

#[test]
fn numbers_carry_twelve_significant_digits() {
    let (_, out, _) = invoke(&["bounds", "--n", "3", "--kappa", "-0.3", "--diameter", "1.7"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    for (key, value) in v.as_object().unwrap() {
        if let Some(x) = value.as_f64() {
            assert_eq!(x, gapbound_cli::round_sig(x), "{key}");
        }
    }
    assert!(!out.contains("NaN") && !out.contains("inf"));
}

#[test]
fn csv_header_matches_json_keys() {
    let args = ["bounds", "--n", "3", "--kappa", "0.5", "--diameter", "2"];
    let v = json(&args);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    let (code, csv, _) = invoke(&[&args[..], &["--format", "csv"]].concat());
    assert_eq!(code, EXIT_OK);
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap().split(',').collect::<Vec<_>>(), keys);
    assert_eq!(lines.count(), 1);
}

#[test]
fn sweep_rows_are_sorted() {
    let v = json(&[
        "sweep",
        "--n",
        "5,2",
        "--kappa",
        "0.25,-1",
        "--diameter",
        "2,1",
    ]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    let keys: Vec<(u64, f64, f64)> = rows
        .iter()
        .map(|r| {
            (
                r["n"].as_u64().unwrap(),
                r["kappa"].as_f64().unwrap(),
                r["diameter"].as_f64().unwrap(),
            )
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(keys, sorted);
}

#[test]
fn sweep_rejects_inadmissible_tuples() {
    assert_eq!(
        invoke(&["sweep", "--n", "2", "--kappa", "0,4", "--diameter", "2"]).0,
        EXIT_INVALID
    );
}

#[test]
fn flows_report_expected_structure() {
    let v = json(&[
        "evolve",
        "--n",
        "3",
        "--kappa",
        "-1",
        "--diameter",
        "2",
        "--grid",
        "32",
        "--samples",
        "4",
    ]);
    assert_eq!(v["profiles"].as_array().unwrap().len(), 5);
    assert_eq!(v["s"].as_array().unwrap().len(), 33);
    assert_eq!(v["nondecreasing"], Value::Bool(true));

    let v = json(&[
        "verify-moc",
        "--n",
        "3",
        "--kappa",
        "0.5",
        "--diameter",
        "2",
        "--grid",
        "32",
        "--flux",
        "plap:3",
    ]);
    assert_eq!(v["violations"].as_u64(), Some(0));

    let v = json(&[
        "decay",
        "--n",
        "2",
        "--kappa",
        "-1",
        "--diameter",
        "3.141592653589793",
        "--seed",
        "42",
    ]);
    assert!(v["rel_error"].as_f64().unwrap() < 0.02);
    assert_eq!(v["series"].as_array().unwrap().len(), 201);

    let v = json(&[
        "ricci",
        "--n",
        "4",
        "--kappa",
        "1",
        "--diameter",
        "2",
        "--a",
        "2",
    ]);
    assert_eq!(v["admissible"], Value::Bool(false));
}

#[test]
fn exit_codes() {
    let (code, _, err) = invoke(&[
        "evolve",
        "--n",
        "2",
        "--kappa",
        "0",
        "--diameter",
        "2",
        "--flux",
        "plap:50:0",
    ]);
    assert_eq!(code, EXIT_NONCONVERGENCE, "{err}");
    assert_eq!(
        invoke(&[
            "evolve",
            "--n",
            "2",
            "--kappa",
            "0",
            "--diameter",
            "2",
            "--cfl",
            "0.9"
        ])
        .0,
        EXIT_INVALID
    );
    assert_eq!(
        invoke(&["eigen", "--n", "3", "--kappa", "0"]).0,
        EXIT_INVALID
    );
    assert_eq!(invoke(&["eigen", "--bogus"]).0, EXIT_INVALID);
    assert_eq!(
        invoke(&[
            "bounds",
            "--flux",
            "plap:0.5",
            "--n",
            "2",
            "--kappa",
            "0",
            "--diameter",
            "1"
        ])
        .0,
        EXIT_INVALID
    );
    let (code, _, err) = invoke(&[
        "bounds",
        "--n",
        "2",
        "--kappa",
        "0",
        "--diameter",
        "1",
        "--out",
        "/nonexistent-dir/x.json",
    ]);
    assert_eq!(code, EXIT_IO, "{err}");
}

#[test]
fn out_path_receives_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bounds.csv");
    let p = path.to_str().unwrap();
    let (code, out, _) = invoke(&[
        "bounds",
        "--n",
        "2",
        "--kappa",
        "0",
        "--diameter",
        "1",
        "--format",
        "csv",
        "--out",
        p,
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    assert!(std::fs::read_to_string(&path)
        .unwrap()
        .starts_with("n,kappa,diameter,sharp_mu,"));
}

#[test]
fn help_lists_defaults() {
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, EXIT_OK);
    for needle in [
        "tol=1e-9",
        "grid=4096",
        "flux=heat",
        "cfl=0.4",
        "format=json",
    ] {
        assert!(out.contains(needle), "{needle}");
    }
}

#[test]
fn binary_output_is_deterministic() {
    let bin = env!("CARGO_BIN_EXE_gapbound");
    for args in [
        &[
            "decay",
            "--n",
            "2",
            "--kappa",
            "-0.5",
            "--diameter",
            "2",
            "--grid",
            "32",
            "--seed",
            "9",
        ][..],
        &[
            "sweep",
            "--n",
            "2,3",
            "--kappa",
            "-1,0,0.3",
            "--diameter",
            "1,2",
            "--format",
            "csv",
        ][..],
    ] {
        let a = Process::new(bin).args(args).output().unwrap();
        let b = Process::new(bin).args(args).output().unwrap();
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
    let status = Process::new(bin)
        .args(["eigen", "--n", "2", "--kappa", "4", "--diameter", "2"])
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(EXIT_INVALID));
}

fn subcommands() -> impl Strategy<Value = Vec<String>> {
    prop_oneof![
        Just(vec!["eigen".to_string()]),
        Just(vec!["eigen".to_string(), "--sphere-limit".to_string()]),
        Just(vec!["eigen".to_string(), "--oracle".to_string()]),
        Just(vec!["bounds".to_string()]),
        Just(vec!["evolve".to_string()]),
        Just(vec!["decay".to_string()]),
        Just(vec!["verify-moc".to_string()]),
        Just(vec!["ricci".to_string()]),
        (0.01f64..10.0).prop_map(|a| vec!["ricci".to_string(), "--a".to_string(), a.to_string()]),
        Just(vec!["sweep".to_string()]),
    ]
}

proptest! {
    #[test]
    fn canonical_form_round_trips(
        sub in subcommands(),
        n in prop::collection::vec(2u32..10, 1..3),
        kappa in prop::collection::vec(-5.0f64..5.0, 1..3),
        diameter in prop::collection::vec(0.1f64..4.0, 0..3),
        flux in prop_oneof![Just("heat".to_string()), (1.1f64..5.0).prop_map(|p| format!("plap:{p}")), (1.1f64..5.0, 0.0f64..1.0).prop_map(|(p, e)| format!("plap:{p}:{e}"))],
        tol in prop::option::of(1e-12f64..1e-3),
        grid in prop::option::of(16usize..10000),
        t_end in prop::option::of(0.01f64..10.0),
        seed in prop::option::of(any::<u64>()),
        csv in any::<bool>(),
    ) {
        let join = |v: Vec<String>| v.join(",");
        let mut argv = vec!["gapbound".to_string()];
        argv.extend(sub);
        argv.extend(["--n".into(), join(n.iter().map(u32::to_string).collect())]);
        argv.extend(["--kappa".into(), join(kappa.iter().map(f64::to_string).collect())]);
        if !diameter.is_empty() {
            argv.extend(["--diameter".into(), join(diameter.iter().map(f64::to_string).collect())]);
        }
        argv.extend(["--flux".into(), flux]);
        if let Some(tol) = tol { argv.extend(["--tol".into(), tol.to_string()]); }
        if let Some(grid) = grid { argv.extend(["--grid".into(), grid.to_string()]); }
        if let Some(t) = t_end { argv.extend(["--t-end".into(), t.to_string()]); }
        if let Some(seed) = seed { argv.extend(["--seed".into(), seed.to_string()]); }
        if csv { argv.extend(["--format".into(), "csv".into()]); }

        let config = RunConfig::try_parse_args(&argv).unwrap();
        let canonical = config.canonical_args();
        let reparsed = RunConfig::try_parse_args(&canonical).unwrap();
        prop_assert_eq!(&reparsed, &config);
        prop_assert_eq!(reparsed.canonical(), config.canonical());
    }
}
