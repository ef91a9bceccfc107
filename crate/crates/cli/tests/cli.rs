use std::path::Path;
use std::process::{Command, Output};

use margulis_core::corpus::{fixture, FixtureOptions};
use margulis_core::groupfile::parse_group;

fn margulis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_margulis"))
        .args(args)
        .env_remove("MARGULIS_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_fixture(dir: &Path, name: &str, extra: &[&str]) -> String {
    let path = dir.join(format!("{name}.json"));
    let p = path.to_str().unwrap().to_string();
    let mut args = vec!["corpus", name, "-o", &p];
    args.extend_from_slice(extra);
    let o = margulis(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    p
}

#[test]
fn lattice_analysis_has_identity_linear_parts() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fixture(dir.path(), "lattice", &["--n", "3"]);
    let o = margulis(&["analyze", &f, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["generators"].as_array().unwrap().len(), 3);
    assert_eq!(v["hyperbolic_words"], 0);
    for g in v["generators"].as_array().unwrap() {
        assert_eq!(g["dim_zero"], 3);
        assert_eq!(g["distance_to_one"], 0.0);
    }
}

#[test]
fn margulis_analysis_reports_signs_per_generator() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fixture(dir.path(), "margulis", &[]);
    let o = margulis(&["analyze", &f, "--max-len", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for g in v["generators"].as_array().unwrap() {
        assert!(g["alpha"].as_f64().unwrap() > 0.0);
    }
    let text = stdout(&margulis(&["analyze", &f, "--max-len", "1"]));
    assert!(text.contains("form of signature (2,1)"));
    assert!(text.contains("alpha 3.0"));
}

#[test]
fn flipped_pair_is_an_obstruction() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fixture(dir.path(), "margulis", &["--flip"]);
    let o = margulis(&["scan", &f, "--max-len", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(10), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "opposite-sign-pair-found");
    assert!(v["ball"]["start_slack"].as_f64().unwrap() >= 1e-6 * (1.0 - 1e-9));
    assert!(v["ball"]["end_slack"].as_f64().unwrap() >= 1e-6 * (1.0 - 1e-9));
}

#[test]
fn proper_pair_scans_clean() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fixture(dir.path(), "margulis", &[]);
    let o = margulis(&["scan", &f, "--max-len", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("no-obstruction-within-budget"));
}

#[test]
fn eigenvalue_one_violation_exits_ten() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fixture(dir.path(), "sl3-violation", &[]);
    let o = margulis(&["scan", &f, "--max-len", "2"]);
    assert_eq!(o.status.code(), Some(10));
    assert!(stdout(&o).contains("eigenvalue-one-violation"));
}

#[test]
fn malformed_row_reports_the_field_path() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    std::fs::write(
        &f,
        r#"{"dimension": 2, "generators": [{"label": "a", "linear": [[1, 0], [0]], "translation": [1, 0]}]}"#,
    )
    .unwrap();
    let o = margulis(&["analyze", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("generators[0].linear[1]"),
        "{}",
        stderr(&o)
    );

    std::fs::write(
        &f,
        "{\"dimension\": 2,\n \"generators\": [{\"label\": \"a\", \"linear\": \"x\"}]}",
    )
    .unwrap();
    let o = margulis(&["scan", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let o = margulis(&["analyze", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_64() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fixture(dir.path(), "lattice", &[]);
    assert_eq!(
        margulis(&["scan", &f, "--max-len", "0"]).status.code(),
        Some(64)
    );
    assert_eq!(
        margulis(&["scan", &f, "--radius", "-1"]).status.code(),
        Some(64)
    );
    assert_eq!(margulis(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(margulis(&["corpus", "nonsense"]).status.code(), Some(64));
    assert_eq!(
        margulis(&["corpus", "margulis", "--boost", "0.5"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(margulis(&["--help"]).status.code(), Some(0));
    assert_eq!(margulis(&["--version"]).status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_margulis"))
        .args(["scan", &f])
        .env("MARGULIS_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn classify_lists_the_admissible_parts() {
    let o = margulis(&["classify", "4", "--samples", "50", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let case1 = v["case1"].as_array().unwrap();
    assert_eq!(case1.len(), 1);
    assert_eq!(case1[0]["group"], "SL3(R)");
    assert!(v["case2"].as_array().unwrap().is_empty());

    let o = margulis(&["classify", "6", "--samples", "50", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let case2: Vec<&str> = v["case2"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["group"].as_str().unwrap())
        .collect();
    assert_eq!(case2, ["SO(3,2)", "SO(3) x SL3(R)", "SO(2,1) x SL3(R)"]);
    assert!(v["case1"]
        .as_array()
        .unwrap()
        .iter()
        .any(|e| e["group"] == "Sp4(R)" && e["v1_dim"] == 4));

    let o = margulis(&["classify", "7"]);
    assert_eq!(o.status.code(), Some(64));
    assert!(stderr(&o).contains("open problem"));
}

#[test]
fn corpus_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, &[&str]); 4] = [
        ("lattice", &["--n", "3"]),
        ("margulis", &["--flip", "--angle", "1.3"]),
        ("case23", &["--coupling", "0.7", "--mix"]),
        ("sl3-violation", &[]),
    ];
    for (name, extra) in cases {
        let f = write_fixture(dir.path(), name, extra);
        let parsed = parse_group(&std::fs::read_to_string(&f).unwrap()).unwrap();
        let mut opts = FixtureOptions::default();
        match name {
            "lattice" => opts.n = 3,
            "margulis" => {
                opts.margulis.sign_flip = true;
                opts.margulis.angle = 1.3;
            }
            "case23" => {
                opts.case23.coupling = 0.7;
                opts.case23.mix = true;
            }
            _ => {}
        }
        assert_eq!(parsed, fixture(name, &opts).unwrap(), "{name}");
        if name == "lattice" {
            assert_eq!(parsed.generators.len(), 3);
        }
    }
}

#[test]
fn reports_are_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fixture(dir.path(), "margulis", &["--flip"]);
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_margulis"))
            .args([
                "scan",
                &f,
                "--max-len",
                "3",
                "--seed",
                "7",
                "--format",
                "json",
            ])
            .env("MARGULIS_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    let one = run("1");
    assert!(!one.is_empty());
    assert_eq!(one, run("4"));
    assert_eq!(one, run("4"));
}
