//! End-to-end tests driving the compiled binary: output contracts, exit
//! codes, determinism, and the on-disk config schema.

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_icregions")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary should execute")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be UTF-8")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr should be UTF-8")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "command failed: {}", stderr_str(out));
    serde_json::from_str(&stdout_str(out)).expect("stdout should be one JSON document")
}

fn write_file(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    path.to_str().unwrap().to_string()
}

const TWO_LOG2_3: f64 = 3.169925001442312;

#[test]
fn classical_max_json_is_exact() {
    let out = run(&["game", "classical-max"]);
    assert!(out.status.success());
    assert_eq!(stdout_str(&out), "{\"maximum\":\"8/9\"}\n");
}

#[test]
fn quantum_strategy_wins_every_pair() {
    let v = json(&run(&["game", "quantum-win"]));
    let pairs = v["perPair"].as_array().unwrap();
    assert_eq!(pairs.len(), 9);
    for p in pairs {
        assert_eq!(p["winProb"].as_f64().unwrap(), 1.0);
    }
    assert_eq!(v["average"].as_f64().unwrap(), 1.0);
}

#[test]
fn quantum_preset_simulation_is_error_free() {
    let v = json(&run(&["simulate", "--trials", "2000"]));
    assert_eq!(v["pe1"].as_f64().unwrap(), 0.0);
    assert_eq!(v["pe2"].as_f64().unwrap(), 0.0);
    assert_eq!(v["trials"].as_u64().unwrap(), 2000);
}

#[test]
fn classical_preset_simulation_matches_its_known_error() {
    let v = json(&run(&[
        "simulate",
        "--config",
        r#"{"encoder":"classical-table1"}"#,
        "--trials",
        "20000",
    ]));
    let expected = 2.0 / 27.0;
    for key in ["pe1", "pe2"] {
        let pe = v[key].as_f64().unwrap();
        assert!(
            (pe - expected).abs() < 0.01,
            "{key} = {pe}, expected about {expected}"
        );
    }
}

#[test]
fn region_reports_the_reference_comparison() {
    let v = json(&run(&["region", "et-hk", "--ref-sum", "3.02"]));
    assert_eq!(v["kind"].as_str().unwrap(), "et-hk");
    assert_eq!(v["referenceSum"].as_f64().unwrap(), 3.02);
    let max_sum = v["maxSum"].as_f64().unwrap();
    assert!(
        (max_sum - TWO_LOG2_3).abs() < 1e-9,
        "max sum vertex reports {max_sum}"
    );
    assert!(
        max_sum > 3.02,
        "the entangled region must beat the reference"
    );
    let sum_bounds: Vec<f64> = v["constraints"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["r1Coeff"] == 1 && c["r2Coeff"] == 1)
        .map(|c| c["bound"].as_f64().unwrap())
        .collect();
    assert!(!sum_bounds.is_empty());
    for b in sum_bounds {
        assert!((b - TWO_LOG2_3).abs() < 1e-9);
    }
    assert!(!v["vertices"].as_array().unwrap().is_empty());
    // Skewing the question distribution strictly shrinks the best sum.
    let skewed = json(&run(&[
        "region",
        "et-hk",
        "--config",
        r#"{"distributions":{"v0":[1.0],
                             "pair1":[[0.6,0.2,0.2]],
                             "pair2":[[0.6,0.2,0.2]]}}"#,
    ]));
    let skewed_sum = skewed["maxSum"].as_f64().unwrap();
    assert!(skewed_sum > 0.0);
    assert!(skewed_sum < TWO_LOG2_3 - 1e-3, "skewed sum {skewed_sum}");
}

#[test]
fn fm_verify_reports_full_agreement_on_the_preset() {
    let v = json(&run(&["fm", "verify", "--samples", "100", "--seed", "7"]));
    assert_eq!(v["agreement"]["samples"].as_u64().unwrap(), 100);
    assert!(v["agreement"]["fullyAgrees"].as_bool().unwrap());
    assert_eq!(
        v["agreement"]["compared"].as_u64().unwrap(),
        v["agreement"]["agreements"].as_u64().unwrap()
    );
    assert!(v["disagreements"].as_array().unwrap().is_empty());
    let system: Vec<&str> = v["eliminatedSystem"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap())
        .collect();
    assert!(system.iter().any(|row| row.starts_with("R1 + R2 <=")));
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        vec!["region", "et-hk", "--ref-sum", "3.02"],
        vec!["region", "mac", "--format", "csv"],
        vec!["region", "outer", "--format", "svg"],
        vec!["fm", "verify", "--samples", "60", "--seed", "3"],
        vec!["simulate", "--trials", "400", "--seed", "9"],
        vec!["channel", "export"],
        vec!["game", "quantum-win"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success(), "{args:?}: {}", stderr_str(&a));
        assert_eq!(a.stdout, b.stdout, "non-deterministic output for {args:?}");
    }
}

#[test]
fn defective_channel_file_exits_one_naming_the_deficit() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(
        dir.path(),
        "bad_channel.json",
        r#"{"x1":["a","b"],"x2":["a"],"y1":["0","1"],"y2":["0"],
            "p":[[[[0.5],[0.48]]],[[[1.0],[0.0]]]]}"#,
    );
    let out = run(&[
        "region",
        "outer",
        "--config",
        &format!(r#"{{"channel":"{path}","encoder":"classical-table1"}}"#),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_str(&out);
    assert!(err.contains("stochasticity 0.02"), "stderr: {err}");
}

#[test]
fn resource_cap_violations_exit_two() {
    let out = run(&[
        "simulate",
        "--config",
        r#"{"rates":{"r1Common":0.0,"r1Private":17.0,"r2Common":0.0,"r2Private":0.0}}"#,
        "--trials",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("cap"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["region", "bogus"]).status.code(), Some(1));
    assert_eq!(
        run(&["region", "et-hk", "--format", "bogus"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["game", "classical-max", "--format", "svg"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["region", "et-hk", "--tolerance", "0"]).status.code(),
        Some(1)
    );
    let missing = run(&["region", "et-hk", "--config", "/nonexistent/cfg.json"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(stderr_str(&missing).contains("cannot read"));
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    for needle in [
        "game", "region", "simulate", "channel", "--config", "--format",
    ] {
        assert!(text.contains(needle), "help is missing `{needle}`");
    }
}

#[test]
fn malformed_inline_config_reports_position() {
    let out = run(&["region", "et-hk", "--config", "{\"channel\": }"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_str(&out);
    assert!(err.contains("line 1"), "stderr: {err}");
    assert!(err.contains("column"), "stderr: {err}");
}

#[test]
fn csv_outputs_have_fixed_headers() {
    for (args, header) in [
        (vec!["region", "et-hk"], "r1,r2"),
        (vec!["channel", "export"], "x1,x2,y1,y2,p"),
        (
            vec!["simulate", "--trials", "200"],
            "pe1,pe2,ci1,ci2,trials",
        ),
        (
            vec!["fm", "verify", "--samples", "40"],
            "samples,boundaryExcluded,compared,agreements,fullyAgrees",
        ),
        (vec!["game", "classical-max"], "maximum"),
        (vec!["game", "quantum-win"], "row,col,winProb"),
    ] {
        let mut full = args.clone();
        full.extend(["--format", "csv"]);
        let out = run(&full);
        assert!(out.status.success(), "{args:?}: {}", stderr_str(&out));
        let text = stdout_str(&out);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(header), "wrong header for {args:?}");
        assert!(lines.next().is_some(), "no data rows for {args:?}");
    }
}

#[test]
fn svg_region_draws_polygon_axes_and_reference() {
    let out = run(&["region", "et-hk", "--format", "svg", "--ref-sum", "3.02"]);
    assert!(out.status.success());
    let svg = stdout_str(&out);
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("<polygon"));
    assert!(svg.contains("stroke-dasharray"));
    assert!(svg.contains("R1+R2 = 3.02"));
    assert!(svg.contains(">R1<") && svg.contains(">R2<"));
    assert!(svg.trim_end().ends_with("</svg>"));
}

#[test]
fn output_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("region.json");
    let to_file = run(&["region", "et-outer", "--output", path.to_str().unwrap()]);
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    let direct = run(&["region", "et-outer"]);
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn channel_export_round_trips_through_config() {
    let first = run(&["channel", "export"]);
    assert!(first.status.success());
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "channel.json", &stdout_str(&first));
    let second = run(&[
        "channel",
        "export",
        "--config",
        &format!(r#"{{"channel":"{path}","encoder":"classical-table1"}}"#),
    ]);
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn custom_rates_run_with_random_codebooks() {
    let v = json(&run(&[
        "simulate",
        "--config",
        r#"{"encoder":"classical-table1",
            "rates":{"r1Common":0.0,"r1Private":1.0,"r2Common":0.0,"r2Private":1.0}}"#,
        "--trials",
        "300",
        "--delta",
        "3.0",
    ]));
    for key in ["pe1", "pe2"] {
        let pe = v[key].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&pe), "{key} = {pe}");
    }
}
