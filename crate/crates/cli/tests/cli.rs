use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use sdic_core::very_strong::vs_zic_check;
use sdic_core::{IcParams, LogBase};

fn sdic(args: &[&str]) -> Output {
    sdic_env(args, &[])
}

fn sdic_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sdic"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sdic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const VS_IC_ARGS: [&str; 10] = ["--a", "1.6", "--p1", "1", "--p2", "1", "--q1", "0.9", "--q2", "0.9"];
const VS_ZIC_ARGS: [&str; 10] = ["--b", "0", "--p1", "2", "--p2", "2", "--q1", "1", "--q2", "1"];

#[test]
fn classify_reports_regime_and_params() {
    let v = json(&sdic(
        &["classify", "--b", "1.6", "--rho", "0.5"]
            .iter()
            .chain(&VS_IC_ARGS)
            .copied()
            .collect::<Vec<_>>(),
    ));
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["regime"], "VeryStrongIC");
    assert_eq!(v["unit"], "bits");
    assert_eq!(v["params"]["d"], 0.5);
    assert!((v["params"]["q1p"].as_f64().unwrap() - 0.675).abs() < 1e-12);
}

#[test]
fn wrong_regime_exits_with_code_2() {
    let args: Vec<&str> = ["vs-ic", "--b", "1.2", "--rho", "0.5"]
        .iter()
        .chain(&VS_IC_ARGS)
        .copied()
        .collect();
    let out = sdic(&args);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "WrongRegime");
    assert_eq!(err["schema_version"], "1");
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_with_code_1() {
    let both: Vec<&str> = ["classify", "--b", "1.6", "--rho", "0.5", "--d", "0.5"]
        .iter()
        .chain(&VS_IC_ARGS)
        .copied()
        .collect();
    assert_eq!(sdic(&both).status.code(), Some(1));
    assert_eq!(sdic(&["classify", "--a", "1"]).status.code(), Some(1));
    assert_eq!(sdic(&["classify", "--bogus", "1"]).status.code(), Some(1));
    assert_eq!(
        sdic(&["sweep", "--check", "nope", "--axis", "a:1:2:3"]).status.code(),
        Some(1)
    );
    assert_eq!(sdic(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_file_with_flag_override() {
    let path = tmp("params.toml");
    std::fs::write(
        &path,
        "a = 1.6\nb = 1.6\np1 = 1\np2 = 1\nq1 = 0.9\nq2 = 0.9\nrho = 0.5\n",
    )
    .unwrap();
    let cfg = path.to_str().unwrap();
    let v = json(&sdic(&["classify", "--config", cfg]));
    assert_eq!(v["regime"], "VeryStrongIC");
    let v = json(&sdic(&["classify", "--config", cfg, "--b", "1.2"]));
    assert_eq!(v["regime"], "StrongNotVeryStrongIC");
    // A correlation flag replaces the file's rho instead of conflicting.
    let v = json(&sdic(&["classify", "--config", cfg, "--d", "0.9"]));
    assert_eq!(v["params"]["d"], 0.9);
    assert_eq!(v["params"]["rho"], 0.9);
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("#schema_version=1"));
    let header = lines.next().unwrap().split(',').map(str::to_owned).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_owned).collect()).collect();
    (header, rows)
}

fn zic_grid_sweep(out: &PathBuf, env: &[(&str, &str)]) -> String {
    let path = out.to_str().unwrap();
    let args: Vec<&str> = [
        "sweep",
        "--check",
        "vs-zic",
        "--axis",
        "a:1.5:6:46",
        "--axis",
        "d:0.05:0.95:19",
        "--out",
        path,
    ]
    .iter()
    .chain(&VS_ZIC_ARGS)
    .copied()
    .collect();
    let v = json(&sdic_env(&args, env));
    assert_eq!(v["cells"], 46 * 19);
    std::fs::read_to_string(out).unwrap()
}

#[test]
fn sweep_csv_matches_library() {
    let text = zic_grid_sweep(&tmp("zic_grid.csv"), &[]);
    let (header, rows) = parse_csv(&text);
    assert_eq!(
        header,
        [
            "a",
            "d",
            "verdict",
            "regime",
            "status",
            "closed_form",
            "mi_gate",
            "r1_max",
            "r2_max"
        ]
    );
    assert_eq!(rows.len(), 46 * 19);
    let mut passing = 0;
    for row in &rows {
        let a: f64 = row[0].parse().unwrap();
        let d: f64 = row[1].parse().unwrap();
        let p = IcParams::from_s1_on_s2(a, 0.0, 2.0, 2.0, 1.0, d, 1.0 - d * d).unwrap();
        let expected = vs_zic_check(&p, LogBase::BITS)
            .map(|r| r.achieves_capacity)
            .unwrap_or(false);
        assert_eq!(row[2] == "true", expected, "a={a} d={d}");
        passing += expected as usize;
        if row[4] == "ok" {
            let margin: f64 = row[5].parse().unwrap();
            let lib = sdic_core::very_strong::vs_zic_evaluate(&p, LogBase::BITS)
                .unwrap()
                .conditions[0]
                .margin;
            assert!((margin - lib).abs() <= 1e-10 * (1.0 + lib.abs()));
        } else {
            assert_eq!(row[4], "wrong_regime");
        }
    }
    assert!(passing > 0 && passing < rows.len());
}

#[test]
fn sweep_is_byte_identical_across_runs_and_threads() {
    let one = zic_grid_sweep(&tmp("det1.csv"), &[("SDIC_THREADS", "1")]);
    let four = zic_grid_sweep(&tmp("det4.csv"), &[("SDIC_THREADS", "4")]);
    let again = zic_grid_sweep(&tmp("det4b.csv"), &[("SDIC_THREADS", "4")]);
    assert_eq!(one, four);
    assert_eq!(four, again);
}

#[test]
fn vs_ic_curves_columns() {
    let path = tmp("curves.csv");
    let args: Vec<&str> = [
        "sweep",
        "--check",
        "vs-ic-curves",
        "--axis",
        "b:1.4:4:27",
        "--d",
        "0.99",
        "--out",
        path.to_str().unwrap(),
    ]
    .iter()
    .chain(&VS_IC_ARGS)
    .copied()
    .collect();
    json(&sdic(&args));
    let (header, rows) = parse_csv(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(
        header,
        ["b", "verdict", "regime", "status", "lhs1", "rhs1", "lhs2", "rhs2"]
    );
    assert_eq!(rows.len(), 27);
    // Singular weights at ab·P1·P2 = (P1+1)(P2+1) show up as an error row.
    let singular = rows.iter().find(|r| r[0] == "2.5").unwrap();
    assert_eq!(singular[3], "SingularDenominator");
    let inside = rows.iter().find(|r| r[0] == "1.6").unwrap();
    assert_eq!(inside[1], "true");
}

#[test]
fn segment_and_mc_commands() {
    let v = json(&sdic(&[
        "segment", "--a", "1.2", "--b", "0", "--p1", "2", "--p2", "0.7", "--q1", "0.4", "--c", "0.8", "--q2p", "0.5",
    ]));
    assert_eq!(v["segment"]["p1dp_min"], 1.18);
    assert_eq!(v["segment"]["rates"].as_array().unwrap().len(), 83);

    let args: Vec<&str> = ["validate-mc", "--b", "1.6", "--rho", "0.5", "--n", "200000"]
        .iter()
        .chain(&VS_IC_ARGS)
        .copied()
        .collect();
    let first = sdic(&args);
    assert_eq!(json(&first)["pass"], true);
    assert_eq!(first.stdout, sdic(&args).stdout);
}

#[test]
fn nats_flag_scales_rates() {
    let base = [
        "weak", "--a", "0.5", "--b", "0.2", "--p1", "1", "--p2", "1", "--q1", "1", "--q2", "1", "--rho", "0.3",
    ];
    let bits = json(&sdic(&base));
    let nats = json(&sdic(&base.iter().copied().chain(["--nats"]).collect::<Vec<_>>()));
    assert_eq!(nats["unit"], "nats");
    let (b, n) = (
        bits["sum_capacity"].as_f64().unwrap(),
        nats["sum_capacity"].as_f64().unwrap(),
    );
    assert!((n - b * std::f64::consts::LN_2).abs() < 1e-12);
}
