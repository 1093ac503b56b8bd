use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn selberg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selberg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn real_matrix(v: &Value) -> Vec<Vec<f64>> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|row| {
            row.as_array()
                .unwrap()
                .iter()
                .map(|z| {
                    assert!(z[1].as_f64().unwrap().abs() < 1e-12);
                    z[0].as_f64().unwrap()
                })
                .collect()
        })
        .collect()
}

fn s(x: f64) -> f64 {
    (PI * x).sin()
}

/// Closed-form two-variable connection matrix on `0 < z < 1`.
fn explicit_m2(a: f64, b: f64, c: f64, g: f64) -> [[f64; 3]; 3] {
    let h = g / 2.0;
    let (bc, abc) = (b + c, a + b + c);
    [
        [
            s(a) * s(a + h) / (s(bc) * s(bc + h)),
            -s(a) * s(c) / (s(bc) * s(bc + g)),
            s(c) * s(c + h) / (s(bc + g) * s(bc + h)),
        ],
        [
            -s(a + h) * s(abc + h) * s(g) / (s(bc) * s(bc + h) * s(h)),
            -s(b) * s(a + h) / (s(bc) * s(bc + h))
                + s(abc + g) * s(c + h) / (s(bc + g) * s(bc + h)),
            s(b + h) * s(c + h) * s(g) / (s(bc + g) * s(bc + h) * s(h)),
        ],
        [
            s(abc + h) * s(abc + g) / (s(bc) * s(bc + h)),
            s(b) * s(abc + g) / (s(bc) * s(bc + g)),
            s(b + h) * s(b) / (s(bc + g) * s(bc + h)),
        ],
    ]
}

#[test]
fn connect_matches_explicit_two_variable_matrix() {
    let (a, b, c, g) = (-0.33, -0.21, -0.17, 0.23);
    let out = selberg(&[
        "connect", "--m", "2", "--a", "-0.33", "--b", "-0.21", "--c", "-0.17", "--g", "0.23",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let got = real_matrix(&report(&out)["results"]["matrix"]);
    let want = explicit_m2(a, b, c, g);
    for i in 0..3 {
        for j in 0..3 {
            assert!(
                (got[i][j] - want[i][j]).abs() < 1e-12,
                "({i},{j}) {} vs {}",
                got[i][j],
                want[i][j]
            );
        }
    }
}

#[test]
fn dtype_rho_one_matrix() {
    let out = selberg(&["connect", "--dtype-rho", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let got = real_matrix(&report(&out)["results"]["matrix"]);
    let want = [[0.5, -1.0, 0.5], [-0.5, 0.0, 0.5], [0.5, 1.0, 0.5]];
    for i in 0..3 {
        for j in 0..3 {
            assert!((got[i][j] - want[i][j]).abs() < 1e-12);
        }
    }
}

#[test]
fn degenerate_chart_is_rejected() {
    let args = [
        "connect", "--m", "2", "--a", "-0.5", "--b", "-0.5", "--c", "0.5", "--g", "0.5",
    ];
    let out = selberg(&args);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["outcome"], "input-rejected");
    assert!(String::from_utf8_lossy(&out.stderr).contains("not generic"));
}

#[test]
fn unknown_variant_is_rejected() {
    let out = selberg(&[
        "connect",
        "--m",
        "1",
        "--a",
        "-0.3",
        "--b",
        "-0.2",
        "--c",
        "-0.1",
        "--g",
        "0.2",
        "--variant",
        "nope",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn racah_index_out_of_range() {
    let out = selberg(&[
        "racah", "--n", "9", "--x", "0", "--a", "e:0.3", "--b", "e:0.1", "--c", "e:0.7", "--big-n",
        "3", "--g", "0.2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn racah_degree_zero_is_one_and_checks_pass() {
    let out = selberg(&[
        "racah", "--n", "0", "--x", "2", "--a", "e:0.76", "--b", "e:0.91", "--c", "e:0.61",
        "--big-n", "5", "--g", "0.41", "--check",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["W"][0].as_f64(), Some(1.0));
    assert_eq!(r["results"]["W"][1].as_f64(), Some(0.0));
    assert_eq!(r["residuals"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_suites_pass() {
    for suite in ["qseries", "connection", "hermitian"] {
        let out = selberg(&["verify", "--suite", suite]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{suite}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert_eq!(report(&out)["outcome"], "pass");
    }
    let out = selberg(&["verify", "--suite", "quadrature", "--m", "1"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn no_timing_reports_are_byte_stable() {
    let args = ["--no-timing", "verify", "--suite", "connection", "--m", "2"];
    let (x, y) = (selberg(&args), selberg(&args));
    assert_eq!(x.status.code(), Some(0));
    assert_eq!(x.stdout, y.stdout);
    assert!(report(&x).get("timing_ms").is_none());
    let timed = report(&selberg(&["verify", "--suite", "connection", "--m", "2"]));
    assert!(timed["timing_ms"].is_u64());
}

#[test]
fn thread_count_does_not_change_results() {
    let args = |t: &'static str| {
        [
            "--no-timing",
            "--threads",
            t,
            "verify",
            "--suite",
            "quadrature",
            "--m",
            "1",
        ]
    };
    let one = selberg(&args("1"));
    let four = selberg(&args("4"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn csv_and_output_files() {
    let dir = std::env::temp_dir().join(format!("selberg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (json, csv) = (dir.join("r.json"), dir.join("r.csv"));
    let out = selberg(&[
        "--output",
        json.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "connect",
        "--m",
        "1",
        "--a",
        "-0.3",
        "--b",
        "-0.2",
        "--c",
        "-0.1",
        "--g",
        "0.2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_slice(&std::fs::read(&json).unwrap()).unwrap();
    assert_eq!(r["command"], "connect");
    let mut rows = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(
        rows.headers().unwrap(),
        vec!["name", "row", "col", "re", "im"]
    );
    assert_eq!(rows.records().count(), 4);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bad_config_is_rejected() {
    let path = std::env::temp_dir().join(format!("selberg-bad-{}.conf", std::process::id()));
    std::fs::write(&path, "threshold.invariance = banana\n").unwrap();
    let out = selberg(&[
        "--config",
        path.to_str().unwrap(),
        "verify",
        "--suite",
        "qseries",
    ]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(out.status.code(), Some(2));
}
