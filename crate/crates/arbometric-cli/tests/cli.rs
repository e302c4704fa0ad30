//! End-to-end tests of the `arbometric` binary: exit codes, file formats,
//! determinism, and machine-readable errors.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_arbometric"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn tmpfile(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("arbometric-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn validate_accepts_the_sample_configs() {
    for cfg in [
        "ring.toml",
        "interval.toml",
        "theta.toml",
        "theta_reversible.toml",
    ] {
        let out = run(&["validate", configs().join(cfg).to_str().unwrap()]);
        assert!(
            out.status.success(),
            "{cfg}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn validate_rejects_sign_changing_sigma() {
    let cfg = tmpfile("bad_sigma.toml");
    std::fs::write(
        &cfg,
        r#"
[graph]
vertices = ["a", "b"]

[[graph.edges]]
name = "e"
tail = "a"
head = "b"
length = 1.0

[coefficients.e]
b = "0"
sigma = "x - 0.5"
"#,
    )
    .unwrap();
    let out = run(&["validate", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("sigma is not positive"), "{stderr}");
}

#[test]
fn validate_rejects_nonpositive_germ_weight() {
    let cfg = tmpfile("bad_germ.toml");
    std::fs::write(
        &cfg,
        r#"
[graph]
vertices = ["a", "b"]

[[graph.edges]]
name = "e"
tail = "a"
head = "b"
length = 1.0

[coefficients.e]
b = "0"
sigma = "1"

[vertices.a]
alpha = 0.0
germs = { e = 0.0 }
"#,
    )
    .unwrap();
    let out = run(&["validate", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("must be positive"), "{stderr}");
}

#[test]
fn invariant_csv_has_the_documented_shape() {
    let out_path = tmpfile("ring_tree.csv");
    let out = run(&[
        "invariant",
        configs().join("ring.toml").to_str().unwrap(),
        "--method",
        "tree",
        "--out",
        out_path.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("edge,x,density"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 257);
    // every value round-trips bit-exactly through the 17-digit rendering
    for row in &rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[0], "e");
        for field in &fields[1..] {
            let value: f64 = field.parse().unwrap();
            assert_eq!(
                &format!("{value:.16e}"),
                field,
                "lossy rendering of {value}"
            );
        }
    }
    let first = rows[0].split(',').collect::<Vec<_>>();
    let x: f64 = first[1].parse().unwrap();
    assert_eq!(x, 0.0);
    let d: f64 = first[2].parse().unwrap();
    assert!(d > 0.0);
}

#[test]
fn invariant_output_is_deterministic() {
    let a = tmpfile("det_a.json");
    let b = tmpfile("det_b.json");
    for path in [&a, &b] {
        let out = run(&[
            "invariant",
            configs().join("theta.toml").to_str().unwrap(),
            "--method",
            "direct",
            "--out",
            path.to_str().unwrap(),
            "--format",
            "json",
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(
        bytes_a, bytes_b,
        "same config must produce byte-identical output"
    );
}

#[test]
fn invariant_json_reports_atoms_and_residuals() {
    let out_path = tmpfile("theta_direct.json");
    let out = run(&[
        "invariant",
        configs().join("theta.toml").to_str().unwrap(),
        "--method",
        "direct",
        "--out",
        out_path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["method"], "direct");
    assert_eq!(v["vertices"][0]["name"], "u");
    assert!(v["vertices"][0]["atom"].as_f64().unwrap() > 0.0);
    assert_eq!(v["vertices"][1]["atom"].as_f64().unwrap(), 0.0);
    assert!(v["residuals"]["normalization"].as_f64().unwrap() < 1e-8);
    assert_eq!(v["edges"].as_array().unwrap().len(), 3);
    assert_eq!(v["edges"][0]["densities"].as_array().unwrap().len(), 257);
}

#[test]
fn reversible_method_on_nonreversible_ring_names_the_loop() {
    let out_path = tmpfile("never_written.json");
    let out = run(&[
        "invariant",
        configs().join("ring.toml").to_str().unwrap(),
        "--method",
        "reversible",
        "--out",
        out_path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    let v: serde_json::Value =
        serde_json::from_str(stderr.trim()).expect("machine-readable error object");
    assert_eq!(v["error"]["kind"], "solver");
    assert!(
        v["error"]["message"].as_str().unwrap().contains("\"e\""),
        "{stderr}"
    );
}

#[test]
fn compare_passes_on_every_sample_config() {
    for cfg in [
        "ring.toml",
        "interval.toml",
        "theta.toml",
        "theta_reversible.toml",
    ] {
        let out = run(&["compare", configs().join(cfg).to_str().unwrap()]);
        assert!(
            out.status.success(),
            "{cfg}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let stdout = String::from_utf8_lossy(&out.stdout);
        let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
        assert_eq!(v["within_tolerance"], true, "{cfg}: {stdout}");
    }
}

#[test]
fn compare_includes_reversible_only_when_applicable() {
    let out = run(&[
        "compare",
        configs().join("theta_reversible.toml").to_str().unwrap(),
    ]);
    let v: serde_json::Value = serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    let methods: Vec<&str> = v["methods"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m.as_str().unwrap())
        .collect();
    assert_eq!(methods, vec!["tree", "direct", "reversible"]);

    let out = run(&["compare", configs().join("ring.toml").to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    let methods: Vec<&str> = v["methods"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m.as_str().unwrap())
        .collect();
    assert_eq!(methods, vec!["tree", "direct"]);
}

#[test]
fn ring_scaling_errors_shrink_with_the_mesh() {
    let out = run(&[
        "ring-scaling",
        configs().join("ring.toml").to_str().unwrap(),
        "--N",
        "50,100",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("N,err_f1,ratio_f1,err_f2,ratio_f2"));
    let row50: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row100: Vec<&str> = lines.next().unwrap().split(',').collect();
    let e50: f64 = row50[1].parse().unwrap();
    let e100: f64 = row100[1].parse().unwrap();
    assert!(e100 < e50, "{stdout}");
    let ratio: f64 = row100[2].parse().unwrap();
    assert!(ratio > 1.0, "{stdout}");
}

#[test]
fn ring_scaling_rejects_non_ring_configs() {
    let out = run(&[
        "ring-scaling",
        configs().join("theta.toml").to_str().unwrap(),
        "--N",
        "50",
    ]);
    assert!(!out.status.success());
}

#[test]
fn mctt_command_reports_agreement() {
    let out = run(&["mctt", configs().join("chain.json").to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert!(v["max_abs_diff"].as_f64().unwrap() < 1e-13);
    let mctt: Vec<f64> = v["mctt"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert!((mctt.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn missing_config_fails_with_nonzero_exit() {
    let out = run(&["validate", "/nonexistent/nowhere.toml"]);
    assert!(!out.status.success());
}
