use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use aomm_core::model::{default_config, hz_to_rad, Couplings};
use aomm_core::response::{self, DelayMode};
use aomm_core::spectra::GridSpec;
use serde_json::Value;
use tempfile::tempdir;

fn aomm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aomm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn spectrum_preset_writes_tables() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("fig3a");
    let o = aomm(&["spectrum", "--preset", "fig3a", "--out", path_str(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let features = read_json(&out.join("features.json"));
    assert_eq!(features["window_count"], 0);
    assert_eq!(features["peaks"].as_array().unwrap().len(), 1);

    let csv = fs::read_to_string(out.join("spectrum.csv")).unwrap();
    assert!(!csv.contains('\r'));
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "delta_over_omega_b,lambda_rad_s,absorption,dispersion,transmission,phase_rad,tau_eq8_s,tau_phase_s"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2267);
    for r in &rows {
        assert_eq!(r.len(), 8);
        for field in r {
            let mantissa = field.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.len(), 18, "{field}");
        }
    }
    let center = rows.iter().find(|r| r[1].parse::<f64>().unwrap() == 0.0).unwrap();
    assert_eq!(center[2].parse::<f64>().unwrap(), 2.0);

    let manifest = read_json(&out.join("manifest.json"));
    assert_eq!(manifest["command"], "spectrum");
    assert_eq!(manifest["preset"], "fig3a");
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 2);
    assert_eq!(manifest["reproducibility_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn fig5_manifest_lists_assumptions() {
    let dir = tempdir().unwrap();
    let o = aomm(&["spectrum", "--preset", "fig5d", "--out", path_str(dir.path())]);
    assert_eq!(code(&o), 0);
    let m = read_json(&dir.path().join("manifest.json"));
    let text = m["assumptions"].to_string();
    assert!(text.contains("g_c/2pi = 8 MHz"));
    assert!(text.contains("g_a/2pi = 8 MHz"));
    let f = read_json(&dir.path().join("features.json"));
    assert!(f["transmission_windows"]["window_count"].as_u64().unwrap() >= 1);
}

#[test]
fn config_file_and_convention_override() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{
  "omega_b_over_2pi_hz": 4.0e7,
  "kappa_a_over_2pi_hz": 1.0e6,
  "kappa_c_over_2pi_hz": 2.0e6,
  "kappa_m_over_2pi_hz": 1.0e6,
  "kappa_b_over_2pi_hz": 100.0,
  "g_c_over_2pi_hz": 8.0e6,
  "probe_amplitude": 1.0,
  "sign_convention": "standard"
}"#,
    )
    .unwrap();
    let std_out = dir.path().join("std");
    let pap_out = dir.path().join("pap");
    let args = |out: &Path, extra: &[&'static str]| {
        let mut v = vec!["spectrum".to_string(), "--config".into(), cfg.display().to_string()];
        v.extend([
            "--grid-points".into(),
            "401".into(),
            "--out".into(),
            out.display().to_string(),
        ]);
        v.extend(extra.iter().map(|s| s.to_string()));
        v
    };
    let run = |v: Vec<String>| Command::new(env!("CARGO_BIN_EXE_aomm")).args(v).output().unwrap();
    assert_eq!(code(&run(args(&std_out, &[]))), 0);
    assert_eq!(code(&run(args(&pap_out, &["--convention", "paper"]))), 0);
    let f = read_json(&std_out.join("features.json"));
    assert_eq!(f["window_count"], 1);
    let m = read_json(&pap_out.join("manifest.json"));
    assert_eq!(m["config"]["convention"], "paper");

    // mirrored rows: absorption column reversed
    let col = |p: &Path| -> Vec<String> {
        fs::read_to_string(p.join("spectrum.csv"))
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(2).unwrap().to_string())
            .collect()
    };
    let mut a = col(&std_out);
    a.reverse();
    assert_eq!(a, col(&pap_out));
}

#[test]
fn malformed_config_exits_2_with_offset() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, "{\n  \"omega_b_over_2pi_hz\": 4.0e7,\n  oops\n}").unwrap();
    let o = aomm(&["spectrum", "--config", path_str(&cfg), "--out", path_str(dir.path())]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("byte offset 36"), "{err}");
}

#[test]
fn unknown_key_is_named() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("typo.json");
    fs::write(
        &cfg,
        r#"{"omega_b_over_2pi_hz": 4e7, "kappa_a_over_2pi_hz": 1e6, "kappa_c_over_2pi_hz": 2e6,
            "kappa_m_over_2pi_hz": 1e6, "kappa_b_over_2pi_hz": 100, "g_x_over_2pi_hz": 1}"#,
    )
    .unwrap();
    let o = aomm(&["spectrum", "--config", path_str(&cfg), "--out", path_str(dir.path())]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("g_x_over_2pi_hz"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&aomm(&["spectrum", "--preset", "fig9"])), 2);
    assert_eq!(code(&aomm(&["spectrum", "--preset", "fig6"])), 2);
    assert_eq!(code(&aomm(&["delay-surface", "--eta", "2..1:3"])), 2);
    assert_eq!(code(&aomm(&["frobnicate"])), 2);
    assert_eq!(code(&aomm(&["plot", "--table", "x.csv", "--kind", "histogram"])), 2);
    assert_eq!(
        code(&aomm(&["delay-surface", "--preset", "fig3a", "--out", "/tmp/unused"])),
        2
    );
}

#[test]
fn eta_zero_surface_is_the_omit_curve() {
    let dir = tempdir().unwrap();
    let o = aomm(&[
        "delay-surface",
        "--eta",
        "0..0",
        "--grid-points",
        "51",
        "--out",
        path_str(dir.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("surface.csv")).unwrap();
    let rows: Vec<Vec<f64>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 51);
    let omit = default_config().with_couplings(Couplings::from_hz(8e6, 8e6, 0.0));
    let grid = GridSpec::uniform(51, 0.5, 1.5).build(omit.omega_b).unwrap();
    for (row, delta) in rows.iter().zip(grid.delta_values()) {
        assert_eq!(row[0], 0.0);
        let tau = response::group_delay(&omit, delta, DelayMode::OutputField).unwrap();
        assert!((row[2] - tau).abs() <= 1e-9 * tau.abs(), "{} vs {tau}", row[2]);
    }
    let summary = read_json(&dir.path().join("summary.json"));
    assert_eq!(summary["eta_points"], 1);
    assert!(summary["max_tau_s"].as_f64().is_some());
    let m = read_json(&dir.path().join("manifest.json"));
    assert_eq!(m["preset"], "fig6");
    assert_eq!(m["config"]["couplings"]["g_a"].as_f64().unwrap(), hz_to_rad(8e6));
}

#[test]
fn verify_passes_in_both_conventions() {
    for conv in ["standard", "paper"] {
        let dir = tempdir().unwrap();
        let report = dir.path().join("verify.json");
        let o = aomm(&["verify", "--convention", conv, "--report", path_str(&report)]);
        let stdout = String::from_utf8_lossy(&o.stdout);
        assert_eq!(code(&o), 0, "{stdout}");
        assert!(stdout.contains("PASS convention_mirror"));
        assert!(!stdout.contains("FAIL"));
        let r = read_json(&report);
        assert!(r["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    }
}

#[test]
fn verify_long_run_executes_full_stiffness_check() {
    let o = aomm(&["verify", "--long-run"]);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(code(&o), 0, "{stdout}");
    assert!(stdout.contains("PASS oracle_full_stiffness"));
}

#[test]
fn plot_scripts() {
    let dir = tempdir().unwrap();
    let o = aomm(&[
        "spectrum",
        "--preset",
        "fig3b",
        "--grid-points",
        "101",
        "--emit-plot",
        "absorption",
        "--out",
        path_str(dir.path()),
    ]);
    assert_eq!(code(&o), 0);
    let script = fs::read_to_string(dir.path().join("plot_absorption.py")).unwrap();
    assert!(script.contains("data[\"delta_over_omega_b\"], data[\"absorption\"]"));

    let table = dir.path().join("spectrum.csv");
    let out = dir.path().join("phase.py");
    let o = aomm(&[
        "plot",
        "--table",
        path_str(&table),
        "--kind",
        "phase",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code(&o), 0);
    assert!(fs::read_to_string(&out).unwrap().contains("\"phase_rad\""));

    // a spectrum table cannot feed a heatmap
    let o = aomm(&["plot", "--table", path_str(&table), "--kind", "surface"]);
    assert_eq!(code(&o), 2);

    let missing = dir.path().join("nope.csv");
    let o = aomm(&["plot", "--table", path_str(&missing), "--kind", "absorption"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn surface_plot_is_heatmap() {
    let dir = tempdir().unwrap();
    let o = aomm(&[
        "delay-surface",
        "--eta",
        "0..2:5",
        "--grid-points",
        "21",
        "--emit-plot",
        "surface",
        "--out",
        path_str(dir.path()),
    ]);
    assert_eq!(code(&o), 0);
    let script = fs::read_to_string(dir.path().join("plot_surface.py")).unwrap();
    assert!(script.contains("pcolormesh"));
}

#[test]
fn replay_reproduces_and_detects_tampering() {
    let dir = tempdir().unwrap();
    let first = dir.path().join("first");
    let o = aomm(&[
        "spectrum",
        "--preset",
        "fig3d",
        "--grid-points",
        "301",
        "--out",
        path_str(&first),
    ]);
    assert_eq!(code(&o), 0);
    let manifest = first.join("manifest.json");
    let again = dir.path().join("again");
    let o = aomm(&["replay", "--manifest", path_str(&manifest), "--out", path_str(&again)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(
        fs::read(first.join("spectrum.csv")).unwrap(),
        fs::read(again.join("spectrum.csv")).unwrap()
    );

    let mut m = read_json(&manifest);
    m["outputs"][0]["sha256"] = Value::String("0".repeat(64));
    let tampered = dir.path().join("tampered.json");
    fs::write(&tampered, m.to_string()).unwrap();
    let o = aomm(&[
        "replay",
        "--manifest",
        path_str(&tampered),
        "--out",
        path_str(&dir.path().join("t")),
    ]);
    assert_eq!(code(&o), 1);

    let surface = dir.path().join("surface");
    assert_eq!(
        code(&aomm(&[
            "delay-surface",
            "--eta",
            "0..1:3",
            "--grid-points",
            "11",
            "--out",
            path_str(&surface)
        ])),
        0
    );
    let o = aomm(&[
        "replay",
        "--manifest",
        path_str(&surface.join("manifest.json")),
        "--out",
        path_str(&dir.path().join("surface2")),
    ]);
    assert_eq!(code(&o), 0);
}

#[test]
fn unwritable_output_is_a_runtime_error() {
    let dir = tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let o = aomm(&[
        "spectrum",
        "--preset",
        "fig3a",
        "--grid-points",
        "11",
        "--out",
        path_str(&blocker),
    ]);
    assert_eq!(code(&o), 3);
}
