use std::f64::consts::FRAC_PI_2;
use std::process::{Command, Output};

use abring::sweep::{parse_csv, CSV_HEADER, SHIFT_CSV_HEADER};
use serde_json::Value;

fn abring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abring")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn locus_at_unit_gain() {
    let o = abring(&["locus", "--gamma", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    // both critical fluxes merge at pi/4
    let phi = v["phi_c"].as_array().unwrap();
    assert_eq!(phi.len(), 1);
    assert!((phi[0].as_f64().unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
}

#[test]
fn locus_out_of_range_is_usage_error() {
    let o = abring(&["locus", "--gamma", "1.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn unknown_subcommand_and_bad_args() {
    assert_eq!(abring(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(abring(&["sweep", "--quantity", "amplitudes", "--gamma", "0.1", "--phi", "1:0:5", "--k", "1"]).status.code(), Some(1));
    assert_eq!(abring(&["--help"]).status.code(), Some(0));
}

#[test]
fn sweep_csv_to_stdout() {
    let o = abring(&["sweep", "--quantity", "amplitudes", "--gamma", "0.3", "--phi", "0:1.5:7", "--k", "0.4:2.6:3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some(CSV_HEADER));
    let rows = parse_csv(&text).unwrap();
    assert_eq!(rows.len(), 21);
    // gamma outermost, then phi, then k
    assert!(rows[0].phi == 0.0 && rows[1].phi == 0.0 && rows[3].phi > 0.0);
}

#[test]
fn sweep_config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.json");
    let out = dir.path().join("rows.json");
    std::fs::write(
        &cfg,
        r#"{"quantity": "amplitudes", "gamma": 0.5, "phi": "0:1:4", "k": 1.0, "format": "csv"}"#,
    )
    .unwrap();
    let o = abring(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "json",
        "--gamma",
        "0.25",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["gamma"] == 0.25));
}

#[test]
fn sweep_config_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"quantity": "amplitudes", "flux": 1}"#).unwrap();
    assert_eq!(abring(&["sweep", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn unwritable_output_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("rows.csv");
    let o = abring(&["sweep", "--quantity", "chi", "--gamma", "0.1", "--phi", "0", "--k", "1", "--output", target.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn phase_profile_writes_lapse_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("profile.csv");
    let o = abring(&[
        "sweep", "--quantity", "phase_profile", "--gamma", "0.707", "--k", "1.5707963267948966",
        "--phi", "0:1.5707963267948966:2001", "--output", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let summary: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["lapse_events"].as_array().unwrap().len(), 2);
    assert_eq!(parse_csv(&std::fs::read_to_string(&out).unwrap()).unwrap().len(), 2001);
}

#[test]
fn max_phase_shift_sweep_csv() {
    let o = abring(&["sweep", "--quantity", "max_phase_shift", "--gamma", "0:1:3", "--k", &FRAC_PI_2.to_string()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some(SHIFT_CSV_HEADER));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    // the reference flux is a pole for gamma = 0 and 1 at the band centre
    assert!(lines[1].ends_with(',') && lines[3].ends_with(','));
    let d: f64 = lines[2].rsplit(',').next().unwrap().parse().unwrap();
    assert_eq!(d, std::f64::consts::PI);
}

#[test]
fn phase_shift_subcommand() {
    let k = (FRAC_PI_2 + 1e-5).to_string();
    let o = abring(&["phase-shift", "--k", &k, "--gamma", "0.8"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let d = v["delta_omega"].as_f64().unwrap();
    assert!((d - std::f64::consts::PI).abs() < 0.1, "{d}");

    // the reference flux sits on the pole here
    let o = abring(&["phase-shift", "--k", "1.5707963267948966", "--gamma", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_and_equivalence_pass() {
    let o = abring(&["verify", "oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);

    let o = abring(&["equivalence", "--n", "12", "--gamma", "0.4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["cross_block"].as_f64().unwrap() < 1e-12);
}

#[test]
fn state_dump_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("state.json");
    let o = abring(&["state-dump", "--branch", "singular-plus", "--gamma", "0.707", "--n", "10", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let sites: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(sites.len(), 22);
    assert_eq!(sites[0]["site"], "-10");
}
