//! End-to-end checks of the installed binary: pinned exit codes, JSON and CSV
//! payload shapes, and byte determinism under a fixed seed.

use std::path::Path;
use std::process::{Command, Output};

fn entlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entlab"))
        .args(args)
        .output()
        .expect("binary launches")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON document")
}

#[test]
fn projectors_writes_sector_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("proj.json");
    let out = entlab(&["projectors", "--d", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(doc["local_dim"], 3);
    assert_eq!(doc["traces"]["sym"], 10);
    assert_eq!(doc["traces"]["antisym"], 1);
    assert_eq!(doc["traces"]["chiral"], 8);
    assert_eq!(doc["projectors"]["sym"]["entries"].as_array().unwrap().len(), 27);
    assert_eq!(doc["bases"]["chiral"].as_array().unwrap().len(), 8);
}

#[test]
fn projectors_rejects_dimensions_over_the_dense_cap() {
    let out = entlab(&["projectors", "--d", "9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn witness_reports_class_ceilings() {
    let out = entlab(&["witness", "--d", "3", "--which", "minus", "--bounds"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("fully separable 1.5"));
    assert!(text.contains("quantum 5.19"));
}

#[test]
fn witness_bounds_need_the_plain_pair() {
    let out = entlab(&["witness", "--d", "3", "--which", "P", "--bounds"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gm_w_state_matches_the_known_measure() {
    let out = entlab(&["gm", "--state", "w", "--d", "2"]);
    let doc = stdout_json(&out);
    let g = doc["geometric_measure"].as_f64().unwrap();
    assert!((g - 5.0 / 9.0).abs() < 1e-6, "geometric_measure = {g}");
    assert_eq!(doc["converged"], true);
}

#[test]
fn gm_output_is_byte_deterministic() {
    let a = entlab(&["gm", "--state", "chiral", "--d", "3", "--seed", "23"]);
    let b = entlab(&["gm", "--state", "chiral", "--d", "3", "--seed", "23"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sdp_overlap_matches_the_closed_form() {
    let out = entlab(&["sdp", "--problem", "overlap", "--d", "3"]);
    let doc = stdout_json(&out);
    let v = doc["value"].as_f64().unwrap();
    assert!((v - 9.0 / 32.0).abs() < 1e-6, "value = {v}");
}

#[test]
fn sdp_overlap_fails_over_the_dense_cap() {
    let out = entlab(&["sdp", "--problem", "overlap", "--d", "7"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn pptgme_alias_matches_the_sdp_route() {
    let a = entlab(&["pptgme", "--d", "3", "--points", "3"]);
    let b = entlab(&["sdp", "--problem", "pptgme", "--d", "3", "--points", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8_lossy(&a.stdout);
    assert!(text.starts_with("wplus,wminus,a,b,c,min_pt_eig,verdict\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn statespace_emits_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let svg = dir.path().join("sweep.svg");
    let out = entlab(&[
        "statespace", "--d", "3", "--pair", "w", "--families", "fs,quantum", "--grid", "16",
        "--restarts", "8", "--csv", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let table = std::fs::read_to_string(&csv).unwrap();
    assert!(table.starts_with("theta,family,value,wx,wy\n"));
    assert_eq!(table.lines().count(), 1 + 2 * 16);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn statespace_rejects_unknown_families() {
    let out = entlab(&["statespace", "--d", "3", "--families", "fs,nope"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn povm_on_the_w_state_is_cycle_invariant() {
    let out = entlab(&["povm", "--state", "w", "--exact"]);
    let doc = stdout_json(&out);
    let p = doc["p"].as_array().unwrap();
    assert_eq!(p.len(), 3);
    assert!((p[0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((doc["trace_cube"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert!(doc["gce"].as_f64().unwrap() > 0.0);
    assert_eq!(doc["counts"].as_array().unwrap().len(), 3);
}

#[test]
fn povm_sampling_is_seed_deterministic() {
    let args = ["povm", "--state", "chiral", "--d", "3", "--shots", "20000", "--seed", "7"];
    let a = entlab(&args);
    let b = entlab(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let counts: u64 = doc["counts"].as_array().unwrap().iter().map(|c| c.as_u64().unwrap()).sum();
    assert_eq!(counts, 20000);
}

#[test]
fn gm_json_flag_writes_a_stdout_copy() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gm.json");
    let out = entlab(&["gm", "--state", "w", "--d", "2", "--json", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&path).unwrap(), out.stdout);
}

#[test]
fn povm_reads_state_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.json");
    let amp = 1.0 / 3f64.sqrt();
    let mut amps = vec![[0.0, 0.0]; 8];
    for idx in [1, 2, 4] {
        amps[idx] = [amp, 0.0];
    }
    let doc = serde_json::json!({"parties": 3, "local_dim": 2, "amplitudes": amps});
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = entlab(&["povm", "--state", path.to_str().unwrap(), "--exact"]);
    let parsed = stdout_json(&out);
    assert!((parsed["p"][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn verify_algebra_passes_and_prints_verdicts() {
    let out = entlab(&["verify", "--suite", "algebra"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.matches("PASS").count(), 3);
    assert!(text.contains("3 of 3 criteria passed"));
}

#[test]
fn missing_state_files_exit_with_one() {
    let missing = Path::new("/tmp/entlab-no-such-state.json");
    assert!(!missing.exists());
    let out = entlab(&["gm", "--state", &format!("file:{}", missing.display())]);
    assert_eq!(out.status.code(), Some(1));
}
