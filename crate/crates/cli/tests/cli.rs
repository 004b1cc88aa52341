use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn doa(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_doa"))
        .args(args)
        .current_dir(dir)
        .env_remove("DOA_TOLERANCES")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const AMPLITUDE_DAMPING: &str = r#"{"sites": 1, "lindblad_ops": [[{"coeff": [1, 0], "string": "-"}]]}"#;
const CLOSED: &str = r#"{"dim": 2}"#;

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn spectrum_of_closed_system_is_all_peripheral() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "m.json", CLOSED);
    let out = doa(&["spectrum", "m.json"], dir.path());
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["J"], 4);
    assert_eq!(v["J0"], 4);
    assert!(v["gap"].is_null());
}

#[test]
fn spectrum_of_xxz_preset() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "m.json", r#"{"model": "xxz", "n_sites": 4}"#);
    let out = doa(&["spectrum", "m.json", "--json", "s.json"], dir.path());
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.json")).unwrap()).unwrap();
    assert_eq!(v["J"], 14);
    assert_eq!(v["kernel_dim"], 10);
    assert_eq!(v["observables"].as_array().unwrap().len(), 14);
}

#[test]
fn malformed_json_exits_with_position() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "m.json", "{\n \"dim\": 2,\n ]");
    let out = doa(&["spectrum", "m.json"], dir.path());
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn validation_and_usage_errors() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "h.json", r#"{"dim": 2, "hamiltonian": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]}"#);
    assert_eq!(code(&doa(&["spectrum", "h.json"], dir.path())), 3);
    assert_eq!(code(&doa(&["spectrum", "missing.json"], dir.path())), 2);
    assert_eq!(code(&doa(&["frobnicate"], dir.path())), 2);
    write(dir.path(), "m.json", AMPLITUDE_DAMPING);
    let out = Command::new(env!("CARGO_BIN_EXE_doa"))
        .args(["spectrum", "m.json"])
        .current_dir(dir.path())
        .env("DOA_TOLERANCES", r#"{"member": -1}"#)
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
}

/// Three-level cascade `2 → 1 → 0` with equal rates: the decaying
/// eigenvalue `-1` carries a Jordan block.
const CASCADE: &str = r#"{"dim": 3, "lindblad_ops": [
    [[[0, 0], [1, 0], [0, 0]], [[0, 0], [0, 0], [0, 0]], [[0, 0], [0, 0], [0, 0]]],
    [[[0, 0], [0, 0], [0, 0]], [[0, 0], [0, 0], [1, 0]], [[0, 0], [0, 0], [0, 0]]]]}"#;

#[test]
fn defective_peripheral_block_exits_4() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "m.json", CASCADE);
    assert_eq!(code(&doa(&["spectrum", "m.json"], dir.path())), 0);
    // Widening the peripheral band pulls the Jordan block into it.
    let out = Command::new(env!("CARGO_BIN_EXE_doa"))
        .args(["spectrum", "m.json"])
        .current_dir(dir.path())
        .env("DOA_TOLERANCES", r#"{"perif": 0.6}"#)
        .output()
        .unwrap();
    assert_eq!(code(&out), 4);
    let v = json(&out);
    assert_eq!(v["defect_flag"], true);
    assert!(v["observables"].is_null());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn membership_verdicts_and_exit_codes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "m.json", r#"{"preset": "xxz"}"#);
    for s in ["dark", "conducting", "rho02", "mixed"] {
        let out = doa(&["preset-state", s, "--out", &format!("{s}.json")], d);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let out = doa(&["membership", "m.json", "--steady", "conducting.json", "--initial", "rho02.json"], d);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["verdict"], "member");
    assert_eq!(v["deltas"].as_array().unwrap().len(), 14);

    let out = doa(&["membership", "m.json", "--steady", "dark.json", "--initial", "mixed.json"], d);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["verdict"], "non-member");

    let out = doa(&["membership", "m.json", "--steady", "rho02.json", "--initial", "mixed.json"], d);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("residual"));

    write(d, "small.json", "[[[1, 0]]]");
    let out = doa(&["membership", "m.json", "--steady", "small.json", "--initial", "mixed.json"], d);
    assert_eq!(code(&out), 2);
    write(d, "neg.json", &negative_state_16());
    let out = doa(&["membership", "m.json", "--steady", "dark.json", "--initial", "neg.json"], d);
    assert_eq!(code(&out), 3);
}

fn negative_state_16() -> String {
    let rows: Vec<Vec<[f64; 2]>> = (0..16)
        .map(|i| {
            (0..16)
                .map(|j| match (i, j) {
                    (0, 0) => [1.5, 0.0],
                    (1, 1) => [-0.5, 0.0],
                    _ => [0.0, 0.0],
                })
                .collect()
        })
        .collect();
    serde_json::to_string(&rows).unwrap()
}

#[test]
fn evolve_writes_csv_and_validates_grid() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "m.json", AMPLITUDE_DAMPING);
    write(d, "up.json", "[[[0, 0], [0, 0]], [[0, 0], [1, 0]]]");
    write(d, "ground.json", "[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]");
    let out = doa(&["evolve", "m.json", "--initial", "up.json", "--ref", "ground.json", "--tmax", "40", "--steps", "5", "--csv", "t.csv"], d);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(d.join("t.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,distance,trace_error,min_eig"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[4][0], 40.0);
    assert!(rows[0][1] > 1.0 && rows[4][1] < 1e-8);

    // reference equal to a steady initial state: zero distances
    let out = doa(&["evolve", "m.json", "--initial", "ground.json", "--ref", "ground.json", "--tmax", "3", "--steps", "4"], d);
    assert_eq!(code(&out), 0);
    for line in String::from_utf8(out.stdout).unwrap().lines().skip(1) {
        let distance: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(distance < 1e-14);
    }

    for (tmax, steps) in [("0", "2"), ("1", "1"), ("-2", "5")] {
        let out = doa(&["evolve", "m.json", "--initial", "up.json", "--tmax", tmax, "--steps", steps], d);
        assert_eq!(code(&out), 2, "tmax {tmax} steps {steps}");
    }
}

#[test]
fn reports_flag_uniqueness() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "ad.json", AMPLITUDE_DAMPING);
    let v = json(&doa(&["report", "ad.json"], d));
    assert_eq!(v["unique"], true);
    assert_eq!(v["doa_measure_zero"], false);
    assert_eq!(v["representatives"].as_array().unwrap().len(), 1);

    write(d, "closed.json", CLOSED);
    let v = json(&doa(&["report", "closed.json"], d));
    assert_eq!(v["unique"], false);
    assert_eq!(v["doa_measure_zero"], true);

    write(d, "xxz.json", r#"{"preset": "xxz"}"#);
    let v = json(&doa(&["report", "xxz.json"], d));
    assert_eq!(v["unique"], false);
    assert_eq!(v["doa_measure_zero"], true);
    assert_eq!(v["kernel_dim"], 10);
}

#[test]
fn export_round_trips_bit_identically() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "xxz.json", r#"{"preset": "xxz", "n_sites": 3, "g_minus": 0.1, "g_plus": 0.3}"#);
    assert_eq!(code(&doa(&["export", "xxz.json", "--out", "dense.json"], d)), 0);
    assert_eq!(code(&doa(&["export", "dense.json", "--out", "again.json"], d)), 0);
    let a = std::fs::read_to_string(d.join("dense.json")).unwrap();
    let b = std::fs::read_to_string(d.join("again.json")).unwrap();
    assert_eq!(a, b);
}
