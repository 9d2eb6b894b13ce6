use std::path::Path;
use std::process::{Command, Output};

use invsim::output::{read_controls, CONTROL_COLUMNS};

fn invsim(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invsim"))
        .args(args)
        .current_dir(cwd)
        .env_remove("INVSIM_DT")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_airframe(dir: &Path) -> String {
    let path = dir.join("mirage3.json");
    std::fs::write(&path, invsim::airframe::MIRAGE3_JSON).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn full_run_writes_every_station_and_figures() {
    let dir = tempfile::tempdir().unwrap();
    let af = write_airframe(dir.path());
    let o = invsim(
        &["run", "--airframe", &af, "--maneuver", "mirage-double-roll", "--dt", "0.001", "--out", "controls.csv", "--plots", "figs"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("controls.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CONTROL_COLUMNS.join(","));
    assert_eq!(lines.count(), 30_001);
    let svgs = std::fs::read_dir(dir.path().join("figs"))
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "svg"))
        .count();
    assert_eq!(svgs, 8);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("8278.56"), "{stdout}");
}

#[test]
fn emitted_controls_reparse_to_identical_text() {
    let dir = tempfile::tempdir().unwrap();
    let o = invsim(&["run", "--maneuver", "mirage-double-roll", "--dt", "0.01", "--out", "a.csv"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let rows = read_controls(text.as_bytes()).unwrap();
    let rebuilt: Vec<String> = rows
        .iter()
        .map(|r| r.iter().map(|&v| invsim::output::format_sig9(v)).collect::<Vec<_>>().join(","))
        .collect();
    let original: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(original, rebuilt);
}

#[test]
fn runs_are_deterministic_and_honour_the_environment_step() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.csv", "b.csv"] {
        let o = Command::new(env!("CARGO_BIN_EXE_invsim"))
            .args(["run", "--maneuver", "mirage-double-roll", "--out", name])
            .env("INVSIM_DT", "0.01")
            .current_dir(dir.path())
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 3002);
}

#[test]
fn summary_matches_values_recomputed_from_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = invsim(
        &["run", "--maneuver", "mirage-double-roll", "--dt", "0.005", "--out", "c.csv", "--summary-json", "s.json"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = read_controls(std::fs::File::open(dir.path().join("c.csv")).unwrap()).unwrap();
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.json")).unwrap()).unwrap();
    let n = rows.len() as f64;
    let mean_deg = |k: usize| rows.iter().map(|r| r[k]).sum::<f64>() / n * 180.0 / std::f64::consts::PI;
    let max_abs_deg = |k: usize| rows.iter().map(|r| r[k].abs()).fold(0.0, f64::max) * 180.0 / std::f64::consts::PI;
    let thrust_max = rows.iter().map(|r| r[1]).fold(f64::MIN, f64::max);
    let f = |path: &str| summary.pointer(path).unwrap().as_f64().unwrap();
    // the CSV carries nine significant digits
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-7 * b.abs().max(1e-3);
    assert!(close(f("/mean_delta_l_deg"), mean_deg(2)));
    assert!(close(f("/mean_delta_n_deg"), mean_deg(4)));
    assert!(close(f("/max_abs_delta_n_deg/value"), max_abs_deg(4)));
    assert!(close(f("/thrust_max/value"), thrust_max));
    assert_eq!(f("/stations") as usize, rows.len());
}

#[test]
fn verify_and_plot_accept_run_output() {
    let dir = tempfile::tempdir().unwrap();
    let run = invsim(&["run", "--maneuver", "mirage-double-roll", "--dt", "0.01", "--out", "c.csv"], dir.path());
    assert!(run.status.success(), "{}", stderr(&run));
    let o = invsim(
        &["verify", "--maneuver", "mirage-double-roll", "--dt", "0.01", "--controls", "c.csv", "--report", "r.json"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    for key in ["max_pos_dev_m", "rms_pos_dev_m", "max_roll_dev_deg"] {
        assert!(report[key].as_f64().unwrap() >= 0.0);
    }
    assert_eq!(report["pass"], serde_json::Value::Bool(true));

    let o = invsim(
        &["plot", "--maneuver", "mirage-double-roll", "--dt", "0.01", "--controls", "c.csv", "--dir", "p"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("p/orbit.svg").exists());

    // controls for a different step do not line up with the maneuver
    let o = invsim(
        &["verify", "--maneuver", "mirage-double-roll", "--dt", "0.02", "--controls", "c.csv"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn atmosphere_prints_the_reference_row() {
    let dir = tempfile::tempdir().unwrap();
    let o = invsim(&["atmosphere", "--altitude", "5000"], dir.path());
    assert!(o.status.success());
    let out = String::from_utf8(o.stdout).unwrap();
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "altitude_m,density_kg_m3,temperature_K,speed_of_sound_m_s");
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row[0], 5000.0);
    assert!((row[1] - 0.735872).abs() < 5e-7);
    assert!((row[2] - 255.65).abs() < 5e-3);
    assert!((row[3] - 320.50).abs() < 5e-3);

    let o = invsim(&["atmosphere", "--table", "0", "20000", "1000"], dir.path());
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 22);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = invsim(&["run", "--airframe", "missing.json", "--maneuver", "mirage-double-roll"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("missing.json"));

    let o = invsim(&["run", "--maneuver", "no-such-maneuver"], dir.path());
    assert_eq!(o.status.code(), Some(3));

    let o = invsim(&["run", "--maneuver", "mirage-double-roll", "--dt", "0.0007"], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));

    let o = invsim(&["run", "--maneuver"], dir.path());
    assert_eq!(o.status.code(), Some(4));
    let o = invsim(&["run", "--maneuver", "mirage-double-roll", "--trajectory", "x.csv"], dir.path());
    assert_eq!(o.status.code(), Some(4));

    // a vertical climb has no defined heading
    let mut csv = String::from("t,x_g,y_g,z_g,phi_rad\n");
    for i in 0..50 {
        let t = i as f64 * 0.1;
        csv.push_str(&format!("{t},0,0,{},0\n", -1000.0 - 100.0 * t));
    }
    std::fs::write(dir.path().join("up.csv"), csv).unwrap();
    let o = invsim(&["run", "--trajectory", "up.csv", "--dt", "0.1"], dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));

    let o = invsim(&["--version"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn coarse_step_warns() {
    let dir = tempfile::tempdir().unwrap();
    let o = invsim(&["run", "--maneuver", "mirage-double-roll", "--dt", "0.02", "--out", "c.csv"], dir.path());
    assert!(o.status.success());
    assert!(stderr(&o).contains("warning"));
}
