//! Binary-level checks: exit codes, output schemas, and byte-identical
//! reruns independent of the worker count.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lgcp() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lgcp"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

/// Small but physical: experiment-A settings with a light powder.
const SMALL_SIM: &str = "\
i_nutation_khz = 50.00
i_offset_khz = 36.451
s_nutation_khz = 53.05
rotor_khz = 10.0
distance_angstrom = 1.04
n_points = 64
powder_n = 32
";

const SMALL_SWEEP: &str = "\
i_nutation_khz = 56.18
i_offset_khz = 39.725
s_nutation_khz = 10.0
rotor_khz = 10.0
distance_angstrom = 1.04
n_points = 64
powder_n = 16
sweep_param = n_power
sweep_start_khz = 58.0
sweep_stop_khz = 62.0
sweep_step_khz = 2.0
";

fn assert_success(out: &Output) {
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn simulate_writes_the_three_csvs_with_pinned_headers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.conf", SMALL_SIM);
    let out_dir = dir.path().join("out");
    let out = lgcp()
        .args(["simulate", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert_success(&out);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("scale factor k ="), "stdout: {stdout}");

    let first_line = |name: &str| {
        let text = fs::read_to_string(out_dir.join(name)).unwrap();
        text.lines().next().unwrap().to_string()
    };
    assert_eq!(first_line("buildup.csv"), "time_s,signal");
    assert_eq!(first_line("spectrum.csv"), "freq_hz,amplitude");
    assert_eq!(
        first_line("scale_factor.csv"),
        "true_delta_hz,detected,observed_hz,k,peak_freq_hz,uncertainty"
    );
}

#[test]
fn sweep_writes_contour_and_table_with_pinned_headers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.conf", SMALL_SWEEP);
    let out_dir = dir.path().join("out");
    let out = lgcp()
        .args(["sweep", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert_success(&out);

    let contour = fs::read_to_string(out_dir.join("contour.csv")).unwrap();
    assert_eq!(contour.lines().next().unwrap(), "parameter_khz,freq_hz,amplitude");
    // 3 grid points × 512 bins + header
    assert_eq!(contour.lines().count(), 3 * 64 * 8 + 1);

    let table = fs::read_to_string(out_dir.join("scale_table.csv")).unwrap();
    assert_eq!(
        table.lines().next().unwrap(),
        "parameter_khz,detected,observed_hz,k,peak_freq_hz,uncertainty"
    );
    assert_eq!(table.lines().count(), 3 + 1);
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let sim = write_config(dir.path(), "sim.conf", SMALL_SIM);
    let sweep = write_config(dir.path(), "sweep.conf", SMALL_SWEEP);

    let run = |args: &[&str], out: &Path| {
        let output = lgcp().args(args).args(["--out", out.to_str().unwrap()]).output().unwrap();
        assert_success(&output);
    };

    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    run(&["simulate", sim.to_str().unwrap(), "--threads", "2"], &a);
    run(&["simulate", sim.to_str().unwrap(), "--threads", "1"], &b);
    run(&["simulate", sim.to_str().unwrap()], &c);
    for name in ["buildup.csv", "spectrum.csv", "scale_factor.csv"] {
        let bytes_a = fs::read(a.join(name)).unwrap();
        assert_eq!(bytes_a, fs::read(b.join(name)).unwrap(), "{name} differs with 1 thread");
        assert_eq!(bytes_a, fs::read(c.join(name)).unwrap(), "{name} differs on rerun");
    }

    let (sa, sb) = (dir.path().join("sa"), dir.path().join("sb"));
    run(&["sweep", sweep.to_str().unwrap(), "--threads", "2"], &sa);
    run(&["sweep", sweep.to_str().unwrap(), "--threads", "1"], &sb);
    for name in ["contour.csv", "scale_table.csv"] {
        assert_eq!(
            fs::read(sa.join(name)).unwrap(),
            fs::read(sb.join(name)).unwrap(),
            "{name} differs across thread counts"
        );
    }
}

#[test]
fn missing_required_key_exits_one_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.conf",
        "i_nutation_khz = 50\ni_offset_khz = 36\ns_nutation_khz = 53\ndistance_angstrom = 1.04\n",
    );
    let out = lgcp().args(["simulate", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("rotor_khz"), "stderr: {stderr}");
}

#[test]
fn unknown_key_exits_one_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.conf", &format!("{SMALL_SIM}rotor_speed = 12\n"));
    let out = lgcp().args(["predict", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rotor_speed"));
}

#[test]
fn sweep_without_sweep_section_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.conf", SMALL_SIM);
    let out = lgcp().args(["sweep", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_config_file_exits_one() {
    let out = lgcp().args(["simulate", "/nonexistent/nowhere.conf"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn predict_prints_the_magic_angle() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "magic.conf",
        "i_nutation_khz = 56.18\ni_offset_khz = 39.725\ns_nutation_khz = 53.05\n\
         rotor_khz = 10.0\ndistance_angstrom = 1.04\n",
    );
    let out = lgcp().args(["predict", cfg.to_str().unwrap()]).output().unwrap();
    assert_success(&out);
    let stdout = String::from_utf8_lossy(&out.stdout);
    let theta: f64 = stdout
        .lines()
        .find(|l| l.contains("theta_I ="))
        .and_then(|l| l.split("theta_I =").nth(1))
        .and_then(|rest| rest.split_whitespace().next())
        .and_then(|tok| tok.parse().ok())
        .unwrap_or_else(|| panic!("no theta_I in: {stdout}"));
    assert!((theta - 54.74).abs() < 0.02, "theta_I = {theta}");
    assert!(stdout.contains("term"), "stdout: {stdout}");
}

#[test]
fn report_prints_both_offset_conventions_and_both_zq_forms() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.conf", SMALL_SIM);
    let out = lgcp().args(["report", cfg.to_str().unwrap()]).output().unwrap();
    assert_success(&out);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("offset as configured"));
    assert!(stdout.contains("alternate convention, offset x sqrt(2)"));
    assert!(stdout.contains("printed sum form"));
    assert!(stdout.contains("difference variant"));
    assert!(stdout.contains("scale factor k ="));
}

#[test]
fn degenerate_single_point_sweep_matches_direct_simulation() {
    let dir = tempfile::tempdir().unwrap();
    // start < stop with a step larger than the span: exactly one grid point
    let sweep_cfg = write_config(
        dir.path(),
        "one.conf",
        "i_nutation_khz = 50.00\ni_offset_khz = 36.451\ns_nutation_khz = 10\n\
         rotor_khz = 10.0\ndistance_angstrom = 1.04\nn_points = 64\npowder_n = 16\n\
         sweep_param = n_power\nsweep_start_khz = 53.05\nsweep_stop_khz = 54\nsweep_step_khz = 2\n",
    );
    let sim_cfg = write_config(
        dir.path(),
        "direct.conf",
        "i_nutation_khz = 50.00\ni_offset_khz = 36.451\ns_nutation_khz = 53.05\n\
         rotor_khz = 10.0\ndistance_angstrom = 1.04\nn_points = 64\npowder_n = 16\n",
    );
    let out_sweep = dir.path().join("sweep_out");
    let out_sim = dir.path().join("sim_out");
    assert_success(
        &lgcp()
            .args(["sweep", sweep_cfg.to_str().unwrap(), "--out", out_sweep.to_str().unwrap()])
            .output()
            .unwrap(),
    );
    assert_success(
        &lgcp()
            .args(["simulate", sim_cfg.to_str().unwrap(), "--out", out_sim.to_str().unwrap()])
            .output()
            .unwrap(),
    );

    // the sweep's single contour row is the direct simulation's spectrum
    let contour = fs::read_to_string(out_sweep.join("contour.csv")).unwrap();
    let spectrum = fs::read_to_string(out_sim.join("spectrum.csv")).unwrap();
    let contour_rows: Vec<(&str, &str)> = contour
        .lines()
        .skip(1)
        .map(|l| {
            let mut it = l.splitn(3, ',');
            it.next().unwrap();
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect();
    let spectrum_rows: Vec<(&str, &str)> = spectrum
        .lines()
        .skip(1)
        .map(|l| l.split_once(',').unwrap())
        .collect();
    assert_eq!(contour_rows, spectrum_rows);
}
