//! End-to-end tests of the `sgbh` binary: exit codes, artifact layout,
//! determinism, and the fault-injection paths.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run_in(dir: &Path, config_text: &str, extra: &[&str]) -> (Output, PathBuf) {
    let config_path = dir.join("experiment.conf");
    fs::write(&config_path, config_text).unwrap();
    let out_dir = dir.join("out");
    let mut command = Command::new(env!("CARGO_BIN_EXE_sgbh"));
    command
        .current_dir(dir)
        .env_remove("SGBH_OUTPUT_ROOT")
        .arg("--config")
        .arg(&config_path);
    if !extra.contains(&"--check") && !extra.contains(&"--no-out") {
        command.arg("--out").arg(&out_dir);
    }
    for arg in extra {
        if *arg != "--no-out" {
            command.arg(arg);
        }
    }
    (command.output().unwrap(), out_dir)
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn column(csv: &str, header: &str, name: &str) -> f64 {
    for line in csv.lines().skip(1) {
        let mut cells = line.split(',');
        if cells.next() == Some(name) {
            return cells.next().unwrap().parse().unwrap();
        }
    }
    panic!("no row named {name} in table with header {header}");
}

#[test]
fn empty_config_exits_2_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let (output, out_dir) = run_in(dir.path(), "", &[]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("command"));
    assert!(!out_dir.exists());
}

#[test]
fn unknown_key_reports_nearest_valid_key() {
    let dir = tempfile::tempdir().unwrap();
    let (output, out_dir) = run_in(dir.path(), "command = fig2\nbetas = 0.3\n", &[]);
    assert_eq!(output.status.code(), Some(2));
    let message = stderr(&output);
    assert!(message.contains("betas"), "{message}");
    assert!(message.contains("soliton.beta_s"), "{message}");
    assert!(!out_dir.exists());
}

#[test]
fn bad_value_reports_line_and_key() {
    let dir = tempfile::tempdir().unwrap();
    let (output, _) = run_in(dir.path(), "command = fig2\nsoliton.beta_s = fast\n", &[]);
    assert_eq!(output.status.code(), Some(2));
    let message = stderr(&output);
    assert!(message.contains("line 2"), "{message}");
    assert!(message.contains("soliton.beta_s"), "{message}");
}

#[test]
fn duplicate_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let (output, _) = run_in(
        dir.path(),
        "command = fig2\nfig2.beta_points = 9\nfig2.beta_points = 19\n",
        &[],
    );
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("twice"));
}

#[test]
fn check_flag_prints_normalized_defaults_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let (output, out_dir) = run_in(dir.path(), "command = fig2\n", &["--check"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.starts_with("# sgbh "));
    assert!(text.contains("command = fig2\n"));
    assert!(text.contains("circuit.I_c_uA = 2\n"));
    assert!(text.contains("circuit.C_J_fF = 1.2\n"));
    assert!(text.contains("circuit.C_0_fF = 0.8\n"));
    assert!(text.contains("circuit.L_0_nH = 0.01\n"));
    assert!(text.contains("circuit.a_um = 6\n"));
    assert!(!out_dir.exists());
}

#[test]
fn fig2_defaults_pass_and_write_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let (output, out_dir) = run_in(dir.path(), "command = fig2\n", &[]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("check peak_offset: pass"));
    assert!(!text.contains("FAIL"));

    let echo = fs::read_to_string(out_dir.join("config.txt")).unwrap();
    assert!(echo.starts_with("# sgbh "));
    assert!(echo.contains("command = fig2\n"));

    let curve = fs::read_to_string(out_dir.join("temperatures.csv")).unwrap();
    let mut lines = curve.lines();
    assert_eq!(
        lines.next(),
        Some("beta_s,T_comoving,T_lab,T_lab_SI,power_SI")
    );
    assert_eq!(lines.count(), 99);

    let panel = fs::read_to_string(out_dir.join("spectrum.csv")).unwrap();
    assert!(panel.starts_with("omega,occupation\n"));
    assert!(out_dir.join("checks.csv").exists());
    assert!(out_dir.join("scales.csv").exists());
}

#[test]
fn critical_current_override_rescales_plasma_only() {
    let dir = tempfile::tempdir().unwrap();
    let (output, base_dir) = run_in(dir.path(), "command = fig2\n", &[]);
    assert_eq!(output.status.code(), Some(0));
    let nested = dir.path().join("half");
    fs::create_dir(&nested).unwrap();
    let (output, half_dir) = run_in(&nested, "command = fig2\ncircuit.I_c_uA = 1\n", &[]);
    assert_eq!(output.status.code(), Some(0));

    let base = fs::read_to_string(base_dir.join("scales.csv")).unwrap();
    let half = fs::read_to_string(half_dir.join("scales.csv")).unwrap();
    let velocity_base = column(&base, "quantity", "velocity_m_per_s");
    let velocity_half = column(&half, "quantity", "velocity_m_per_s");
    assert_eq!(velocity_base, velocity_half);
    let ratio = column(&half, "quantity", "plasma_rad_per_s")
        / column(&base, "quantity", "plasma_rad_per_s");
    assert!((ratio - 0.5_f64.sqrt()).abs() < 1e-12, "ratio {ratio}");
}

#[test]
fn identical_configs_give_byte_identical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let config = "command = coords\nnumerics.seed = 77\n";
    let (output, first_dir) = run_in(dir.path(), config, &[]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let nested = dir.path().join("again");
    fs::create_dir(&nested).unwrap();
    let (output, second_dir) = run_in(&nested, config, &[]);
    assert_eq!(output.status.code(), Some(0));

    let mut names: Vec<String> = fs::read_dir(&first_dir)
        .unwrap()
        .map(|entry| entry.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert!(names.contains(&"schwarzschild.csv".to_string()));
    assert!(names.contains(&"tortoise.csv".to_string()));
    assert!(names.contains(&"kruskal.csv".to_string()));
    assert!(names.contains(&"residuals.csv".to_string()));
    for name in names {
        let first = fs::read(first_dir.join(&name)).unwrap();
        let second = fs::read(second_dir.join(&name)).unwrap();
        assert_eq!(first, second, "{name} differs between identical runs");
    }
}

#[test]
fn impossible_tolerance_fails_with_audit_trail() {
    let dir = tempfile::tempdir().unwrap();
    let (output, out_dir) = run_in(
        dir.path(),
        "command = curvature\nnumerics.tolerance = 1e-300\n",
        &[],
    );
    assert_eq!(output.status.code(), Some(1));
    assert!(stdout(&output).contains("check dilaton_residual: FAIL"));
    let audit: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("dilaton.json")).unwrap()).unwrap();
    assert_eq!(audit["converged"], false);
    assert!(audit["residual_history"].as_array().unwrap().len() > 1);
}

#[test]
fn impossible_check_bound_fails_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let (output, _) = run_in(
        dir.path(),
        "command = fig2\nchecks.peak_offset = 1e-12\n",
        &[],
    );
    assert_eq!(output.status.code(), Some(1));
    assert!(stdout(&output).contains("check peak_offset: FAIL"));
}

#[test]
fn lattice_writes_si_time_series() {
    let dir = tempfile::tempdir().unwrap();
    let config = "command = lattice\ncircuit.cells = 64\nnumerics.steps = 50\nnumerics.stride = 25\n";
    let (output, out_dir) = run_in(dir.path(), config, &[]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));

    let series = fs::read_to_string(out_dir.join("timeseries.csv")).unwrap();
    let mut lines = series.lines();
    assert_eq!(lines.next(), Some("time,node,flux,flux_rate"));
    assert_eq!(lines.count(), 64 * 3);
    let energy = fs::read_to_string(out_dir.join("energy.csv")).unwrap();
    assert!(energy.starts_with("time,energy\n"));
    assert_eq!(energy.lines().count(), 4);
    assert!(out_dir.join("regime.csv").exists());
}

#[test]
fn kink_writes_natural_unit_time_series() {
    let dir = tempfile::tempdir().unwrap();
    let config = "command = kink\ngrid.points = 256\nnumerics.steps = 100\nnumerics.stride = 50\n";
    let (output, out_dir) = run_in(dir.path(), config, &[]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    assert!(stdout(&output).contains("check shape_error: pass"));
    let series = fs::read_to_string(out_dir.join("timeseries.csv")).unwrap();
    assert!(series.starts_with("time,position,phi,phi_rate\n"));
    assert_eq!(series.lines().count(), 1 + 256 * 3);
}

#[test]
fn spectrum_compares_quadrature_against_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let config = "command = spectrum\nspectrum.points = 4\nspectrum.omega_max = 0.14\n";
    let (output, out_dir) = run_in(dir.path(), config, &[]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let table = fs::read_to_string(out_dir.join("spectrum.csv")).unwrap();
    let mut lines = table.lines();
    assert_eq!(
        lines.next(),
        Some("omega,occupation,occupation_bogoliubov,abs_diff")
    );
    assert_eq!(lines.count(), 4);
}

#[test]
fn json_format_emits_parseable_tables() {
    let dir = tempfile::tempdir().unwrap();
    let (output, out_dir) = run_in(
        dir.path(),
        "command = fig2\noutput.format = json\nfig2.beta_points = 9\n",
        &[],
    );
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("temperatures.json")).unwrap())
            .unwrap();
    assert_eq!(doc["columns"][0], "beta_s");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 9);
    assert!(!out_dir.join("temperatures.csv").exists());
}

#[test]
fn sweep_fans_out_into_per_run_directories() {
    let dir = tempfile::tempdir().unwrap();
    let config = "command = sweep\nsweep.command = fig2\nsweep.key = soliton.beta_s\nsweep.values = 0.3, 0.5\nfig2.beta_points = 9\n";
    let (output, out_dir) = run_in(dir.path(), config, &["--jobs", "2"]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("run 00 soliton.beta_s = 0.3: 5/5 checks passed"));
    assert!(text.contains("run 01 soliton.beta_s = 0.5: 5/5 checks passed"));

    for name in ["00_soliton.beta_s=0.3", "01_soliton.beta_s=0.5"] {
        let sub = out_dir.join(name);
        assert!(sub.join("temperatures.csv").exists(), "{name}");
        let echo = fs::read_to_string(sub.join("config.txt")).unwrap();
        assert!(echo.contains("command = fig2\n"));
    }
    let echo = fs::read_to_string(out_dir.join(Path::new("01_soliton.beta_s=0.5/config.txt")))
        .unwrap();
    assert!(echo.contains("soliton.beta_s = 0.5\n"));
    let summary = fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    assert!(summary.starts_with("run,key,value,directory,checks_passed,checks_total,status\n"));
    assert_eq!(summary.matches(",ok").count(), 2);
}

#[test]
fn sweep_with_only_separators_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let config =
        "command = sweep\nsweep.command = fig2\nsweep.key = soliton.beta_s\nsweep.values = ,,,\n";
    let (output, out_dir) = run_in(dir.path(), config, &[]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("sweep.values"));
    assert!(!out_dir.exists());
}

#[test]
fn sweep_surfaces_child_failures() {
    let dir = tempfile::tempdir().unwrap();
    let config = "command = sweep\nsweep.command = fig2\nsweep.key = checks.peak_offset\nsweep.values = 0.001, 1e-12\nfig2.beta_points = 9\n";
    let (output, out_dir) = run_in(dir.path(), config, &[]);
    assert_eq!(output.status.code(), Some(1));
    let summary = fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    assert!(summary.contains(",ok"));
    assert!(summary.contains(",failed"));
}

#[test]
fn output_root_env_var_supplies_default_directory() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().join("results");
    let config_path = dir.path().join("experiment.conf");
    fs::write(&config_path, "command = fig2\nfig2.beta_points = 9\n").unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_sgbh"))
        .current_dir(dir.path())
        .env("SGBH_OUTPUT_ROOT", &root)
        .arg("--config")
        .arg(&config_path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert!(root.join("fig2").join("temperatures.csv").exists());
}
