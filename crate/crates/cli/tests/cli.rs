//! End-to-end tests of the `helical-ns` binary: exit codes, file formats,
//! determinism, snapshot round trips.

use std::path::Path;
use std::process::{Command, Output};

use helical_ns::data::random_solenoidal;
use helical_ns::solver::{resume, run, RunSpec};
use helical_ns::{Grid, SimState};
use helical_ns_cli::snapshot::{read_snapshot, write_snapshot};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_helical-ns"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .env_remove("HELICAL_NS_OUTPUT_ROOT")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const ABC_RUN: &str = r#"
[grid]
n = 8

[physics]
nu = 0.1

[time]
dt = 1e-3
t_end = 0.02
record_every = 2

[data]
variant = "abc"
a = 1.0
b = 1.0
c = 1.0
"#;

#[test]
fn run_writes_the_expected_row_count() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "run.toml", ABC_RUN);
    let out = run_in(tmp.path(), &["run", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(tmp.path().join("out/diagnostics.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    // t_end/dt/record_every + 1 rows plus the header
    assert_eq!(lines.len(), 1 + 11);
    assert_eq!(
        lines[0],
        "t,E,H,Ec_plus,Ec_minus,c0_drift,Hhalf_plus,Hhalf_minus,div_residual"
    );
}

#[test]
fn identical_config_gives_byte_identical_csv() {
    let shell = r#"
[grid]
n = 16

[physics]
nu = 0.05

[time]
dt = 1e-3
t_end = 0.02
record_every = 5

[data]
variant = "shell"
k0 = 3.0
delta = 0.2
sign = 1
seed = 11
amplitude = 1.0

[output]
directory = "outdir"
"#;
    let tmp_a = tempfile::tempdir().unwrap();
    let tmp_b = tempfile::tempdir().unwrap();
    for tmp in [&tmp_a, &tmp_b] {
        let cfg = write_config(tmp.path(), "run.toml", shell);
        let out = run_in(tmp.path(), &["run", cfg.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = std::fs::read(tmp_a.path().join("outdir/diagnostics.csv")).unwrap();
    let b = std::fs::read(tmp_b.path().join("outdir/diagnostics.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn output_root_env_var_overrides_the_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path().join("elsewhere");
    let cfg = write_config(tmp.path(), "run.toml", ABC_RUN);
    let out = bin()
        .args(["run", cfg.to_str().unwrap()])
        .current_dir(tmp.path())
        .env("HELICAL_NS_OUTPUT_ROOT", &root)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(root.join("out/diagnostics.csv").exists());
}

#[test]
fn wrapping_cutoff_exits_3_naming_the_wrap() {
    let cfg_text = r#"
[grid]
n = 8

[data]
variant = "curlcurl"
m = 2.0

[data.inner]
variant = "abc"
a = 1.0
b = 1.0
c = 1.0
"#;
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "run.toml", cfg_text);
    let out = run_in(tmp.path(), &["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("wraps"));
}

#[test]
fn cfl_violation_exits_3_naming_the_bound() {
    let cfg_text = r#"
[grid]
n = 16

[physics]
nu = 0.05

[time]
dt = 0.5
t_end = 1.0

[data]
variant = "shell"
k0 = 3.0
delta = 0.2
sign = 1
seed = 1
amplitude = 50.0
"#;
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "run.toml", cfg_text);
    let out = run_in(tmp.path(), &["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("stability bound"));
}

#[test]
fn parse_error_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "bad.toml", "[grid]\nn = \"not a number\"\n");
    let out = run_in(tmp.path(), &["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_check_exits_2() {
    let cfg_text = r#"
[grid]
n = 8

[data]
variant = "abc"
a = 1.0
b = 1.0
c = 1.0

[checks]
names = ["nope"]
"#;
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "v.toml", cfg_text);
    let out = run_in(tmp.path(), &["verify", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown check"));
}

#[test]
fn verify_spectral_identities_pass_with_three_records() {
    let cfg_text = r#"
[grid]
n = 16

[physics]
nu = 0.05

[data]
variant = "shell"
k0 = 3.0
delta = 0.2
sign = 1
seed = 7
amplitude = 1.0

[checks]
names = ["prop1", "prop2", "helicity_split"]
seed = 7
random_fields = 5
"#;
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "v.toml", cfg_text);
    let out = run_in(tmp.path(), &["verify", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("out/report.json")).unwrap())
            .unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    assert!(checks.iter().all(|c| c["pass"].as_bool().unwrap()));
    assert_eq!(report["seed"], 7);
    assert!(report["pass"].as_bool().unwrap());
}

#[test]
fn verify_theorem1_on_abc_is_exact_to_1e10() {
    let cfg_text = r#"
[grid]
n = 8

[physics]
nu = 0.1

[time]
dt = 2e-4
t_end = 1.0
record_every = 500

[data]
variant = "abc"
a = 1.0
b = 1.0
c = 1.0

[checks]
names = ["theorem1", "energy_balance"]

[checks.tolerances]
theorem1 = 1e-10
"#;
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "v.toml", cfg_text);
    let out = run_in(tmp.path(), &["verify", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn verify_fail_exits_1() {
    // polarity of a minus-signed shell fails the plus-purity check
    let cfg_text = r#"
[grid]
n = 16

[data]
variant = "shell"
k0 = 3.0
delta = 0.2
sign = -1
seed = 3
amplitude = 1.0

[checks]
names = ["polarity"]
"#;
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "v.toml", cfg_text);
    let out = run_in(tmp.path(), &["verify", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn decay_check_warns_beyond_resolution_but_exits_0() {
    let cfg_text = r#"
[grid]
n = 8

[data]
variant = "abc"
a = 1.0
b = 1.0
c = 1.0

[checks]
names = ["decay"]

[decay]
quad_radial = 16
quad_polar = 32
quad_azimuthal = 32
r_max = 120.0
samples = 24
"#;
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "v.toml", cfg_text);
    let out = run_in(tmp.path(), &["verify", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("out/report.json")).unwrap())
            .unwrap();
    let warnings = report["checks"][0]["warnings"].as_array().unwrap();
    assert!(!warnings.is_empty());
    assert!(tmp.path().join("out/decay_ray0.csv").exists());
    let csv = std::fs::read_to_string(tmp.path().join("out/decay_ray0.csv")).unwrap();
    assert!(csv.starts_with("r,g_abs,grad_g_abs,profile"));
}

#[test]
fn snapshot_round_trip_is_exact_and_info_prints() {
    let grid = Grid::new(8, 2.0 * std::f64::consts::PI).unwrap();
    let u = random_solenoidal(grid, 5, 3, 1.5);
    let state = SimState {
        t: 0.625,
        u,
        diss_total: 1.25,
        diss_half_plus: 0.5,
        diss_half_minus: 0.75,
    };
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("state.hnsf");
    write_snapshot(&state, &path).unwrap();
    let back = read_snapshot(&path).unwrap();
    assert_eq!(back.t, state.t);
    assert_eq!(back.diss_total, state.diss_total);
    for d in 0..3 {
        assert_eq!(back.u.component(d), state.u.component(d));
    }

    let out = run_in(tmp.path(), &["snapshot-info", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("8 points per axis"));
    assert!(text.contains("t = 0.625"));
}

#[test]
fn truncated_snapshot_reports_expected_and_actual_length() {
    let grid = Grid::new(8, 2.0 * std::f64::consts::PI).unwrap();
    let state = SimState::initial(random_solenoidal(grid, 1, 3, 1.0));
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("state.hnsf");
    write_snapshot(&state, &path).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    let full = bytes.len();
    std::fs::write(&path, &bytes[..full - 16]).unwrap();
    let err = read_snapshot(&path).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains(&format!("{full}")), "{msg}");
    assert!(msg.contains(&format!("{}", full - 16)), "{msg}");
}

#[test]
fn restart_from_a_snapshot_file_matches_the_full_run() {
    let grid = Grid::new(16, 2.0 * std::f64::consts::PI).unwrap();
    let u0 = random_solenoidal(grid, 9, 4, 0.7);
    let nu = 0.1;
    let full = run(&u0, &RunSpec::new(nu, 1e-3, 0.1, 50)).unwrap();

    let mut half = RunSpec::new(nu, 1e-3, 0.05, 50);
    half.snapshot_every = 50;
    let first = run(&u0, &half).unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("mid.hnsf");
    write_snapshot(&first.snapshots.last().unwrap().1, &path).unwrap();

    let mid = read_snapshot(&path).unwrap();
    let resumed = resume(mid, &RunSpec::new(nu, 1e-3, 0.1, 50)).unwrap();
    let diff = (&resumed.final_state.u - &full.final_state.u).l2_norm();
    assert!(diff <= 1e-14 * full.final_state.u.l2_norm());
}

#[test]
fn verify_without_checks_is_a_validation_error() {
    let cfg_text = r#"
[grid]
n = 8

[data]
variant = "abc"
a = 1.0
b = 1.0
c = 1.0
"#;
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "v.toml", cfg_text);
    let out = run_in(tmp.path(), &["verify", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least one check"));
}
