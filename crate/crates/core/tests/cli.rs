//! The command line, driven in-process and through the built binary.

use std::fs;
use std::process::Command;

use ebids::harness::cli::{run_cli, EXIT_CONFIG, EXIT_OK};
use ebids::harness::presets::preset;
use ebids::harness::ExperimentConfig;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["ebids"];
    full.extend_from_slice(args);
    let code = run_cli(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const SMALL: &str = r#"
horizon = 30
replications = 3
master_seed = 5

[output]
raw = "out/raw.csv"
summary = "out/summary.csv"

[env_spec]
generator = "uniform_arms"
n_arms = 6
dim = 3
theta_star = [1.0, -0.5, 0.25]
noise_sd = { fixed = [1.0, 1.0, 1.0, 0.2, 0.2, 0.2] }

[[policies]]
id = "ucb"
kind = "ucb"
bound = 10.0

[[policies]]
id = "ebids"
kind = "ebids"
alpha = 0.5
t_bound = 10
"#;

#[test]
fn presets_lists_eight() {
    let (code, out, _) = cli(&["presets"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 8);
    for name in ["fig1a", "fig1b", "fig2", "fig3", "supp_a", "supp_b", "supp_c", "supp_d"] {
        assert!(out.lines().any(|l| l.starts_with(name)), "{name}");
    }
}

#[test]
fn presets_show_and_out_round_trip() {
    let (code, out, _) = cli(&["presets", "--show", "fig2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(ExperimentConfig::from_toml(&out).unwrap(), preset("fig2").unwrap());

    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = cli(&["presets", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let cfg = ExperimentConfig::load(&dir.path().join("fig1b.toml")).unwrap();
    assert_eq!(cfg.policies, preset("fig1b").unwrap().policies);

    let (code, _, err) = cli(&["presets", "--show", "fig9"]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(err.contains("fig9"));
}

#[test]
fn run_writes_both_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("small.toml");
    fs::write(&path, SMALL).unwrap();
    let (code, out, err) = cli(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("ebids") && out.contains("T=30"));

    let raw = fs::read_to_string(dir.path().join("out/raw.csv")).unwrap();
    let mut lines = raw.lines();
    assert_eq!(
        lines.next().unwrap(),
        "policy_id,replication,t,action,reward,inst_regret,cum_regret,cum_pseudo_regret,b_hat,b_tilde,beta_used"
    );
    assert_eq!(lines.count(), 2 * 3 * 30);
    let summary = fs::read_to_string(dir.path().join("out/summary.csv")).unwrap();
    assert!(summary.starts_with("policy_id,t,mean_cum_regret,ci_low,ci_high,n\n"));
    assert_eq!(summary.lines().count(), 1 + 2 * 30);

    // a second run reproduces the files byte for byte
    let (code, _, _) = cli(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(fs::read_to_string(dir.path().join("out/raw.csv")).unwrap(), raw);
}

#[test]
fn sweep_writes_one_summary_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("small.toml");
    fs::write(&path, SMALL).unwrap();
    let (code, out, err) = cli(&[
        "sweep",
        "--config",
        path.to_str().unwrap(),
        "--param",
        "alpha=0.1,0.7",
        "--param",
        "t_bound=5,10",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("max/min final mean regret"));
    for cell in ["alpha0.1_t_bound5", "alpha0.1_t_bound10", "alpha0.7_t_bound5", "alpha0.7_t_bound10"] {
        assert!(dir.path().join(format!("out/summary_{cell}.csv")).exists(), "{cell}");
    }
}

#[test]
fn bad_inputs_exit_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    fs::write(&path, SMALL.replace("horizon = 30", "horizon = 30\nunknown_key = 1")).unwrap();
    let (code, _, err) = cli(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(!err.is_empty());

    let (code, _, _) = cli(&["run", "--config", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_ne!(code, EXIT_OK);

    // alpha only applies to ebids
    fs::write(&path, SMALL.replace("bound = 10.0\n", "bound = 10.0\nalpha = 0.5\n")).unwrap();
    assert_eq!(cli(&["run", "--config", path.to_str().unwrap()]).0, EXIT_CONFIG);

    fs::write(&path, SMALL).unwrap();
    assert_eq!(cli(&["sweep", "--config", path.to_str().unwrap(), "--param", "gamma=1"]).0, EXIT_CONFIG);
    assert_eq!(cli(&["frobnicate"]).0, EXIT_CONFIG);
}

#[test]
fn validate_passes_on_a_small_budget() {
    let (code, out, _) = cli(&["validate", "--seed", "3", "--cases", "20"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.lines().filter(|l| l.starts_with("PASS")).count() >= 6);
    assert!(out.contains("6/6 suites passed"));
}

#[test]
fn binary_runs_end_to_end() {
    let exe = env!("CARGO_BIN_EXE_ebids");
    let out = Command::new(exe).arg("presets").output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 8);

    let out = Command::new(exe).args(["run", "--config", "/nonexistent/x.toml"]).output().unwrap();
    assert!(!out.status.success());
    assert!(!out.stderr.is_empty());
}
