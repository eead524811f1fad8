use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mdb_harness::config::ExperimentConfig;
use mdb_harness::letor::read_letor;
use mdb_harness::output::TRACE_HEADER;

fn mdb(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdb"))
        .args(args)
        .current_dir(dir)
        .env("RUST_LOG", "warn")
        .output()
        .unwrap()
}

const RUN: &str = r#"
horizon = 500
replicates = 2
seed = 3

[environment]
kind = "synthetic"
name = "1good5poor"

[cadence]
kind = "every"
interval = 100

[[policies]]
kind = "mdb"

[[policies]]
kind = "rmed1"

[sweep]
alphas = [0.5, 1.0]
betas = [1.5]

[distortion]
subset_sizes = [3, 10]
draws = 4
rounds = 300
surrogate = { arms = 20, margin = 0.2 }
"#;

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.toml"), RUN).unwrap();
    dir
}

#[test]
fn run_writes_the_trace() {
    let dir = setup();
    let out = mdb(&["run", "--config", "run.toml", "--out", "a.csv"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], TRACE_HEADER.join(","));
    assert_eq!(lines.len(), 1 + 2 * 2 * 5);
    assert!(String::from_utf8_lossy(&out.stderr).contains("RMED1"));

    let again = mdb(&["run", "--config", "run.toml", "--out", "b.csv"], dir.path());
    assert!(again.status.success());
    assert_eq!(
        fs::read(dir.path().join("a.csv")).unwrap(),
        fs::read(dir.path().join("b.csv")).unwrap()
    );
}

#[test]
fn flags_override_the_config() {
    let dir = setup();
    let out = mdb(
        &[
            "run",
            "--config",
            "run.toml",
            "--horizon",
            "300",
            "--replicates",
            "1",
            "--seed",
            "9",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 3);
    assert!(text.lines().all(|l| !l.contains(",1,")));

    let out = mdb(&["run", "--config", "run.toml", "--out", "-"], dir.path());
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1 + 2 * 2 * 5);
    assert!(!dir.path().join("-").exists());
}

#[test]
fn sweep_and_distortion_tables() {
    let dir = setup();
    let out = mdb(&["sweep", "--config", "run.toml"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("alpha,beta,mean_final_regret,std_final_regret")
    );
    assert_eq!(text.lines().count(), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("best: alpha = "));

    let out = mdb(&["distortion", "--config", "run.toml"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "setting,3,10");
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("surrogate margin 0.2,"));
}

#[test]
fn fixture_gen_writes_letor() {
    let dir = setup();
    fs::write(dir.path().join("fx.toml"), "queries = 7\nfeatures = 4\n").unwrap();
    let out = mdb(
        &["fixture-gen", "--config", "fx.toml", "--seed", "1", "--out", "fx.txt"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let ds = read_letor(&dir.path().join("fx.txt")).unwrap();
    assert_eq!(ds.num_queries(), 7);
    assert_eq!(ds.feature_ids(), vec![1, 2, 3, 4]);

    let cfg = "horizon = 200\nreplicates = 1\n[environment]\nkind = \"ltr\"\npath = \"fx.txt\"\nclick_model = \"navigational\"\n[[policies]]\nkind = \"mdb\"\n";
    fs::write(dir.path().join("ltr.toml"), cfg).unwrap();
    let out = mdb(&["run", "--config", "ltr.toml"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn errors_exit_nonzero() {
    let dir = setup();
    let out = mdb(&["run", "--config", "missing.toml"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.toml"));

    fs::write(dir.path().join("bad.toml"), RUN.replace("horizon = 500", "horizon = 0")).unwrap();
    let out = mdb(&["run", "--config", "bad.toml"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("horizon"));
    assert!(!dir.path().join("out.csv").exists());
}

#[test]
fn config_round_trips_through_toml() {
    let cfg = ExperimentConfig::from_toml(RUN).unwrap();
    let text = cfg.to_toml().unwrap();
    assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), cfg);
}

#[test]
fn bundled_configs_validate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        if path.file_name().unwrap() == "wide_fixture.toml" {
            let spec: mdb_core::ltr::FixtureSpec = toml::from_str(&text).unwrap();
            spec.validate().unwrap();
        } else {
            let cfg = ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e:#}", path.display()));
            cfg.validate().unwrap_or_else(|e| panic!("{}: {e:#}", path.display()));
        }
        seen += 1;
    }
    assert_eq!(seen, 7);
}
