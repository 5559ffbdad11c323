use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn genan(args: &[&str], config: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genan"))
        .args(args)
        .arg("--config")
        .arg(config)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn missing_config_is_a_config_error() {
    let out = genan(&["suite"], Path::new("/nonexistent/config.json"));
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn spectrum_expectation_flips_the_verdict() {
    let cfg = configs().join("numerical23.json");
    let out = genan(&["spectrum", "--function", "coordinate"], &cfg);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("negative result reproduced"));
    // z^2 lies in the monoid, so the expected leak is absent.
    assert_eq!(genan(&["spectrum", "--function", "square"], &cfg).status.code(), Some(1));
    assert_eq!(genan(&["spectrum", "--function", "garbage"], &cfg).status.code(), Some(3));
}

#[test]
fn unmet_hypothesis_withholds_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"semigroup":{"family":"polycube","n":2},"weight":{"q":[0.5,0.5]},
            "orbit":{"count":2,"degree":2,
              "pairs":[{"rho1":{"face":[0,1],"lambda":[0,0]},"rho2":{"face":[0],"lambda":[0.5,0]}}]}}"#,
    );
    let out = genan(&["orbit"], &cfg);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stdout).unwrap().contains("hypothesis unmet"));
}

#[test]
fn non_pointed_monoid_fails_the_precondition() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"semigroup":{"family":"lattice_cone","gens":[[1,0],[-1,0],[0,1]]},"weight":{"q":[0.5,0.5]},
            "mean_value":{"count":1,"degree":1}}"#,
    );
    let out = genan(&["mean-value"], &cfg);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stdout).unwrap().contains("[PRECONDITION]"));
}

#[test]
fn invalid_tolerances_are_config_errors() {
    let cfg = configs().join("numerical23.json");
    assert_eq!(genan(&["mean-value", "--tol", "mean-value=-1"], &cfg).status.code(), Some(3));
    assert_eq!(genan(&["mean-value", "--tol", "unknown=1"], &cfg).status.code(), Some(3));
    assert_eq!(genan(&["peak"], &cfg).status.code(), Some(3));
}

#[test]
fn reports_embed_the_config_hash() {
    let cfg = configs().join("numerical23.json");
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_genan"))
        .args(["mean-value", "--threads", "1", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("mean-value.json")).unwrap()).unwrap();
    let expected = hex::encode(Sha256::digest(std::fs::read(&cfg).unwrap()));
    assert_eq!(doc["config_hash"], expected);
    assert_eq!(doc["checks"][0]["check"], "mean-value");
    assert_eq!(doc["checks"][0]["pass"], true);
    assert!(dir.path().join("mean-value.txt").exists());
}
