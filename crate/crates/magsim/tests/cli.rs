//! End-to-end checks of the `magsim` binary: exit codes, error categories on
//! stderr, validation mode, and file output.

use std::path::Path;
use std::process::Command;

fn magsim() -> Command {
    Command::new(env!("CARGO_BIN_EXE_magsim"))
}

fn preset_path(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("presets").join(name)
}

#[test]
fn validate_mode_checks_without_running() {
    let out = magsim()
        .args(["fig6", "--config"])
        .arg(preset_path("fig6.toml"))
        .arg("--validate")
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("config ok"), "{stdout}");
}

#[test]
fn every_preset_validates() {
    for (cmd, preset) in [
        ("fig2a", "fig2a.toml"),
        ("fig2b", "fig2b.toml"),
        ("fig3", "fig3.toml"),
        ("fig6", "fig6.toml"),
        ("snr", "snr.toml"),
        ("saturation", "saturation.toml"),
    ] {
        let out = magsim()
            .args([cmd, "--config"])
            .arg(preset_path(preset))
            .arg("--validate")
            .output()
            .unwrap();
        assert!(out.status.success(), "{cmd} failed to validate {preset}");
    }
}

#[test]
fn run_writes_csv_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let out = magsim()
        .args(["fig2a", "--config"])
        .arg(preset_path("fig2a.toml"))
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("fig2a.csv")).unwrap();
    assert!(csv.starts_with("theta_rad,beta_rad,qfi_ps,qfi_ref\n"));
    assert!(!csv.contains('\r'), "line endings must be bare LF");
    let meta = std::fs::read_to_string(dir.path().join("fig2a.metadata.json")).unwrap();
    assert!(meta.contains("\"command\": \"fig2a\""));
    assert!(meta.contains("\"config_hash\""));
}

#[test]
fn seed_override_lands_in_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let out = magsim()
        .args(["saturation", "--config"])
        .arg(preset_path("saturation.toml"))
        .arg("--out")
        .arg(dir.path())
        .args(["--seed", "99"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let meta = std::fs::read_to_string(dir.path().join("saturation.metadata.json")).unwrap();
    assert!(meta.contains("\"seed\": 99"), "{meta}");
    let csv = std::fs::read_to_string(dir.path().join("saturation.csv")).unwrap();
    let last_field = csv.lines().nth(1).unwrap().split(',').next_back().unwrap();
    assert_eq!(last_field, "99");
}

#[test]
fn missing_file_reports_io_category() {
    let out = magsim()
        .args(["fig2a", "--config", "/nonexistent/nope.toml"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.starts_with("error[io]:"), "{stderr}");
}

#[test]
fn bad_config_reports_category_and_fails() {
    let dir = tempfile::tempdir().unwrap();

    // Unknown key: parse category.
    let path = dir.path().join("unknown.toml");
    std::fs::write(&path, "seed = 1\nsurprise = true\n").unwrap();
    let out = magsim().args(["fig6", "--config"]).arg(&path).output().unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.starts_with("error[parse]:"), "{stderr}");

    // Invariant violation: config category, naming the bad field.
    let path = dir.path().join("negative.toml");
    std::fs::write(
        &path,
        r#"
seed = 1
[pbs]
delta_pairs = [[0.5, 0.5]]
t_h = 0.9
[sweep.v0]
min = 1e-4
max = 1.0
count = 10
scale = "log"
"#,
    )
    .unwrap();
    let out = magsim().args(["fig6", "--config"]).arg(&path).output().unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.starts_with("error[config]:"), "{stderr}");

    // Missing section for the requested command.
    let path = dir.path().join("missing.toml");
    std::fs::write(&path, "seed = 1\n").unwrap();
    let out = magsim().args(["fig3", "--config"]).arg(&path).output().unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.starts_with("error[config]:"), "{stderr}");
    assert!(stderr.contains("[spin]"), "{stderr}");
}
