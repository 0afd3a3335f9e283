//! Black-box tests of the binary: determinism of written artifacts, config
//! handling, and error exits.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn astft() -> Command {
    Command::new(env!("CARGO_BIN_EXE_astft"))
}

fn tmp(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("astft-cli-{}-{tag}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

#[test]
fn synth_writes_expected_rows_and_is_deterministic() {
    let dir = tmp("synth");
    let a = dir.join("a");
    let b = dir.join("b");
    for out in [&a, &b] {
        let o = run(astft().args(["synth", "--name", "one_chirp", "--out"]).arg(out));
        assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    }
    let sa = read(&a.join("one_chirp_signal.csv"));
    let sb = read(&b.join("one_chirp_signal.csv"));
    assert_eq!(sa, sb, "identical runs must produce identical bytes");
    // header + 512 samples
    assert_eq!(sa.iter().filter(|&&c| c == b'\n').count(), 513);

    let o = run(astft().args(["synth", "--name", "two_lfm", "--out"]).arg(dir.join("c")));
    assert!(o.status.success());
    let rows = read(&dir.join("c/two_lfm_signal.csv"));
    assert_eq!(rows.iter().filter(|&&c| c == b'\n').count(), 129);
}

#[test]
fn synth_rejects_unknown_name() {
    let o = run(astft().args(["synth", "--name", "nope", "--out"]).arg(tmp("badname")));
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown signal"));
}

#[test]
fn separate_noisy_is_seed_deterministic() {
    let dir = tmp("sep");
    let a = dir.join("a");
    let b = dir.join("b");
    for out in [&a, &b] {
        let o = run(astft()
            .args(["separate", "--input", "two_lfm", "--model", "lc", "--snr-db", "10", "--seed", "7", "--out"])
            .arg(out));
        assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(read(&a.join("components.csv")), read(&b.join("components.csv")));
    assert_eq!(read(&a.join("ridges.csv")), read(&b.join("ridges.csv")));
    assert_eq!(read(&a.join("report.json")), read(&b.join("report.json")));
}

#[test]
fn separate_reads_config_with_flag_override() {
    let dir = tmp("cfg");
    let cfg = dir.join("run.json");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"input": "two_lfm", "model": "si", "k": 2, "out": "{}"}}"#,
            dir.join("from_config").display()
        ),
    )
    .unwrap();
    // config alone
    let o = run(astft().args(["separate", "--config"]).arg(&cfg));
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let si_report = String::from_utf8(read(&dir.join("from_config/report.json"))).unwrap();
    assert!(si_report.contains("\"Sinusoidal\""));
    // flag overrides the config's model
    let o = run(astft()
        .args(["separate", "--config"])
        .arg(&cfg)
        .args(["--model", "lc-true-cr", "--out"])
        .arg(dir.join("overridden")));
    assert!(o.status.success());
    let lc_report = String::from_utf8(read(&dir.join("overridden/report.json"))).unwrap();
    assert!(lc_report.contains("\"LinearChirpTrue\""));
}

#[test]
fn separate_rejects_missing_sigma_file() {
    let o = run(astft()
        .args(["separate", "--input", "two_lfm", "--sigma", "/nonexistent/sigma.csv", "--out"])
        .arg(tmp("nosigma")));
    assert!(!o.status.success());
}

#[test]
fn lc_true_needs_ground_truth() {
    let dir = tmp("lctrue");
    let o = run(astft().args(["synth", "--name", "two_lfm", "--out"]).arg(&dir));
    assert!(o.status.success());
    let o = run(astft()
        .args(["separate", "--model", "lc-true-cr", "--input"])
        .arg(dir.join("two_lfm_signal.csv"))
        .args(["--out"])
        .arg(dir.join("run")));
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("ground truth"));
}

#[test]
fn out_dir_env_overrides_flag() {
    let dir = tmp("env");
    let via_env = dir.join("via_env");
    let o = run(astft()
        .env("ASTFT_OUT_DIR", &via_env)
        .args(["synth", "--name", "two_lfm", "--out"])
        .arg(dir.join("ignored")));
    assert!(o.status.success());
    assert!(via_env.join("two_lfm_signal.csv").exists());
    assert!(!dir.join("ignored").exists());
}

#[test]
fn bounds_and_table_commands_run() {
    let dir = tmp("misc");
    let o = run(astft()
        .args(["bounds", "--input", "one_chirp", "--sigma", "0.0625", "--out"])
        .arg(dir.join("b")));
    assert!(o.status.success());
    assert!(dir.join("b/one_chirp_bounds.csv").exists());

    let o = run(astft().args(["table1", "--out"]).arg(dir.join("t")));
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8_lossy(&o.stdout).to_string();
    assert!(stdout.contains("si = 0.3254"), "stdout: {stdout}");
    assert!(dir.join("t/table1.json").exists());
}
