use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/corpus")
}

fn newsrace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_newsrace"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn full_run_then_resume() {
    let out = tempfile::tempdir().unwrap();
    let out_s = out.path().to_str().unwrap();
    let cfg = fixtures().join("run.toml");
    let o = newsrace(&["full-run", "--config", cfg.to_str().unwrap(), "--out", out_s]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("159 events, 159 verified, 0 failed"));
    let hits = fs::read_to_string(out.path().join("mock/tables/hits.txt")).unwrap();
    assert!(hits.contains("38/50 (76%)") && hits.contains("56/109 (51%)"), "{hits}");

    let o = newsrace(&["resume", "--run", "mock", "--out", out_s]);
    assert_eq!(o.status.code(), Some(0));
    let o = newsrace(&["analyze", "--run", "mock", "--out", out_s]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn changed_config_exits_fatal() {
    let out = tempfile::tempdir().unwrap();
    let out_s = out.path().to_str().unwrap();
    let cfg = fixtures().join("run.toml");
    let o = newsrace(&["draft", "--config", cfg.to_str().unwrap(), "--out", out_s]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = newsrace(&["pull", "--run", "mock", "--out", out_s, "--window-post", "12h"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("different config"));
}

#[test]
fn missing_run_exits_fatal() {
    let out = tempfile::tempdir().unwrap();
    let o = newsrace(&["resume", "--run", "nope", "--out", out.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn seeders_report_sample_shapes() {
    let fx = fixtures();
    let o = newsrace(&["seed-wcep", "--from", "2026-04-12", "--to", "2026-05-11", "--fixtures", fx.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 50);
    assert!(String::from_utf8_lossy(&o.stderr).contains("586 bullets, 171 pass"));

    let o = newsrace(&["seed-polymarket", "--from", "2026-02-13", "--to", "2026-05-13", "--fixtures", fx.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 109);
    assert!(String::from_utf8_lossy(&o.stderr).contains("109 pinned (21 dropped), 76 event groups"));
}

#[test]
fn budget_projection() {
    let o = newsrace(&["budget", "--events", "109"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2398 requests"), "{}", stdout(&o));
}
