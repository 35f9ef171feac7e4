//! Run lifecycle over the shipped mock corpus: resume, refusal and staleness.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use common::*;
use newsrace_core::config::RunConfig;
use newsrace_core::error::Error;
use newsrace_core::pipeline::{Pipeline, Services};
use newsrace_core::store::Stage;

fn open(cfg: RunConfig, out: &Path) -> newsrace_core::error::Result<Pipeline> {
    let services = Services::for_config(&cfg)?;
    Pipeline::open(cfg, out, services)
}

/// Every file under the run store except the manifest, by relative path.
fn snapshot(p: &Pipeline) -> BTreeMap<String, Vec<u8>> {
    let root = p.store().root.clone();
    let manifest = p.store().manifest_path();
    let mut out = BTreeMap::new();
    let mut stack = vec![root.clone()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let path = e.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else if path != manifest {
                out.insert(path.strip_prefix(&root).unwrap().display().to_string(), fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn per_event(p: &Pipeline) -> BTreeMap<String, u64> {
    p.manifest().events.iter().map(|(id, r)| (id.clone(), r.provider_requests)).collect()
}

#[test]
fn interrupted_after_pull_resumes_without_provider_calls() {
    let tmp = tempfile::tempdir().unwrap();
    let requests = {
        let mut p = open(shipped_config(), tmp.path()).unwrap();
        p.seed().unwrap();
        p.draft().unwrap();
        p.pull().unwrap();
        assert_eq!(p.manifest().count_at(Stage::Pulled), 159);
        per_event(&p)
        // Dropped here, as if the process died before recovery.
    };
    assert!(requests.values().all(|&n| n > 0));
    let mut p = open(shipped_config(), tmp.path()).unwrap();
    let s = p.full_run().unwrap();
    assert_eq!(per_event(&p), requests, "resume must not pull again");
    // The only new provider traffic is the probe, which had not run yet.
    let probe_levels = shipped_config().probe.levels as u64;
    assert_eq!(s.provider_requests, requests.values().sum::<u64>() + probe_levels * 5);
    assert_eq!((s.events, s.verified, s.failed), (159, 159, 0));
    fixture_rates(&p).unwrap();
}

#[test]
fn completed_run_resume_is_a_no_op() {
    let tmp = tempfile::tempdir().unwrap();
    let first = mock_run(tmp.path());
    let before = snapshot(&first);
    let requests = first.manifest().provider_requests;
    drop(first);
    let mut p = open(shipped_config(), tmp.path()).unwrap();
    let s = p.full_run().unwrap();
    assert_eq!(s.provider_requests, requests);
    assert_eq!(snapshot(&p), before);
}

#[test]
fn changed_config_is_refused() {
    let tmp = tempfile::tempdir().unwrap();
    open(shipped_config(), tmp.path()).unwrap();
    let mut cfg = shipped_config();
    cfg.pull.page_size += 1;
    assert!(matches!(open(cfg, tmp.path()), Err(Error::Manifest(_))));
}

#[test]
fn corrupt_manifest_is_refused() {
    let tmp = tempfile::tempdir().unwrap();
    let path = open(shipped_config(), tmp.path()).unwrap().store().manifest_path();
    fs::write(&path, b"{\"run_id\": \"mock\", truncated").unwrap();
    let err = open(shipped_config(), tmp.path()).err().expect("refused");
    assert!(matches!(err, Error::Manifest(_)), "{err}");
}

#[test]
fn edited_stage_output_is_redone() {
    let tmp = tempfile::tempdir().unwrap();
    let p = mock_run(tmp.path());
    let tables = tables_of(&p);
    let id = p.manifest().events.keys().next().unwrap().clone();
    let pulled = p.store().stage_path(Stage::Pulled, &id);
    let requests = p.manifest().provider_requests;
    drop(p);
    fs::write(&pulled, b"garbage\n").unwrap();
    let mut p = open(shipped_config(), tmp.path()).unwrap();
    p.full_run().unwrap();
    assert!(p.manifest().provider_requests > requests, "the damaged pull is fetched again");
    assert_eq!(tables_of(&p), tables);
}

#[test]
fn empty_window_gives_empty_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = shipped_config();
    cfg.run_id = "empty".into();
    cfg.wcep = None;
    let pm = cfg.polymarket.as_mut().unwrap();
    pm.from = "2025-01-01".parse().unwrap();
    pm.to = "2025-01-02".parse().unwrap();
    cfg.probe.events.clear();
    let mut p = open(cfg, tmp.path()).unwrap();
    let s = p.full_run().unwrap();
    assert_eq!((s.events, s.provider_requests, s.exit_code()), (0, 0, 0));
    assert_eq!(tables_of(&p).len(), 15);
}
