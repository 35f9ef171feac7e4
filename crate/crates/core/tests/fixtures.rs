use std::fs;
use std::path::{Path, PathBuf};

use newsrace_core::fixtures;

fn shipped() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/corpus")
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.push((rel, fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

/// Set NEWSRACE_REGENERATE=1 to rewrite the shipped corpus.
#[test]
fn shipped_corpus_matches_generator() {
    let corpus = fixtures::generate().unwrap();
    if std::env::var("NEWSRACE_REGENERATE").is_ok() {
        fixtures::write(&corpus, &shipped()).unwrap();
    }
    let tmp = tempfile::tempdir().unwrap();
    fixtures::write(&corpus, tmp.path()).unwrap();
    let (fresh, disk) = (files(tmp.path()), files(&shipped()));
    let names = |v: &[(String, Vec<u8>)]| v.iter().map(|f| f.0.clone()).collect::<Vec<_>>();
    assert_eq!(names(&fresh), names(&disk));
    for (a, b) in fresh.iter().zip(&disk) {
        assert!(a.1 == b.1, "{} differs from the generator output", a.0);
    }
}

#[test]
fn every_event_meets_its_plan() {
    let corpus = fixtures::generate().unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let problems = fixtures::check(&corpus, &shipped(), tmp.path()).unwrap();
    assert!(problems.is_empty(), "{} events off plan:\n{}", problems.len(), problems.join("\n"));
}
