//! One line per acceptance criterion, then a single assertion over all of them.

mod common;

use std::time::Instant;

use common::*;

#[test]
fn acceptance() {
    let t0 = Instant::now();
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = mock_run(d1.path());
    let second = mock_run(d2.path());
    let took = t0.elapsed();
    let outcomes = first.outcomes().unwrap();

    let results: Vec<(&str, Check)> = vec![
        ("snowflake decode", snowflake_oracle()),
        ("sample A paired latency", table_a_summary(Some(&outcomes))),
        ("sample B paired latency", table_b_summary(Some(&outcomes))),
        ("hit and filter rates", fixture_rates(&first)),
        ("rolling spike", spike_oracle_check()),
        ("rate limiter", limiter_check()),
        ("verifier", verifier_check()),
        ("broadening ladder", ladder_check()),
        ("deterministic tables", determinism_check(&first, &second, took)),
        ("budget projection", budget_check()),
    ];
    let mut failed = Vec::new();
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(d) => println!("PASS {:>2} {name}: {d}", i + 1),
            Err(d) => {
                println!("FAIL {:>2} {name}: {d}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
