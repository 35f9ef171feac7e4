//! Reference implementations checked against the production code, plus
//! property tests for the invariants behind them.

mod common;

use common::*;
use newsrace_core::drafting::ladder::broaden_ladder;
use newsrace_core::model::{Timestamp, MS_PER_HOUR};
use newsrace_core::polymarket::{rolling_spike, TradePoint};
use newsrace_core::verify::KeywordSet;
use newsrace_core::xrecover::{decode_snowflake, SnowflakeId};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn snowflake_matches_bigint() {
    snowflake_oracle().unwrap();
}

#[test]
fn spike_matches_quadratic_scan() {
    spike_oracle_check().unwrap();
}

#[test]
fn limiter_never_exceeds_cap() {
    limiter_check().unwrap();
}

#[test]
fn verifier_matches_substring_search() {
    verifier_check().unwrap();
}

#[test]
fn ladder_levels_are_nested() {
    ladder_check().unwrap();
}

#[test]
fn published_latency_tables() {
    table_a_summary(None).unwrap();
    table_b_summary(None).unwrap();
}

#[test]
fn budget_covers_a_working_day() {
    budget_check().unwrap();
}

proptest! {
    #[test]
    fn snowflake_round_trips(ms in 0i64..(1i64 << 41), low in 0u64..(1 << 22)) {
        let t = Timestamp(ms + 1_288_834_974_657);
        let id = SnowflakeId::from_timestamp(t, low).unwrap();
        prop_assert_eq!(decode_snowflake(id), t);
        prop_assert_eq!(SnowflakeId::parse(&format!("https://twitter.com/a/status/{}", id.0)).unwrap(), id);
    }

    #[test]
    fn spike_agrees_with_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (trades, scan) = random_trades(&mut rng);
        prop_assert_eq!(rolling_spike(&trades, MS_PER_HOUR, &scan).unwrap(), spike_oracle(&trades, MS_PER_HOUR, &scan));
    }

    #[test]
    fn spike_ignores_trades_outside_scan(seed in any::<u64>(), extra in 1i64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut trades, scan) = random_trades(&mut rng);
        let before = rolling_spike(&trades, MS_PER_HOUR, &scan).unwrap();
        trades.insert(0, TradePoint { ts: scan.start.offset(-1), usd_cents: extra });
        trades.push(TradePoint { ts: scan.end.offset(1), usd_cents: extra });
        trades.sort_by_key(|t| t.ts);
        prop_assert_eq!(rolling_spike(&trades, MS_PER_HOUR, &scan).unwrap(), before);
    }

    #[test]
    fn limiter_window_invariant(gaps in proptest::collection::vec(0i64..120_000, 1..150), cap in 1usize..40) {
        let mut t = 0;
        let reqs: Vec<i64> = gaps.iter().map(|g| { t += g; t }).collect();
        let grants = limiter_grants(&reqs, 600_000, cap);
        prop_assert!(max_in_window(&grants, 600_000) <= cap);
        prop_assert!(grants.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(grants.iter().zip(&reqs).all(|(g, r)| g.0 >= *r));
    }

    #[test]
    fn keyword_count_matches_substring(seed in any::<u64>(), words in 0usize..12) {
        let k = KeywordSet::new(["Mavericks", "Lakers", "Dallas", "Los Angeles"]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let text = random_text(&mut rng, words);
        prop_assert_eq!(k.count_in(&text), substring_count(&k, &text));
    }

    #[test]
    fn ladder_widens_for_any_level_count(levels in 1usize..8) {
        let e = probe_event();
        let x = x_query(&[&["Mavericks", "Mavs"], &["Lakers"]]);
        let ladder = broaden_ladder(&x, &e, levels).unwrap();
        prop_assert_eq!(ladder.len(), levels);
        for w in ladder.windows(2) {
            // Every cluster of the wider query covers some narrower cluster.
            for wide in &w[1].clusters {
                prop_assert!(w[0].clusters.iter().any(|narrow| narrow.iter().all(|t| wide.contains(t))));
            }
        }
    }
}
