//! Checks shared by the acceptance run and the focused oracle tests. Each
//! returns `Ok(detail)` when the property holds and `Err(detail)` otherwise.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use newsrace_core::analytics::{self, EventOutcome, LatencySummary};
use newsrace_core::config::RunConfig;
use newsrace_core::drafting::ladder::broaden_ladder;
use newsrace_core::drafting::{
    draft_event, BooleanQuery, DraftPair, FallbackBackend, ModelBackend, QueryKind, DEFAULT_SPECIFICITY_THRESHOLD,
};
use newsrace_core::error::Result as CoreResult;
use newsrace_core::model::{
    Category, Channel, Event, FeatureVector, Mention, PairedDelta, Surface, TimeWindow, Timestamp, Verification,
    MS_PER_HOUR, MS_PER_MINUTE,
};
use newsrace_core::pipeline::{Pipeline, Services};
use newsrace_core::polymarket::{self, rolling_spike, TradePoint};
use newsrace_core::provider::limiter::RateLimiterState;
use newsrace_core::provider::{project_budget, BackfillPolicy};
use newsrace_core::text;
use newsrace_core::verify::{earliest_verified, verify_other, verify_x, KeywordSet, VerifyOptions};
use newsrace_core::xrecover::{decode_snowflake, SnowflakeId, TWITTER_EPOCH_MS};

pub type Check = std::result::Result<String, String>;

pub fn shipped_fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/corpus")
}

pub fn shipped_config() -> RunConfig {
    RunConfig::load(&shipped_fixtures().join("run.toml")).expect("shipped run.toml")
}

/// A full mock run of the shipped corpus under `out`.
pub fn mock_run(out: &Path) -> Pipeline {
    let cfg = shipped_config();
    let services = Services::for_config(&cfg).expect("mock services");
    let mut p = Pipeline::open(cfg, out, services).expect("open run");
    p.full_run().expect("full run");
    p
}

fn ms(min: f64) -> i64 {
    (min * MS_PER_MINUTE as f64).round() as i64
}

/// Paired deltas in minutes as (news − X) with X fixed at zero.
pub fn summary_of(deltas: &[f64]) -> LatencySummary {
    let pairs: Vec<PairedDelta> = deltas
        .iter()
        .enumerate()
        .map(|(i, d)| PairedDelta::new(format!("e{i}"), Timestamp(ms(*d)), Timestamp(0)))
        .collect();
    analytics::summarize(&pairs)
}

fn close(a: Option<f64>, b: f64) -> bool {
    a.is_some_and(|a| (a - b).abs() < 1e-9)
}

// ---- 1: snowflake ------------------------------------------------------------

pub fn snowflake_oracle() -> Check {
    let zero = decode_snowflake(SnowflakeId(0));
    let want = Timestamp::parse("2010-11-04T01:42:54.657Z").map_err(|e| e.to_string())?;
    if zero != want {
        return Err(format!("raw 0 decodes to {zero}, want {want}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    for _ in 0..1000 {
        let raw: u64 = rng.gen();
        let big = (BigUint::from(raw) >> 22u32) + BigUint::from(TWITTER_EPOCH_MS);
        let got = decode_snowflake(SnowflakeId(raw));
        if BigUint::from(got.0 as u64) != big {
            return Err(format!("id {raw}: {} vs oracle {big}", got.0));
        }
    }
    let took = start.elapsed();
    if took >= Duration::from_secs(1) {
        return Err(format!("1000 decodes took {took:?}"));
    }
    Ok(format!("raw 0 -> {zero}; 1000 random ids agree with the bigint oracle in {took:?}"))
}

// ---- 2 and 3: latency summaries -----------------------------------------------

pub const TABLE_A_DELTAS: [f64; 6] = [-33.4, -7.1, -10.0, -32.0, -53.7, -11.2];
pub const TABLE_B_DELTAS: [f64; 16] = [
    -34.23, -0.62, -0.50, -0.26, -0.20, -0.10, -0.06, -0.02, -0.02, -0.02, 1.20, 1.26, 2.50, 14.19, 143.80, 552.17,
];

pub fn table_a_summary(run: Option<&[EventOutcome]>) -> Check {
    let s = summary_of(&TABLE_A_DELTAS);
    if !close(s.median_min, -21.6) || s.x_first != 0 || s.n != 6 {
        return Err(format!("published deltas: {s:?}"));
    }
    let mut detail = format!("median {:.1}, news first {}/{}", s.median_min.unwrap(), s.n - s.x_first, s.n);
    if let Some(outcomes) = run {
        let a: Vec<&EventOutcome> = outcomes.iter().filter(|o| o.event.surface == Surface::Wcep).collect();
        let (_, r) = analytics::paired_deltas(&a);
        if r.n != 6 || !close(r.median_min.map(|m| (m * 100.0).round() / 100.0), -21.6) || r.x_first != 0 {
            return Err(format!("mock run sample A: {r:?}"));
        }
        detail.push_str("; mock run agrees");
    }
    Ok(detail)
}

/// Is `target` within one order statistic of position `p` (1-based) in sorted `v`?
fn near_order_stat(v: &[i64], p: usize, target: f64) -> bool {
    let t = ms(target);
    (p.saturating_sub(1).max(1)..=(p + 1).min(v.len())).any(|i| v[i - 1] == t)
}

pub fn table_b_summary(run: Option<&[EventOutcome]>) -> Check {
    let check = |s: &LatencySummary, sorted: &[i64]| -> Check {
        let (p1, p3) = analytics::quartile_positions(s.n);
        let rounded = s.median_min.map(|m| (m * 100.0).round() / 100.0);
        if s.n != 16 || !close(rounded, -0.02) || s.x_first != 6 {
            return Err(format!("{s:?}"));
        }
        if !near_order_stat(sorted, p1, -0.20) || !near_order_stat(sorted, p3, 2.50) {
            return Err(format!("IQR {:?}..{:?} at positions {p1},{p3}", s.q1_min, s.q3_min));
        }
        Ok(format!(
            "median {:+.2}, X first {}/16, IQR ({:+.2}, {:+.2})",
            rounded.unwrap(),
            s.x_first,
            s.q1_min.unwrap(),
            s.q3_min.unwrap()
        ))
    };
    let mut sorted: Vec<i64> = TABLE_B_DELTAS.iter().map(|d| ms(*d)).collect();
    sorted.sort_unstable();
    let mut detail = check(&summary_of(&TABLE_B_DELTAS), &sorted)?;
    if let Some(outcomes) = run {
        let b: Vec<&EventOutcome> = outcomes.iter().filter(|o| o.event.surface == Surface::Polymarket).collect();
        let (pairs, r) = analytics::paired_deltas(&b);
        let sorted: Vec<i64> = pairs.iter().map(PairedDelta::delta_ms).collect();
        check(&r, &sorted).map_err(|e| format!("mock run sample B: {e}"))?;
        detail.push_str("; mock run agrees");
    }
    Ok(detail)
}

// ---- 4: hit rates and filter pass rate ------------------------------------------

pub fn fixture_rates(p: &Pipeline) -> Check {
    let outcomes = p.outcomes().map_err(|e| e.to_string())?;
    let rate = |s: Surface| {
        let of: Vec<&EventOutcome> = outcomes.iter().filter(|o| o.event.surface == s).collect();
        analytics::hit_rates(&of).last().map(|r| (r.hits, r.total, r.render())).unwrap_or_default()
    };
    let (a, b) = (rate(Surface::Wcep), rate(Surface::Polymarket));
    let seed = p.manifest().seed.as_ref().and_then(|s| s.wcep.clone()).ok_or("no WCEP seed summary")?;
    let pass = format!("{:.1}", 100.0 * seed.passing as f64 / seed.candidates as f64);
    let detail = format!(
        "A {}, B {}, U.S. filter {}/{} = {pass}%",
        a.2, b.2, seed.passing, seed.candidates
    );
    if (a.0, a.1) == (38, 50)
        && a.2.ends_with("(76%)")
        && (b.0, b.1) == (56, 109)
        && b.2.ends_with("(51%)")
        && (seed.passing, seed.candidates) == (171, 586)
        && pass == "29.2"
    {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// ---- 5: rolling spike -------------------------------------------------------------

pub fn random_trades(rng: &mut ChaCha8Rng) -> (Vec<TradePoint>, TimeWindow) {
    let base = 1_760_000_000_000i64;
    let n = rng.gen_range(0..300);
    let span = rng.gen_range(1..48) * MS_PER_HOUR;
    let mut v: Vec<TradePoint> = (0..n)
        .map(|_| {
            // Coarse grid so identical instants and exact window edges occur.
            let ts = base + rng.gen_range(0..span / 60_000) * 60_000;
            TradePoint { ts: Timestamp(ts), usd_cents: rng.gen_range(0..50_000) }
        })
        .collect();
    v.sort_by_key(|t| t.ts);
    let a = base + rng.gen_range(0..span);
    let b = base + rng.gen_range(0..span);
    (v, TimeWindow::new(Timestamp(a.min(b)), Timestamp(a.max(b))).expect("ordered"))
}

/// Quadratic reference: every in-scan instant as an anchor.
pub fn spike_oracle(trades: &[TradePoint], window_ms: i64, scan: &TimeWindow) -> Option<(Timestamp, i64)> {
    let inside: Vec<&TradePoint> = trades.iter().filter(|t| scan.contains(t.ts)).collect();
    let mut best: Option<(Timestamp, i64)> = None;
    for anchor in &inside {
        let t = anchor.ts;
        let sum: i64 = inside.iter().filter(|s| s.ts.0 > t.0 - window_ms && s.ts.0 <= t.0).map(|s| s.usd_cents).sum();
        let better = match best {
            None => true,
            Some((bt, bs)) => sum > bs || (sum == bs && t < bt),
        };
        if better {
            best = Some((t, sum));
        }
    }
    best.filter(|&(_, s)| s > 0)
}

pub fn spike_oracle_check() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let start = Instant::now();
    for i in 0..100 {
        let (trades, scan) = random_trades(&mut rng);
        let got = rolling_spike(&trades, polymarket::SPIKE_WINDOW_MS, &scan).map_err(|e| e.to_string())?;
        let want = spike_oracle(&trades, polymarket::SPIKE_WINDOW_MS, &scan);
        if got != want {
            return Err(format!("stream {i} ({} trades): {got:?} vs oracle {want:?}", trades.len()));
        }
    }
    let took = start.elapsed();
    if took >= Duration::from_secs(10) {
        return Err(format!("100 streams took {took:?}"));
    }
    Ok(format!("100 random streams agree with the quadratic oracle in {took:?}"))
}

// ---- 6: rate limiter ------------------------------------------------------------------

/// Feed nondecreasing request times; returns the grants.
pub fn limiter_grants(requests: &[i64], window_ms: i64, cap: usize) -> Vec<Timestamp> {
    let mut st = RateLimiterState::new(window_ms, cap);
    requests.iter().map(|&t| st.acquire(Timestamp(t))).collect()
}

pub fn max_in_window(grants: &[Timestamp], window_ms: i64) -> usize {
    grants
        .iter()
        .map(|g| grants.iter().filter(|s| s.0 <= g.0 && g.0 - s.0 < window_ms).count())
        .max()
        .unwrap_or(0)
}

pub fn limiter_check() -> Check {
    let (window, cap) = (600_000, 28);
    let burst = limiter_grants(&[0; 29], window, cap);
    if burst[27] != Timestamp(0) || burst[28] != Timestamp(600_000) {
        return Err(format!("28th at {}, 29th at {}", burst[27].0, burst[28].0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..1000 {
        let n = rng.gen_range(1..120);
        let mut t = 0i64;
        let reqs: Vec<i64> = (0..n)
            .map(|_| {
                t += if rng.gen_bool(0.6) { 0 } else { rng.gen_range(0..90_000) };
                t
            })
            .collect();
        let grants = limiter_grants(&reqs, window, cap);
        let worst = max_in_window(&grants, window);
        let monotone = grants.windows(2).all(|w| w[0] <= w[1]);
        let not_early = grants.iter().zip(&reqs).all(|(g, r)| g.0 >= *r);
        if worst > cap || !monotone || !not_early {
            return Err(format!("sequence {i}: peak {worst}, monotone {monotone}, never early {not_early}"));
        }
    }
    Ok("1000 random sequences stay at or below 28 per 600 s; 29th burst request granted at 600 s".into())
}

// ---- 7: verifier --------------------------------------------------------------------

/// Adjudicator stub that accepts everything; other methods are never reached.
pub struct AcceptAll;

impl ModelBackend for AcceptAll {
    fn name(&self) -> &'static str {
        "accept-all"
    }
    fn extract_features(&self, _: &Event) -> CoreResult<FeatureVector> {
        Ok(FeatureVector::unknown())
    }
    fn draft_booleans(&self, e: &Event, attempt: u32) -> CoreResult<DraftPair> {
        FallbackBackend.draft_booleans(e, attempt)
    }
    fn specificity(&self, _: &BooleanQuery) -> CoreResult<f64> {
        Ok(1.0)
    }
    fn adjudicate(&self, _: &Event, _: &KeywordSet, _: &str) -> CoreResult<bool> {
        Ok(true)
    }
}

pub fn probe_event() -> Event {
    Event {
        event_id: "pm-0xtest".into(),
        surface: Surface::Polymarket,
        title: "Mavericks v Lakers".into(),
        description: "Will the Dallas Mavericks beat the Los Angeles Lakers?".into(),
        category: Category::Sports,
        t_e: Timestamp(1_760_000_000_000),
        attention_prior: 1e6,
        source_key: "0xtest".into(),
        event_group: None,
    }
}

const VOCAB: &[&str] = &[
    "Mavericks", "mavericks", "Lakers", "LAKERS", "Dallas", "Luka", "game", "tonight", "score", "the", "a",
    "Mavs", "Lake", "Lakerside", "Dallas-based", "L.A.", "Los Angeles", "win", "loss", "crowd",
];
const PUNCT: &[&str] = &[" ", " ", " ", ", ", "! ", ": ", " - ", "'s ", " (", ") "];

pub fn random_text(rng: &mut ChaCha8Rng, words: usize) -> String {
    let mut s = String::new();
    for _ in 0..words {
        s.push_str(VOCAB.choose(rng).unwrap());
        s.push_str(PUNCT.choose(rng).unwrap());
    }
    s
}

/// Distinct keywords found by padded substring search over normalized text.
pub fn substring_count(k: &KeywordSet, text_in: &str) -> usize {
    let hay = format!(" {} ", text::normalize(text_in));
    k.terms().iter().filter(|t| hay.contains(&format!(" {t} "))).count()
}

fn mention(channel: Channel, guid: &str, ts: i64, title: Option<String>, body: Option<String>) -> Mention {
    let x = channel.is_twitter();
    Mention {
        channel,
        guid: guid.into(),
        provider_ts: (!x).then_some(Timestamp(ts)),
        recovered_ts: x.then_some(Timestamp(ts)),
        title,
        snippet: None,
        body,
        url: None,
        author: None,
        verification: Verification::Unverified,
    }
}

pub fn verifier_check() -> Check {
    let k = KeywordSet::new(["Mavericks", "Lakers", "Dallas", "Los Angeles"]);
    let ev = probe_event();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tallies = BTreeMap::new();
    for i in 0..50 {
        let words = rng.gen_range(0..8);
        let text = random_text(&mut rng, words);
        let n = substring_count(&k, &text);
        if i % 2 == 0 {
            let m = mention(Channel::Twitter, &format!("{i}"), 0, None, Some(text.clone()));
            let (got, adj) = verify_x(&m, &ev, &k, &AcceptAll);
            let want = match n {
                _ if text.trim().is_empty() => Verification::Unverifiable,
                0 => Verification::Polluted,
                _ => Verification::Verified,
            };
            if got != want || adj.is_some() != (n == 1) {
                return Err(format!("tweet {text:?}: {got:?} vs oracle {want:?} ({n} matches)"));
            }
            *tallies.entry(format!("x:{got:?}")).or_insert(0) += 1;
        } else {
            let m = mention(Channel::News, &format!("{i}"), 0, Some(text.clone()), None);
            let got = verify_other(&m, &k);
            let want = if n >= 1 { Verification::Verified } else { Verification::Polluted };
            if got != want {
                return Err(format!("article {text:?}: {got:?} vs oracle {want:?}"));
            }
            *tallies.entry(format!("other:{got:?}")).or_insert(0) += 1;
        }
    }
    let list = vec![
        mention(Channel::News, "p", 1, Some("Weekend weather outlook".into()), None),
        mention(Channel::News, "v", 2, Some("Mavericks stun Lakers".into()), None),
    ];
    let out = earliest_verified(&ev, &list, &k, &AcceptAll, &VerifyOptions::default());
    let depth = out.earliest.first().map(|e| (e.mention.guid.clone(), e.fallback_depth));
    if depth != Some(("v".into(), 1)) {
        return Err(format!("fallback on [polluted, verified]: {depth:?}"));
    }
    Ok(format!("50 docs agree with the substring oracle {tallies:?}; fallback depth 1"))
}

// ---- 8: ladder monotonicity ---------------------------------------------------------

pub fn ladder_events() -> Vec<Event> {
    let cfg = shipped_config();
    let pm = cfg.polymarket.as_ref().expect("fixture config has polymarket");
    let dir = shipped_fixtures();
    let markets = polymarket::load_markets(&dir.join("markets.csv")).expect("markets");
    let trades = polymarket::load_trades(&dir.join("trades.csv")).expect("trades");
    let window = TimeWindow::from_dates(pm.from, pm.to).expect("window");
    let seed = polymarket::seed_polymarket(&markets, trades, &window, pm.floor_usd, pm.top_k).expect("seed");
    seed.pinned.events.into_iter().take(50).collect()
}

pub fn ladder_check() -> Check {
    let events = ladder_events();
    if events.len() != 50 {
        return Err(format!("{} events", events.len()));
    }
    let mut ladders = Vec::new();
    for e in &events {
        let d = draft_event(e, &FallbackBackend, DEFAULT_SPECIFICITY_THRESHOLD).map_err(|e| e.to_string())?;
        let l = broaden_ladder(&d.queries.x, e, 5).map_err(|e| e.to_string())?;
        if l.len() != 5 {
            return Err(format!("{}: {} levels", e.event_id, l.len()));
        }
        ladders.push(l);
    }
    // Documents assembled from ladder terms so every level sees some traffic.
    let pool: Vec<String> = ladders.iter().flatten().flat_map(|q| q.terms().map(str::to_string)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let docs: Vec<String> = (0..200)
        .map(|_| {
            let mut s = random_text(&mut rng, 3);
            for _ in 0..rng.gen_range(1..5) {
                s.push_str(pool.choose(&mut rng).unwrap());
                s.push(' ');
            }
            s.to_lowercase()
        })
        .collect();
    let mut grew = 0;
    for (e, l) in events.iter().zip(&ladders) {
        let hits: Vec<Vec<bool>> = l.iter().map(|q| docs.iter().map(|d| q.matches_lowercase(d)).collect()).collect();
        for w in hits.windows(2) {
            if w[0].iter().zip(&w[1]).any(|(a, b)| *a && !*b) {
                return Err(format!("{}: a document matched a level and not the next", e.event_id));
            }
        }
        let counts: Vec<usize> = hits.iter().map(|h| h.iter().filter(|x| **x).count()).collect();
        if counts.first() < counts.last() {
            grew += 1;
        }
    }
    Ok(format!("50 events × 5 levels over 200 docs: match sets nested at every step ({grew} ladders strictly widen)"))
}

// ---- 9: determinism --------------------------------------------------------------------

pub fn tables_of(p: &Pipeline) -> BTreeMap<String, Vec<u8>> {
    let dir = p.store().tables_dir();
    let mut out = BTreeMap::new();
    for e in fs::read_dir(&dir).expect("tables dir") {
        let path = e.expect("entry").path();
        out.insert(path.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&path).expect("table"));
    }
    out
}

pub fn determinism_check(first: &Pipeline, second: &Pipeline, took: Duration) -> Check {
    let (a, b) = (tables_of(first), tables_of(second));
    if a.len() != 15 {
        return Err(format!("{} table files", a.len()));
    }
    if a != b {
        let diff: Vec<&String> = a.keys().filter(|k| a.get(*k) != b.get(*k)).collect();
        return Err(format!("tables differ: {diff:?}"));
    }
    if took >= Duration::from_secs(60) {
        return Err(format!("two runs took {took:?}"));
    }
    Ok(format!("{} table files byte-identical across two runs ({took:?})", a.len()))
}

// ---- 10: budget -----------------------------------------------------------------------

pub fn budget_check() -> Check {
    let b = project_budget(109, &BackfillPolicy::default(), 28, 600_000);
    let detail = format!("{} requests/event, {} total, {:.1} h", b.requests_per_event, b.total_requests, b.hours());
    if b.hours() >= 5.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

pub fn x_query(terms: &[&[&str]]) -> BooleanQuery {
    BooleanQuery::new(
        QueryKind::XPermissive,
        terms.iter().map(|c| c.iter().map(|s| s.to_string()).collect()).collect(),
    )
    .expect("valid query")
}
