//! Run orchestration: seed → draft → pull → recover → verify → probe → analyze.
//!
//! Each per-event stage reads the previous stage's file, writes its own and
//! records the content hash in the manifest. Event-level failures are recorded
//! and never abort the run; only run-level problems (bad config, unreadable
//! seed inputs, a corrupt manifest) surface as errors.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;
use std::sync::Arc;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{self, EventOutcome, ProbeReport};
use crate::clock::{Clock, SystemClock, VirtualClock};
use crate::config::{BackendMode, ProviderMode, RunConfig};
use crate::drafting::ladder::broaden_ladder;
use crate::drafting::remote::RemoteBackend;
use crate::drafting::{draft_event, DraftOutcome, FallbackBackend, ModelBackend};
use crate::error::{Error, Result};
use crate::model::{Event, Mention, Surface, TimeWindow, Timestamp};
use crate::polymarket;
use crate::provider::brandwatch::Brandwatch;
use crate::provider::mock::MockProvider;
use crate::provider::{ListeningProvider, QuerySession, RateLimiter, RateLimiterState, SavedQuery};
use crate::store::{
    content_hash, jsonl_bytes, read_jsonl, write_atomic, EventRecord, Failure, PolymarketSeedSummary, RunManifest,
    RunStore, SeedRecord, Stage, WcepSeedSummary,
};
use crate::verify::{earliest_verified, EventVerification, KeywordSet, VerifyOptions};
use crate::wcep::{self, FixturePageviews, FixtureWcep, LivePageviews, LiveWcep, PageviewSource, UsLexicon, WcepPages};
use crate::xrecover::{
    decode_snowflake, status_url, FixtureOembed, LiveOembed, OembedCache, OembedOutcome, OembedSource, SnowflakeId,
};

/// Virtual start time for mock runs, so manifests are reproducible too.
pub const MOCK_EPOCH: Timestamp = Timestamp(1_780_272_000_000);

pub const TABLES: [&str; 5] = ["hits", "winners", "paired_a", "paired_b", "probe"];

/// External collaborators of a run.
pub struct Services {
    pub clock: Arc<dyn Clock>,
    pub provider: Box<dyn ListeningProvider>,
    pub backend: Box<dyn ModelBackend>,
    pub oembed: Box<dyn OembedSource>,
    pub wcep_pages: Box<dyn WcepPages>,
    pub pageviews: Box<dyn PageviewSource>,
}

impl Services {
    /// Mock mode reads everything from the fixtures directory; live mode needs
    /// its credentials in the environment.
    pub fn for_config(cfg: &RunConfig) -> Result<Self> {
        let backend: Box<dyn ModelBackend> = match cfg.backend {
            BackendMode::Fallback => Box::new(FallbackBackend),
            BackendMode::Remote => Box::new(RemoteBackend::from_env()?),
        };
        match cfg.provider {
            ProviderMode::Mock => {
                let dir = cfg
                    .fixtures_dir()
                    .ok_or_else(|| Error::Config("mock mode needs a fixtures directory".into()))?;
                let clock: Arc<dyn Clock> = Arc::new(VirtualClock::new(MOCK_EPOCH));
                let pageviews = match dir.join("pageviews.csv") {
                    p if p.exists() => FixturePageviews::load(&p)?,
                    _ => FixturePageviews::from_records(&[]),
                };
                Ok(Services {
                    provider: Box::new(MockProvider::from_file(&dir.join("mentions.jsonl"), clock.clone())?),
                    clock,
                    backend,
                    oembed: Box::new(FixtureOembed::new(dir.join("oembed"))),
                    wcep_pages: Box::new(FixtureWcep { dir: dir.join("wcep") }),
                    pageviews: Box::new(pageviews),
                })
            }
            ProviderMode::Live => Ok(Services {
                clock: Arc::new(SystemClock),
                provider: Box::new(Brandwatch::from_env()?),
                backend,
                oembed: Box::new(LiveOembed::new()?),
                wcep_pages: Box::new(LiveWcep::new()?),
                pageviews: Box::new(LivePageviews::new()?),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSummary {
    pub events: usize,
    pub verified: usize,
    pub failed: usize,
    pub needs_review: usize,
    pub provider_requests: u64,
}

impl RunSummary {
    /// 0 when every event reached a terminal stage cleanly, 2 when some failed.
    pub fn exit_code(&self) -> i32 {
        if self.failed > 0 {
            2
        } else {
            0
        }
    }
}

pub struct Pipeline {
    cfg: RunConfig,
    store: RunStore,
    manifest: RunManifest,
    services: Services,
    limiter: RateLimiter,
}

/// Config snapshot of an existing run.
pub fn stored_config(out_dir: &Path, run_id: &str) -> Result<RunConfig> {
    let store = RunStore::new(out_dir, run_id);
    if !store.exists() {
        return Err(Error::Manifest(format!("no run {run_id:?} under {}", out_dir.display())));
    }
    Ok(store.load_manifest()?.config)
}

impl Pipeline {
    /// Start a run, or continue the existing one with the same id. A config
    /// that differs from the recorded snapshot is refused.
    pub fn open(cfg: RunConfig, out_dir: &Path, services: Services) -> Result<Self> {
        cfg.validate()?;
        let store = RunStore::new(out_dir, &cfg.run_id);
        let manifest = if store.exists() {
            let m = store.load_manifest()?;
            if m.config_hash != cfg.hash() {
                return Err(Error::Manifest(format!(
                    "run {:?} was started with a different config (recorded {}, given {}); use a new run id",
                    cfg.run_id,
                    &m.config_hash[..12],
                    &cfg.hash()[..12]
                )));
            }
            m
        } else {
            fs::create_dir_all(&store.root)?;
            let m = RunManifest::new(cfg.clone(), services.clock.now());
            store.save_manifest(&m)?;
            m
        };
        let limiter = RateLimiter::new(
            RateLimiterState::new(cfg.limiter.window_s * 1000, cfg.limiter.cap),
            services.clock.clone(),
        );
        Ok(Pipeline { cfg, store, manifest, services, limiter })
    }

    pub fn manifest(&self) -> &RunManifest {
        &self.manifest
    }

    pub fn store(&self) -> &RunStore {
        &self.store
    }

    pub fn limiter(&self) -> &RateLimiter {
        &self.limiter
    }

    fn save(&mut self) -> Result<()> {
        self.manifest.updated_at = self.services.clock.now();
        self.store.save_manifest(&self.manifest)
    }

    fn note(&mut self, stage: &str, event_id: Option<&str>, msg: impl Into<String>) {
        let now = self.services.clock.now();
        self.manifest.note(now, stage, event_id, msg);
    }

    fn fail(&mut self, id: &str, stage: Stage, err: String) {
        warn!("{id}: {} failed: {err}", stage.as_str());
        self.note(stage.as_str(), Some(id), format!("failed: {err}"));
        let rec = self.manifest.events.get_mut(id).expect("event recorded");
        rec.errors.push(err.clone());
        rec.failed = Some(Failure { stage, error: err });
    }

    pub fn events(&self) -> Result<Vec<Event>> {
        if self.manifest.seed.is_none() {
            return Ok(Vec::new());
        }
        read_jsonl(&self.store.events_path())
    }

    fn read_draft(&self, id: &str) -> Result<DraftOutcome> {
        Ok(serde_json::from_slice(&fs::read(self.store.stage_path(Stage::Drafted, id))?)?)
    }

    pub fn summary(&self) -> RunSummary {
        let recs = self.manifest.events.values();
        RunSummary {
            events: self.manifest.events.len(),
            verified: recs.clone().filter(|r| r.failed.is_none() && r.stage == Stage::Verified).count(),
            failed: self.manifest.failed_events(),
            needs_review: recs.filter(|r| r.needs_review).count(),
            provider_requests: self.manifest.provider_requests,
        }
    }

    /// Rewind any event whose recorded stage outputs no longer match the files on disk.
    pub fn reconcile(&mut self) {
        let mut stale = Vec::new();
        for (id, rec) in &mut self.manifest.events {
            for s in [Stage::Drafted, Stage::Pulled, Stage::Recovered, Stage::Verified] {
                if s > rec.stage {
                    break;
                }
                if !self.store.intact(&self.store.stage_path(s, id), rec.hashes.get(&s)) {
                    rec.rewind_to(s.prev().expect("not the first stage"));
                    stale.push((id.clone(), s));
                    break;
                }
            }
        }
        for (id, s) in stale {
            self.note(s.as_str(), Some(&id), format!("{} output missing or changed; redoing", s.as_str()));
        }
    }

    /// Redo `stage` (and everything after it) for every event that got past it.
    pub fn force(&mut self, stage: Stage) -> Result<()> {
        match stage.prev() {
            None => {
                self.manifest.seed = None;
                self.manifest.events.clear();
                self.manifest.analysis = None;
                self.manifest.probe_hash = None;
            }
            Some(prev) => {
                for rec in self.manifest.events.values_mut() {
                    if rec.stage >= stage {
                        rec.rewind_to(prev);
                    }
                    if rec.failed.as_ref().is_some_and(|f| f.stage >= stage) {
                        rec.failed = None;
                    }
                }
            }
        }
        self.note(stage.as_str(), None, "forced rerun");
        self.save()
    }

    /// Clear failure marks so failed events are attempted again.
    pub fn retry_failed(&mut self) -> Result<()> {
        let mut n = 0;
        for rec in self.manifest.events.values_mut() {
            if rec.failed.take().is_some() {
                n += 1;
            }
        }
        if n > 0 {
            self.note("resume", None, format!("retrying {n} failed events"));
            self.save()?;
        }
        Ok(())
    }

    // ---- seed ------------------------------------------------------------

    pub fn seed(&mut self) -> Result<()> {
        if let Some(s) = &self.manifest.seed {
            if self.store.intact(&self.store.events_path(), Some(&s.events_hash)) {
                return Ok(());
            }
            self.note("seed", None, "events store missing or changed; reseeding");
        }
        let mut events = Vec::new();
        let mut record = SeedRecord { events_hash: String::new(), wcep: None, polymarket: None };

        if let Some(w) = self.cfg.wcep.clone() {
            let lexicon = match &w.lexicon {
                Some(p) => UsLexicon::load(&self.cfg.resolve(p))?,
                None => UsLexicon::default(),
            };
            let params = wcep::WcepParams {
                from: w.from,
                to: w.to,
                cap: w.cap,
                top_n: w.top_n,
                parallelism: w.parallelism,
            };
            let seed = wcep::seed_wcep(&params, &*self.services.wcep_pages, &lexicon, &*self.services.pageviews)?;
            for e in &seed.parse_errors {
                self.note("seed-wcep", None, format!("day {}: {}", e.day, e.message));
            }
            for msg in &seed.warnings {
                self.note("seed-wcep", None, msg.clone());
            }
            let window = TimeWindow::from_dates(w.from, w.to)?;
            for e in &seed.ranked.events {
                e.validate(&window, None)?;
            }
            info!(
                "wcep: {} bullets, {} U.S.-relevant, {} events over {} articles",
                seed.candidates,
                seed.passing,
                seed.ranked.events.len(),
                seed.distinct_articles
            );
            record.wcep = Some(WcepSeedSummary {
                candidates: seed.candidates,
                passing: seed.passing,
                events: seed.ranked.events.len(),
                distinct_articles: seed.distinct_articles,
                shortfall: seed.ranked.shortfall,
                parse_errors: seed.parse_errors.len(),
            });
            events.extend(seed.ranked.events);
        }

        if let Some(p) = self.cfg.polymarket.clone() {
            let markets = polymarket::load_markets(&self.cfg.input_path(p.markets.as_deref(), "markets.csv")?)?;
            let trades = polymarket::load_trades(&self.cfg.input_path(p.trades.as_deref(), "trades.csv")?)?;
            let window = TimeWindow::from_dates(p.from, p.to)?;
            let seed = polymarket::seed_polymarket(&markets, trades, &window, p.floor_usd, p.top_k)?;
            for id in &seed.pinned.dropped {
                self.note("seed-polymarket", None, format!("market {id} has no in-window trades; dropped"));
            }
            for e in &seed.pinned.events {
                e.validate(&window, Some(p.floor_usd))?;
            }
            info!(
                "polymarket: {} markets, {} above floor, {} pinned over {} groups",
                seed.candidates,
                seed.filtered.len(),
                seed.pinned.events.len(),
                seed.distinct_groups
            );
            record.polymarket = Some(PolymarketSeedSummary {
                candidates: seed.candidates,
                filtered: seed.filtered.len(),
                pinned: seed.pinned.events.len(),
                dropped: seed.pinned.dropped.len(),
                distinct_groups: seed.distinct_groups,
                median_volume_usd: seed.median_volume_usd,
            });
            events.extend(seed.pinned.events);
        }

        let mut seen = std::collections::HashSet::new();
        for e in &events {
            if !seen.insert(e.event_id.as_str()) {
                return Err(Error::Invariant(format!("duplicate event id {}", e.event_id)));
            }
        }
        record.events_hash = write_atomic(&self.store.events_path(), &jsonl_bytes(&events)?)?;
        let same = self.manifest.seed.as_ref().map(|s| &s.events_hash) == Some(&record.events_hash);
        if !same {
            self.manifest.events = events.iter().map(|e| (e.event_id.clone(), EventRecord::seeded())).collect();
            self.manifest.analysis = None;
            self.manifest.probe_hash = None;
        }
        self.note("seed", None, format!("{} events seeded", events.len()));
        self.manifest.seed = Some(record);
        self.save()
    }

    // ---- draft -----------------------------------------------------------

    pub fn draft(&mut self) -> Result<()> {
        self.reconcile();
        let events = self.events()?;
        let todo: Vec<&Event> =
            events.iter().filter(|e| self.manifest.events[&e.event_id].awaits(Stage::Drafted)).collect();
        let threshold = self.cfg.pull.specificity_threshold;
        let backend = &*self.services.backend;
        let results: Vec<(String, Result<DraftOutcome>)> =
            todo.par_iter().map(|e| (e.event_id.clone(), draft_event(e, backend, threshold))).collect();
        for (id, r) in results {
            match r {
                Ok(d) => {
                    for w in &d.warnings {
                        self.note("draft", Some(&id), w.clone());
                    }
                    if d.needs_review {
                        self.note("draft", Some(&id), "specificity gate rejected twice; flagged for review");
                    }
                    let h = write_atomic(&self.store.stage_path(Stage::Drafted, &id), &serde_json::to_vec_pretty(&d)?)?;
                    let rec = self.manifest.events.get_mut(&id).expect("event recorded");
                    rec.needs_review = d.needs_review;
                    rec.hashes.insert(Stage::Drafted, h);
                    rec.stage = Stage::Drafted;
                }
                Err(e) => self.fail(&id, Stage::Drafted, e.to_string()),
            }
        }
        self.save()
    }

    // ---- pull ------------------------------------------------------------

    /// Provider lifecycles run one event at a time through the shared limiter.
    pub fn pull(&mut self) -> Result<()> {
        self.reconcile();
        let events = self.events()?;
        for e in &events {
            if !self.manifest.events[&e.event_id].awaits(Stage::Pulled) {
                continue;
            }
            let draft = match self.read_draft(&e.event_id) {
                Ok(d) => d,
                Err(err) => {
                    self.fail(&e.event_id, Stage::Pulled, format!("cannot read draft: {err}"));
                    continue;
                }
            };
            self.pull_event(e, &draft)?;
            self.save()?;
        }
        self.save()
    }

    fn pull_event(&mut self, e: &Event, draft: &DraftOutcome) -> Result<()> {
        let id = e.event_id.as_str();
        let q = &draft.queries.x;
        let window = self.cfg.pull_window(e.t_e);
        let page = self.cfg.pull.page_size;
        let policy = self.cfg.backfill_policy();
        let before = self.limiter.total_granted();

        // A query id left over from an interrupted attempt is reused first.
        let recorded = {
            let rec = &self.manifest.events[id];
            rec.query_id.clone().filter(|_| !rec.query_deleted)
        };
        let mut attempt = None;
        if let Some(qid) = recorded {
            self.note("pull", Some(id), format!("reusing recorded query {qid}"));
            let saved = SavedQuery {
                provider_query_id: qid,
                boolean_rendered: q.render(),
                created_at: self.services.clock.now(),
                backfill_percent: 0.0,
            };
            let mut s = QuerySession::resume(&*self.services.provider, &self.limiter, saved);
            let r = run_lifecycle(&mut s, &policy, window, page);
            if r.is_err() {
                let _ = s.abandon();
            }
            attempt = r.ok();
        }
        let outcome = match attempt {
            Some(o) => Ok(o),
            None => match QuerySession::create(&*self.services.provider, &self.limiter, q, id) {
                Err(err) => Err((err, true)),
                Ok(mut s) => {
                    let qid = s.query().provider_query_id.clone();
                    let rec = self.manifest.events.get_mut(id).expect("event recorded");
                    rec.query_id = Some(qid);
                    rec.query_deleted = false;
                    self.store.save_manifest(&self.manifest)?;
                    let r = run_lifecycle(&mut s, &policy, window, page);
                    if r.is_err() {
                        let _ = s.abandon();
                    }
                    r.map_err(|err| (err, false))
                }
            },
        };
        let used = self.limiter.total_granted() - before;
        self.manifest.provider_requests += used;
        self.manifest.events.get_mut(id).expect("event recorded").provider_requests += used;

        match outcome {
            Err((err, at_create)) => {
                let rejected = at_create && matches!(err, Error::Status { status: 400..=499, .. });
                if rejected {
                    self.fail(id, Stage::Drafted, format!("failed-drafting: provider rejected query: {err}"));
                } else {
                    self.fail(id, Stage::Pulled, err.to_string());
                }
            }
            Ok(out) => {
                for p in &out.poll_errors {
                    self.note("pull", Some(id), format!("backfill poll error: {p}"));
                }
                if let Some(d) = &out.delete_error {
                    self.note("pull", Some(id), format!("delete failed: {d}"));
                }
                let mut counts: BTreeMap<String, usize> = BTreeMap::new();
                for m in &out.mentions {
                    *counts.entry(m.channel.as_str().to_string()).or_default() += 1;
                }
                let h = write_atomic(&self.store.stage_path(Stage::Pulled, id), &jsonl_bytes(&out.mentions)?)?;
                let rec = self.manifest.events.get_mut(id).expect("event recorded");
                rec.backfill_percent = Some(out.backfill);
                rec.query_deleted = out.delete_error.is_none();
                rec.pull_counts = counts;
                rec.hashes.insert(Stage::Pulled, h);
                rec.stage = Stage::Pulled;
            }
        }
        Ok(())
    }

    // ---- recover ---------------------------------------------------------

    /// Decode tweet times from their ids and fetch bodies through the oEmbed cache.
    pub fn recover(&mut self) -> Result<()> {
        self.reconcile();
        let ids: Vec<String> = self
            .manifest
            .events
            .iter()
            .filter(|(_, r)| r.awaits(Stage::Recovered))
            .map(|(id, _)| id.clone())
            .collect();
        let oembed_dir = self.store.oembed_dir();
        fs::create_dir_all(&oembed_dir)?;
        let cache = OembedCache::new(&*self.services.oembed, &*self.services.clock, Some(&oembed_dir));
        let store = &self.store;
        let results: Vec<(String, Result<(String, Vec<String>)>)> = ids
            .par_iter()
            .map(|id| {
                let r = (|| {
                    let mut ms: Vec<Mention> = read_jsonl(&store.stage_path(Stage::Pulled, id))?;
                    let notes = recover_mentions(&mut ms, &cache)?;
                    let h = write_atomic(&store.stage_path(Stage::Recovered, id), &jsonl_bytes(&ms)?)?;
                    Ok((h, notes))
                })();
                (id.clone(), r)
            })
            .collect();
        for (id, r) in results {
            match r {
                Ok((h, notes)) => {
                    for n in notes {
                        self.note("recover", Some(&id), n);
                    }
                    let rec = self.manifest.events.get_mut(&id).expect("event recorded");
                    rec.hashes.insert(Stage::Recovered, h);
                    rec.stage = Stage::Recovered;
                }
                Err(e) => self.fail(&id, Stage::Recovered, e.to_string()),
            }
        }
        self.save()
    }

    // ---- verify ----------------------------------------------------------

    pub fn verify(&mut self) -> Result<()> {
        self.reconcile();
        let events = self.events()?;
        let opts = VerifyOptions { clamp_pre_event: self.cfg.verify.clamp_pre_event };
        let todo: Vec<&Event> =
            events.iter().filter(|e| self.manifest.events[&e.event_id].awaits(Stage::Verified)).collect();
        let backend = &*self.services.backend;
        let store = &self.store;
        let results: Vec<(String, Result<(String, EventVerification)>)> = todo
            .par_iter()
            .map(|e| {
                let r = (|| {
                    let d: DraftOutcome =
                        serde_json::from_slice(&fs::read(store.stage_path(Stage::Drafted, &e.event_id))?)?;
                    let ms: Vec<Mention> = read_jsonl(&store.stage_path(Stage::Recovered, &e.event_id))?;
                    let k = KeywordSet::from_queries(&d.queries.news, &d.queries.x);
                    let v = earliest_verified(e, &ms, &k, backend, &opts);
                    let h = write_atomic(
                        &store.stage_path(Stage::Verified, &e.event_id),
                        &serde_json::to_vec_pretty(&v)?,
                    )?;
                    Ok((h, v))
                })();
                (e.event_id.clone(), r)
            })
            .collect();
        for (id, r) in results {
            match r {
                Ok((h, v)) => {
                    for a in v.adjudications.iter().filter_map(|a| a.error.as_ref()) {
                        self.note("verify", Some(&id), format!("adjudicator error: {a}"));
                    }
                    let rec = self.manifest.events.get_mut(&id).expect("event recorded");
                    rec.verified_channels =
                        v.earliest.iter().map(|c| (c.channel.as_str().to_string(), c.fallback_depth)).collect();
                    rec.hashes.insert(Stage::Verified, h);
                    rec.stage = Stage::Verified;
                }
                Err(e) => self.fail(&id, Stage::Verified, e.to_string()),
            }
        }
        self.save()
    }

    // ---- probe -----------------------------------------------------------

    /// Broadening probe for the configured events. Needs their drafts.
    pub fn probe(&mut self) -> Result<()> {
        if self.store.intact(&self.store.probe_path(), self.manifest.probe_hash.as_ref()) {
            return Ok(());
        }
        let events = self.events()?;
        let by_id: HashMap<&str, &Event> = events.iter().map(|e| (e.event_id.as_str(), e)).collect();
        let mut reports = Vec::new();
        for id in self.cfg.probe.events.clone() {
            let Some(e) = by_id.get(id.as_str()) else {
                self.note("probe", Some(&id), "not among the seeded events; skipped");
                continue;
            };
            let draft = match self.read_draft(&id) {
                Ok(d) => d,
                Err(err) => {
                    self.note("probe", Some(&id), format!("no draft to broaden: {err}"));
                    continue;
                }
            };
            let ladder = match broaden_ladder(&draft.queries.x, e, self.cfg.probe.levels) {
                Ok(l) => l,
                Err(err) => {
                    self.note("probe", Some(&id), format!("cannot build ladder: {err}"));
                    continue;
                }
            };
            let before = self.limiter.total_granted();
            let report = analytics::probe_report(
                e,
                &ladder,
                &*self.services.provider,
                &self.limiter,
                self.cfg.pull_window(e.t_e),
                self.cfg.pull.page_size,
            );
            self.manifest.provider_requests += self.limiter.total_granted() - before;
            for l in &report.levels {
                if let Some(err) = &l.error {
                    self.note("probe", Some(&id), format!("level {}: {err}", l.level));
                }
            }
            reports.push(report);
        }
        let h = write_atomic(&self.store.probe_path(), &serde_json::to_vec_pretty(&reports)?)?;
        self.manifest.probe_hash = Some(h);
        self.save()
    }

    pub fn probe_reports(&self) -> Result<Vec<ProbeReport>> {
        match fs::read(self.store.probe_path()) {
            Ok(b) => Ok(serde_json::from_slice(&b)?),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Vec::new()),
            Err(e) => Err(e.into()),
        }
    }

    // ---- analyze ---------------------------------------------------------

    /// Every seeded event with its verified earliest mentions. Events that did
    /// not reach verification count as having none.
    pub fn outcomes(&self) -> Result<Vec<EventOutcome>> {
        self.events()?
            .into_iter()
            .map(|event| {
                let rec = &self.manifest.events[&event.event_id];
                let earliest = if rec.failed.is_none() && rec.stage == Stage::Verified {
                    let v: EventVerification = serde_json::from_slice(&fs::read(
                        self.store.stage_path(Stage::Verified, &event.event_id),
                    )?)?;
                    v.earliest
                } else {
                    Vec::new()
                };
                Ok(EventOutcome { event, earliest })
            })
            .collect()
    }

    fn analysis_inputs_hash(&self) -> String {
        let mut s = String::new();
        if let Some(seed) = &self.manifest.seed {
            s.push_str(&seed.events_hash);
        }
        for (id, rec) in &self.manifest.events {
            s.push_str(&format!("\n{id}:{}:{}", rec.failed.is_some(), rec.hashes.get(&Stage::Verified).map_or("", |h| h)));
        }
        s.push_str(&format!("\nprobe:{}", self.manifest.probe_hash.as_deref().unwrap_or("")));
        s.push_str(&format!("\nchannels:{}", self.cfg.channels.extras.join(",")));
        content_hash(s.as_bytes())
    }

    pub fn analyze(&mut self) -> Result<()> {
        self.reconcile();
        let inputs = self.analysis_inputs_hash();
        if let Some(a) = &self.manifest.analysis {
            let dir = self.store.tables_dir();
            if a.inputs_hash == inputs && a.tables.iter().all(|(f, h)| self.store.intact(&dir.join(f), Some(h))) {
                return Ok(());
            }
        }
        let outcomes = self.outcomes()?;
        let channels: Vec<_> = self.cfg.channel_set()?.iter().cloned().collect();
        let tables = [
            ("hits", analytics::hits_table(&outcomes)),
            ("winners", analytics::winners_table(&outcomes, &channels)),
            ("paired_a", analytics::paired_table(&outcomes, Surface::Wcep)),
            ("paired_b", analytics::paired_table(&outcomes, Surface::Polymarket)),
            ("probe", analytics::probe_table(&self.probe_reports()?)),
        ];
        let dir = self.store.tables_dir();
        let mut hashes = BTreeMap::new();
        for (name, t) in &tables {
            for (ext, body) in [("txt", t.to_txt()), ("csv", t.to_csv()?), ("md", t.to_md())] {
                let file = format!("{name}.{ext}");
                hashes.insert(file.clone(), write_atomic(&dir.join(&file), body.as_bytes())?);
            }
        }
        self.manifest.analysis = Some(crate::store::AnalysisRecord { inputs_hash: inputs, tables: hashes });
        self.note("analyze", None, format!("tables written for {} events", outcomes.len()));
        self.save()
    }

    /// All stages in order; each one skips work that is already done.
    pub fn full_run(&mut self) -> Result<RunSummary> {
        self.seed()?;
        self.draft()?;
        self.pull()?;
        self.recover()?;
        self.verify()?;
        self.probe()?;
        self.analyze()?;
        let s = self.summary();
        info!(
            "{} events: {} verified, {} failed, {} flagged for review, {} provider requests",
            s.events, s.verified, s.failed, s.needs_review, s.provider_requests
        );
        Ok(s)
    }
}

struct PullOut {
    backfill: f64,
    mentions: Vec<Mention>,
    poll_errors: Vec<String>,
    delete_error: Option<String>,
}

fn run_lifecycle(
    s: &mut QuerySession<'_>,
    policy: &crate::provider::BackfillPolicy,
    window: TimeWindow,
    page: usize,
) -> Result<PullOut> {
    let backfill = s.await_backfill(policy)?;
    let mut mentions = s.pull_all(window, page)?;
    let x = s.pull_x(window, page)?;
    let delete_error = s.delete().err().map(|e| e.to_string());
    for m in x {
        if !mentions.iter().any(|o| o.channel == m.channel && o.guid == m.guid) {
            mentions.push(m);
        }
    }
    Ok(PullOut {
        backfill,
        mentions,
        poll_errors: s.poll_errors.iter().map(|e| e.to_string()).collect(),
        delete_error,
    })
}

/// Fill `recovered_ts` and `body` for tweets. Returns notes for the manifest.
pub fn recover_mentions(ms: &mut [Mention], cache: &OembedCache<'_>) -> Result<Vec<String>> {
    let mut notes = Vec::new();
    for m in ms.iter_mut().filter(|m| m.channel.is_twitter()) {
        let id = match SnowflakeId::parse(&m.guid) {
            Ok(id) => id,
            Err(e) => {
                notes.push(format!("tweet {}: {e}", m.guid));
                continue;
            }
        };
        m.recovered_ts = Some(decode_snowflake(id));
        match cache.get(id, &status_url(m.author.as_deref(), id))? {
            OembedOutcome::Body(b) => m.body = Some(b.text),
            OembedOutcome::Unverifiable(reason) => {
                m.body = None;
                notes.push(format!("tweet {}: {reason}", m.guid));
            }
        }
    }
    Ok(notes)
}
