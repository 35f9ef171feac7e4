//! On-disk layout of a run and its manifest.
//!
//! ```text
//! runs/<run_id>/manifest.json
//!               events.jsonl
//!               drafts/<event_id>.json
//!               pulled/<event_id>.jsonl
//!               recovered/<event_id>.jsonl
//!               verified/<event_id>.json
//!               oembed/<guid>.json
//!               probe.json
//!               tables/{hits,winners,paired_a,paired_b,probe}.{txt,csv,md}
//! ```
//!
//! Every stage output is hashed into the manifest so a resumed run can tell
//! whether what is on disk is still what the stage produced.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::model::Timestamp;

pub fn content_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Write through a temporary file so a crash never leaves a half-written output.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<String> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(content_hash(bytes))
}

pub fn jsonl_bytes<T: Serialize>(items: &[T]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for it in items {
        serde_json::to_writer(&mut out, it)?;
        out.push(b'\n');
    }
    Ok(out)
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let f = fs::File::open(path)?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line)
                .map_err(|e| Error::Parse(format!("{}:{}: {e}", path.display(), i + 1)))?,
        );
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Seeded,
    Drafted,
    Pulled,
    Recovered,
    Verified,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Seeded => "seeded",
            Stage::Drafted => "drafted",
            Stage::Pulled => "pulled",
            Stage::Recovered => "recovered",
            Stage::Verified => "verified",
        }
    }

    pub fn prev(self) -> Option<Stage> {
        match self {
            Stage::Seeded => None,
            Stage::Drafted => Some(Stage::Seeded),
            Stage::Pulled => Some(Stage::Drafted),
            Stage::Recovered => Some(Stage::Pulled),
            Stage::Verified => Some(Stage::Recovered),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    /// The stage that was being attempted.
    pub stage: Stage,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub stage: Stage,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed: Option<Failure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query_id: Option<String>,
    #[serde(default)]
    pub query_deleted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backfill_percent: Option<f64>,
    #[serde(default)]
    pub provider_requests: u64,
    #[serde(default)]
    pub pull_counts: BTreeMap<String, usize>,
    #[serde(default)]
    pub needs_review: bool,
    /// Verified channel → fallback depth of its earliest verified mention.
    #[serde(default)]
    pub verified_channels: BTreeMap<String, usize>,
    #[serde(default)]
    pub errors: Vec<String>,
    /// Stage → content hash of the file that stage wrote.
    #[serde(default)]
    pub hashes: BTreeMap<Stage, String>,
}

impl EventRecord {
    pub fn seeded() -> Self {
        EventRecord {
            stage: Stage::Seeded,
            failed: None,
            query_id: None,
            query_deleted: false,
            backfill_percent: None,
            provider_requests: 0,
            pull_counts: BTreeMap::new(),
            needs_review: false,
            verified_channels: BTreeMap::new(),
            errors: Vec::new(),
            hashes: BTreeMap::new(),
        }
    }

    /// Ready for `next`: reached the stage before it and not failed.
    pub fn awaits(&self, next: Stage) -> bool {
        self.failed.is_none() && Some(self.stage) == next.prev()
    }

    /// Drop everything after `stage` so it is redone.
    pub fn rewind_to(&mut self, stage: Stage) {
        self.stage = stage;
        self.hashes.retain(|s, _| *s <= stage);
        if stage < Stage::Verified {
            self.verified_channels.clear();
        }
        if stage < Stage::Pulled {
            self.pull_counts.clear();
            self.backfill_percent = None;
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WcepSeedSummary {
    pub candidates: usize,
    pub passing: usize,
    pub events: usize,
    pub distinct_articles: usize,
    pub shortfall: usize,
    pub parse_errors: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PolymarketSeedSummary {
    pub candidates: usize,
    pub filtered: usize,
    pub pinned: usize,
    pub dropped: usize,
    pub distinct_groups: usize,
    pub median_volume_usd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub events_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wcep: Option<WcepSeedSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polymarket: Option<PolymarketSeedSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    pub inputs_hash: String,
    pub tables: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogEntry {
    pub at: Timestamp,
    pub stage: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub event_id: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub run_id: String,
    pub config_hash: String,
    pub config: RunConfig,
    /// Where relative paths in the config resolve from.
    pub config_dir: PathBuf,
    pub created_at: Timestamp,
    pub updated_at: Timestamp,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<SeedRecord>,
    /// Seed order is kept in `events.jsonl`; this map is keyed for lookup.
    #[serde(default)]
    pub events: BTreeMap<String, EventRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe_hash: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analysis: Option<AnalysisRecord>,
    #[serde(default)]
    pub provider_requests: u64,
    /// Append-only record of warnings, errors and stage transitions.
    #[serde(default)]
    pub log: Vec<LogEntry>,
}

impl RunManifest {
    pub fn new(config: RunConfig, now: Timestamp) -> Self {
        RunManifest {
            run_id: config.run_id.clone(),
            config_hash: config.hash(),
            config_dir: config.base_dir.clone(),
            config,
            created_at: now,
            updated_at: now,
            seed: None,
            events: BTreeMap::new(),
            probe_hash: None,
            analysis: None,
            provider_requests: 0,
            log: Vec::new(),
        }
    }

    pub fn note(&mut self, at: Timestamp, stage: &str, event_id: Option<&str>, message: impl Into<String>) {
        self.log.push(LogEntry {
            at,
            stage: stage.to_string(),
            event_id: event_id.map(str::to_string),
            message: message.into(),
        });
    }

    pub fn failed_events(&self) -> usize {
        self.events.values().filter(|r| r.failed.is_some()).count()
    }

    pub fn count_at(&self, stage: Stage) -> usize {
        self.events.values().filter(|r| r.failed.is_none() && r.stage == stage).count()
    }
}

/// A run directory.
#[derive(Debug, Clone)]
pub struct RunStore {
    pub root: PathBuf,
}

impl RunStore {
    pub fn new(out_dir: &Path, run_id: &str) -> Self {
        RunStore { root: out_dir.join(run_id) }
    }

    pub fn manifest_path(&self) -> PathBuf {
        self.root.join("manifest.json")
    }

    pub fn events_path(&self) -> PathBuf {
        self.root.join("events.jsonl")
    }

    pub fn stage_path(&self, stage: Stage, event_id: &str) -> PathBuf {
        match stage {
            Stage::Seeded => self.events_path(),
            Stage::Drafted => self.root.join("drafts").join(format!("{event_id}.json")),
            Stage::Pulled => self.root.join("pulled").join(format!("{event_id}.jsonl")),
            Stage::Recovered => self.root.join("recovered").join(format!("{event_id}.jsonl")),
            Stage::Verified => self.root.join("verified").join(format!("{event_id}.json")),
        }
    }

    pub fn oembed_dir(&self) -> PathBuf {
        self.root.join("oembed")
    }

    pub fn probe_path(&self) -> PathBuf {
        self.root.join("probe.json")
    }

    pub fn tables_dir(&self) -> PathBuf {
        self.root.join("tables")
    }

    pub fn exists(&self) -> bool {
        self.manifest_path().exists()
    }

    pub fn file_hash(&self, path: &Path) -> Option<String> {
        fs::read(path).ok().map(|b| content_hash(&b))
    }

    /// Is the file on disk still the one recorded with `hash`?
    pub fn intact(&self, path: &Path, hash: Option<&String>) -> bool {
        hash.is_some_and(|h| self.file_hash(path).as_ref() == Some(h))
    }

    pub fn save_manifest(&self, m: &RunManifest) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(m)?;
        bytes.push(b'\n');
        write_atomic(&self.manifest_path(), &bytes)?;
        Ok(())
    }

    /// Load and sanity-check a manifest. Anything unexpected is refused.
    pub fn load_manifest(&self) -> Result<RunManifest> {
        let path = self.manifest_path();
        let text = fs::read_to_string(&path)
            .map_err(|e| Error::Manifest(format!("cannot read {}: {e}", path.display())))?;
        let mut m: RunManifest = serde_json::from_str(&text)
            .map_err(|e| Error::Manifest(format!("{} is corrupt: {e}", path.display())))?;
        let dir_name = self.root.file_name().and_then(|s| s.to_str()).unwrap_or_default();
        if m.run_id != dir_name || m.config.run_id != m.run_id {
            return Err(Error::Manifest(format!(
                "{} names run {:?} but lives in {dir_name:?}",
                path.display(),
                m.run_id
            )));
        }
        if m.config.hash() != m.config_hash {
            return Err(Error::Manifest(format!(
                "{}: config snapshot does not match its recorded hash",
                path.display()
            )));
        }
        if m.seed.is_none() && !m.events.is_empty() {
            return Err(Error::Manifest(format!("{}: events recorded without a seed", path.display())));
        }
        m.config.validate().map_err(|e| Error::Manifest(format!("{}: {e}", path.display())))?;
        m.config.base_dir = m.config_dir.clone();
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(run: &str) -> RunConfig {
        RunConfig::parse(
            &format!("run_id = \"{run}\"\nfixtures = \"fx\"\n[polymarket]\nfrom = \"2026-01-01\"\nto = \"2026-02-01\"\n"),
            Path::new("."),
        )
        .unwrap()
    }

    #[test]
    fn manifest_round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let store = RunStore::new(dir.path(), "r1");
        let mut m = RunManifest::new(cfg("r1"), Timestamp(5));
        m.events.insert("e".into(), EventRecord::seeded());
        m.seed = Some(SeedRecord { events_hash: "x".into(), wcep: None, polymarket: None });
        store.save_manifest(&m).unwrap();
        assert_eq!(store.load_manifest().unwrap(), m);

        fs::write(store.manifest_path(), "{ not json").unwrap();
        assert!(matches!(store.load_manifest(), Err(Error::Manifest(_))));

        let mut tampered = m.clone();
        tampered.config.limiter.cap = 3;
        store.save_manifest(&tampered).unwrap();
        assert!(matches!(store.load_manifest(), Err(Error::Manifest(_))));
    }

    #[test]
    fn rewind_drops_later_hashes() {
        let mut r = EventRecord::seeded();
        r.stage = Stage::Verified;
        for s in [Stage::Drafted, Stage::Pulled, Stage::Recovered, Stage::Verified] {
            r.hashes.insert(s, s.as_str().into());
        }
        r.rewind_to(Stage::Pulled);
        assert_eq!(r.hashes.keys().copied().collect::<Vec<_>>(), vec![Stage::Drafted, Stage::Pulled]);
        assert!(r.awaits(Stage::Recovered));
        assert!(!r.awaits(Stage::Verified));
    }

    #[test]
    fn jsonl_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.jsonl");
        let h = write_atomic(&p, &jsonl_bytes(&[1u32, 2, 3]).unwrap()).unwrap();
        assert_eq!(read_jsonl::<u32>(&p).unwrap(), vec![1, 2, 3]);
        assert!(RunStore::new(dir.path(), "x").intact(&p, Some(&h)));
    }
}
