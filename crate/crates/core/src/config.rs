//! Declarative run configuration (TOML). Credentials never live here: live
//! mode reads them from the environment at startup.

use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{ChannelSet, TimeWindow, MS_PER_MINUTE};
use crate::provider::BackfillPolicy;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProviderMode {
    #[default]
    Mock,
    Live,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendMode {
    #[default]
    Fallback,
    Remote,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WcepConfig {
    pub from: NaiveDate,
    pub to: NaiveDate,
    #[serde(default = "d_top_n")]
    pub top_n: usize,
    #[serde(default = "d_cap")]
    pub cap: usize,
    #[serde(default = "d_parallelism")]
    pub parallelism: usize,
    /// Replacement U.S. lexicon; the bundled one is used when absent.
    #[serde(default)]
    pub lexicon: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolymarketConfig {
    pub from: NaiveDate,
    pub to: NaiveDate,
    #[serde(default = "d_floor")]
    pub floor_usd: f64,
    #[serde(default = "d_top_k")]
    pub top_k: usize,
    /// Defaults to `markets.csv` in the fixtures directory.
    #[serde(default)]
    pub markets: Option<PathBuf>,
    #[serde(default)]
    pub trades: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PullConfig {
    pub window_pre_min: i64,
    pub window_post_min: i64,
    pub page_size: usize,
    pub backfill_floor_percent: f64,
    pub backfill_cap_s: i64,
    pub poll_s: i64,
    pub specificity_threshold: f64,
}

impl Default for PullConfig {
    fn default() -> Self {
        PullConfig {
            window_pre_min: 30,
            window_post_min: 24 * 60,
            page_size: crate::provider::DEFAULT_PAGE_SIZE,
            backfill_floor_percent: 50.0,
            backfill_cap_s: 90,
            poll_s: 5,
            specificity_threshold: crate::drafting::DEFAULT_SPECIFICITY_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LimiterConfig {
    pub cap: usize,
    pub window_s: i64,
}

impl Default for LimiterConfig {
    fn default() -> Self {
        LimiterConfig { cap: 28, window_s: 600 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChannelsConfig {
    pub extras: Vec<String>,
}

impl Default for ChannelsConfig {
    fn default() -> Self {
        ChannelsConfig { extras: vec!["reddit".into(), "blog".into()] }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    pub clamp_pre_event: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeConfig {
    pub events: Vec<String>,
    pub levels: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { events: Vec::new(), levels: crate::drafting::ladder::DEFAULT_LEVELS }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub run_id: String,
    #[serde(default)]
    pub provider: ProviderMode,
    #[serde(default)]
    pub backend: BackendMode,
    /// Fixture corpus for mock mode; relative paths resolve against the config file.
    #[serde(default)]
    pub fixtures: Option<PathBuf>,
    #[serde(default)]
    pub wcep: Option<WcepConfig>,
    #[serde(default)]
    pub polymarket: Option<PolymarketConfig>,
    #[serde(default)]
    pub pull: PullConfig,
    #[serde(default)]
    pub limiter: LimiterConfig,
    #[serde(default)]
    pub channels: ChannelsConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub probe: ProbeConfig,
    /// Directory the config was loaded from. Not part of the snapshot or hash.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn d_top_n() -> usize {
    crate::wcep::DEFAULT_TOP_N
}
fn d_cap() -> usize {
    crate::wcep::DEFAULT_CAP
}
fn d_parallelism() -> usize {
    4
}
fn d_floor() -> f64 {
    crate::polymarket::DEFAULT_VOLUME_FLOOR
}
fn d_top_k() -> usize {
    crate::polymarket::DEFAULT_TOP_K
}

impl RunConfig {
    pub fn parse(src: &str, base_dir: &Path) -> Result<Self> {
        let mut c: RunConfig = toml::from_str(src).map_err(|e| Error::Config(e.to_string()))?;
        c.base_dir = base_dir.to_path_buf();
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        RunConfig::parse(&src, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.run_id.is_empty()
            || !self.run_id.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c))
            || self.run_id.starts_with('.')
        {
            return bad(format!("run_id {:?} must be non-empty [A-Za-z0-9._-]", self.run_id));
        }
        if self.wcep.is_none() && self.polymarket.is_none() {
            return bad("select at least one surface ([wcep] or [polymarket])".into());
        }
        if let Some(w) = &self.wcep {
            if w.from > w.to {
                return bad("wcep.from is after wcep.to".into());
            }
            if w.top_n == 0 || w.cap == 0 || w.parallelism == 0 {
                return bad("wcep.top_n, cap and parallelism must be positive".into());
            }
        }
        if let Some(p) = &self.polymarket {
            if p.from > p.to {
                return bad("polymarket.from is after polymarket.to".into());
            }
            if !(p.floor_usd > 0.0) || p.top_k == 0 {
                return bad("polymarket.floor_usd and top_k must be positive".into());
            }
        }
        let p = &self.pull;
        if p.window_pre_min < 0 || p.window_post_min <= 0 || p.page_size == 0 {
            return bad("pull window and page size must be positive".into());
        }
        if p.backfill_cap_s <= 0 || p.poll_s <= 0 || !(0.0..=100.0).contains(&p.backfill_floor_percent) {
            return bad("backfill cap, poll interval and floor must be positive".into());
        }
        if !(0.0..=1.0).contains(&p.specificity_threshold) {
            return bad("specificity_threshold must lie in [0,1]".into());
        }
        if self.limiter.cap == 0 || self.limiter.window_s <= 0 {
            return bad("limiter cap and window must be positive".into());
        }
        if self.probe.levels == 0 {
            return bad("probe.levels must be positive".into());
        }
        if self.provider == ProviderMode::Mock && self.fixtures.is_none() {
            return bad("mock mode needs a fixtures directory".into());
        }
        self.channel_set()?;
        Ok(())
    }

    pub fn channel_set(&self) -> Result<ChannelSet> {
        let extras: Vec<&str> = self.channels.extras.iter().map(String::as_str).collect();
        ChannelSet::with_extras(&extras)
    }

    /// Hex SHA-256 of the canonical JSON snapshot.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(bytes))
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn fixtures_dir(&self) -> Option<PathBuf> {
        self.fixtures.as_deref().map(|p| self.resolve(p))
    }

    /// A path from the config, or a default file inside the fixtures directory.
    pub fn input_path(&self, explicit: Option<&Path>, default_name: &str) -> Result<PathBuf> {
        match (explicit, self.fixtures_dir()) {
            (Some(p), _) => Ok(self.resolve(p)),
            (None, Some(dir)) => Ok(dir.join(default_name)),
            (None, None) => Err(Error::Config(format!("no path configured for {default_name}"))),
        }
    }

    pub fn backfill_policy(&self) -> BackfillPolicy {
        BackfillPolicy {
            floor_percent: self.pull.backfill_floor_percent,
            cap_ms: self.pull.backfill_cap_s * 1000,
            poll_ms: self.pull.poll_s * 1000,
        }
    }

    pub fn pull_window(&self, t_e: crate::model::Timestamp) -> TimeWindow {
        TimeWindow::around(t_e, self.pull.window_pre_min * MS_PER_MINUTE, self.pull.window_post_min * MS_PER_MINUTE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MIN: &str = r#"
run_id = "t1"
fixtures = "fx"
[polymarket]
from = "2026-02-01"
to = "2026-05-01"
"#;

    #[test]
    fn defaults_fill_in() {
        let c = RunConfig::parse(MIN, Path::new("/base")).unwrap();
        assert_eq!(c.limiter, LimiterConfig { cap: 28, window_s: 600 });
        assert_eq!(c.pull.page_size, 100);
        assert_eq!(c.channel_set().unwrap().len(), 9);
        assert_eq!(c.fixtures_dir().unwrap(), PathBuf::from("/base/fx"));
        assert_eq!(c.input_path(None, "markets.csv").unwrap(), PathBuf::from("/base/fx/markets.csv"));
    }

    #[test]
    fn hash_ignores_location_but_not_values() {
        let a = RunConfig::parse(MIN, Path::new("/a")).unwrap();
        let b = RunConfig::parse(MIN, Path::new("/b")).unwrap();
        assert_eq!(a.hash(), b.hash());
        let mut c = a.clone();
        c.limiter.cap = 10;
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn rejects_bad_values() {
        for bad in [
            MIN.replace("t1", "../x"),
            format!("{MIN}[limiter]\ncap = 0\n"),
            format!("{MIN}[pull]\npage_size = 0\n"),
            format!("{MIN}token = \"secret\"\n"),
            MIN.replace("fixtures = \"fx\"", ""),
            format!("{MIN}[channels]\nextras = [\"twitter\"]\n"),
        ] {
            assert!(RunConfig::parse(&bad, Path::new(".")).is_err(), "{bad}");
        }
    }

    #[test]
    fn toml_round_trip() {
        let c = RunConfig::parse(MIN, Path::new(".")).unwrap();
        let again = RunConfig::parse(&c.to_toml().unwrap(), Path::new(".")).unwrap();
        assert_eq!(c, again);
    }
}
