//! Shared domain types: timestamps, surfaces, categories, channels, events and mentions.

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, NaiveDate, TimeZone, Utc};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MS_PER_MINUTE: i64 = 60_000;
pub const MS_PER_HOUR: i64 = 60 * MS_PER_MINUTE;
pub const MS_PER_DAY: i64 = 24 * MS_PER_HOUR;

/// A UTC instant in integer milliseconds since the Unix epoch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Timestamp(pub i64);

impl Timestamp {
    pub fn from_millis(ms: i64) -> Self {
        Timestamp(ms)
    }

    pub fn millis(self) -> i64 {
        self.0
    }

    /// Midnight UTC at the start of `date`.
    pub fn at_midnight(date: NaiveDate) -> Self {
        let dt = date.and_hms_opt(0, 0, 0).expect("midnight is valid");
        Timestamp(Utc.from_utc_datetime(&dt).timestamp_millis())
    }

    pub fn date(self) -> NaiveDate {
        self.to_datetime().date_naive()
    }

    pub fn to_datetime(self) -> DateTime<Utc> {
        Utc.timestamp_millis_opt(self.0)
            .single()
            .expect("timestamp within chrono range")
    }

    pub fn parse(s: &str) -> Result<Self> {
        let dt = DateTime::parse_from_rfc3339(s.trim())
            .map_err(|e| Error::Parse(format!("bad timestamp {s:?}: {e}")))?;
        Ok(Timestamp(dt.timestamp_millis()))
    }

    pub fn offset(self, ms: i64) -> Self {
        Timestamp(self.0 + ms)
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            self.to_datetime()
                .to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
        )
    }
}

/// Inclusive time range `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub start: Timestamp,
    pub end: Timestamp,
}

impl TimeWindow {
    pub fn new(start: Timestamp, end: Timestamp) -> Result<Self> {
        if start > end {
            return Err(Error::Config(format!("window start {start} after end {end}")));
        }
        Ok(TimeWindow { start, end })
    }

    /// The UTC day range `[from 00:00, to 23:59:59.999]`.
    pub fn from_dates(from: NaiveDate, to: NaiveDate) -> Result<Self> {
        TimeWindow::new(
            Timestamp::at_midnight(from),
            Timestamp::at_midnight(to).offset(MS_PER_DAY - 1),
        )
    }

    /// The pull window around an event time: `[t_e - pre, t_e + post]`.
    pub fn around(t_e: Timestamp, pre_ms: i64, post_ms: i64) -> Self {
        TimeWindow {
            start: t_e.offset(-pre_ms),
            end: t_e.offset(post_ms),
        }
    }

    pub fn contains(&self, t: Timestamp) -> bool {
        self.start <= t && t <= self.end
    }

    pub fn overlaps(&self, other: &TimeWindow) -> bool {
        self.start <= other.end && other.start <= self.end
    }
}

/// Signed minutes between the earliest news and earliest X mention.
///
/// Positive iff the X mention came first.
pub fn delta_minutes(t_news: Timestamp, t_x: Timestamp) -> f64 {
    (t_news.0 - t_x.0) as f64 / MS_PER_MINUTE as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Surface {
    Wcep,
    Polymarket,
}

impl Surface {
    pub fn as_str(self) -> &'static str {
        match self {
            Surface::Wcep => "wcep",
            Surface::Polymarket => "polymarket",
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The four-bucket category scheme shared by both samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Sports,
    Politics,
    MacroCrypto,
    Other,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::Sports,
        Category::Politics,
        Category::MacroCrypto,
        Category::Other,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Category::Sports => "Sports",
            Category::Politics => "Politics & conflict",
            Category::MacroCrypto => "Macro & tech",
            Category::Other => "Other",
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            Category::Sports => "spt",
            Category::Politics => "pol",
            Category::MacroCrypto => "mac",
            Category::Other => "oth",
        }
    }

    /// Lenient parse; unknown labels land in `Other` with `false` returned as the second value.
    pub fn parse_lenient(s: &str) -> (Category, bool) {
        match s.trim().to_ascii_lowercase().as_str() {
            "sports" | "sport" | "spt" => (Category::Sports, true),
            "politics" | "pol" | "politics_conflict" => (Category::Politics, true),
            "macro_crypto" | "macro" | "macro_tech" | "crypto" | "mac" => {
                (Category::MacroCrypto, true)
            }
            "other" | "oth" => (Category::Other, true),
            _ => (Category::Other, false),
        }
    }
}

/// A provider channel label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Channel {
    Twitter,
    News,
    Bluesky,
    FacebookPublic,
    Youtube,
    InstagramPublic,
    Forum,
    /// One of the configurable extra labels.
    Extra(String),
}

impl Channel {
    pub const NAMED: [Channel; 7] = [
        Channel::Twitter,
        Channel::News,
        Channel::Bluesky,
        Channel::FacebookPublic,
        Channel::Youtube,
        Channel::InstagramPublic,
        Channel::Forum,
    ];

    pub fn as_str(&self) -> &str {
        match self {
            Channel::Twitter => "twitter",
            Channel::News => "news",
            Channel::Bluesky => "bluesky",
            Channel::FacebookPublic => "facebook_public",
            Channel::Youtube => "youtube",
            Channel::InstagramPublic => "instagram_public",
            Channel::Forum => "forum",
            Channel::Extra(s) => s,
        }
    }

    /// Human label used in rendered tables.
    pub fn display_name(&self) -> String {
        match self {
            Channel::Twitter => "twitter (X)".to_string(),
            other => other.as_str().replace('_', " "),
        }
    }

    pub fn is_twitter(&self) -> bool {
        matches!(self, Channel::Twitter)
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty channel label".into()));
        }
        Ok(match s {
            "twitter" | "x" => Channel::Twitter,
            "news" => Channel::News,
            "bluesky" => Channel::Bluesky,
            "facebook_public" | "facebook" => Channel::FacebookPublic,
            "youtube" => Channel::Youtube,
            "instagram_public" | "instagram" => Channel::InstagramPublic,
            "forum" | "forums" => Channel::Forum,
            other => {
                if !other
                    .chars()
                    .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
                {
                    return Err(Error::Parse(format!("bad channel label {other:?}")));
                }
                Channel::Extra(other.to_string())
            }
        })
    }
}

impl Serialize for Channel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Channel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The active channel set for a run: the seven named channels plus the extras.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Channel>", into = "Vec<Channel>")]
pub struct ChannelSet(Vec<Channel>);

impl ChannelSet {
    pub fn new(channels: Vec<Channel>) -> Result<Self> {
        for (i, c) in channels.iter().enumerate() {
            if channels[..i].contains(c) {
                return Err(Error::Config(format!("duplicate channel {c}")));
            }
        }
        for required in [Channel::Twitter, Channel::News] {
            if !channels.contains(&required) {
                return Err(Error::Config(format!("channel set must include {required}")));
            }
        }
        Ok(ChannelSet(channels))
    }

    /// Named channels plus the given extra labels.
    pub fn with_extras(extras: &[&str]) -> Result<Self> {
        let mut v: Vec<Channel> = Channel::NAMED.to_vec();
        for e in extras {
            v.push(e.parse()?);
        }
        ChannelSet::new(v)
    }

    pub fn contains(&self, c: &Channel) -> bool {
        self.0.contains(c)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Channel> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Default for ChannelSet {
    fn default() -> Self {
        ChannelSet::with_extras(&["reddit", "blog"]).expect("default channel set is valid")
    }
}

impl TryFrom<Vec<Channel>> for ChannelSet {
    type Error = Error;
    fn try_from(v: Vec<Channel>) -> Result<Self> {
        ChannelSet::new(v)
    }
}

impl From<ChannelSet> for Vec<Channel> {
    fn from(c: ChannelSet) -> Self {
        c.0
    }
}

/// One sampled news event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub event_id: String,
    pub surface: Surface,
    pub title: String,
    pub description: String,
    pub category: Category,
    pub t_e: Timestamp,
    pub attention_prior: f64,
    /// Wikipedia article title (wcep) or market id (polymarket).
    pub source_key: String,
    /// Polymarket parent event group; absent for wcep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub event_group: Option<String>,
}

impl Event {
    pub fn validate(&self, window: &TimeWindow, volume_floor: Option<f64>) -> Result<()> {
        if !window.contains(self.t_e) {
            return Err(Error::Invariant(format!(
                "event {} t_e {} outside sampling window",
                self.event_id, self.t_e
            )));
        }
        if !(self.attention_prior >= 0.0) {
            return Err(Error::Invariant(format!(
                "event {} has negative attention prior",
                self.event_id
            )));
        }
        if self.source_key.trim().is_empty() {
            return Err(Error::Invariant(format!(
                "event {} has no source key",
                self.event_id
            )));
        }
        if let (Surface::Polymarket, Some(floor)) = (self.surface, volume_floor) {
            if self.attention_prior < floor {
                return Err(Error::Invariant(format!(
                    "event {} below volume floor",
                    self.event_id
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Verification {
    #[default]
    Unverified,
    Verified,
    Polluted,
    Ambiguous,
    /// Tweet body could not be recovered (deleted or empty oEmbed payload).
    Unverifiable,
}

/// One provider-returned item on one channel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mention {
    pub channel: Channel,
    pub guid: String,
    #[serde(default)]
    pub provider_ts: Option<Timestamp>,
    #[serde(default)]
    pub recovered_ts: Option<Timestamp>,
    #[serde(default)]
    pub title: Option<String>,
    #[serde(default)]
    pub snippet: Option<String>,
    #[serde(default)]
    pub body: Option<String>,
    #[serde(default)]
    pub url: Option<String>,
    #[serde(default)]
    pub author: Option<String>,
    #[serde(default)]
    pub verification: Verification,
}

impl Mention {
    /// The timestamp used for ordering on this mention's channel.
    pub fn ordering_ts(&self) -> Option<Timestamp> {
        if self.channel.is_twitter() {
            self.recovered_ts
        } else {
            self.provider_ts
        }
    }
}

/// Five descriptive covariate axes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub clock_edge: String,
    pub live_visible: String,
    pub institutional_source: String,
    pub geographic_scope: String,
    pub language_primary: String,
}

impl FeatureVector {
    pub const UNKNOWN: &'static str = "unknown";

    pub fn unknown() -> Self {
        let u = Self::UNKNOWN.to_string();
        FeatureVector {
            clock_edge: u.clone(),
            live_visible: u.clone(),
            institutional_source: u.clone(),
            geographic_scope: u.clone(),
            language_primary: u,
        }
    }

    pub fn axes(&self) -> [(&'static str, &str); 5] {
        [
            ("clock_edge", &self.clock_edge),
            ("live_visible", &self.live_visible),
            ("institutional_source", &self.institutional_source),
            ("geographic_scope", &self.geographic_scope),
            ("language_primary", &self.language_primary),
        ]
    }

    pub fn is_complete(&self) -> bool {
        self.axes().iter().all(|(_, v)| !v.trim().is_empty())
    }
}

/// Per-event X-vs-news latency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedDelta {
    pub event_id: String,
    pub t_news: Timestamp,
    pub t_x: Timestamp,
    pub delta_min: f64,
}

impl PairedDelta {
    pub fn new(event_id: impl Into<String>, t_news: Timestamp, t_x: Timestamp) -> Self {
        PairedDelta {
            event_id: event_id.into(),
            t_news,
            t_x,
            delta_min: delta_minutes(t_news, t_x),
        }
    }

    pub fn delta_ms(&self) -> i64 {
        self.t_news.0 - self.t_x.0
    }

    pub fn x_first(&self) -> bool {
        self.delta_ms() > 0
    }
}
