//! X publish-time recovery from snowflake ids, and tweet bodies via oEmbed.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use scraper::{Html, Selector};
use serde::{Deserialize, Serialize};

use crate::clock::Clock;
use crate::error::{Error, Result};
use crate::http;
use crate::model::Timestamp;

/// Twitter epoch, 2010-11-04T01:42:54.657Z, in Unix milliseconds.
pub const TWITTER_EPOCH_MS: u64 = 1_288_834_974_657;

/// Bits below the timestamp (worker id + sequence).
pub const TIMESTAMP_SHIFT: u32 = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SnowflakeId(pub u64);

impl SnowflakeId {
    /// Parse a guid, taking the trailing run of decimal digits
    /// (so both `"1790..."` and `".../status/1790..."` work).
    pub fn parse(guid: &str) -> Result<Self> {
        let trimmed = guid.trim().trim_end_matches(|c: char| !c.is_ascii_digit());
        let start = trimmed
            .rfind(|c: char| !c.is_ascii_digit())
            .map(|i| i + 1)
            .unwrap_or(0);
        let digits = &trimmed[start..];
        if digits.is_empty() {
            return Err(Error::Parse(format!("no snowflake digits in {guid:?}")));
        }
        digits
            .parse::<u64>()
            .map(SnowflakeId)
            .map_err(|e| Error::Parse(format!("snowflake {digits:?}: {e}")))
    }

    /// Build the id whose timestamp bits encode `t` (low bits zero).
    pub fn from_timestamp(t: Timestamp, low_bits: u64) -> Result<Self> {
        let since = t.0 - TWITTER_EPOCH_MS as i64;
        if since < 0 || since as u64 >= (1 << (64 - TIMESTAMP_SHIFT)) {
            return Err(Error::Invariant(format!("{t} not representable as a snowflake")));
        }
        Ok(SnowflakeId(
            ((since as u64) << TIMESTAMP_SHIFT) | (low_bits & ((1 << TIMESTAMP_SHIFT) - 1)),
        ))
    }
}

/// `ms = (raw >> 22) + 1_288_834_974_657`.
pub fn decode_snowflake(id: SnowflakeId) -> Timestamp {
    // (u64::MAX >> 22) + epoch stays well below i64::MAX.
    Timestamp(((id.0 >> TIMESTAMP_SHIFT) + TWITTER_EPOCH_MS) as i64)
}

/// Canonical status URL for a tweet.
pub fn status_url(author: Option<&str>, id: SnowflakeId) -> String {
    match author {
        Some(a) if !a.trim().is_empty() => {
            format!("https://twitter.com/{}/status/{}", a.trim_start_matches('@'), id.0)
        }
        _ => format!("https://twitter.com/i/status/{}", id.0),
    }
}

/// Recovered visible tweet content.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OembedBody {
    pub text: String,
    pub author: String,
    pub fetched_at: Timestamp,
}

/// Raw oEmbed response fields we use.
#[derive(Debug, Clone, Default, Deserialize, Serialize)]
pub struct OembedPayload {
    #[serde(default)]
    pub html: String,
    #[serde(default)]
    pub author_name: Option<String>,
    #[serde(default)]
    pub author_url: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OembedOutcome {
    Body(OembedBody),
    /// Deleted tweet (404) or empty payload.
    Unverifiable(String),
}

/// Extract the visible tweet text from oEmbed markup.
///
/// Only text nodes under the blockquote's paragraphs are kept; entities are decoded.
pub fn strip_tweet_html(html: &str) -> String {
    let doc = Html::parse_fragment(html);
    let p_sel = Selector::parse("blockquote p").expect("static selector");
    let mut parts: Vec<String> = doc
        .select(&p_sel)
        .map(|p| p.text().collect::<String>())
        .collect();
    if parts.is_empty() {
        // No blockquote structure: take all text outside scripts.
        let root = doc.root_element();
        parts.push(
            root.descendants()
                .filter_map(|n| {
                    let text = n.value().as_text()?;
                    let inside_script = n.ancestors().any(|a| {
                        a.value()
                            .as_element()
                            .is_some_and(|e| e.name() == "script" || e.name() == "style")
                    });
                    (!inside_script).then(|| text.to_string())
                })
                .collect(),
        );
    }
    normalize_ws(&parts.join(" "))
}

fn normalize_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Author handle from `author_url`, or the `(@handle)` in the markup.
pub fn author_handle(payload: &OembedPayload) -> String {
    if let Some(url) = &payload.author_url {
        if let Some(h) = url.trim_end_matches('/').rsplit('/').next() {
            if !h.is_empty() && !h.contains(':') {
                return h.to_string();
            }
        }
    }
    if let Some(i) = payload.html.find("(@") {
        let rest = &payload.html[i + 2..];
        if let Some(j) = rest.find(')') {
            return rest[..j].to_string();
        }
    }
    payload.author_name.clone().unwrap_or_default()
}

pub fn body_from_payload(payload: &OembedPayload, fetched_at: Timestamp) -> OembedOutcome {
    let text = strip_tweet_html(&payload.html);
    if text.is_empty() {
        return OembedOutcome::Unverifiable("empty oEmbed payload".into());
    }
    OembedOutcome::Body(OembedBody {
        text,
        author: author_handle(payload),
        fetched_at,
    })
}

/// Something that can return an oEmbed payload for a tweet.
pub trait OembedSource: Send + Sync {
    /// `Ok(None)` means the tweet is gone (404).
    fn fetch(&self, id: SnowflakeId, status_url: &str) -> Result<Option<OembedPayload>>;
}

/// Unauthenticated public endpoint.
pub struct LiveOembed {
    client: reqwest::blocking::Client,
    endpoint: String,
    attempts: u32,
}

impl LiveOembed {
    pub const ENDPOINT: &'static str = "https://publish.twitter.com/oembed";

    pub fn new() -> Result<Self> {
        Ok(LiveOembed {
            client: http::client()?,
            endpoint: Self::ENDPOINT.to_string(),
            attempts: 3,
        })
    }

    pub fn request_url(&self, status_url: &str) -> String {
        format!(
            "{}?url={}&omit_script=true&dnt=true",
            self.endpoint,
            url_encode(status_url)
        )
    }
}

impl OembedSource for LiveOembed {
    fn fetch(&self, _id: SnowflakeId, status_url: &str) -> Result<Option<OembedPayload>> {
        let url = self.request_url(status_url);
        match http::with_retries(self.attempts, 500, || http::get_text(&self.client, &url)) {
            Ok(body) => Ok(Some(serde_json::from_str(&body)?)),
            Err(Error::NotFound(_)) => Ok(None),
            // Protected or suspended accounts answer 403.
            Err(Error::Status { status: 403, .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

/// Fixture directory of `<guid>.json` payloads; a missing file is a 404.
pub struct FixtureOembed {
    dir: PathBuf,
}

impl FixtureOembed {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        FixtureOembed { dir: dir.into() }
    }
}

impl OembedSource for FixtureOembed {
    fn fetch(&self, id: SnowflakeId, _status_url: &str) -> Result<Option<OembedPayload>> {
        let path = self.dir.join(format!("{}.json", id.0));
        match fs::read_to_string(&path) {
            Ok(s) if s.trim().is_empty() => Ok(Some(OembedPayload::default())),
            Ok(s) => Ok(Some(serde_json::from_str(&s)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }
}

/// Guid-keyed cache in front of an oEmbed source, persisted as one JSON file per guid.
pub struct OembedCache<'a> {
    source: &'a dyn OembedSource,
    clock: &'a dyn Clock,
    dir: Option<PathBuf>,
    memory: Mutex<HashMap<SnowflakeId, OembedOutcome>>,
    fetches: Mutex<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum CachedOutcome {
    Body(OembedBody),
    Unverifiable { reason: String },
}

impl<'a> OembedCache<'a> {
    pub fn new(source: &'a dyn OembedSource, clock: &'a dyn Clock, dir: Option<&Path>) -> Self {
        OembedCache {
            source,
            clock,
            dir: dir.map(Path::to_path_buf),
            memory: Mutex::new(HashMap::new()),
            fetches: Mutex::new(0),
        }
    }

    /// Number of requests that actually reached the source.
    pub fn fetch_count(&self) -> u64 {
        *self.fetches.lock().expect("cache lock")
    }

    pub fn get(&self, id: SnowflakeId, status_url: &str) -> Result<OembedOutcome> {
        if let Some(hit) = self.memory.lock().expect("cache lock").get(&id) {
            return Ok(hit.clone());
        }
        if let Some(hit) = self.read_disk(id)? {
            self.memory.lock().expect("cache lock").insert(id, hit.clone());
            return Ok(hit);
        }
        *self.fetches.lock().expect("cache lock") += 1;
        let outcome = match self.source.fetch(id, status_url)? {
            Some(payload) => body_from_payload(&payload, self.clock.now()),
            None => OembedOutcome::Unverifiable("tweet not found (404)".into()),
        };
        self.write_disk(id, &outcome)?;
        self.memory
            .lock()
            .expect("cache lock")
            .insert(id, outcome.clone());
        Ok(outcome)
    }

    fn path(&self, id: SnowflakeId) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{}.json", id.0)))
    }

    fn read_disk(&self, id: SnowflakeId) -> Result<Option<OembedOutcome>> {
        let Some(path) = self.path(id) else {
            return Ok(None);
        };
        match fs::read_to_string(&path) {
            Ok(s) => Ok(Some(match serde_json::from_str::<CachedOutcome>(&s)? {
                CachedOutcome::Body(b) => OembedOutcome::Body(b),
                CachedOutcome::Unverifiable { reason } => OembedOutcome::Unverifiable(reason),
            })),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    fn write_disk(&self, id: SnowflakeId, outcome: &OembedOutcome) -> Result<()> {
        let Some(path) = self.path(id) else {
            return Ok(());
        };
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let cached = match outcome {
            OembedOutcome::Body(b) => CachedOutcome::Body(b.clone()),
            OembedOutcome::Unverifiable(r) => CachedOutcome::Unverifiable { reason: r.clone() },
        };
        fs::write(path, serde_json::to_string(&cached)?)?;
        Ok(())
    }
}

pub(crate) fn url_encode(s: &str) -> String {
    let mut out = String::with_capacity(s.len() * 3);
    for b in s.bytes() {
        match b {
            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'-' | b'_' | b'.' | b'~' => {
                out.push(b as char)
            }
            _ => out.push_str(&format!("%{b:02X}")),
        }
    }
    out
}
