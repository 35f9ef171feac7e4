//! On-topic verification: two distinct keyword matches on X (tweet body), one
//! match elsewhere (title + snippet), and fallback to the next-earliest mention
//! on the same channel when a candidate is polluted.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::drafting::{BooleanQuery, ModelBackend};
use crate::model::{Channel, Event, Mention, Timestamp, Verification};
use crate::text;

pub const X_THRESHOLD: usize = 2;
pub const OTHER_THRESHOLD: usize = 1;

/// Normalized, deduplicated terms from the union of an event's booleans.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeywordSet {
    terms: Vec<String>,
}

impl KeywordSet {
    pub fn new<'a>(terms: impl IntoIterator<Item = &'a str>) -> Self {
        let mut out: Vec<String> = Vec::new();
        for t in terms {
            let n = text::normalize(t);
            if !n.is_empty() && !out.contains(&n) {
                out.push(n);
            }
        }
        KeywordSet { terms: out }
    }

    pub fn from_queries(news: &BooleanQuery, x: &BooleanQuery) -> Self {
        KeywordSet::new(news.terms().chain(x.terms()))
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, term: &str) -> bool {
        let n = text::normalize(term);
        self.terms.contains(&n)
    }

    /// Distinct terms found in the tokenized text.
    pub fn matches(&self, hay: &[String]) -> Vec<String> {
        self.terms
            .iter()
            .filter(|t| text::contains_term(hay, t))
            .cloned()
            .collect()
    }

    pub fn count_in(&self, s: &str) -> usize {
        self.matches(&text::tokens(s)).len()
    }
}

/// Audit record for one adjudicated single-match tweet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Adjudication {
    pub event_id: String,
    pub guid: String,
    pub matched: Vec<String>,
    pub backend: String,
    pub on_topic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Verify one X mention against its recovered body.
///
/// Returns the status and, when the single-match tier was reached, the adjudication.
pub fn verify_x(
    m: &Mention,
    event: &Event,
    k: &KeywordSet,
    adjudicator: &dyn ModelBackend,
) -> (Verification, Option<Adjudication>) {
    let Some(body) = m.body.as_deref().filter(|b| !b.trim().is_empty()) else {
        return (Verification::Unverifiable, None);
    };
    let matched = k.matches(&text::tokens(body));
    match matched.len() {
        0 => (Verification::Polluted, None),
        n if n >= X_THRESHOLD => (Verification::Verified, None),
        _ => {
            let (on_topic, error) = match adjudicator.adjudicate(event, k, body) {
                Ok(v) => (v, None),
                Err(e) => (false, Some(e.to_string())),
            };
            let status = if on_topic {
                Verification::Verified
            } else {
                Verification::Polluted
            };
            (
                status,
                Some(Adjudication {
                    event_id: event.event_id.clone(),
                    guid: m.guid.clone(),
                    matched,
                    backend: adjudicator.name().to_string(),
                    on_topic,
                    error,
                }),
            )
        }
    }
}

/// Verify a non-X mention on its title plus snippet.
pub fn verify_other(m: &Mention, k: &KeywordSet) -> Verification {
    let title = m.title.as_deref().unwrap_or("");
    let snippet = m.snippet.as_deref().unwrap_or("");
    if title.trim().is_empty() && snippet.trim().is_empty() {
        return Verification::Polluted;
    }
    if k.count_in(&format!("{title} {snippet}")) >= OTHER_THRESHOLD {
        Verification::Verified
    } else {
        Verification::Polluted
    }
}

/// Earliest verified mention on one channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelEarliest {
    pub event_id: String,
    pub channel: Channel,
    pub mention: Mention,
    pub fallback_depth: usize,
}

impl ChannelEarliest {
    pub fn ts(&self) -> Timestamp {
        self.mention
            .ordering_ts()
            .expect("verified mentions carry an ordering timestamp")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Ignore mentions timestamped before the event time.
    pub clamp_pre_event: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EventVerification {
    pub earliest: Vec<ChannelEarliest>,
    /// Every mention that was examined, with its status set.
    pub examined: Vec<Mention>,
    pub adjudications: Vec<Adjudication>,
}

/// Walk each channel in time order and keep the first verified mention.
/// Channels without one are absent from the result.
pub fn earliest_verified(
    event: &Event,
    mentions: &[Mention],
    k: &KeywordSet,
    adjudicator: &dyn ModelBackend,
    opts: &VerifyOptions,
) -> EventVerification {
    let mut by_channel: BTreeMap<Channel, Vec<&Mention>> = BTreeMap::new();
    for m in mentions {
        if m.ordering_ts().is_some() {
            by_channel.entry(m.channel.clone()).or_default().push(m);
        }
    }
    let mut out = EventVerification::default();
    for (channel, mut list) in by_channel {
        list.sort_by(|a, b| (a.ordering_ts(), &a.guid).cmp(&(b.ordering_ts(), &b.guid)));
        let mut depth = 0;
        for m in list {
            let ts = m.ordering_ts().expect("filtered above");
            if opts.clamp_pre_event && ts < event.t_e {
                continue;
            }
            let mut checked = m.clone();
            checked.verification = if channel.is_twitter() {
                let (v, adj) = verify_x(m, event, k, adjudicator);
                out.adjudications.extend(adj);
                v
            } else {
                verify_other(m, k)
            };
            out.examined.push(checked.clone());
            if checked.verification == Verification::Verified {
                out.earliest.push(ChannelEarliest {
                    event_id: event.event_id.clone(),
                    channel: channel.clone(),
                    mention: checked,
                    fallback_depth: depth,
                });
                break;
            }
            depth += 1;
        }
    }
    out
}
