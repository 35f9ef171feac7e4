//! Fixture-backed provider. Output is a pure function of (documents, query, window).

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ListeningProvider;
use crate::clock::Clock;
use crate::drafting::BooleanQuery;
use crate::error::{Error, Result};
use crate::model::{Channel, Mention, TimeWindow, Timestamp, Verification};

/// One indexed document. `indexed_extra` is text the index matched on but
/// that never surfaces in the returned mention (expanded links, alt text).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureDoc {
    pub guid: String,
    pub channel: Channel,
    pub ts: Timestamp,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snippet: Option<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub text: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub indexed_extra: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub author: Option<String>,
}

impl FixtureDoc {
    fn haystack(&self) -> String {
        let mut s = String::new();
        for part in [
            self.title.as_deref().unwrap_or(""),
            self.snippet.as_deref().unwrap_or(""),
            &self.text,
            &self.indexed_extra,
        ] {
            s.push_str(part);
            s.push('\n');
        }
        s.to_lowercase()
    }

    /// The mention as the provider returns it. X items are redacted down to
    /// guid, url and author; their time and body come from recovery.
    pub fn to_mention(&self) -> Mention {
        let twitter = self.channel.is_twitter();
        Mention {
            channel: self.channel.clone(),
            guid: self.guid.clone(),
            provider_ts: (!twitter).then_some(self.ts),
            recovered_ts: None,
            title: if twitter { None } else { self.title.clone() },
            snippet: if twitter { None } else { self.snippet.clone() },
            body: None,
            url: self.url.clone(),
            author: self.author.clone(),
            verification: Verification::Unverified,
        }
    }
}

pub fn load_docs(path: &Path) -> Result<Vec<FixtureDoc>> {
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

pub fn write_docs(path: &Path, docs: &[FixtureDoc]) -> Result<()> {
    let mut s = String::new();
    for d in docs {
        s.push_str(&serde_json::to_string(d)?);
        s.push('\n');
    }
    fs::write(path, s)?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BackfillScript {
    Immediate,
    Stuck(f64),
    /// Linear from 0 to `to` percent over `over_ms` after creation.
    Ramp { to: f64, over_ms: i64 },
}

impl BackfillScript {
    fn percent(&self, elapsed_ms: i64) -> f64 {
        match *self {
            BackfillScript::Immediate => 100.0,
            BackfillScript::Stuck(p) => p,
            BackfillScript::Ramp { to, over_ms } => {
                to * (elapsed_ms.max(0) as f64 / over_ms.max(1) as f64).min(1.0)
            }
        }
    }
}

struct Indexed {
    doc: FixtureDoc,
    hay: String,
}

pub struct MockProvider {
    docs: Vec<Indexed>,
    clock: Arc<dyn Clock>,
    backfill: BackfillScript,
    reject_terms: Vec<String>,
    registry: Mutex<BTreeMap<String, (BooleanQuery, Timestamp)>>,
}

impl MockProvider {
    pub fn new(docs: Vec<FixtureDoc>, clock: Arc<dyn Clock>) -> Self {
        let mut docs: Vec<Indexed> = docs
            .into_iter()
            .map(|doc| Indexed { hay: doc.haystack(), doc })
            .collect();
        docs.sort_by(|a, b| (a.doc.ts, &a.doc.guid).cmp(&(b.doc.ts, &b.doc.guid)));
        MockProvider {
            docs,
            clock,
            backfill: BackfillScript::Immediate,
            reject_terms: Vec::new(),
            registry: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn from_file(path: &Path, clock: Arc<dyn Clock>) -> Result<Self> {
        Ok(MockProvider::new(load_docs(path)?, clock))
    }

    pub fn with_backfill(mut self, script: BackfillScript) -> Self {
        self.backfill = script;
        self
    }

    /// Make create_query fail with a 400 for any query containing `term`.
    pub fn rejecting(mut self, term: &str) -> Self {
        self.reject_terms.push(term.to_lowercase());
        self
    }

    pub fn query_id(q: &BooleanQuery) -> String {
        let digest = Sha256::digest(q.render().as_bytes());
        format!("mock-{}", &hex::encode(digest)[..16])
    }

    pub fn live_queries(&self) -> Vec<String> {
        self.registry.lock().expect("mock registry").keys().cloned().collect()
    }

    pub fn doc_count(&self) -> usize {
        self.docs.len()
    }

    /// Every matching document in the window, ignoring paging.
    pub fn matching(&self, q: &BooleanQuery, window: TimeWindow, channel: Option<&Channel>) -> Vec<&FixtureDoc> {
        self.docs
            .iter()
            .filter(|d| window.contains(d.doc.ts))
            .filter(|d| channel.is_none_or(|c| &d.doc.channel == c))
            .filter(|d| q.matches_lowercase(&d.hay))
            .map(|d| &d.doc)
            .collect()
    }
}

impl ListeningProvider for MockProvider {
    fn name(&self) -> &'static str {
        "mock"
    }

    fn create_query(&self, q: &BooleanQuery, _label: &str) -> Result<String> {
        let rendered = q.render().to_lowercase();
        if let Some(t) = self.reject_terms.iter().find(|t| rendered.contains(t.as_str())) {
            return Err(Error::Status {
                status: 400,
                message: format!("query rejected: unsupported term {t:?}"),
            });
        }
        let id = MockProvider::query_id(q);
        let now = self.clock.now();
        self.registry
            .lock()
            .expect("mock registry")
            .entry(id.clone())
            .or_insert((q.clone(), now));
        Ok(id)
    }

    fn backfill_percent(&self, query_id: &str) -> Result<f64> {
        let reg = self.registry.lock().expect("mock registry");
        let (_, created) = reg
            .get(query_id)
            .ok_or_else(|| Error::NotFound(format!("query {query_id}")))?;
        Ok(self.backfill.percent(self.clock.now().0 - created.0))
    }

    fn pull(
        &self,
        query_id: &str,
        window: TimeWindow,
        channel: Option<&Channel>,
        page_size: usize,
    ) -> Result<Vec<Mention>> {
        let q = {
            let reg = self.registry.lock().expect("mock registry");
            reg.get(query_id)
                .ok_or_else(|| Error::NotFound(format!("query {query_id}")))?
                .0
                .clone()
        };
        Ok(self
            .matching(&q, window, channel)
            .into_iter()
            .take(page_size)
            .map(FixtureDoc::to_mention)
            .collect())
    }

    fn delete_query(&self, query_id: &str) -> Result<()> {
        self.registry.lock().expect("mock registry").remove(query_id);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clock::VirtualClock;
    use crate::drafting::QueryKind;

    fn doc(guid: &str, channel: Channel, ts: i64, text: &str) -> FixtureDoc {
        FixtureDoc {
            guid: guid.into(),
            channel,
            ts: Timestamp(ts),
            title: Some(text.into()),
            snippet: None,
            text: String::new(),
            indexed_extra: String::new(),
            url: None,
            author: None,
        }
    }

    fn provider(docs: Vec<FixtureDoc>) -> MockProvider {
        MockProvider::new(docs, Arc::new(VirtualClock::new(Timestamp(0))))
    }

    fn q(term: &str) -> BooleanQuery {
        BooleanQuery::new(QueryKind::XPermissive, vec![vec![term.into()]]).unwrap()
    }

    #[test]
    fn page_cap_keeps_the_earliest() {
        let docs: Vec<_> = (0..150).rev().map(|i| doc(&format!("d{i:03}"), Channel::News, i, "polio")).collect();
        let p = provider(docs);
        let id = p.create_query(&q("polio"), "e").unwrap();
        let w = TimeWindow::new(Timestamp(0), Timestamp(1000)).unwrap();
        let got = p.pull(&id, w, None, 100).unwrap();
        assert_eq!(got.len(), 100);
        assert_eq!(got[0].guid, "d000");
        assert_eq!(got[99].guid, "d099");
    }

    #[test]
    fn window_edges() {
        let t_e = 10_000_000;
        let pre = 30 * 60_000;
        let post = 24 * 3_600_000;
        let p = provider(vec![
            doc("edge-start", Channel::News, t_e - pre, "polio"),
            doc("before", Channel::News, t_e - pre - 1, "polio"),
            doc("edge-end", Channel::News, t_e + post, "polio"),
            doc("after", Channel::News, t_e + post + 1, "polio"),
        ]);
        let id = p.create_query(&q("polio"), "e").unwrap();
        let got = p.pull(&id, TimeWindow::around(Timestamp(t_e), pre, post), None, 100).unwrap();
        let guids: Vec<_> = got.iter().map(|m| m.guid.as_str()).collect();
        assert_eq!(guids, ["edge-start", "edge-end"]);
    }

    #[test]
    fn twitter_filter_and_redaction() {
        let p = provider(vec![
            doc("1790000000000000000", Channel::Twitter, 5, "polio drive"),
            doc("n1", Channel::News, 6, "polio drive"),
        ]);
        let id = p.create_query(&q("polio"), "e").unwrap();
        let w = TimeWindow::new(Timestamp(0), Timestamp(10)).unwrap();
        let got = p.pull(&id, w, Some(&Channel::Twitter), 100).unwrap();
        assert_eq!(got.len(), 1);
        assert!(got[0].provider_ts.is_none() && got[0].title.is_none() && got[0].body.is_none());
        assert_eq!(p.pull(&id, w, None, 100).unwrap().len(), 2);
    }

    #[test]
    fn ids_are_deterministic_and_delete_is_idempotent() {
        let p = provider(vec![]);
        let a = p.create_query(&q("polio"), "e").unwrap();
        assert_eq!(a, p.create_query(&q("polio"), "other").unwrap());
        assert_eq!(a, MockProvider::query_id(&q("polio")));
        assert_ne!(a, MockProvider::query_id(&q("measles")));
        p.delete_query(&a).unwrap();
        p.delete_query(&a).unwrap();
        assert!(p.live_queries().is_empty());
        assert!(p.pull(&a, TimeWindow::new(Timestamp(0), Timestamp(1)).unwrap(), None, 1).is_err());
    }

    #[test]
    fn zero_hits_is_empty() {
        let p = provider(vec![doc("n", Channel::News, 1, "unrelated")]);
        let id = p.create_query(&q("polio"), "e").unwrap();
        assert!(p.pull(&id, TimeWindow::new(Timestamp(0), Timestamp(9)).unwrap(), None, 100).unwrap().is_empty());
    }

    #[test]
    fn rejected_terms_fail_create() {
        let p = provider(vec![]).rejecting("bad");
        assert!(matches!(p.create_query(&q("Bad"), "e"), Err(Error::Status { status: 400, .. })));
    }

    #[test]
    fn jsonl_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("docs.jsonl");
        let docs = vec![doc("a", Channel::News, 1, "x"), doc("b", Channel::Extra("reddit".into()), 2, "y")];
        write_docs(&path, &docs).unwrap();
        assert_eq!(load_docs(&path).unwrap(), docs);
    }
}
