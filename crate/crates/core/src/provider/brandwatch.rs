//! Live adapter for the Brandwatch Consumer Research REST API.
//!
//! Every endpoint path and payload shape lives in this file. Request building
//! and response parsing are plain functions so they can be tested offline.

use chrono::{DateTime, Utc};
use serde::Deserialize;
use serde_json::{json, Value};

use super::ListeningProvider;
use crate::drafting::BooleanQuery;
use crate::error::{Error, Result};
use crate::http;
use crate::model::{Channel, Mention, TimeWindow, Timestamp, Verification};

pub const TOKEN_ENV: &str = "NEWSRACE_BW_TOKEN";
pub const PROJECT_ENV: &str = "NEWSRACE_BW_PROJECT";
pub const BASE_URL_ENV: &str = "NEWSRACE_BW_BASE_URL";
pub const DEFAULT_BASE_URL: &str = "https://api.brandwatch.com";

pub struct Brandwatch {
    client: reqwest::blocking::Client,
    base_url: String,
    project: String,
    token: String,
}

impl Brandwatch {
    pub fn from_env() -> Result<Self> {
        let token = std::env::var(TOKEN_ENV).map_err(|_| Error::Config(format!("{TOKEN_ENV} is not set")))?;
        let project =
            std::env::var(PROJECT_ENV).map_err(|_| Error::Config(format!("{PROJECT_ENV} is not set")))?;
        let base_url = std::env::var(BASE_URL_ENV).unwrap_or_else(|_| DEFAULT_BASE_URL.to_string());
        Ok(Brandwatch {
            client: http::client()?,
            base_url: base_url.trim_end_matches('/').to_string(),
            project,
            token,
        })
    }

    fn url(&self, path: &str) -> String {
        format!("{}/projects/{}{path}", self.base_url, self.project)
    }

    fn send(&self, req: reqwest::blocking::RequestBuilder) -> Result<String> {
        let resp = req.bearer_auth(&self.token).send()?;
        let status = resp.status();
        let text = resp.text()?;
        if status.as_u16() == 404 {
            return Err(Error::NotFound(http::truncate(&text, 300)));
        }
        if !status.is_success() {
            return Err(Error::Status {
                status: status.as_u16(),
                message: provider_message(&text),
            });
        }
        Ok(text)
    }
}

pub fn create_body(q: &BooleanQuery, label: &str) -> Value {
    json!({
        "name": label,
        "type": "search string",
        "booleanQuery": q.render(),
        "languageAgnostic": true,
    })
}

/// Query string for a mentions page, sorted by date ascending.
pub fn mentions_params(query_id: &str, window: TimeWindow, channel: Option<&Channel>, page_size: usize) -> Vec<(String, String)> {
    let fmt = |t: Timestamp| t.to_datetime().format("%Y-%m-%dT%H:%M:%S%.3fZ").to_string();
    let mut p = vec![
        ("queryId".to_string(), query_id.to_string()),
        ("startDate".to_string(), fmt(window.start)),
        ("endDate".to_string(), fmt(window.end)),
        ("pageSize".to_string(), page_size.to_string()),
        ("page".to_string(), "0".to_string()),
        ("orderBy".to_string(), "date".to_string()),
        ("orderDirection".to_string(), "asc".to_string()),
    ];
    if let Some(c) = channel {
        p.push(("pageType".to_string(), page_type(c).to_string()));
    }
    p
}

pub fn page_type(c: &Channel) -> &str {
    match c {
        Channel::FacebookPublic => "facebook",
        Channel::InstagramPublic => "instagram",
        Channel::Forum => "forum",
        other => other.as_str(),
    }
}

pub fn channel_from_page_type(s: &str) -> Channel {
    s.to_ascii_lowercase()
        .replace([' ', '-'], "_")
        .parse()
        .unwrap_or_else(|_| Channel::Extra("other".into()))
}

/// Pull the human-readable message out of an error body when there is one.
pub fn provider_message(body: &str) -> String {
    serde_json::from_str::<Value>(body)
        .ok()
        .and_then(|v| {
            v.get("errors")
                .and_then(|e| e.get(0))
                .and_then(|e| e.get("message"))
                .or_else(|| v.get("message"))
                .and_then(Value::as_str)
                .map(str::to_string)
        })
        .unwrap_or_else(|| http::truncate(body, 300))
}

pub fn parse_created(body: &str) -> Result<String> {
    let v: Value = serde_json::from_str(body)?;
    match v.get("id") {
        Some(Value::Number(n)) => Ok(n.to_string()),
        Some(Value::String(s)) if !s.is_empty() => Ok(s.clone()),
        _ => Err(Error::Backend("create response has no query id".into())),
    }
}

pub fn parse_backfill(body: &str) -> Result<f64> {
    let v: Value = serde_json::from_str(body)?;
    ["backfillPercentage", "backfillPercent", "percentComplete"]
        .iter()
        .find_map(|k| v.get(*k).and_then(Value::as_f64))
        .ok_or_else(|| Error::Backend("query status has no backfill percentage".into()))
}

fn parse_date(s: &str) -> Result<Timestamp> {
    DateTime::parse_from_rfc3339(s)
        .or_else(|_| DateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S%.f%z"))
        .map(|d| Timestamp(d.with_timezone(&Utc).timestamp_millis()))
        .map_err(|e| Error::Parse(format!("mention date {s:?}: {e}")))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct RawMention {
    guid: Option<Value>,
    #[serde(default)]
    date: Option<String>,
    #[serde(default)]
    page_type: Option<String>,
    #[serde(default)]
    title: Option<String>,
    #[serde(default)]
    snippet: Option<String>,
    #[serde(default)]
    url: Option<String>,
    #[serde(default)]
    author: Option<String>,
}

pub fn parse_mentions(body: &str) -> Result<Vec<Mention>> {
    #[derive(Deserialize)]
    struct Page {
        #[serde(default)]
        results: Vec<RawMention>,
    }
    let page: Page = serde_json::from_str(body)?;
    page.results
        .into_iter()
        .map(|r| {
            let guid = match r.guid {
                Some(Value::String(s)) => s,
                Some(Value::Number(n)) => n.to_string(),
                _ => return Err(Error::Parse("mention without guid".into())),
            };
            let channel = channel_from_page_type(r.page_type.as_deref().unwrap_or("other"));
            let twitter = channel.is_twitter();
            let provider_ts = match r.date.as_deref() {
                Some(d) if !twitter => Some(parse_date(d)?),
                None if !twitter => return Err(Error::Parse(format!("mention {guid} has no date"))),
                _ => None,
            };
            Ok(Mention {
                channel,
                guid,
                provider_ts,
                recovered_ts: None,
                title: r.title.filter(|s| !s.is_empty()),
                snippet: r.snippet.filter(|s| !s.is_empty()),
                body: None,
                url: r.url,
                author: r.author,
                verification: Verification::Unverified,
            })
        })
        .collect()
}

impl ListeningProvider for Brandwatch {
    fn name(&self) -> &'static str {
        "brandwatch"
    }

    fn create_query(&self, q: &BooleanQuery, label: &str) -> Result<String> {
        let body = create_body(q, label);
        let text = http::with_retries(3, 2000, || self.send(self.client.post(self.url("/queries/")).json(&body)))?;
        parse_created(&text)
    }

    fn backfill_percent(&self, query_id: &str) -> Result<f64> {
        let text = self.send(self.client.get(self.url(&format!("/queries/{query_id}"))))?;
        parse_backfill(&text)
    }

    fn pull(&self, query_id: &str, window: TimeWindow, channel: Option<&Channel>, page_size: usize) -> Result<Vec<Mention>> {
        let params = mentions_params(query_id, window, channel, page_size);
        let text = http::with_retries(3, 2000, || {
            self.send(self.client.get(self.url("/data/mentions")).query(&params))
        })?;
        parse_mentions(&text)
    }

    fn delete_query(&self, query_id: &str) -> Result<()> {
        match self.send(self.client.delete(self.url(&format!("/queries/{query_id}")))) {
            Ok(_) | Err(Error::NotFound(_)) => Ok(()),
            Err(e) => Err(e),
        }
    }
}
