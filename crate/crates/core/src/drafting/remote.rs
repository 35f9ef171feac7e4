//! Chat-completion backend (OpenAI-compatible `/chat/completions`).
//!
//! The API key is read from the environment only. Prompts are versioned text
//! assets under `prompts/`.

use serde::Deserialize;
use serde_json::{json, Value};

use super::{BooleanQuery, DraftPair, ModelBackend, QueryKind};
use crate::error::{Error, Result};
use crate::http;
use crate::model::{Event, FeatureVector};
use crate::verify::KeywordSet;

pub const PROMPT_VERSION: &str = "v1";
const FEATURES_PROMPT: &str = include_str!("../../prompts/features.v1.txt");
const BOOLEANS_PROMPT: &str = include_str!("../../prompts/booleans.v1.txt");
const SPECIFICITY_PROMPT: &str = include_str!("../../prompts/specificity.v1.txt");
const ADJUDICATE_PROMPT: &str = include_str!("../../prompts/adjudicate.v1.txt");

pub const API_KEY_ENV: &str = "NEWSRACE_LLM_API_KEY";
pub const BASE_URL_ENV: &str = "NEWSRACE_LLM_BASE_URL";
pub const MODEL_ENV: &str = "NEWSRACE_LLM_MODEL";

pub struct RemoteBackend {
    client: reqwest::blocking::Client,
    base_url: String,
    model: String,
    api_key: String,
}

impl RemoteBackend {
    pub fn from_env() -> Result<Self> {
        let api_key = std::env::var(API_KEY_ENV)
            .map_err(|_| Error::Config(format!("{API_KEY_ENV} is not set")))?;
        let base_url = std::env::var(BASE_URL_ENV)
            .unwrap_or_else(|_| "https://api.openai.com/v1".to_string());
        let model = std::env::var(MODEL_ENV).unwrap_or_else(|_| "gpt-4o-mini".to_string());
        Ok(RemoteBackend {
            client: http::client()?,
            base_url: base_url.trim_end_matches('/').to_string(),
            model,
            api_key,
        })
    }

    fn complete(&self, system: &str, user: String) -> Result<Value> {
        let body = request_body(&self.model, system, &user);
        let url = format!("{}/chat/completions", self.base_url);
        let text = http::with_retries(3, 1000, || {
            let resp = self
                .client
                .post(&url)
                .bearer_auth(&self.api_key)
                .json(&body)
                .send()?;
            let status = resp.status();
            let text = resp.text()?;
            if !status.is_success() {
                return Err(Error::Status {
                    status: status.as_u16(),
                    message: http::truncate(&text, 300),
                });
            }
            Ok(text)
        })?;
        parse_completion(&text)
    }
}

pub fn request_body(model: &str, system: &str, user: &str) -> Value {
    json!({
        "model": model,
        "temperature": 0,
        "response_format": {"type": "json_object"},
        "messages": [
            {"role": "system", "content": system},
            {"role": "user", "content": user},
        ],
    })
}

/// Pull the assistant message out of a completion response and parse it as JSON.
pub fn parse_completion(raw: &str) -> Result<Value> {
    #[derive(Deserialize)]
    struct Completion {
        choices: Vec<Choice>,
    }
    #[derive(Deserialize)]
    struct Choice {
        message: Message,
    }
    #[derive(Deserialize)]
    struct Message {
        content: String,
    }
    let c: Completion = serde_json::from_str(raw)?;
    let content = c
        .choices
        .into_iter()
        .next()
        .ok_or_else(|| Error::Backend("completion has no choices".into()))?
        .message
        .content;
    let trimmed = content
        .trim()
        .trim_start_matches("```json")
        .trim_start_matches("```")
        .trim_end_matches("```")
        .trim();
    serde_json::from_str(trimmed).map_err(|e| Error::Backend(format!("non-JSON reply: {e}")))
}

fn event_payload(event: &Event) -> String {
    json!({
        "surface": event.surface.as_str(),
        "title": event.title,
        "description": event.description,
        "category": event.category,
        "event_time": event.t_e.to_string(),
    })
    .to_string()
}

fn clusters(v: &Value, key: &str) -> Result<Vec<Vec<String>>> {
    let arr = v
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Backend(format!("missing {key:?} clusters")))?;
    arr.iter()
        .map(|c| {
            c.as_array()
                .ok_or_else(|| Error::Backend(format!("{key:?} cluster is not a list")))?
                .iter()
                .map(|t| {
                    t.as_str()
                        .map(|s| s.trim_matches('"').to_string())
                        .ok_or_else(|| Error::Backend(format!("{key:?} term is not a string")))
                })
                .collect()
        })
        .collect()
}

pub fn parse_draft(v: &Value) -> Result<DraftPair> {
    Ok(DraftPair {
        news: BooleanQuery::new(QueryKind::NewsTight, clusters(v, "news")?)?,
        x: BooleanQuery::new(QueryKind::XPermissive, clusters(v, "x")?)?,
    })
}

pub fn parse_features(v: &Value) -> Result<FeatureVector> {
    let get = |k: &str| -> String {
        v.get(k)
            .and_then(Value::as_str)
            .filter(|s| !s.trim().is_empty())
            .unwrap_or(FeatureVector::UNKNOWN)
            .to_string()
    };
    Ok(FeatureVector {
        clock_edge: get("clock_edge"),
        live_visible: get("live_visible"),
        institutional_source: get("institutional_source"),
        geographic_scope: get("geographic_scope"),
        language_primary: get("language_primary"),
    })
}

impl ModelBackend for RemoteBackend {
    fn name(&self) -> &'static str {
        "remote"
    }

    fn extract_features(&self, event: &Event) -> Result<FeatureVector> {
        parse_features(&self.complete(FEATURES_PROMPT, event_payload(event))?)
    }

    fn draft_booleans(&self, event: &Event, attempt: u32) -> Result<DraftPair> {
        let mut user = event_payload(event);
        if attempt > 0 {
            user.push_str("\nThe previous draft was rejected as too broad. Use more specific named anchors.");
        }
        parse_draft(&self.complete(BOOLEANS_PROMPT, user)?)
    }

    fn specificity(&self, q: &BooleanQuery) -> Result<f64> {
        let v = self.complete(SPECIFICITY_PROMPT, json!({"query": q.render()}).to_string())?;
        v.get("score")
            .and_then(Value::as_f64)
            .ok_or_else(|| Error::Backend("missing score".into()))
    }

    fn adjudicate(&self, event: &Event, keywords: &KeywordSet, body: &str) -> Result<bool> {
        let user = json!({
            "event": serde_json::from_str::<Value>(&event_payload(event))?,
            "keywords": keywords.terms(),
            "post": body,
        })
        .to_string();
        self.complete(ADJUDICATE_PROMPT, user)?
            .get("on_topic")
            .and_then(Value::as_bool)
            .ok_or_else(|| Error::Backend("missing on_topic".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn completion(content: &str) -> String {
        json!({"choices": [{"message": {"role": "assistant", "content": content}}]}).to_string()
    }

    #[test]
    fn parses_fenced_json_reply() {
        let raw = completion("```json\n{\"news\": [[\"A\"],[\"B\"],[\"C\"]], \"x\": [[\"A\",\"B\"]]}\n```");
        let d = parse_draft(&parse_completion(&raw).unwrap()).unwrap();
        assert_eq!(d.news.clusters.len(), 3);
        assert_eq!(d.x.clusters, vec![vec!["A".to_string(), "B".to_string()]]);
    }

    #[test]
    fn malformed_structures_are_errors() {
        for content in [
            "not json",
            r#"{"news": [["A"]], "x": [["A"]]}"#,
            r#"{"news": [["A"],["B"],["C"]], "x": []}"#,
            r#"{"news": [["A"],["B"],["C"]], "x": [[1]]}"#,
        ] {
            let parsed = parse_completion(&completion(content)).and_then(|v| parse_draft(&v));
            assert!(parsed.is_err(), "{content}");
        }
        assert!(parse_completion(r#"{"choices": []}"#).is_err());
    }

    #[test]
    fn features_fill_unknown() {
        let f = parse_features(&json!({"clock_edge": "scheduled", "live_visible": ""})).unwrap();
        assert_eq!(f.clock_edge, "scheduled");
        assert_eq!(f.live_visible, "unknown");
        assert!(f.is_complete());
    }

    #[test]
    fn request_body_shape() {
        let b = request_body("m", "sys", "usr");
        assert_eq!(b["messages"][0]["content"], "sys");
        assert_eq!(b["response_format"]["type"], "json_object");
    }
}
