//! Minimal blocking HTTP plumbing shared by the live clients.

use std::time::Duration;

use log::warn;

use crate::error::{Error, Result};

pub const USER_AGENT: &str = concat!(
    env!("CARGO_PKG_NAME"),
    "/",
    env!("CARGO_PKG_VERSION"),
    " (news latency research pipeline)"
);

pub fn client() -> Result<reqwest::blocking::Client> {
    reqwest::blocking::Client::builder()
        .user_agent(USER_AGENT)
        .timeout(Duration::from_secs(30))
        .build()
        .map_err(Error::from)
}

/// GET returning the body on 2xx, `Error::NotFound` on 404 and `Error::Status` otherwise.
pub fn get_text(client: &reqwest::blocking::Client, url: &str) -> Result<String> {
    let resp = client.get(url).send()?;
    let status = resp.status();
    let body = resp.text()?;
    if status.as_u16() == 404 {
        return Err(Error::NotFound(url.to_string()));
    }
    if !status.is_success() {
        return Err(Error::Status {
            status: status.as_u16(),
            message: truncate(&body, 300),
        });
    }
    Ok(body)
}

/// Run `op` up to `attempts` times, retrying only transient failures.
pub fn with_retries<T>(attempts: u32, backoff_ms: u64, mut op: impl FnMut() -> Result<T>) -> Result<T> {
    let mut last = None;
    for attempt in 0..attempts.max(1) {
        match op() {
            Ok(v) => return Ok(v),
            Err(e) if e.is_transient() => {
                warn!("transient failure (attempt {}): {e}", attempt + 1);
                last = Some(e);
                if backoff_ms > 0 {
                    std::thread::sleep(Duration::from_millis(backoff_ms << attempt));
                }
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::Http("no attempts made".into())))
}

pub fn truncate(s: &str, max: usize) -> String {
    if s.len() <= max {
        return s.to_string();
    }
    let mut end = max;
    while !s.is_char_boundary(end) {
        end -= 1;
    }
    format!("{}…", &s[..end])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn retries_only_transient() {
        let mut calls = 0;
        let r: Result<()> = with_retries(3, 0, || {
            calls += 1;
            Err(Error::Status { status: 503, message: String::new() })
        });
        assert!(r.is_err());
        assert_eq!(calls, 3);

        let mut calls = 0;
        let r: Result<()> = with_retries(3, 0, || {
            calls += 1;
            Err(Error::Status { status: 400, message: String::new() })
        });
        assert!(r.is_err());
        assert_eq!(calls, 1);
    }

    #[test]
    fn truncate_respects_char_boundary() {
        assert_eq!(truncate("héllo", 2), "h…");
        assert_eq!(truncate("abc", 10), "abc");
    }
}
