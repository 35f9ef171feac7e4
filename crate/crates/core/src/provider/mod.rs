//! Social-listening provider: saved-query lifecycle, backfill polling, paged
//! pulls, and the shared rate limiter every request goes through.

pub mod brandwatch;
pub mod limiter;
pub mod mock;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::drafting::BooleanQuery;
use crate::error::{Error, Result};
use crate::model::{Channel, Mention, TimeWindow, Timestamp, MS_PER_HOUR, MS_PER_MINUTE};

pub use limiter::{RateLimiter, RateLimiterState};

pub const DEFAULT_PAGE_SIZE: usize = 100;
pub const DEFAULT_WINDOW_PRE_MS: i64 = 30 * MS_PER_MINUTE;
pub const DEFAULT_WINDOW_POST_MS: i64 = 24 * MS_PER_HOUR;

/// Raw provider operations. One call is one request against the rate budget.
pub trait ListeningProvider: Send + Sync {
    fn name(&self) -> &'static str;
    /// Returns the provider-side query id.
    fn create_query(&self, q: &BooleanQuery, label: &str) -> Result<String>;
    fn backfill_percent(&self, query_id: &str) -> Result<f64>;
    fn pull(
        &self,
        query_id: &str,
        window: TimeWindow,
        channel: Option<&Channel>,
        page_size: usize,
    ) -> Result<Vec<Mention>>;
    /// Deleting an unknown id succeeds.
    fn delete_query(&self, query_id: &str) -> Result<()>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavedQuery {
    pub provider_query_id: String,
    pub boolean_rendered: String,
    pub created_at: Timestamp,
    pub backfill_percent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BackfillPolicy {
    pub floor_percent: f64,
    pub cap_ms: i64,
    pub poll_ms: i64,
}

impl Default for BackfillPolicy {
    fn default() -> Self {
        BackfillPolicy {
            floor_percent: 50.0,
            cap_ms: 90_000,
            poll_ms: 5_000,
        }
    }
}

impl BackfillPolicy {
    pub fn max_polls(&self) -> u64 {
        (self.cap_ms as u64).div_ceil(self.poll_ms.max(1) as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Created,
    Backfilled,
    PulledAll,
    PulledX,
    Deleted,
}

/// One event's saved query, walked strictly through
/// create → await → pull(all) → pull(twitter) → delete.
pub struct QuerySession<'a> {
    provider: &'a dyn ListeningProvider,
    limiter: &'a RateLimiter,
    query: SavedQuery,
    phase: Phase,
    requests: u64,
    pub poll_errors: Vec<String>,
}

impl<'a> QuerySession<'a> {
    pub fn create(
        provider: &'a dyn ListeningProvider,
        limiter: &'a RateLimiter,
        q: &BooleanQuery,
        label: &str,
    ) -> Result<Self> {
        let created_at = limiter.acquire();
        let id = provider.create_query(q, label)?;
        Ok(QuerySession {
            provider,
            limiter,
            query: SavedQuery {
                provider_query_id: id,
                boolean_rendered: q.render(),
                created_at,
                backfill_percent: 0.0,
            },
            phase: Phase::Created,
            requests: 1,
            poll_errors: Vec::new(),
        })
    }

    /// Re-attach to a query recorded by an earlier, interrupted run.
    pub fn resume(
        provider: &'a dyn ListeningProvider,
        limiter: &'a RateLimiter,
        query: SavedQuery,
    ) -> Self {
        QuerySession {
            provider,
            limiter,
            query,
            phase: Phase::Created,
            requests: 0,
            poll_errors: Vec::new(),
        }
    }

    pub fn query(&self) -> &SavedQuery {
        &self.query
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn requests(&self) -> u64 {
        self.requests
    }

    fn expect(&self, want: Phase, op: &str) -> Result<()> {
        if self.phase != want {
            return Err(Error::Lifecycle(format!(
                "{op} requires phase {want:?}, query {} is {:?}",
                self.query.provider_query_id, self.phase
            )));
        }
        Ok(())
    }

    /// Poll until the floor is reached or the cap elapses; returns the last
    /// observed percent. Poll errors use up time but never abort.
    pub fn await_backfill(&mut self, policy: &BackfillPolicy) -> Result<f64> {
        self.expect(Phase::Created, "await_backfill")?;
        let clock = self.limiter.clock().clone();
        let start = clock.now();
        let deadline = start.offset(policy.cap_ms);
        loop {
            if clock.now() >= deadline {
                break;
            }
            self.limiter.acquire();
            self.requests += 1;
            match self.provider.backfill_percent(&self.query.provider_query_id) {
                Ok(p) => {
                    let p = p.clamp(0.0, 100.0);
                    if p < self.query.backfill_percent {
                        warn!(
                            "backfill for {} went backwards ({} -> {p})",
                            self.query.provider_query_id, self.query.backfill_percent
                        );
                    }
                    self.query.backfill_percent = self.query.backfill_percent.max(p);
                    if self.query.backfill_percent >= policy.floor_percent {
                        break;
                    }
                }
                Err(e) => self.poll_errors.push(e.to_string()),
            }
            let next = clock.now().offset(policy.poll_ms).min(deadline);
            clock.sleep_until(next);
        }
        self.phase = Phase::Backfilled;
        Ok(self.query.backfill_percent)
    }

    fn pull(&mut self, window: TimeWindow, channel: Option<&Channel>, page_size: usize) -> Result<Vec<Mention>> {
        self.limiter.acquire();
        self.requests += 1;
        let mut got = self
            .provider
            .pull(&self.query.provider_query_id, window, channel, page_size)?;
        got.retain(|m| channel.is_none_or(|c| &m.channel == c));
        // Redacted X mentions carry no timestamp yet; the provider's ordering stands.
        got.retain(|m| m.ordering_ts().is_none_or(|t| window.contains(t)));
        got.truncate(page_size);
        Ok(got)
    }

    pub fn pull_all(&mut self, window: TimeWindow, page_size: usize) -> Result<Vec<Mention>> {
        self.expect(Phase::Backfilled, "pull_all")?;
        let out = self.pull(window, None, page_size)?;
        self.phase = Phase::PulledAll;
        Ok(out)
    }

    pub fn pull_x(&mut self, window: TimeWindow, page_size: usize) -> Result<Vec<Mention>> {
        self.expect(Phase::PulledAll, "pull_x")?;
        let out = self.pull(window, Some(&Channel::Twitter), page_size)?;
        self.phase = Phase::PulledX;
        Ok(out)
    }

    pub fn delete(&mut self) -> Result<()> {
        if self.phase == Phase::Deleted {
            return Ok(());
        }
        self.expect(Phase::PulledX, "delete")?;
        self.delete_now()
    }

    /// Delete from any phase, used when the lifecycle fails part way.
    pub fn abandon(&mut self) -> Result<()> {
        if self.phase == Phase::Deleted {
            return Ok(());
        }
        self.delete_now()
    }

    fn delete_now(&mut self) -> Result<()> {
        self.limiter.acquire();
        self.requests += 1;
        self.provider.delete_query(&self.query.provider_query_id)?;
        self.phase = Phase::Deleted;
        Ok(())
    }
}

/// Upper bound on provider requests per event and the wall time those
/// requests need under the limiter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetProjection {
    pub events: u64,
    pub requests_per_event: u64,
    pub total_requests: u64,
    pub seconds: u64,
}

impl BudgetProjection {
    pub fn hours(&self) -> f64 {
        self.seconds as f64 / 3600.0
    }
}

/// Minimum wall time to issue `requests` under `cap` per `window_ms`,
/// starting from an empty window: grant k (0-based) lands at floor(k/cap)·window.
pub fn limiter_seconds(requests: u64, cap: usize, window_ms: i64) -> u64 {
    if requests == 0 {
        return 0;
    }
    (requests - 1) / cap as u64 * (window_ms as u64 / 1000)
}

pub fn project_budget(events: u64, policy: &BackfillPolicy, cap: usize, window_ms: i64) -> BudgetProjection {
    // create + polls + pull(all) + pull(twitter) + delete
    let per_event = 1 + policy.max_polls() + 2 + 1;
    let total = per_event * events;
    BudgetProjection {
        events,
        requests_per_event: per_event,
        total_requests: total,
        seconds: limiter_seconds(total, cap, window_ms),
    }
}

#[cfg(test)]
mod tests {
    use super::mock::{BackfillScript, MockProvider};
    use super::*;
    use crate::clock::{Clock, VirtualClock};
    use crate::drafting::QueryKind;
    use std::sync::Arc;

    fn q() -> BooleanQuery {
        BooleanQuery::new(QueryKind::XPermissive, vec![vec!["Lakers".into()]]).unwrap()
    }

    fn setup(script: BackfillScript) -> (Arc<VirtualClock>, MockProvider, RateLimiter) {
        let clock = Arc::new(VirtualClock::new(Timestamp(0)));
        let provider = MockProvider::new(Vec::new(), clock.clone()).with_backfill(script);
        let limiter = RateLimiter::new(RateLimiterState::default(), clock.clone());
        (clock, provider, limiter)
    }

    #[test]
    fn immediate_backfill_needs_one_poll() {
        let (clock, p, lim) = setup(BackfillScript::Immediate);
        let mut s = QuerySession::create(&p, &lim, &q(), "e").unwrap();
        assert_eq!(s.await_backfill(&BackfillPolicy::default()).unwrap(), 100.0);
        assert_eq!(s.requests(), 2);
        assert_eq!(clock.now(), Timestamp(0));
    }

    #[test]
    fn stuck_backfill_returns_at_cap() {
        let (clock, p, lim) = setup(BackfillScript::Stuck(30.0));
        let mut s = QuerySession::create(&p, &lim, &q(), "e").unwrap();
        assert_eq!(s.await_backfill(&BackfillPolicy::default()).unwrap(), 30.0);
        assert_eq!(clock.now(), Timestamp(90_000));
        assert_eq!(s.requests(), 1 + 18);
    }

    #[test]
    fn ramp_reaches_floor_early() {
        let (clock, p, lim) = setup(BackfillScript::Ramp { to: 60.0, over_ms: 40_000 });
        let mut s = QuerySession::create(&p, &lim, &q(), "e").unwrap();
        let pct = s.await_backfill(&BackfillPolicy::default()).unwrap();
        assert!(pct >= 50.0);
        assert!(clock.now() < Timestamp(90_000));
    }

    #[test]
    fn lifecycle_order_is_enforced() {
        let (_, p, lim) = setup(BackfillScript::Immediate);
        let w = TimeWindow::around(Timestamp(0), 1, 1);
        let mut s = QuerySession::create(&p, &lim, &q(), "e").unwrap();
        assert!(matches!(s.pull_all(w, 100), Err(Error::Lifecycle(_))));
        assert!(matches!(s.delete(), Err(Error::Lifecycle(_))));
        s.await_backfill(&BackfillPolicy::default()).unwrap();
        assert!(matches!(s.pull_x(w, 100), Err(Error::Lifecycle(_))));
        s.pull_all(w, 100).unwrap();
        assert!(matches!(s.delete(), Err(Error::Lifecycle(_))));
        s.pull_x(w, 100).unwrap();
        s.delete().unwrap();
        s.delete().unwrap();
        assert_eq!(s.phase(), Phase::Deleted);
        assert_eq!(s.requests(), 5);
        assert!(p.live_queries().is_empty());
    }

    #[test]
    fn abandon_cleans_up_from_any_phase() {
        let (_, p, lim) = setup(BackfillScript::Immediate);
        let mut s = QuerySession::create(&p, &lim, &q(), "e").unwrap();
        s.abandon().unwrap();
        assert!(p.live_queries().is_empty());
    }

    #[test]
    fn budget_for_live_sample() {
        let b = project_budget(109, &BackfillPolicy::default(), 28, 600_000);
        assert_eq!(b.requests_per_event, 22);
        assert_eq!(b.total_requests, 2398);
        assert_eq!(b.seconds, 85 * 600);
        assert!(b.hours() >= 5.0);
        assert_eq!(limiter_seconds(28, 28, 600_000), 0);
        assert_eq!(limiter_seconds(29, 28, 600_000), 600);
    }
}
