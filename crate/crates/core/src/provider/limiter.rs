//! Sliding-window rate limiter: at most `cap` grants in any rolling `window_ms`.

use std::collections::VecDeque;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::clock::Clock;
use crate::model::Timestamp;

pub const DEFAULT_WINDOW_MS: i64 = 600_000;
pub const DEFAULT_CAP: usize = 28;

/// Limiter state. Grants are FIFO: a later request is never granted before an earlier one.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateLimiterState {
    pub window_ms: i64,
    pub cap: usize,
    recent: VecDeque<Timestamp>,
    total: u64,
}

impl RateLimiterState {
    pub fn new(window_ms: i64, cap: usize) -> Self {
        assert!(window_ms > 0 && cap > 0, "limiter parameters must be positive");
        RateLimiterState {
            window_ms,
            cap,
            recent: VecDeque::with_capacity(cap + 1),
            total: 0,
        }
    }

    /// Earliest instant `>= now` at which a grant keeps the window invariant.
    /// Records the grant.
    pub fn acquire(&mut self, now: Timestamp) -> Timestamp {
        let mut grant = now;
        if let Some(&last) = self.recent.back() {
            grant = grant.max(last);
        }
        if self.recent.len() >= self.cap {
            // The cap-th most recent grant must leave the window first.
            let blocker = self.recent[self.recent.len() - self.cap];
            grant = grant.max(blocker.offset(self.window_ms));
        }
        // Anything at or before grant - window no longer counts.
        while self
            .recent
            .front()
            .is_some_and(|&s| grant.0 - s.0 >= self.window_ms)
        {
            self.recent.pop_front();
        }
        self.recent.push_back(grant);
        self.total += 1;
        grant
    }

    /// Grants that still count against the window at `t`.
    pub fn in_window(&self, t: Timestamp) -> usize {
        self.recent
            .iter()
            .filter(|s| s.0 <= t.0 && t.0 - s.0 < self.window_ms)
            .count()
    }

    pub fn total_granted(&self) -> u64 {
        self.total
    }
}

impl Default for RateLimiterState {
    fn default() -> Self {
        RateLimiterState::new(DEFAULT_WINDOW_MS, DEFAULT_CAP)
    }
}

/// Shared, internally synchronized limiter that sleeps on the supplied clock.
#[derive(Clone)]
pub struct RateLimiter {
    state: Arc<Mutex<RateLimiterState>>,
    clock: Arc<dyn Clock>,
    log: Arc<Mutex<Vec<Timestamp>>>,
}

impl RateLimiter {
    pub fn new(state: RateLimiterState, clock: Arc<dyn Clock>) -> Self {
        RateLimiter {
            state: Arc::new(Mutex::new(state)),
            clock,
            log: Arc::new(Mutex::new(Vec::new())),
        }
    }

    /// Block until a slot is available; returns the grant time.
    pub fn acquire(&self) -> Timestamp {
        let grant = {
            let mut st = self.state.lock().expect("limiter lock");
            let g = st.acquire(self.clock.now());
            self.log.lock().expect("limiter log").push(g);
            g
        };
        self.clock.sleep_until(grant);
        grant
    }

    pub fn clock(&self) -> &Arc<dyn Clock> {
        &self.clock
    }

    pub fn total_granted(&self) -> u64 {
        self.state.lock().expect("limiter lock").total_granted()
    }

    /// Every grant issued so far, in order.
    pub fn grants(&self) -> Vec<Timestamp> {
        self.log.lock().expect("limiter log").clone()
    }

    pub fn params(&self) -> (i64, usize) {
        let st = self.state.lock().expect("limiter lock");
        (st.window_ms, st.cap)
    }
}

/// Largest number of grants inside any half-open window `(t - window, t]`.
/// Quadratic scan used as a check.
pub fn max_in_any_window(grants: &[Timestamp], window_ms: i64) -> usize {
    grants
        .iter()
        .map(|t| {
            grants
                .iter()
                .filter(|s| s.0 <= t.0 && t.0 - s.0 < window_ms)
                .count()
        })
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clock::VirtualClock;

    #[test]
    fn empty_history_grants_now() {
        let mut st = RateLimiterState::default();
        assert_eq!(st.acquire(Timestamp(1234)), Timestamp(1234));
    }

    #[test]
    fn twenty_ninth_request_waits_full_window() {
        let mut st = RateLimiterState::default();
        for _ in 0..28 {
            assert_eq!(st.acquire(Timestamp(0)), Timestamp(0));
        }
        assert_eq!(st.acquire(Timestamp(0)), Timestamp(600_000));
        assert_eq!(st.in_window(Timestamp(600_000)), 1);
    }

    #[test]
    fn spaced_requests_never_wait() {
        let mut st = RateLimiterState::new(600_000, 28);
        for i in 0..200 {
            let now = Timestamp(i * 30_000);
            assert_eq!(st.acquire(now), now);
        }
    }

    #[test]
    fn shared_limiter_sleeps_on_virtual_clock() {
        let clock = Arc::new(VirtualClock::new(Timestamp(0)));
        let lim = RateLimiter::new(RateLimiterState::new(1000, 2), clock.clone());
        lim.acquire();
        lim.acquire();
        assert_eq!(lim.acquire(), Timestamp(1000));
        assert_eq!(clock.now(), Timestamp(1000));
        assert_eq!(max_in_any_window(&lim.grants(), 1000), 2);
    }
}
