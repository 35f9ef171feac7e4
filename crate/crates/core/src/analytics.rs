//! Result tables: per-category hit rates, earliest-channel winner shares,
//! paired X-vs-news latency, and the broadening probe. Everything here is a
//! pure function of the persisted per-event outcomes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::drafting::BooleanQuery;
use crate::error::Result;
use crate::model::{Category, Channel, Event, Mention, PairedDelta, Surface, TimeWindow, Timestamp, MS_PER_MINUTE};
use crate::provider::{BackfillPolicy, ListeningProvider, QuerySession, RateLimiter};
use crate::verify::ChannelEarliest;
use crate::xrecover::{decode_snowflake, SnowflakeId};

/// One event and its earliest verified mention per channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventOutcome {
    pub event: Event,
    pub earliest: Vec<ChannelEarliest>,
}

impl EventOutcome {
    pub fn hit(&self) -> bool {
        !self.earliest.is_empty()
    }

    pub fn on(&self, c: &Channel) -> Option<&ChannelEarliest> {
        self.earliest.iter().find(|e| &e.channel == c)
    }
}

/// `100·r` rounded half-up to an integer.
pub fn percent(r: Ratio<i64>) -> i64 {
    let (n, d) = (*r.numer(), *r.denom());
    let scaled = 100 * n;
    if scaled >= 0 {
        (2 * scaled + d) / (2 * d)
    } else {
        -((-2 * scaled + d) / (2 * d))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HitRateRow {
    pub category: Option<Category>,
    pub hits: usize,
    pub total: usize,
}

impl HitRateRow {
    pub fn label(&self) -> &'static str {
        self.category.map_or("All", Category::label)
    }

    pub fn rate(&self) -> Option<Ratio<i64>> {
        (self.total > 0).then(|| Ratio::new(self.hits as i64, self.total as i64))
    }

    pub fn render(&self) -> String {
        match self.rate() {
            Some(r) => format!("{}/{} ({}%)", self.hits, self.total, percent(r)),
            None => "0/0 (-)".to_string(),
        }
    }
}

/// Per-category rows in fixed order, then the overall row. Empty input → empty table.
pub fn hit_rates(outcomes: &[&EventOutcome]) -> Vec<HitRateRow> {
    if outcomes.is_empty() {
        return Vec::new();
    }
    let mut rows: Vec<HitRateRow> = Category::ALL
        .iter()
        .map(|&c| {
            let of: Vec<_> = outcomes.iter().filter(|o| o.event.category == c).collect();
            HitRateRow {
                category: Some(c),
                hits: of.iter().filter(|o| o.hit()).count(),
                total: of.len(),
            }
        })
        .collect();
    rows.push(HitRateRow {
        category: None,
        hits: outcomes.iter().filter(|o| o.hit()).count(),
        total: outcomes.len(),
    });
    rows
}

#[derive(Debug, Clone, PartialEq)]
pub struct WinnerTable {
    pub verified_events: usize,
    /// Fractional wins per channel; ties on the same millisecond split evenly.
    pub wins: BTreeMap<Channel, Ratio<i64>>,
}

impl WinnerTable {
    pub fn share(&self, c: &Channel) -> Ratio<i64> {
        if self.verified_events == 0 {
            return Ratio::from_integer(0);
        }
        self.wins.get(c).copied().unwrap_or_else(|| Ratio::from_integer(0))
            / Ratio::from_integer(self.verified_events as i64)
    }

    pub fn percent(&self, c: &Channel) -> i64 {
        percent(self.share(c))
    }
}

pub fn winner_shares(outcomes: &[&EventOutcome]) -> WinnerTable {
    let mut t = WinnerTable { verified_events: 0, wins: BTreeMap::new() };
    for o in outcomes.iter().filter(|o| o.hit()) {
        t.verified_events += 1;
        let first = o.earliest.iter().map(ChannelEarliest::ts).min().expect("hit has a mention");
        let tied: Vec<&Channel> = o.earliest.iter().filter(|e| e.ts() == first).map(|e| &e.channel).collect();
        let part = Ratio::new(1, tied.len() as i64);
        for c in tied {
            *t.wins.entry(c.clone()).or_insert_with(|| Ratio::from_integer(0)) += part;
        }
    }
    t
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatencySummary {
    pub n: usize,
    pub median_min: Option<f64>,
    pub q1_min: Option<f64>,
    pub q3_min: Option<f64>,
    pub x_first: usize,
}

impl LatencySummary {
    pub fn x_first_share(&self) -> Option<Ratio<i64>> {
        (self.n > 0).then(|| Ratio::new(self.x_first as i64, self.n as i64))
    }
}

/// 1-based positions of the lower and upper quartiles: `(n+1)/4` and
/// `3(n+1)/4` rounded half-up, clamped to `[1, n]`.
pub fn quartile_positions(n: usize) -> (usize, usize) {
    let q1 = (n + 1 + 2) / 4;
    let q3 = (3 * (n + 1) + 2) / 4;
    (q1.clamp(1, n.max(1)), q3.clamp(1, n.max(1)))
}

/// Median (mean of the central pair for even n) and nearest-order-statistic quartiles,
/// computed on integer milliseconds.
pub fn summarize(deltas: &[PairedDelta]) -> LatencySummary {
    let mut ms: Vec<i64> = deltas.iter().map(PairedDelta::delta_ms).collect();
    ms.sort_unstable();
    let n = ms.len();
    let x_first = ms.iter().filter(|&&d| d > 0).count();
    if n == 0 {
        return LatencySummary { n, median_min: None, q1_min: None, q3_min: None, x_first };
    }
    let to_min = |v: f64| v / MS_PER_MINUTE as f64;
    let median = if n % 2 == 1 {
        ms[n / 2] as f64
    } else {
        (ms[n / 2 - 1] as f64 + ms[n / 2] as f64) / 2.0
    };
    let (p1, p3) = quartile_positions(n);
    LatencySummary {
        n,
        median_min: Some(to_min(median)),
        q1_min: Some(to_min(ms[p1 - 1] as f64)),
        q3_min: Some(to_min(ms[p3 - 1] as f64)),
        x_first,
    }
}

/// Events with verified mentions on both X and news, ordered by Δ ascending.
pub fn paired_deltas(outcomes: &[&EventOutcome]) -> (Vec<PairedDelta>, LatencySummary) {
    let mut out: Vec<PairedDelta> = outcomes
        .iter()
        .filter_map(|o| {
            let x = o.on(&Channel::Twitter)?;
            let news = o.on(&Channel::News)?;
            Some(PairedDelta::new(o.event.event_id.clone(), news.ts(), x.ts()))
        })
        .collect();
    out.sort_by(|a, b| a.delta_ms().cmp(&b.delta_ms()).then_with(|| a.event_id.cmp(&b.event_id)));
    let summary = summarize(&out);
    (out, summary)
}

// ---- probe ---------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeLevel {
    pub level: usize,
    pub query: String,
    pub count: Option<usize>,
    pub earliest_ts: Option<Timestamp>,
    pub earliest_guid: Option<String>,
    pub earliest_title: Option<String>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub event_id: String,
    pub event_title: String,
    pub levels: Vec<ProbeLevel>,
}

fn mention_time(m: &Mention) -> Option<Timestamp> {
    m.ordering_ts().or_else(|| {
        m.channel
            .is_twitter()
            .then(|| SnowflakeId::parse(&m.guid).ok().map(decode_snowflake))
            .flatten()
    })
}

/// Run every ladder level through a full query lifecycle and summarize what
/// came back. A failing level is recorded and the probe moves on.
pub fn probe_report(
    event: &Event,
    ladder: &[BooleanQuery],
    provider: &dyn ListeningProvider,
    limiter: &RateLimiter,
    window: TimeWindow,
    page_size: usize,
) -> ProbeReport {
    let levels = ladder
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let mut level = ProbeLevel {
                level: i + 1,
                query: q.render(),
                count: None,
                earliest_ts: None,
                earliest_guid: None,
                earliest_title: None,
                error: None,
            };
            match probe_level(event, q, i + 1, provider, limiter, window, page_size) {
                Ok(ms) => {
                    let earliest = ms
                        .iter()
                        .filter_map(|m| mention_time(m).map(|t| (t, m)))
                        .min_by(|a, b| (a.0, &a.1.guid).cmp(&(b.0, &b.1.guid)));
                    level.count = Some(ms.len());
                    if let Some((t, m)) = earliest {
                        level.earliest_ts = Some(t);
                        level.earliest_guid = Some(m.guid.clone());
                        level.earliest_title = m.title.clone().or_else(|| m.snippet.clone());
                    }
                }
                Err(e) => level.error = Some(e.to_string()),
            }
            level
        })
        .collect();
    ProbeReport { event_id: event.event_id.clone(), event_title: event.title.clone(), levels }
}

fn probe_level(
    event: &Event,
    q: &BooleanQuery,
    level: usize,
    provider: &dyn ListeningProvider,
    limiter: &RateLimiter,
    window: TimeWindow,
    page_size: usize,
) -> Result<Vec<Mention>> {
    let mut s = QuerySession::create(provider, limiter, q, &format!("{}-probe-{level}", event.event_id))?;
    let run = (|| -> Result<Vec<Mention>> {
        s.await_backfill(&BackfillPolicy::default())?;
        let all = s.pull_all(window, page_size)?;
        s.pull_x(window, page_size)?;
        Ok(all)
    })();
    let cleanup = s.abandon();
    let all = run?;
    cleanup?;
    Ok(all)
}

// ---- rendering -----------------------------------------------------------

/// A rendered result table with plain-text, CSV and Markdown forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    /// Right-align these columns in the text form.
    pub numeric: Vec<bool>,
    pub rows: Vec<Vec<String>>,
    /// Rows printed under a rule after the body (summaries).
    pub footer: Vec<Vec<String>>,
    pub note: Option<String>,
}

impl Table {
    fn widths(&self) -> Vec<usize> {
        let mut w: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for r in self.rows.iter().chain(&self.footer) {
            for (i, c) in r.iter().enumerate() {
                w[i] = w[i].max(c.chars().count());
            }
        }
        w
    }

    pub fn to_txt(&self) -> String {
        let w = self.widths();
        let line = |cells: &[String]| -> String {
            let parts: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let pad = w[i] - c.chars().count();
                    if self.numeric[i] {
                        format!("{}{c}", " ".repeat(pad))
                    } else {
                        format!("{c}{}", " ".repeat(pad))
                    }
                })
                .collect();
            parts.join("  ").trim_end().to_string()
        };
        let rule = "-".repeat(w.iter().sum::<usize>() + 2 * (w.len().saturating_sub(1)));
        let mut s = format!("{}\n{rule}\n{}\n{rule}\n", self.title, line(&self.headers));
        for r in &self.rows {
            s.push_str(&line(r));
            s.push('\n');
        }
        if !self.footer.is_empty() {
            s.push_str(&rule);
            s.push('\n');
            for r in &self.footer {
                s.push_str(&line(r));
                s.push('\n');
            }
        }
        s.push_str(&rule);
        s.push('\n');
        if let Some(n) = &self.note {
            let _ = writeln!(s, "{n}");
        }
        s
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers)?;
        for r in self.rows.iter().chain(&self.footer) {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| crate::Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_md(&self) -> String {
        let esc = |c: &str| c.replace('|', "\\|");
        let mut s = format!("**{}**\n\n| {} |\n|", self.title, self.headers.iter().map(|h| esc(h)).collect::<Vec<_>>().join(" | "));
        for &num in &self.numeric {
            s.push_str(if num { "---:|" } else { "---|" });
        }
        s.push('\n');
        for r in self.rows.iter().chain(&self.footer) {
            let _ = writeln!(s, "| {} |", r.iter().map(|c| esc(c)).collect::<Vec<_>>().join(" | "));
        }
        if let Some(n) = &self.note {
            let _ = write!(s, "\n{n}\n");
        }
        s
    }
}

fn sample_label(s: Surface) -> &'static str {
    match s {
        Surface::Wcep => "Sample A (WCEP)",
        Surface::Polymarket => "Sample B (Polymarket)",
    }
}

fn by_surface(outcomes: &[EventOutcome], s: Surface) -> Vec<&EventOutcome> {
    outcomes.iter().filter(|o| o.event.surface == s).collect()
}

fn present_surfaces(outcomes: &[EventOutcome]) -> Vec<Surface> {
    [Surface::Wcep, Surface::Polymarket]
        .into_iter()
        .filter(|&s| outcomes.iter().any(|o| o.event.surface == s))
        .collect()
}

pub fn hits_table(outcomes: &[EventOutcome]) -> Table {
    let surfaces = present_surfaces(outcomes);
    let per: Vec<Vec<HitRateRow>> = surfaces.iter().map(|&s| hit_rates(&by_surface(outcomes, s))).collect();
    let mut headers = vec!["Category".to_string()];
    headers.extend(surfaces.iter().map(|&s| sample_label(s).to_string()));
    let mut rows = Vec::new();
    let mut footer = Vec::new();
    for i in 0..=Category::ALL.len() {
        let label = if i < Category::ALL.len() { Category::ALL[i].label() } else { "All" };
        let mut r = vec![label.to_string()];
        r.extend(per.iter().map(|rows| rows.get(i).map_or_else(|| "0/0 (-)".to_string(), HitRateRow::render)));
        if i < Category::ALL.len() {
            rows.push(r);
        } else {
            footer.push(r);
        }
    }
    Table {
        title: "Per-category hit rate".into(),
        numeric: std::iter::once(false).chain(surfaces.iter().map(|_| true)).collect(),
        headers,
        rows,
        footer,
        note: Some("Hits count events with at least one verified mention on any channel.".into()),
    }
}

pub fn winners_table(outcomes: &[EventOutcome], channels: &[Channel]) -> Table {
    let surfaces = present_surfaces(outcomes);
    let tables: Vec<WinnerTable> = surfaces.iter().map(|&s| winner_shares(&by_surface(outcomes, s))).collect();
    let mut order: Vec<&Channel> = channels.iter().collect();
    for t in &tables {
        for c in t.wins.keys() {
            if !order.contains(&c) {
                order.push(c);
            }
        }
    }
    let total = |c: &Channel| tables.iter().map(|t| t.share(c)).sum::<Ratio<i64>>();
    order.sort_by(|a, b| total(b).cmp(&total(a)).then_with(|| a.as_str().cmp(b.as_str())));

    let mut headers = vec!["Channel".to_string()];
    headers.extend(surfaces.iter().map(|&s| format!("{} share", sample_label(s))));
    let two = tables.len() == 2;
    if two {
        headers.push("B - A (pts)".into());
    }
    let rows = order
        .iter()
        .map(|c| {
            let mut r = vec![c.display_name()];
            r.extend(tables.iter().map(|t| format!("{}%", t.percent(c))));
            if two {
                let d = tables[1].percent(c) - tables[0].percent(c);
                r.push(if d > 0 { format!("+{d}") } else { d.to_string() });
            }
            r
        })
        .collect();
    let note = surfaces
        .iter()
        .zip(&tables)
        .map(|(&s, t)| format!("{}: {} verified events.", sample_label(s), t.verified_events))
        .collect::<Vec<_>>()
        .join(" ");
    Table {
        title: "Earliest-channel winner share".into(),
        numeric: std::iter::once(false).chain(headers.iter().skip(1).map(|_| true)).collect(),
        headers,
        rows,
        footer: Vec::new(),
        note: Some(note),
    }
}

pub fn format_minutes(m: f64) -> String {
    let r = (m * 100.0).round() / 100.0;
    if r > 0.0 {
        format!("+{r:.2}")
    } else if r == 0.0 {
        "0.00".to_string()
    } else {
        format!("{r:.2}")
    }
}

fn thousands(v: f64) -> String {
    let n = v.round() as i64;
    let digits = n.abs().to_string();
    let mut out = String::new();
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(ch);
    }
    if n < 0 {
        format!("-{out}")
    } else {
        out
    }
}

pub fn paired_table(outcomes: &[EventOutcome], surface: Surface) -> Table {
    let of = by_surface(outcomes, surface);
    let (deltas, s) = paired_deltas(&of);
    let prior_header = match surface {
        Surface::Wcep => "PV",
        Surface::Polymarket => "Volume (USD)",
    };
    let rows = deltas
        .iter()
        .map(|d| {
            let e = &of.iter().find(|o| o.event.event_id == d.event_id).expect("delta from outcome").event;
            vec![
                e.title.clone(),
                e.category.short().to_string(),
                thousands(e.attention_prior),
                format_minutes(d.delta_min),
            ]
        })
        .collect();
    let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), format_minutes);
    let share = s
        .x_first_share()
        .map_or_else(|| "-".to_string(), |r| format!("{}/{} ({}%)", s.x_first, s.n, percent(r)));
    let footer = vec![
        vec!["n".into(), String::new(), String::new(), s.n.to_string()],
        vec!["median".into(), String::new(), String::new(), opt(s.median_min)],
        vec!["IQR".into(), String::new(), String::new(), format!("{} to {}", opt(s.q1_min), opt(s.q3_min))],
        vec!["X first".into(), String::new(), String::new(), share],
    ];
    Table {
        title: format!("{}: paired X-vs-news latency", sample_label(surface)),
        headers: vec!["Event".into(), "cat".into(), prior_header.into(), "Delta (min)".into()],
        numeric: vec![false, false, true, true],
        rows,
        footer,
        note: Some("Delta > 0 means X earlier; quartiles are the nearest order statistics at (n+1)/4 and 3(n+1)/4, rounded half-up.".into()),
    }
}

pub fn probe_table(reports: &[ProbeReport]) -> Table {
    let mut rows = Vec::new();
    for r in reports {
        for l in &r.levels {
            rows.push(vec![
                r.event_id.clone(),
                l.level.to_string(),
                l.query.clone(),
                match (&l.error, l.count) {
                    (Some(_), _) => "error".to_string(),
                    (None, Some(c)) => c.to_string(),
                    (None, None) => "-".to_string(),
                },
                l.earliest_ts.map_or_else(|| "-".to_string(), |t| t.to_string()),
                l.earliest_title
                    .clone()
                    .or_else(|| l.earliest_guid.clone())
                    .or_else(|| l.error.clone())
                    .unwrap_or_else(|| "-".into()),
            ]);
        }
    }
    Table {
        title: "Progressive-broadening probe".into(),
        headers: ["Event", "Level", "Query", "Mentions", "Earliest", "Earliest item"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        numeric: vec![false, true, false, true, false, false],
        rows,
        footer: Vec::new(),
        note: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Verification;

    fn ev(id: &str, cat: Category) -> Event {
        Event {
            event_id: id.into(),
            surface: Surface::Polymarket,
            title: id.into(),
            description: String::new(),
            category: cat,
            t_e: Timestamp(0),
            attention_prior: 1.0,
            source_key: id.into(),
            event_group: None,
        }
    }

    fn hit(event_id: &str, c: Channel, ts: i64) -> ChannelEarliest {
        let twitter = c.is_twitter();
        ChannelEarliest {
            event_id: event_id.into(),
            channel: c.clone(),
            mention: Mention {
                channel: c,
                guid: format!("{event_id}-{ts}"),
                provider_ts: (!twitter).then_some(Timestamp(ts)),
                recovered_ts: twitter.then_some(Timestamp(ts)),
                title: None,
                snippet: None,
                body: None,
                url: None,
                author: None,
                verification: Verification::Verified,
            },
            fallback_depth: 0,
        }
    }

    fn outcome(id: &str, hits: Vec<(Channel, i64)>) -> EventOutcome {
        EventOutcome {
            event: ev(id, Category::Sports),
            earliest: hits.into_iter().map(|(c, t)| hit(id, c, t)).collect(),
        }
    }

    fn deltas(mins: &[f64]) -> Vec<PairedDelta> {
        mins.iter()
            .enumerate()
            .map(|(i, m)| {
                let ms = (m * 60_000.0).round() as i64;
                PairedDelta::new(format!("e{i}"), Timestamp(1_000_000_000 + ms), Timestamp(1_000_000_000))
            })
            .collect()
    }

    #[test]
    fn percent_rounds_half_up() {
        assert_eq!(percent(Ratio::new(21, 56)), 38);
        assert_eq!(percent(Ratio::new(6, 16)), 38);
        assert_eq!(percent(Ratio::new(171, 586)), 29);
        assert_eq!(percent(Ratio::new(1, 8)), 13);
        assert_eq!(percent(Ratio::new(0, 5)), 0);
    }

    #[test]
    fn empty_inputs() {
        assert!(hit_rates(&[]).is_empty());
        let s = summarize(&[]);
        assert_eq!(s.n, 0);
        assert!(s.median_min.is_none() && s.x_first_share().is_none());
    }

    #[test]
    fn single_delta_summary() {
        let s = summarize(&deltas(&[3.5]));
        assert_eq!((s.median_min, s.q1_min, s.q3_min), (Some(3.5), Some(3.5), Some(3.5)));
    }

    #[test]
    fn quartile_positions_small_n() {
        assert_eq!(quartile_positions(1), (1, 1));
        assert_eq!(quartile_positions(6), (2, 5));
        assert_eq!(quartile_positions(16), (4, 13));
        assert_eq!(quartile_positions(3), (1, 3));
    }

    #[test]
    fn single_channel_wins_outright() {
        let o = outcome("a", vec![(Channel::Bluesky, 5)]);
        let t = winner_shares(&[&o]);
        assert_eq!(t.percent(&Channel::Bluesky), 100);
    }

    #[test]
    fn ties_split_fractionally() {
        let a = outcome("a", vec![(Channel::Twitter, 5), (Channel::News, 5), (Channel::Forum, 9)]);
        let b = outcome("b", vec![(Channel::News, 1)]);
        let t = winner_shares(&[&a, &b]);
        assert_eq!(t.share(&Channel::Twitter), Ratio::new(1, 4));
        assert_eq!(t.share(&Channel::News), Ratio::new(3, 4));
        assert_eq!(t.share(&Channel::Forum), Ratio::new(0, 1));
        let sum: Ratio<i64> = t.wins.values().sum();
        assert_eq!(sum, Ratio::from_integer(2));
    }

    #[test]
    fn paired_requires_both_channels() {
        let a = outcome("a", vec![(Channel::Twitter, 0), (Channel::News, 60_000)]);
        let b = outcome("b", vec![(Channel::Twitter, 0)]);
        let (d, s) = paired_deltas(&[&a, &b]);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].delta_min, 1.0);
        assert_eq!(s.x_first, 1);
    }

    #[test]
    fn renderings_are_stable() {
        let os = vec![
            outcome("a", vec![(Channel::Twitter, 0), (Channel::News, 60_000)]),
            outcome("b", vec![]),
        ];
        let t = hits_table(&os);
        assert_eq!(t.to_txt(), hits_table(&os).to_txt());
        assert!(t.to_txt().contains("1/2 (50%)"));
        assert!(t.to_md().starts_with("**Per-category hit rate**"));
        assert!(t.to_csv().unwrap().starts_with("Category,"));
        let p = paired_table(&os, Surface::Polymarket);
        assert!(p.to_txt().contains("+1.00"));
        assert_eq!(format_minutes(-0.004), "0.00");
        assert_eq!(thousands(436_044.0), "436,044");
    }
}
