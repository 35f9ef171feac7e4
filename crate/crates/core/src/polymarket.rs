//! Sample B: high-volume Polymarket markets, one per event title, with t_e
//! pinned to the largest rolling one-hour USD-volume spike.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::path::Path;
use std::sync::Arc;

use log::warn;
use parquet::data_type::{BoolType, ByteArray, ByteArrayType, DoubleType, Int64Type};
use parquet::file::properties::WriterProperties;
use parquet::file::reader::SerializedFileReader;
use parquet::file::writer::SerializedFileWriter;
use parquet::record::{Field, Row};
use parquet::schema::parser::parse_message_type;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Category, Event, Surface, TimeWindow, Timestamp, MS_PER_HOUR};
use crate::text;

pub const DEFAULT_VOLUME_FLOOR: f64 = 100_000.0;
pub const DEFAULT_TOP_K: usize = 130;
pub const SPIKE_WINDOW_MS: i64 = MS_PER_HOUR;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketRecord {
    pub market_id: String,
    pub event_title: String,
    /// Parent prediction event that several event titles can share.
    #[serde(default)]
    pub event_group: String,
    pub question: String,
    #[serde(default)]
    pub category: String,
    pub start: Timestamp,
    pub end: Timestamp,
    pub lifetime_volume_usd: f64,
    pub is_binary: bool,
}

impl MarketRecord {
    pub fn resolution_window(&self) -> Result<TimeWindow> {
        TimeWindow::new(self.start, self.end)
    }

    pub fn group(&self) -> &str {
        if self.event_group.is_empty() {
            &self.event_title
        } else {
            &self.event_group
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TradePoint {
    pub ts: Timestamp,
    pub usd_cents: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trade {
    pub market_id: String,
    pub ts: Timestamp,
    pub usd_cents: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpikeResult {
    pub market_id: String,
    pub spike_ts: Timestamp,
    pub window_usd_cents: i64,
}

impl SpikeResult {
    pub fn window_usd_sum(&self) -> f64 {
        self.window_usd_cents as f64 / 100.0
    }
}

/// Parse a decimal USD amount to integer cents without going through floats.
/// Digits past the cent are rounded half-up.
pub fn parse_cents(s: &str) -> Result<i64> {
    let s = s.trim().trim_start_matches('$').replace(',', "");
    let bad = || Error::Parse(format!("bad USD amount {s:?}"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s.as_str()),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if (int.is_empty() && frac.is_empty())
        || !int.chars().all(|c| c.is_ascii_digit())
        || !frac.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let whole: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
    let digit = |i: usize| frac.as_bytes().get(i).map_or(0, |b| (b - b'0') as i64);
    let mut cents = whole
        .checked_mul(100)
        .and_then(|w| w.checked_add(digit(0) * 10 + digit(1)))
        .ok_or_else(bad)?;
    if digit(2) >= 5 {
        cents += 1;
    }
    Ok(if neg { -cents } else { cents })
}

pub fn cents_from_f64(v: f64) -> i64 {
    (v * 100.0).round() as i64
}

/// Overlap + floor + binary, then one market per event title (highest volume,
/// tie to the smaller id), sorted by volume descending, first `top_k`.
pub fn filter_markets(markets: &[MarketRecord], window: &TimeWindow, floor_usd: f64, top_k: usize) -> Vec<MarketRecord> {
    let mut best: BTreeMap<&str, &MarketRecord> = BTreeMap::new();
    for m in markets {
        let overlaps = m.resolution_window().is_ok_and(|w| w.overlaps(window));
        if !(overlaps && m.is_binary && m.lifetime_volume_usd >= floor_usd) {
            continue;
        }
        best.entry(&m.event_title)
            .and_modify(|cur| {
                if by_volume(m, cur).is_lt() {
                    *cur = m;
                }
            })
            .or_insert(m);
    }
    let mut out: Vec<MarketRecord> = best.into_values().cloned().collect();
    out.sort_by(by_volume);
    out.truncate(top_k);
    out
}

fn by_volume(a: &MarketRecord, b: &MarketRecord) -> std::cmp::Ordering {
    b.lifetime_volume_usd
        .total_cmp(&a.lifetime_volume_usd)
        .then_with(|| a.market_id.cmp(&b.market_id))
}

/// Largest USD sum over windows `(t - window_ms, t]` anchored at trade times
/// inside `scan`; ties go to the earliest anchor. Trades outside `scan` are
/// ignored. `None` when no in-scan trade carries volume.
pub fn rolling_spike(trades: &[TradePoint], window_ms: i64, scan: &TimeWindow) -> Result<Option<(Timestamp, i64)>> {
    if let Some(i) = trades.windows(2).position(|w| w[1].ts < w[0].ts) {
        return Err(Error::Invariant(format!(
            "trades not sorted at index {}: {} after {}",
            i + 1,
            trades[i + 1].ts,
            trades[i].ts
        )));
    }
    let lo = trades.partition_point(|t| t.ts < scan.start);
    let hi = trades.partition_point(|t| t.ts <= scan.end);
    let ts = &trades[lo..hi];

    let mut best: Option<(Timestamp, i64)> = None;
    let mut sum = 0i64;
    let mut left = 0;
    let mut right = 0;
    while right < ts.len() {
        let anchor = ts[right].ts;
        // Take every trade at this instant.
        while right < ts.len() && ts[right].ts == anchor {
            sum += ts[right].usd_cents;
            right += 1;
        }
        while ts[left].ts.0 <= anchor.0 - window_ms {
            sum -= ts[left].usd_cents;
            left += 1;
        }
        if best.is_none_or(|(_, b)| sum > b) {
            best = Some((anchor, sum));
        }
    }
    Ok(best.filter(|&(_, s)| s > 0))
}

/// Whole-word keyword table over event title and question.
pub fn categorize(event_title: &str, question: &str) -> Category {
    let toks = text::tokens(&format!("{event_title} {question}"));
    let has = |words: &[&str]| words.iter().any(|w| text::contains_term(&toks, w));
    const SPORTS: &[&str] = &[
        "vs", "v", "nba", "nfl", "nhl", "mlb", "ufc", "fc", "premier league", "la liga",
        "champions league", "serie a", "bundesliga", "ligue 1", "masters", "open", "grand prix",
        "lol", "league of legends", "esports", "world cup", "super bowl", "playoffs", "finals",
        "match", "game", "tournament", "olympics", "cricket", "tennis", "golf",
    ];
    const MACRO: &[&str] = &[
        "bitcoin", "btc", "ethereum", "eth", "solana", "crypto", "fed", "federal reserve",
        "interest rate", "rate cut", "inflation", "cpi", "gdp", "recession", "s p 500", "nasdaq",
        "stock", "price", "oil", "gold", "tariff", "tariffs", "treasury",
    ];
    const POLITICS: &[&str] = &[
        "election", "president", "prime minister", "parliament", "senate", "congress", "trump",
        "iran", "israel", "ukraine", "russia", "war", "ceasefire", "conflict", "khamenei",
        "government", "minister", "vote", "referendum", "nominee", "impeached", "party",
    ];
    if has(MACRO) && !has(&["election"]) {
        Category::MacroCrypto
    } else if has(POLITICS) {
        Category::Politics
    } else if has(SPORTS) {
        Category::Sports
    } else {
        Category::Other
    }
}

pub fn event_id(market_id: &str) -> String {
    format!("pm-{market_id}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PinOutput {
    pub events: Vec<Event>,
    pub spikes: Vec<SpikeResult>,
    /// Markets dropped for having no in-window trade activity.
    pub dropped: Vec<String>,
}

/// One event per market with a spike. Scans run in parallel; output follows
/// the input market order.
pub fn pin_events(
    markets: &[MarketRecord],
    trades: &HashMap<String, Vec<TradePoint>>,
    scan: &TimeWindow,
) -> Result<PinOutput> {
    let spikes: Vec<Result<Option<(Timestamp, i64)>>> = markets
        .par_iter()
        .map(|m| match trades.get(&m.market_id) {
            Some(t) => rolling_spike(t, SPIKE_WINDOW_MS, scan),
            None => Ok(None),
        })
        .collect();
    let mut out = PinOutput { events: Vec::new(), spikes: Vec::new(), dropped: Vec::new() };
    for (m, spike) in markets.iter().zip(spikes) {
        let Some((t_e, cents)) = spike? else {
            out.dropped.push(m.market_id.clone());
            continue;
        };
        let (meta_cat, known) = Category::parse_lenient(&m.category);
        let category = if known && !m.category.trim().is_empty() {
            meta_cat
        } else {
            categorize(&m.event_title, &m.question)
        };
        out.events.push(Event {
            event_id: event_id(&m.market_id),
            surface: Surface::Polymarket,
            title: m.event_title.clone(),
            description: m.question.clone(),
            category,
            t_e,
            attention_prior: m.lifetime_volume_usd,
            source_key: m.market_id.clone(),
            event_group: Some(m.group().to_string()),
        });
        out.spikes.push(SpikeResult {
            market_id: m.market_id.clone(),
            spike_ts: t_e,
            window_usd_cents: cents,
        });
    }
    if !out.dropped.is_empty() {
        warn!("{} markets had no in-window trades", out.dropped.len());
    }
    Ok(out)
}

/// Group trades by market, sorted by time.
pub fn index_trades(trades: Vec<Trade>) -> HashMap<String, Vec<TradePoint>> {
    let mut by: HashMap<String, Vec<TradePoint>> = HashMap::new();
    for t in trades {
        by.entry(t.market_id).or_default().push(TradePoint { ts: t.ts, usd_cents: t.usd_cents });
    }
    for v in by.values_mut() {
        v.sort();
    }
    by
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolymarketSeed {
    pub candidates: usize,
    pub filtered: Vec<MarketRecord>,
    pub pinned: PinOutput,
    pub distinct_groups: usize,
    pub median_volume_usd: f64,
}

pub fn seed_polymarket(
    markets: &[MarketRecord],
    trades: Vec<Trade>,
    window: &TimeWindow,
    floor_usd: f64,
    top_k: usize,
) -> Result<PolymarketSeed> {
    let filtered = filter_markets(markets, window, floor_usd, top_k);
    let pinned = pin_events(&filtered, &index_trades(trades), window)?;
    let mut groups: Vec<&str> = pinned.events.iter().filter_map(|e| e.event_group.as_deref()).collect();
    groups.sort_unstable();
    groups.dedup();
    let mut vols: Vec<f64> = pinned.events.iter().map(|e| e.attention_prior).collect();
    vols.sort_by(f64::total_cmp);
    let median_volume_usd = match vols.len() {
        0 => 0.0,
        n if n % 2 == 1 => vols[n / 2],
        n => (vols[n / 2 - 1] + vols[n / 2]) / 2.0,
    };
    Ok(PolymarketSeed {
        candidates: markets.len(),
        distinct_groups: groups.len(),
        filtered,
        pinned,
        median_volume_usd,
    })
}

// ---- loading -------------------------------------------------------------

const MARKET_ID: &[&str] = &["market_id", "id", "condition_id", "conditionId"];
const EVENT_TITLE: &[&str] = &["event_title", "eventTitle", "event", "title"];
const EVENT_GROUP: &[&str] = &["event_group", "event_slug", "eventSlug", "group"];
const QUESTION: &[&str] = &["question", "market_question"];
const CATEGORY: &[&str] = &["category", "tag"];
const START: &[&str] = &["start", "start_date", "startDate", "created_at"];
const END: &[&str] = &["end", "end_date", "endDate", "closed_time", "resolution_date"];
const VOLUME: &[&str] = &["lifetime_volume_usd", "volume", "volume_usd", "volumeNum"];
const BINARY: &[&str] = &["is_binary", "binary"];
const OUTCOMES: &[&str] = &["outcomes"];
const TRADE_MARKET: &[&str] = &["market_id", "market", "condition_id", "conditionId"];
const TRADE_TS: &[&str] = &["ts", "timestamp", "time", "block_time"];
const TRADE_USD: &[&str] = &["usd", "usd_size", "usd_amount", "usd_volume", "amount_usd"];

/// One input row as name → textual value.
type RawRow = HashMap<String, String>;

fn pick<'a>(row: &'a RawRow, names: &[&str]) -> Option<&'a str> {
    names.iter().find_map(|n| row.get(*n).map(String::as_str)).filter(|s| !s.is_empty())
}

fn need<'a>(row: &'a RawRow, names: &[&str]) -> Result<&'a str> {
    pick(row, names).ok_or_else(|| Error::Parse(format!("missing column {}", names[0])))
}

/// Timestamps as RFC 3339, a bare date, or epoch seconds/milliseconds.
pub fn parse_time(s: &str) -> Result<Timestamp> {
    let s = s.trim();
    if let Ok(n) = s.parse::<i64>() {
        // Seconds until 2286; anything larger is milliseconds.
        return Ok(Timestamp(if n.abs() < 10_000_000_000 { n * 1000 } else { n }));
    }
    if let Ok(d) = s.parse::<chrono::NaiveDate>() {
        return Ok(Timestamp::at_midnight(d));
    }
    if let Ok(dt) = chrono::NaiveDateTime::parse_from_str(s, "%Y-%m-%d %H:%M:%S") {
        return Ok(Timestamp(dt.and_utc().timestamp_millis()));
    }
    Timestamp::parse(s)
}

fn parse_bool(s: &str) -> bool {
    matches!(s.trim().to_ascii_lowercase().as_str(), "true" | "1" | "yes" | "t")
}

fn is_binary_outcomes(s: &str) -> bool {
    serde_json::from_str::<Vec<String>>(s)
        .map(|v| v.len() == 2)
        .unwrap_or_else(|_| s.split(',').count() == 2)
}

fn market_from_row(row: &RawRow) -> Result<MarketRecord> {
    let is_binary = match (pick(row, BINARY), pick(row, OUTCOMES)) {
        (Some(b), _) => parse_bool(b),
        (None, Some(o)) => is_binary_outcomes(o),
        (None, None) => true,
    };
    let volume = need(row, VOLUME)?;
    Ok(MarketRecord {
        market_id: need(row, MARKET_ID)?.to_string(),
        event_title: need(row, EVENT_TITLE)?.to_string(),
        event_group: pick(row, EVENT_GROUP).unwrap_or("").to_string(),
        question: pick(row, QUESTION).unwrap_or("").to_string(),
        category: pick(row, CATEGORY).unwrap_or("").to_string(),
        start: parse_time(need(row, START)?)?,
        end: parse_time(need(row, END)?)?,
        lifetime_volume_usd: volume
            .parse()
            .map_err(|_| Error::Parse(format!("bad volume {volume:?}")))?,
        is_binary,
    })
}

fn trade_from_row(row: &RawRow) -> Result<Trade> {
    Ok(Trade {
        market_id: need(row, TRADE_MARKET)?.to_string(),
        ts: parse_time(need(row, TRADE_TS)?)?,
        usd_cents: parse_cents(need(row, TRADE_USD)?)?,
    })
}

fn csv_rows(path: &Path) -> Result<Vec<RawRow>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let headers = rdr.headers()?.clone();
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        out.push(headers.iter().zip(rec.iter()).map(|(h, v)| (h.to_string(), v.to_string())).collect());
    }
    Ok(out)
}

fn field_text(f: &Field) -> String {
    match f {
        Field::Null => String::new(),
        Field::Str(s) => s.clone(),
        // Typed timestamps go out as RFC 3339 so small values are not read as seconds.
        Field::TimestampMillis(v) => Timestamp(*v).to_string(),
        Field::TimestampMicros(v) => Timestamp(v.div_euclid(1000)).to_string(),
        Field::Date(d) => Timestamp(*d as i64 * 86_400_000).to_string(),
        Field::Double(v) => format!("{v}"),
        Field::Float(v) => format!("{v}"),
        Field::Bytes(b) => String::from_utf8_lossy(b.data()).into_owned(),
        Field::ListInternal(l) => {
            let items: Vec<String> = l.elements().iter().map(field_text).collect();
            serde_json::to_string(&items).unwrap_or_default()
        }
        other => other.to_string(),
    }
}

fn parquet_rows(path: &Path) -> Result<Vec<RawRow>> {
    let reader = SerializedFileReader::new(File::open(path)?)?;
    let mut out = Vec::new();
    for row in reader {
        let row: Row = row?;
        out.push(
            row.get_column_iter()
                .map(|(name, f)| (name.clone(), field_text(f)))
                .collect(),
        );
    }
    Ok(out)
}

fn rows(path: &Path) -> Result<Vec<RawRow>> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("parquet") => parquet_rows(path),
        _ => csv_rows(path),
    }
}

/// `markets.parquet` or an equivalent CSV, chosen by extension.
pub fn load_markets(path: &Path) -> Result<Vec<MarketRecord>> {
    rows(path)?
        .iter()
        .enumerate()
        .map(|(i, r)| market_from_row(r).map_err(|e| Error::Parse(format!("{} row {}: {e}", path.display(), i + 1))))
        .collect()
}

pub fn load_trades(path: &Path) -> Result<Vec<Trade>> {
    rows(path)?
        .iter()
        .enumerate()
        .map(|(i, r)| trade_from_row(r).map_err(|e| Error::Parse(format!("{} row {}: {e}", path.display(), i + 1))))
        .collect()
}

fn cents_text(c: i64) -> String {
    let sign = if c < 0 { "-" } else { "" };
    format!("{sign}{}.{:02}", c.abs() / 100, c.abs() % 100)
}

pub fn write_markets_csv(path: &Path, markets: &[MarketRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["market_id", "event_title", "event_group", "question", "category", "start", "end", "lifetime_volume_usd", "is_binary"])?;
    for m in markets {
        w.write_record([
            m.market_id.clone(),
            m.event_title.clone(),
            m.event_group.clone(),
            m.question.clone(),
            m.category.clone(),
            m.start.to_string(),
            m.end.to_string(),
            format!("{:.2}", m.lifetime_volume_usd),
            m.is_binary.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trades_csv(path: &Path, trades: &[Trade]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["market_id", "ts", "usd"])?;
    for t in trades {
        w.write_record([t.market_id.clone(), t.ts.to_string(), cents_text(t.usd_cents)])?;
    }
    w.flush()?;
    Ok(())
}

fn strings(v: impl Iterator<Item = String>) -> Vec<ByteArray> {
    v.map(|s| ByteArray::from(s.into_bytes())).collect()
}

pub fn write_markets_parquet(path: &Path, markets: &[MarketRecord]) -> Result<()> {
    let schema = Arc::new(parse_message_type(
        "message markets {
            REQUIRED BYTE_ARRAY market_id (UTF8);
            REQUIRED BYTE_ARRAY event_title (UTF8);
            REQUIRED BYTE_ARRAY event_slug (UTF8);
            REQUIRED BYTE_ARRAY question (UTF8);
            REQUIRED INT64 start_date (TIMESTAMP_MILLIS);
            REQUIRED INT64 end_date (TIMESTAMP_MILLIS);
            REQUIRED DOUBLE volume;
            REQUIRED BOOLEAN is_binary;
        }",
    )?);
    let mut writer = SerializedFileWriter::new(File::create(path)?, schema, Arc::new(WriterProperties::builder().build()))?;
    let mut rg = writer.next_row_group()?;
    let mut col = 0;
    while let Some(mut c) = rg.next_column()? {
        match col {
            0..=3 => {
                let vals = strings(markets.iter().map(|m| match col {
                    0 => m.market_id.clone(),
                    1 => m.event_title.clone(),
                    2 => m.event_group.clone(),
                    _ => m.question.clone(),
                }));
                c.typed::<ByteArrayType>().write_batch(&vals, None, None)?;
            }
            4 | 5 => {
                let vals: Vec<i64> = markets.iter().map(|m| if col == 4 { m.start.0 } else { m.end.0 }).collect();
                c.typed::<Int64Type>().write_batch(&vals, None, None)?;
            }
            6 => {
                let vals: Vec<f64> = markets.iter().map(|m| m.lifetime_volume_usd).collect();
                c.typed::<DoubleType>().write_batch(&vals, None, None)?;
            }
            _ => {
                let vals: Vec<bool> = markets.iter().map(|m| m.is_binary).collect();
                c.typed::<BoolType>().write_batch(&vals, None, None)?;
            }
        }
        c.close()?;
        col += 1;
    }
    rg.close()?;
    writer.close()?;
    Ok(())
}

pub fn write_trades_parquet(path: &Path, trades: &[Trade]) -> Result<()> {
    let schema = Arc::new(parse_message_type(
        "message trades {
            REQUIRED BYTE_ARRAY market_id (UTF8);
            REQUIRED INT64 timestamp (TIMESTAMP_MILLIS);
            REQUIRED BYTE_ARRAY usd_size (UTF8);
        }",
    )?);
    let mut writer = SerializedFileWriter::new(File::create(path)?, schema, Arc::new(WriterProperties::builder().build()))?;
    let mut rg = writer.next_row_group()?;
    let mut col = 0;
    while let Some(mut c) = rg.next_column()? {
        match col {
            0 => {
                let vals = strings(trades.iter().map(|t| t.market_id.clone()));
                c.typed::<ByteArrayType>().write_batch(&vals, None, None)?;
            }
            1 => {
                let vals: Vec<i64> = trades.iter().map(|t| t.ts.0).collect();
                c.typed::<Int64Type>().write_batch(&vals, None, None)?;
            }
            _ => {
                let vals = strings(trades.iter().map(|t| cents_text(t.usd_cents)));
                c.typed::<ByteArrayType>().write_batch(&vals, None, None)?;
            }
        }
        c.close()?;
        col += 1;
    }
    rg.close()?;
    writer.close()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp(ts: i64, cents: i64) -> TradePoint {
        TradePoint { ts: Timestamp(ts), usd_cents: cents }
    }

    fn scan() -> TimeWindow {
        TimeWindow::new(Timestamp(0), Timestamp(100 * MS_PER_HOUR)).unwrap()
    }

    #[test]
    fn cents_parsing() {
        assert_eq!(parse_cents("10").unwrap(), 1000);
        assert_eq!(parse_cents("0.1").unwrap(), 10);
        assert_eq!(parse_cents("$1,234.567").unwrap(), 123_457);
        assert_eq!(parse_cents(".05").unwrap(), 5);
        assert_eq!(parse_cents("-2.50").unwrap(), -250);
        assert!(parse_cents("abc").is_err());
        assert!(parse_cents("").is_err());
        assert_eq!(cents_text(123_457), "1234.57");
    }

    #[test]
    fn single_trade_spike() {
        assert_eq!(rolling_spike(&[tp(5000, 1000)], SPIKE_WINDOW_MS, &scan()).unwrap(), Some((Timestamp(5000), 1000)));
    }

    #[test]
    fn no_trades_in_scan() {
        let s = TimeWindow::new(Timestamp(10), Timestamp(20)).unwrap();
        assert_eq!(rolling_spike(&[tp(5, 1), tp(25, 1)], SPIKE_WINDOW_MS, &s).unwrap(), None);
        assert_eq!(rolling_spike(&[], SPIKE_WINDOW_MS, &s).unwrap(), None);
    }

    #[test]
    fn half_open_window_and_ties() {
        let h = MS_PER_HOUR;
        // Anchor at h: (0, h] excludes the trade at 0.
        let t = [tp(0, 500), tp(h, 500)];
        assert_eq!(rolling_spike(&t, h, &scan()).unwrap(), Some((Timestamp(0), 500)));
        let t = [tp(0, 500), tp(h - 1, 500)];
        assert_eq!(rolling_spike(&t, h, &scan()).unwrap(), Some((Timestamp(h - 1), 1000)));
        // Same-instant trades all count at that anchor.
        let t = [tp(10, 1), tp(10, 2), tp(10 + 2 * h, 3)];
        assert_eq!(rolling_spike(&t, h, &scan()).unwrap(), Some((Timestamp(10), 3)));
    }

    #[test]
    fn unsorted_is_an_error() {
        assert!(rolling_spike(&[tp(2, 1), tp(1, 1)], SPIKE_WINDOW_MS, &scan()).is_err());
    }

    fn market(id: &str, title: &str, vol: f64) -> MarketRecord {
        MarketRecord {
            market_id: id.into(),
            event_title: title.into(),
            event_group: String::new(),
            question: format!("{title}?"),
            category: String::new(),
            start: Timestamp(0),
            end: Timestamp(10),
            lifetime_volume_usd: vol,
            is_binary: true,
        }
    }

    #[test]
    fn one_market_per_title() {
        let ms = vec![market("b", "T", 5e6), market("a", "T", 2e6), market("c", "U", 5e6), market("d", "T", 5e6)];
        let w = TimeWindow::new(Timestamp(0), Timestamp(5)).unwrap();
        let out = filter_markets(&ms, &w, 100_000.0, 130);
        let ids: Vec<_> = out.iter().map(|m| m.market_id.as_str()).collect();
        assert_eq!(ids, ["b", "c"]);
    }

    #[test]
    fn floor_binary_and_overlap() {
        let mut nb = market("nb", "NB", 1e6);
        nb.is_binary = false;
        let mut late = market("late", "L", 1e6);
        late.start = Timestamp(100);
        late.end = Timestamp(200);
        let ms = vec![market("low", "Low", 99_999.0), nb, late, market("ok", "Ok", 100_000.0)];
        let w = TimeWindow::new(Timestamp(0), Timestamp(50)).unwrap();
        let out = filter_markets(&ms, &w, 100_000.0, 130);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].market_id, "ok");
    }

    #[test]
    fn categories() {
        assert_eq!(categorize("Mavericks vs. Lakers", "Will the Mavericks win?"), Category::Sports);
        assert_eq!(categorize("Khamenei out by Feb 28?", ""), Category::Politics);
        assert_eq!(categorize("Bitcoin above 100k on March 1?", ""), Category::MacroCrypto);
        assert_eq!(categorize("Taylor Swift album announced?", ""), Category::Other);
        assert_eq!(categorize("Warriors vs. Celtics", "Will the Warriors win the award?"), Category::Sports);
    }

    #[test]
    fn csv_and_parquet_agree() {
        let dir = tempfile::tempdir().unwrap();
        let mut ms = vec![market("m1", "Mavericks vs. Lakers", 6.1e6), market("m2", "Iran/US conflict ends?", 2.5e5)];
        ms[1].event_group = "iran-us".into();
        let ts = vec![
            Trade { market_id: "m1".into(), ts: Timestamp(1_771_000_000_000), usd_cents: 12_345 },
            Trade { market_id: "m2".into(), ts: Timestamp(1_771_000_001_000), usd_cents: 5 },
        ];
        write_markets_csv(&dir.path().join("markets.csv"), &ms).unwrap();
        write_trades_csv(&dir.path().join("trades.csv"), &ts).unwrap();
        write_markets_parquet(&dir.path().join("markets.parquet"), &ms).unwrap();
        write_trades_parquet(&dir.path().join("trades.parquet"), &ts).unwrap();
        assert_eq!(load_markets(&dir.path().join("markets.csv")).unwrap(), ms);
        assert_eq!(load_markets(&dir.path().join("markets.parquet")).unwrap(), ms);
        assert_eq!(load_trades(&dir.path().join("trades.csv")).unwrap(), ts);
        assert_eq!(load_trades(&dir.path().join("trades.parquet")).unwrap(), ts);
    }

    #[test]
    fn time_formats() {
        assert_eq!(parse_time("1771000000").unwrap(), Timestamp(1_771_000_000_000));
        assert_eq!(parse_time("1771000000123").unwrap(), Timestamp(1_771_000_000_123));
        assert_eq!(parse_time("2026-02-13").unwrap().to_string(), "2026-02-13T00:00:00.000Z");
        assert_eq!(parse_time("2026-02-13 01:02:03").unwrap().to_string(), "2026-02-13T01:02:03.000Z");
        assert_eq!(parse_time("2026-02-13T01:02:03Z").unwrap().to_string(), "2026-02-13T01:02:03.000Z");
    }
}
