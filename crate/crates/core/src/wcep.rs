//! Sample A: Wikipedia Current Events Portal bullets, U.S.-filtered,
//! ranked by two-day enwiki pageviews with a per-article cap.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use chrono::{Datelike, Duration, NaiveDate};
use log::warn;
use rayon::prelude::*;
use scraper::{ElementRef, Html, Selector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::http;
use crate::model::{Category, Event, Surface, Timestamp};

pub const DEFAULT_CAP: usize = 3;
pub const DEFAULT_TOP_N: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WcepBullet {
    pub event_date: NaiveDate,
    /// Position of the bullet within its day, in page order.
    pub day_index: usize,
    pub bullet_text: String,
    pub linked_article: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alternates: Vec<String>,
    pub wcep_category: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DayParseError {
    pub day: String,
    pub message: String,
}

const MONTHS: [&str; 12] = [
    "January", "February", "March", "April", "May", "June", "July", "August", "September",
    "October", "November", "December",
];

/// `(year, month)` pairs covering `[from, to]`.
pub fn months_covering(from: NaiveDate, to: NaiveDate) -> Vec<(i32, u32)> {
    let mut out = Vec::new();
    let (mut y, mut m) = (from.year(), from.month());
    while (y, m) <= (to.year(), to.month()) {
        out.push((y, m));
        (y, m) = if m == 12 { (y + 1, 1) } else { (y, m + 1) };
    }
    out
}

/// Portal page name for a month, e.g. `April_2026`.
pub fn month_page_name(year: i32, month: u32) -> String {
    format!("{}_{year}", MONTHS[(month - 1) as usize])
}

pub trait WcepPages: Send + Sync {
    fn month_html(&self, year: i32, month: u32) -> Result<String>;
}

pub struct LiveWcep {
    client: reqwest::blocking::Client,
}

impl LiveWcep {
    pub fn new() -> Result<Self> {
        Ok(LiveWcep { client: http::client()? })
    }
}

impl WcepPages for LiveWcep {
    fn month_html(&self, year: i32, month: u32) -> Result<String> {
        let url = format!(
            "https://en.wikipedia.org/wiki/Portal:Current_events/{}",
            month_page_name(year, month)
        );
        http::with_retries(3, 1000, || http::get_text(&self.client, &url))
    }
}

/// Saved month pages, `<dir>/<Month>_<year>.html`.
pub struct FixtureWcep {
    pub dir: PathBuf,
}

impl WcepPages for FixtureWcep {
    fn month_html(&self, year: i32, month: u32) -> Result<String> {
        let path = self.dir.join(format!("{}.html", month_page_name(year, month)));
        fs::read_to_string(&path).map_err(|e| Error::NotFound(format!("{}: {e}", path.display())))
    }
}

fn sel(s: &str) -> Selector {
    Selector::parse(s).expect("static selector")
}

fn collapse(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn article_of(a: &ElementRef) -> Option<String> {
    let href = a.value().attr("href")?;
    let slug = href.strip_prefix("/wiki/")?;
    if slug.contains(':') {
        return None;
    }
    if let Some(t) = a.value().attr("title").filter(|t| !t.is_empty()) {
        return Some(t.to_string());
    }
    let slug = slug.split('#').next().unwrap_or(slug);
    Some(
        percent_encoding::percent_decode_str(slug)
            .decode_utf8_lossy()
            .replace('_', " "),
    )
}

/// Text of a bullet without its source citations.
fn bullet_text(li: &ElementRef) -> String {
    let mut s = String::new();
    for node in li.descendants() {
        if let Some(t) = node.value().as_text() {
            let inside_external = node.ancestors().any(|a| {
                a.value()
                    .as_element()
                    .is_some_and(|e| e.name() == "a" && e.classes().any(|c| c == "external"))
            });
            if !inside_external {
                s.push_str(t);
            }
        }
    }
    collapse(&s.replace("()", "").replace(" .", "."))
}

fn day_from_id(id: &str) -> Option<NaiveDate> {
    NaiveDate::parse_from_str(id, "%Y_%B_%d").ok()
}

/// Parse one month page. Days outside `[from, to]` are skipped; a malformed day
/// yields a parse error and contributes no bullets.
pub fn parse_month(html: &str, from: NaiveDate, to: NaiveDate) -> (Vec<WcepBullet>, Vec<DayParseError>) {
    let doc = Html::parse_document(html);
    let day_sel = sel("div.current-events-main");
    let content_sel = sel("div.current-events-content");
    let ul_sel = sel("ul");
    let li_sel = sel("li");
    let link_sel = sel("a[href]");

    let mut out = Vec::new();
    let mut errors = Vec::new();
    for day in doc.select(&day_sel) {
        let id = day.value().id().unwrap_or("").to_string();
        let Some(date) = day_from_id(&id) else {
            errors.push(DayParseError { day: id, message: "unrecognised day id".into() });
            continue;
        };
        if date < from || date > to {
            continue;
        }
        let Some(content) = day.select(&content_sel).next() else {
            errors.push(DayParseError { day: id, message: "day has no content block".into() });
            continue;
        };
        let mut category = String::new();
        let mut day_bullets = Vec::new();
        let mut bad = None;
        for child in content.children().filter_map(ElementRef::wrap) {
            match child.value().name() {
                "p" | "div" => {
                    let t = collapse(&child.text().collect::<String>());
                    if !t.is_empty() {
                        category = t;
                    }
                }
                "ul" => {
                    for li in child.select(&li_sel) {
                        if li.select(&ul_sel).next().is_some() {
                            continue;
                        }
                        let text = bullet_text(&li);
                        if text.is_empty() {
                            bad = Some("empty bullet".to_string());
                            break;
                        }
                        let mut links: Vec<String> = li
                            .select(&link_sel)
                            .filter(|a| !a.value().classes().any(|c| c == "external"))
                            .filter_map(|a| article_of(&a))
                            .collect();
                        if links.is_empty() {
                            // Fall back to the enclosing topic's link.
                            let parent_topic = li
                                .ancestors()
                                .filter_map(ElementRef::wrap)
                                .find(|e| e.value().name() == "li")
                                .and_then(|p| {
                                    p.children()
                                        .filter_map(ElementRef::wrap)
                                        .find(|e| e.value().name() == "a")
                                        .and_then(|a| article_of(&a))
                                });
                            links.extend(parent_topic);
                        }
                        if links.is_empty() {
                            bad = Some(format!("bullet without article link: {text:?}"));
                            break;
                        }
                        let linked_article = links.remove(0);
                        links.retain(|l| *l != linked_article);
                        links.dedup();
                        day_bullets.push(WcepBullet {
                            event_date: date,
                            day_index: day_bullets.len(),
                            bullet_text: text,
                            linked_article,
                            alternates: links,
                            wcep_category: category.clone(),
                        });
                    }
                }
                _ => {}
            }
            if bad.is_some() {
                break;
            }
        }
        match bad {
            Some(message) => errors.push(DayParseError { day: id, message }),
            None => out.extend(day_bullets),
        }
    }
    (out, errors)
}

/// Every bullet in `[from, to]`, ordered by date then page order.
pub fn scrape_wcep(
    pages: &dyn WcepPages,
    from: NaiveDate,
    to: NaiveDate,
) -> Result<(Vec<WcepBullet>, Vec<DayParseError>)> {
    let mut bullets = Vec::new();
    let mut errors = Vec::new();
    if from > to {
        return Ok((bullets, errors));
    }
    for (y, m) in months_covering(from, to) {
        let html = pages.month_html(y, m)?;
        let (b, e) = parse_month(&html, from, to);
        bullets.extend(b);
        errors.extend(e);
    }
    bullets.sort_by_key(|b| (b.event_date, b.day_index));
    Ok((bullets, errors))
}

/// Substring lexicon for U.S. relevance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsLexicon {
    terms: Vec<(String, bool)>,
}

const DEFAULT_LEXICON: &str = include_str!("../data/us_lexicon.txt");

impl UsLexicon {
    /// One term per line; `#` comments. Single words match exact-case,
    /// multiword terms case-insensitively, and a leading `=` forces exact case.
    pub fn parse(src: &str) -> Self {
        let terms = src
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| match l.strip_prefix('=') {
                Some(t) => (t.to_string(), true),
                None if l.contains(' ') => (l.to_lowercase(), false),
                None => (l.to_string(), true),
            })
            .collect();
        UsLexicon { terms }
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(UsLexicon::parse(&fs::read_to_string(path)?))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn matched_term(&self, text: &str) -> Option<&str> {
        let lower = text.to_lowercase();
        self.terms
            .iter()
            .find(|(t, exact)| if *exact { text.contains(t.as_str()) } else { lower.contains(t.as_str()) })
            .map(|(t, _)| t.as_str())
    }

    pub fn matches(&self, text: &str) -> bool {
        self.matched_term(text).is_some()
    }
}

impl Default for UsLexicon {
    fn default() -> Self {
        UsLexicon::parse(DEFAULT_LEXICON)
    }
}

pub fn us_filter(bullet: &WcepBullet, lexicon: &UsLexicon) -> bool {
    lexicon.matches(&bullet.bullet_text)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageviewRecord {
    pub article: String,
    pub event_date: NaiveDate,
    pub day0_views: u64,
    pub day1_views: u64,
    pub total: u64,
}

impl PageviewRecord {
    pub fn new(article: &str, event_date: NaiveDate, day0: u64, day1: u64) -> Self {
        PageviewRecord {
            article: article.to_string(),
            event_date,
            day0_views: day0,
            day1_views: day1,
            total: day0 + day1,
        }
    }
}

pub trait PageviewSource: Send + Sync {
    /// Views on `date` and the day after; `None` if the article is unknown.
    fn views(&self, article: &str, date: NaiveDate) -> Result<Option<(u64, u64)>>;
}

const TITLE_ENCODE: &percent_encoding::AsciiSet = &percent_encoding::NON_ALPHANUMERIC
    .remove(b'_')
    .remove(b'-')
    .remove(b'.')
    .remove(b'(')
    .remove(b')');

pub struct LivePageviews {
    client: reqwest::blocking::Client,
}

impl LivePageviews {
    pub fn new() -> Result<Self> {
        Ok(LivePageviews { client: http::client()? })
    }

    pub fn request_url(article: &str, date: NaiveDate) -> String {
        let title: String = percent_encoding::utf8_percent_encode(
            &article.replace(' ', "_"),
            TITLE_ENCODE,
        )
        .to_string();
        let next = date + Duration::days(1);
        format!(
            "https://wikimedia.org/api/rest_v1/metrics/pageviews/per-article/en.wikipedia/all-access/user/{title}/daily/{}00/{}00",
            date.format("%Y%m%d"),
            next.format("%Y%m%d")
        )
    }
}

/// Day-0 and day-1 views from a REST per-article response.
pub fn parse_pageviews(body: &str, date: NaiveDate) -> Result<(u64, u64)> {
    #[derive(Deserialize)]
    struct Item {
        timestamp: String,
        views: u64,
    }
    #[derive(Deserialize)]
    struct Resp {
        items: Vec<Item>,
    }
    let r: Resp = serde_json::from_str(body)?;
    let key = |d: NaiveDate| format!("{}00", d.format("%Y%m%d"));
    let (k0, k1) = (key(date), key(date + Duration::days(1)));
    let get = |k: &str| r.items.iter().filter(|i| i.timestamp == k).map(|i| i.views).sum();
    Ok((get(&k0), get(&k1)))
}

impl PageviewSource for LivePageviews {
    fn views(&self, article: &str, date: NaiveDate) -> Result<Option<(u64, u64)>> {
        let url = LivePageviews::request_url(article, date);
        match http::with_retries(3, 1000, || http::get_text(&self.client, &url)) {
            Ok(body) => parse_pageviews(&body, date).map(Some),
            Err(Error::NotFound(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

/// CSV table `article,event_date,day0_views,day1_views`.
pub struct FixturePageviews {
    table: HashMap<(String, NaiveDate), (u64, u64)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PageviewRow {
    article: String,
    event_date: NaiveDate,
    day0_views: u64,
    day1_views: u64,
}

impl FixturePageviews {
    pub fn from_records(records: &[PageviewRecord]) -> Self {
        FixturePageviews {
            table: records
                .iter()
                .map(|r| ((r.article.clone(), r.event_date), (r.day0_views, r.day1_views)))
                .collect(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path)?;
        let mut table = HashMap::new();
        for row in rdr.deserialize() {
            let r: PageviewRow = row?;
            table.insert((r.article, r.event_date), (r.day0_views, r.day1_views));
        }
        Ok(FixturePageviews { table })
    }
}

pub fn write_pageviews(path: &Path, records: &[PageviewRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in records {
        w.serialize(PageviewRow {
            article: r.article.clone(),
            event_date: r.event_date,
            day0_views: r.day0_views,
            day1_views: r.day1_views,
        })?;
    }
    w.flush()?;
    Ok(())
}

impl PageviewSource for FixturePageviews {
    fn views(&self, article: &str, date: NaiveDate) -> Result<Option<(u64, u64)>> {
        Ok(self.table.get(&(article.to_string(), date)).copied())
    }
}

/// A missing article yields zeros and a warning rather than an error.
pub fn fetch_pageviews(
    article: &str,
    date: NaiveDate,
    source: &dyn PageviewSource,
) -> Result<(PageviewRecord, Option<String>)> {
    match source.views(article, date)? {
        Some((d0, d1)) => Ok((PageviewRecord::new(article, date, d0, d1), None)),
        None => {
            let msg = format!("no pageviews for {article:?} on {date}");
            warn!("{msg}");
            Ok((PageviewRecord::new(article, date, 0, 0), Some(msg)))
        }
    }
}

/// Fetch one record per distinct (article, date), `parallelism` at a time.
pub fn fetch_all_pageviews(
    bullets: &[WcepBullet],
    source: &dyn PageviewSource,
    parallelism: usize,
) -> Result<(Vec<PageviewRecord>, Vec<String>)> {
    let mut keys: Vec<(String, NaiveDate)> = bullets
        .iter()
        .map(|b| (b.linked_article.clone(), b.event_date))
        .collect();
    keys.sort();
    keys.dedup();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let results: Vec<Result<(PageviewRecord, Option<String>)>> = pool.install(|| {
        keys.par_iter()
            .map(|(a, d)| fetch_pageviews(a, *d, source))
            .collect()
    });
    let mut records = Vec::with_capacity(results.len());
    let mut warnings = Vec::new();
    for r in results {
        let (rec, w) = r?;
        records.push(rec);
        warnings.extend(w);
    }
    Ok((records, warnings))
}

/// Coarse category for a WCEP section heading.
pub fn category_for(wcep_category: &str) -> Category {
    let c = wcep_category.to_lowercase();
    if c.starts_with("sports") {
        Category::Sports
    } else if c.starts_with("armed conflicts")
        || c.starts_with("politics")
        || c.starts_with("law and crime")
        || c.starts_with("international relations")
    {
        Category::Politics
    } else if c.starts_with("business") || c.starts_with("science and technology") {
        Category::MacroCrypto
    } else {
        Category::Other
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankOutput {
    pub events: Vec<Event>,
    pub bullets: Vec<WcepBullet>,
    /// How many events short of `top_n` the ranking fell.
    pub shortfall: usize,
}

pub fn event_id(b: &WcepBullet) -> String {
    format!("wcep-{}-{:03}", b.event_date, b.day_index)
}

/// Sort by total views (ties: earlier date, then bullet text), keep at most
/// `cap` bullets per article, and emit the first `top_n`.
pub fn rank_and_cap(
    bullets: &[WcepBullet],
    pageviews: &[PageviewRecord],
    cap: usize,
    top_n: usize,
) -> Result<RankOutput> {
    let pv: HashMap<(&str, NaiveDate), u64> = pageviews
        .iter()
        .map(|r| ((r.article.as_str(), r.event_date), r.total))
        .collect();
    let mut ranked: Vec<(&WcepBullet, u64)> = bullets
        .iter()
        .map(|b| {
            pv.get(&(b.linked_article.as_str(), b.event_date))
                .map(|&t| (b, t))
                .ok_or_else(|| Error::Invariant(format!("no pageview record for {:?}", b.linked_article)))
        })
        .collect::<Result<_>>()?;
    ranked.sort_by(|(a, ta), (b, tb)| {
        tb.cmp(ta)
            .then(a.event_date.cmp(&b.event_date))
            .then(a.bullet_text.cmp(&b.bullet_text))
    });
    let mut per_article: BTreeMap<&str, usize> = BTreeMap::new();
    let mut events = Vec::new();
    let mut kept = Vec::new();
    for (b, total) in ranked {
        if events.len() == top_n {
            break;
        }
        let n = per_article.entry(&b.linked_article).or_default();
        if *n >= cap {
            continue;
        }
        *n += 1;
        events.push(Event {
            event_id: event_id(b),
            surface: Surface::Wcep,
            title: b.linked_article.clone(),
            description: b.bullet_text.clone(),
            category: category_for(&b.wcep_category),
            t_e: Timestamp::at_midnight(b.event_date),
            attention_prior: total as f64,
            source_key: b.linked_article.clone(),
            event_group: None,
        });
        kept.push(b.clone());
    }
    let shortfall = top_n.saturating_sub(events.len());
    if shortfall > 0 {
        warn!("ranking produced {} of {top_n} events", events.len());
    }
    Ok(RankOutput { events, bullets: kept, shortfall })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WcepSeed {
    pub candidates: usize,
    pub passing: usize,
    pub distinct_articles: usize,
    pub ranked: RankOutput,
    pub parse_errors: Vec<DayParseError>,
    pub warnings: Vec<String>,
}

pub struct WcepParams {
    pub from: NaiveDate,
    pub to: NaiveDate,
    pub cap: usize,
    pub top_n: usize,
    pub parallelism: usize,
}

pub fn seed_wcep(
    params: &WcepParams,
    pages: &dyn WcepPages,
    lexicon: &UsLexicon,
    pageviews: &dyn PageviewSource,
) -> Result<WcepSeed> {
    let (bullets, parse_errors) = scrape_wcep(pages, params.from, params.to)?;
    let passing: Vec<WcepBullet> = bullets.iter().filter(|b| us_filter(b, lexicon)).cloned().collect();
    let (records, warnings) = fetch_all_pageviews(&passing, pageviews, params.parallelism)?;
    let ranked = rank_and_cap(&passing, &records, params.cap, params.top_n)?;
    let mut articles: Vec<&str> = ranked.events.iter().map(|e| e.source_key.as_str()).collect();
    articles.sort_unstable();
    articles.dedup();
    Ok(WcepSeed {
        candidates: bullets.len(),
        passing: passing.len(),
        distinct_articles: articles.len(),
        ranked,
        parse_errors,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    const PAGE: &str = r#"<html><body>
<div class="current-events-main vevent" id="2026_April_11"><div class="current-events-content description">
<p><b>Sports</b></p><ul><li>Outside the window in <a href="/wiki/Ohio" title="Ohio">Ohio</a>.</li></ul>
</div></div>
<div class="current-events-main vevent" id="2026_April_12"><div class="current-events-content description">
<p><b>Armed conflicts and attacks</b></p>
<ul><li><a href="/wiki/Iran%E2%80%93United_States_conflict" title="Iran–United States conflict">Iran–United States conflict</a>
  <ul><li>The Pentagon confirms strikes. <a class="external text" href="https://example.org">(Reuters)</a></li></ul></li></ul>
<p><b>Sports</b></p>
<ul><li>The <a href="/wiki/2026_NFL_draft" title="2026 NFL draft">2026 NFL draft</a> opens in <a href="/wiki/Pittsburgh" title="Pittsburgh">Pittsburgh</a>.</li></ul>
</div></div>
<div class="current-events-main vevent" id="2026_April_13"><div class="current-events-content description">
<p><b>Disasters</b></p><ul><li>No links here at all.</li></ul>
</div></div>
</body></html>"#;

    #[test]
    fn parses_bullets_links_and_categories() {
        let (b, errs) = parse_month(PAGE, d("2026-04-12"), d("2026-04-30"));
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].linked_article, "Iran–United States conflict");
        assert_eq!(b[0].bullet_text, "The Pentagon confirms strikes.");
        assert_eq!(b[0].wcep_category, "Armed conflicts and attacks");
        assert_eq!(b[1].linked_article, "2026 NFL draft");
        assert_eq!(b[1].alternates, vec!["Pittsburgh".to_string()]);
        assert_eq!(b[1].day_index, 1);
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].day, "2026_April_13");
    }

    #[test]
    fn window_excludes_outside_days() {
        let (b, _) = parse_month(PAGE, d("2026-04-10"), d("2026-04-12"));
        assert_eq!(b.len(), 3);
        let (b, _) = parse_month(PAGE, d("2026-05-01"), d("2026-05-02"));
        assert!(b.is_empty());
    }

    #[test]
    fn lexicon_cases() {
        let lx = UsLexicon::default();
        assert!(lx.matches("…the Federal Reserve announced…"));
        assert!(lx.matches("the federal reserve announced"));
        assert!(!lx.matches(""));
        assert!(!lx.matches("Turnout remained low"));
        assert!(!lx.matches("tell us about it"));
        assert!(lx.matches("U.S. officials"));
    }

    #[test]
    fn pageview_totals() {
        assert_eq!(PageviewRecord::new("2026 NFL draft", d("2026-04-23"), 200_000, 236_044).total, 436_044);
        assert_eq!(PageviewRecord::new("a", d("2026-04-23"), 0, 0).total, 0);
        assert_eq!(PageviewRecord::new("a", d("2026-04-23"), 100, 50).total, 150);
    }

    #[test]
    fn missing_article_gives_zeros() {
        let src = FixturePageviews::from_records(&[]);
        let (r, w) = fetch_pageviews("Nope", d("2026-04-12"), &src).unwrap();
        assert_eq!(r.total, 0);
        assert!(w.is_some());
    }

    #[test]
    fn parses_rest_response() {
        let body = r#"{"items":[{"timestamp":"2026042300","views":200000},{"timestamp":"2026042400","views":236044}]}"#;
        assert_eq!(parse_pageviews(body, d("2026-04-23")).unwrap(), (200_000, 236_044));
        assert!(LivePageviews::request_url("2026 NFL draft", d("2026-04-23")).ends_with("/2026_NFL_draft/daily/2026042300/2026042400"));
    }

    fn bullet(day: &str, i: usize, article: &str) -> WcepBullet {
        WcepBullet {
            event_date: d(day),
            day_index: i,
            bullet_text: format!("bullet {i}"),
            linked_article: article.into(),
            alternates: vec![],
            wcep_category: "Sports".into(),
        }
    }

    #[test]
    fn cap_binds_per_article() {
        let bs: Vec<_> = (0..5).map(|i| bullet("2026-04-12", i, "Same")).collect();
        let pv = vec![PageviewRecord::new("Same", d("2026-04-12"), 10, 0)];
        let out = rank_and_cap(&bs, &pv, 3, 50).unwrap();
        assert_eq!(out.events.len(), 3);
        assert_eq!(out.shortfall, 47);
    }

    #[test]
    fn ties_break_on_date_then_text() {
        let bs = vec![bullet("2026-04-13", 0, "B"), bullet("2026-04-12", 1, "A"), bullet("2026-04-12", 0, "C")];
        let pv = vec![
            PageviewRecord::new("A", d("2026-04-12"), 5, 0),
            PageviewRecord::new("B", d("2026-04-13"), 5, 0),
            PageviewRecord::new("C", d("2026-04-12"), 5, 0),
        ];
        let out = rank_and_cap(&bs, &pv, 3, 3).unwrap();
        let ids: Vec<_> = out.events.iter().map(|e| e.event_id.as_str()).collect();
        assert_eq!(ids, ["wcep-2026-04-12-000", "wcep-2026-04-12-001", "wcep-2026-04-13-000"]);
    }

    #[test]
    fn month_listing() {
        assert_eq!(months_covering(d("2026-04-12"), d("2026-05-11")), vec![(2026, 4), (2026, 5)]);
        assert_eq!(months_covering(d("2025-12-30"), d("2026-01-02")), vec![(2025, 12), (2026, 1)]);
        assert_eq!(month_page_name(2026, 4), "April_2026");
    }
}
