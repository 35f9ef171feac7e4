//! Feature extraction, two-boolean drafting, the specificity gate and the
//! broadening ladder.
//!
//! Every model-facing step goes through [`ModelBackend`]. Two backends ship:
//! [`FallbackBackend`] (pure keyword rules, used offline and in tests) and
//! [`remote::RemoteBackend`] (chat-completion endpoint).

pub mod entities;
pub mod ladder;
pub mod query;
pub mod remote;

use std::collections::BTreeSet;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Category, Event, FeatureVector, Surface};
use crate::text;
use crate::verify::KeywordSet;

pub use ladder::broaden_ladder;
pub use query::{BooleanQuery, QueryKind};

pub const DEFAULT_SPECIFICITY_THRESHOLD: f64 = 0.5;

/// Tight news boolean plus the permissive X boolean that is actually issued.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DraftPair {
    pub news: BooleanQuery,
    pub x: BooleanQuery,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecificityScore {
    pub value: f64,
    pub threshold: f64,
    pub approved: bool,
}

impl SpecificityScore {
    pub fn new(value: f64, threshold: f64) -> Self {
        let value = value.clamp(0.0, 1.0);
        SpecificityScore {
            value,
            threshold,
            approved: value >= threshold,
        }
    }
}

pub trait ModelBackend: Send + Sync {
    fn name(&self) -> &'static str;

    fn extract_features(&self, event: &Event) -> Result<FeatureVector>;

    /// `attempt` is 0 for the first draft and 1 for the redraft after a gate rejection.
    fn draft_booleans(&self, event: &Event, attempt: u32) -> Result<DraftPair>;

    /// Specificity in [0,1].
    fn specificity(&self, q: &BooleanQuery) -> Result<f64>;

    /// Decide a single-match X mention. `true` means on-topic.
    fn adjudicate(&self, event: &Event, keywords: &KeywordSet, body: &str) -> Result<bool>;
}

/// Features with the backend's failure mapped to an all-`unknown` vector.
pub fn extract_features(event: &Event, backend: &dyn ModelBackend) -> (FeatureVector, Option<String>) {
    if event.description.trim().is_empty() && event.title.trim().is_empty() {
        return (FeatureVector::unknown(), None);
    }
    match backend.extract_features(event) {
        Ok(f) if f.is_complete() => (f, None),
        Ok(_) => (
            FeatureVector::unknown(),
            Some("backend returned incomplete feature vector".into()),
        ),
        Err(e) => {
            warn!("feature extraction failed for {}: {e}", event.event_id);
            (FeatureVector::unknown(), Some(format!("feature extraction failed: {e}")))
        }
    }
}

/// Score a query and apply the threshold. Invalid queries score 0.
pub fn specificity_gate(q: &BooleanQuery, backend: &dyn ModelBackend, threshold: f64) -> SpecificityScore {
    if q.validate().is_err() || q.clusters.is_empty() {
        return SpecificityScore::new(0.0, threshold);
    }
    match backend.specificity(q) {
        Ok(v) if v.is_finite() => SpecificityScore::new(v, threshold),
        _ => SpecificityScore::new(fallback_specificity(q), threshold),
    }
}

/// Outcome of the per-event drafting stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DraftOutcome {
    pub features: FeatureVector,
    pub queries: DraftPair,
    pub news_score: SpecificityScore,
    pub x_score: SpecificityScore,
    pub redrafted: bool,
    pub needs_review: bool,
    pub used_fallback: bool,
    pub warnings: Vec<String>,
}

impl DraftOutcome {
    pub fn approved(&self) -> bool {
        self.news_score.approved && self.x_score.approved
    }
}

/// Features, then booleans (one retry on malformed output, then the fallback
/// drafter), then the gate (one redraft, then a manual-review flag).
pub fn draft_event(event: &Event, backend: &dyn ModelBackend, threshold: f64) -> Result<DraftOutcome> {
    if event.title.trim().is_empty() && event.description.trim().is_empty() {
        return Err(Error::Invariant(format!("event {} has no text to draft from", event.event_id)));
    }
    let (features, feat_warning) = extract_features(event, backend);
    let mut warnings: Vec<String> = feat_warning.into_iter().collect();

    let mut used_fallback = false;
    let mut draft = |attempt: u32, warnings: &mut Vec<String>| -> Result<DraftPair> {
        for _ in 0..2 {
            match backend
                .draft_booleans(event, attempt)
                .and_then(|d| sanitize_pair(event, d))
            {
                Ok(d) => return Ok(d),
                Err(e) => warnings.push(format!("{} drafting attempt failed: {e}", backend.name())),
            }
        }
        used_fallback = true;
        sanitize_pair(event, FallbackBackend.draft_booleans(event, attempt)?)
    };

    let mut queries = draft(0, &mut warnings)?;
    let mut news_score = specificity_gate(&queries.news, backend, threshold);
    let mut x_score = specificity_gate(&queries.x, backend, threshold);
    let mut redrafted = false;
    if !(news_score.approved && x_score.approved) {
        redrafted = true;
        queries = draft(1, &mut warnings)?;
        news_score = specificity_gate(&queries.news, backend, threshold);
        x_score = specificity_gate(&queries.x, backend, threshold);
    }
    let needs_review = !(news_score.approved && x_score.approved);
    Ok(DraftOutcome {
        features,
        queries,
        news_score,
        x_score,
        redrafted,
        needs_review,
        used_fallback,
        warnings,
    })
}

/// Tokens a polymarket X boolean must not contain: the outcome words and every
/// deadline/date token of the market question.
pub fn forbidden_tokens(event: &Event) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    if event.surface != Surface::Polymarket {
        return out;
    }
    for raw in event.title.split_whitespace().chain(event.description.split_whitespace()) {
        for w in text::tokens(raw) {
            if entities::is_outcome_word(&w) || entities::is_date_token(&w) {
                out.insert(w);
            }
        }
        // ISO dates survive as a single raw token.
        let trimmed = raw.trim_matches(|c: char| !c.is_alphanumeric());
        if entities::is_date_token(trimmed) {
            out.extend(text::tokens(trimmed));
        }
    }
    out
}

/// Validate a drafted pair and scrub forbidden tokens from the polymarket X boolean.
pub fn sanitize_pair(event: &Event, pair: DraftPair) -> Result<DraftPair> {
    pair.news.validate()?;
    let forbidden = forbidden_tokens(event);
    let x_clusters: Vec<Vec<String>> = pair
        .x
        .clusters
        .into_iter()
        .map(|c| {
            c.into_iter()
                .filter(|t| !text::tokens(t).iter().any(|w| forbidden.contains(w)))
                .collect::<Vec<_>>()
        })
        .filter(|c| !c.is_empty())
        .collect();
    let x = BooleanQuery::new(QueryKind::XPermissive, x_clusters)?;
    Ok(DraftPair { news: pair.news, x })
}

/// Specificity from entity count and term rarity:
/// `1 - Π(1 - 0.5·c_i)` where `c_i` is the rarity of the broadest term in cluster `i`.
pub fn fallback_specificity(q: &BooleanQuery) -> f64 {
    if q.clusters.is_empty() {
        return 0.0;
    }
    let miss: f64 = q
        .clusters
        .iter()
        .map(|c| {
            let broadest = c
                .iter()
                .map(|t| entities::term_rarity(t))
                .fold(f64::INFINITY, f64::min);
            1.0 - 0.5 * broadest.clamp(0.0, 1.0)
        })
        .product();
    (1.0 - miss).clamp(0.0, 1.0)
}

/// Entities of an event split into anchors (non-places) and places.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EventEntities {
    pub anchors: Vec<String>,
    pub places: Vec<String>,
    pub topic_words: Vec<String>,
}

pub fn event_entities(event: &Event) -> EventEntities {
    let t = entities::tables();
    let forbidden = forbidden_tokens(event);
    let mut out = EventEntities::default();
    let text = format!("{}. {}", event.title, event.description);
    for ent in entities::extract_entities(&text) {
        if text::tokens(&ent).iter().all(|w| forbidden.contains(w)) {
            continue;
        }
        match t.place(&ent) {
            Some(p) if p.kind == entities::PlaceKind::Demonym => {
                if !out.places.contains(&p.country) {
                    out.places.push(p.country.clone());
                }
            }
            Some(_) => {
                if !out.places.iter().any(|x| x.eq_ignore_ascii_case(&ent)) {
                    out.places.push(ent);
                }
            }
            None => out.anchors.push(ent),
        }
    }
    out.topic_words = entities::content_words(&text);
    out
}

/// Places sharing the country of the first-mentioned place.
fn primary_places(places: &[String]) -> Vec<String> {
    let t = entities::tables();
    let country = |p: &str| t.place(p).map(|pl| pl.country.clone());
    let first = country(&places[0]);
    places
        .iter()
        .filter(|p| country(p) == first)
        .cloned()
        .collect()
}

/// Anchor plus its aliases and short form.
fn expand(term: &str) -> Vec<String> {
    let mut v = vec![term.to_string()];
    for a in entities::tables().aliases(term) {
        v.push(a.clone());
    }
    if let Some(s) = entities::short_form(term) {
        v.push(s);
    }
    v
}

/// Pure rule-based backend.
#[derive(Debug, Default, Clone, Copy)]
pub struct FallbackBackend;

impl FallbackBackend {
    pub fn draft_x(ents: &EventEntities, attempt: u32) -> Result<BooleanQuery> {
        let grow = |t: &str| if attempt == 0 { expand(t) } else { vec![t.to_string()] };
        let clusters: Vec<Vec<String>> = match (ents.anchors.len(), ents.places.len()) {
            (0, 0) => {
                return Err(Error::Backend("no named entities to draft from".into()));
            }
            (a, _) if a >= 2 => vec![grow(&ents.anchors[0]), grow(&ents.anchors[1])],
            (1, 0) => vec![grow(&ents.anchors[0])],
            (1, _) => vec![grow(&ents.anchors[0]), primary_places(&ents.places)],
            (_, 1) => vec![grow(&ents.places[0])],
            _ => vec![grow(&ents.places[0]), grow(&ents.places[1])],
        };
        BooleanQuery::new(QueryKind::XPermissive, clusters)
    }

    pub fn draft_news(ents: &EventEntities, category: Category, attempt: u32) -> Result<BooleanQuery> {
        let a = |i: usize| ents.anchors.get(i).map(|s| vec![s.clone()]);
        let places = (!ents.places.is_empty()).then(|| ents.places.clone());
        let topic = |i: usize| {
            let chunk: Vec<String> = ents.topic_words.iter().skip(i * 3).take(3).cloned().collect();
            (!chunk.is_empty()).then_some(chunk)
        };
        let [pad0, pad1] = category_padding(category);
        let pad = |p: &[&str]| Some(p.iter().map(|s| s.to_string()).collect::<Vec<_>>());
        let order = if attempt == 0 {
            vec![a(0), a(1), places, topic(0), a(2), a(3), topic(1), topic(2), pad(pad0), pad(pad1)]
        } else {
            vec![a(0), a(1), a(2), places, a(3), topic(0), topic(1), topic(2), pad(pad0), pad(pad1)]
        };
        let clusters: Vec<Vec<String>> = order.into_iter().flatten().take(4).collect();
        if clusters.len() < 3 {
            return Err(Error::Backend(format!(
                "only {} news clusters derivable",
                clusters.len()
            )));
        }
        BooleanQuery::new(QueryKind::NewsTight, clusters)
    }
}

/// Generic clusters used to bring a thin news boolean up to three clusters.
fn category_padding(category: Category) -> [&'static [&'static str]; 2] {
    match category {
        Category::Sports => [&["game", "match"], &["score", "result"]],
        Category::Politics => [&["government", "leader"], &["official", "statement"]],
        Category::MacroCrypto => [&["market", "price"], &["traders", "investors"]],
        Category::Other => [&["report", "statement"], &["announced", "confirmed"]],
    }
}

const SCHEDULED_WORDS: &[&str] = &[
    "draft", "election", "elections", "game", "match", "final", "finals", "kickoff", "ceremony",
    "vote", "summit", "launch", "opens", "scheduled", "semifinal", "tournament", "masters",
    "championship", "debate", "hearing", "meeting", "referendum", "verdict", "fixture", "league",
];
const UNSCHEDULED_WORDS: &[&str] = &[
    "strike", "attack", "dies", "died", "death", "crash", "flood", "floods", "earthquake",
    "shooting", "killed", "fire", "explosion", "bombing", "storm", "hurricane", "collapse",
    "arrested", "resigns", "wildfire", "tornado", "outbreak",
];
const LIVE_WORDS: &[&str] = &[
    "match", "game", "race", "ceremony", "debate", "broadcast", "live", "concert", "draft",
    "final", "finals", "semifinal", "kickoff", "fight", "tournament", "masters", "league",
];
const INSTITUTION_WORDS: &[&str] = &[
    "agency", "announced", "bank", "commission", "congress", "court", "department", "federal",
    "government", "ministry", "parliament", "pentagon", "police", "reserve", "senate", "sec",
    "regulator", "election", "electoral", "gerrymandering", "legislature",
];
const US_NATIONAL_WORDS: &[&str] = &[
    "united states", "u s", "usa", "american", "americans", "federal", "nfl", "nba", "congress",
    "pentagon", "white house", "federal reserve",
];

fn any_term(hay: &[String], words: &[&str]) -> bool {
    words.iter().any(|w| text::contains_term(hay, w))
}

impl ModelBackend for FallbackBackend {
    fn name(&self) -> &'static str {
        "fallback"
    }

    fn extract_features(&self, event: &Event) -> Result<FeatureVector> {
        let raw = format!("{} {}", event.title, event.description);
        let hay = text::tokens(&raw);
        if hay.len() < 2 {
            return Ok(FeatureVector::unknown());
        }
        let label = |cond: bool, yes: &str, no: &str| if cond { yes } else { no }.to_string();
        let is_sports = event.category == Category::Sports;
        let clock_edge = if any_term(&hay, SCHEDULED_WORDS) || (is_sports && event.surface == Surface::Polymarket) {
            "scheduled"
        } else if any_term(&hay, UNSCHEDULED_WORDS) {
            "unscheduled"
        } else {
            FeatureVector::UNKNOWN
        };
        let live_visible = label(any_term(&hay, LIVE_WORDS) || is_sports, "yes", "no");
        let institutional_source = label(any_term(&hay, INSTITUTION_WORDS), "yes", "no");

        let ents = event_entities(event);
        let t = entities::tables();
        let countries: BTreeSet<&str> = ents
            .places
            .iter()
            .filter_map(|p| t.place(p).map(|pl| pl.country.as_str()))
            .collect();
        let geographic_scope = if any_term(&hay, US_NATIONAL_WORDS) {
            "us_national"
        } else if countries.contains("United States") {
            "us_local"
        } else if !countries.is_empty() {
            "international"
        } else {
            FeatureVector::UNKNOWN
        };
        let english_hits = hay.iter().filter(|w| text::is_stopword(w)).count();
        let language_primary = if countries.iter().any(|c| matches!(*c, "Spain" | "Mexico" | "Argentina" | "Colombia" | "Peru" | "Chile")) {
            "es"
        } else if countries.iter().any(|c| *c == "France") {
            "fr"
        } else if english_hits > 0 || countries.contains("United States") {
            "en"
        } else {
            FeatureVector::UNKNOWN
        };
        Ok(FeatureVector {
            clock_edge: clock_edge.to_string(),
            live_visible,
            institutional_source,
            geographic_scope: geographic_scope.to_string(),
            language_primary: language_primary.to_string(),
        })
    }

    fn draft_booleans(&self, event: &Event, attempt: u32) -> Result<DraftPair> {
        let ents = event_entities(event);
        let x = Self::draft_x(&ents, attempt)?;
        let news = Self::draft_news(&ents, event.category, attempt)?;
        Ok(DraftPair { news, x })
    }

    fn specificity(&self, q: &BooleanQuery) -> Result<f64> {
        Ok(fallback_specificity(q))
    }

    /// On-topic iff the single matched keyword co-occurs with one of the event's
    /// topic words that is not itself a keyword.
    fn adjudicate(&self, event: &Event, keywords: &KeywordSet, body: &str) -> Result<bool> {
        let hay = text::tokens(body);
        let matched = keywords.matches(&hay);
        if matched.is_empty() {
            return Ok(false);
        }
        let ents = event_entities(event);
        // Keywords arrive normalized, so entity-ness is judged against the event's own names.
        let names: Vec<Vec<String>> = ents
            .anchors
            .iter()
            .chain(&ents.places)
            .map(|n| text::tokens(n))
            .collect();
        let entity_match = matched.iter().any(|m| {
            names.iter().any(|n| text::contains_term(n, m)) || entities::term_rarity(m) >= 1.0
        });
        let event_word = ents
            .topic_words
            .iter()
            .filter(|w| !keywords.contains(w))
            .any(|w| text::contains_term(&hay, w));
        Ok(entity_match && event_word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Timestamp;

    fn event(surface: Surface, category: Category, title: &str, desc: &str) -> Event {
        Event {
            event_id: "e1".into(),
            surface,
            title: title.into(),
            description: desc.into(),
            category,
            t_e: Timestamp(1_777_000_000_000),
            attention_prior: 1.0,
            source_key: "k".into(),
            event_group: None,
        }
    }

    fn terms(q: &BooleanQuery) -> Vec<String> {
        q.terms().map(str::to_string).collect()
    }

    #[test]
    fn khamenei_market_drops_outcome_and_deadline() {
        let e = event(
            Surface::Polymarket,
            Category::Politics,
            "Khamenei out by Feb 28?",
            "Will Khamenei be out by Feb 28?",
        );
        let d = FallbackBackend.draft_booleans(&e, 0).unwrap();
        let d = sanitize_pair(&e, d).unwrap();
        let xt = terms(&d.x);
        assert!(xt.iter().any(|t| t.contains("Khamenei")));
        for t in &xt {
            let toks = text::tokens(t);
            for bad in ["feb", "28", "out", "remain"] {
                assert!(!toks.iter().any(|w| w == bad), "{t} contains {bad}");
            }
        }
    }

    #[test]
    fn sanitize_scrubs_remote_output() {
        let e = event(Surface::Polymarket, Category::Politics, "Khamenei out by Feb 28?", "Will Khamenei be out by Feb 28?");
        let pair = DraftPair {
            news: BooleanQuery::new(QueryKind::NewsTight, vec![vec!["Khamenei".into()], vec!["Iran".into()], vec!["leader".into()]]).unwrap(),
            x: BooleanQuery::new(QueryKind::XPermissive, vec![vec!["Khamenei".into(), "Khamenei out".into()], vec!["Feb 28".into()]]).unwrap(),
        };
        let clean = sanitize_pair(&e, pair).unwrap();
        assert_eq!(clean.x.clusters, vec![vec!["Khamenei".to_string()]]);
    }

    #[test]
    fn single_entity_gives_minimal_query() {
        let e = event(Surface::Wcep, Category::Other, "Zelgravia", "Zelgravia announces nothing much happening today.");
        let x = FallbackBackend::draft_x(&event_entities(&e), 0).unwrap();
        assert_eq!(x.clusters, vec![vec!["Zelgravia".to_string()]]);
    }

    #[test]
    fn matchup_expands_with_cities() {
        let e = event(Surface::Polymarket, Category::Sports, "Mavericks v Lakers game", "Mavericks v Lakers game");
        let x = FallbackBackend.draft_booleans(&e, 0).unwrap().x;
        assert_eq!(
            x.clusters,
            vec![
                vec!["Mavericks".to_string(), "Dallas".to_string()],
                vec!["Lakers".to_string(), "Los Angeles".to_string()],
            ]
        );
    }

    #[test]
    fn nfl_draft_features() {
        let e = event(
            Surface::Wcep,
            Category::Sports,
            "2026 NFL draft",
            "The 2026 NFL draft opens in Pittsburgh, Pennsylvania, United States.",
        );
        let f = FallbackBackend.extract_features(&e).unwrap();
        assert_eq!(f.geographic_scope, "us_national");
        assert_eq!(f.clock_edge, "scheduled");
    }

    #[test]
    fn soccer_market_features() {
        let e = event(
            Surface::Polymarket,
            Category::Sports,
            "Real Madrid 2026-02-25",
            "Will Real Madrid win on 2026-02-25?",
        );
        let f = FallbackBackend.extract_features(&e).unwrap();
        assert_eq!(f.live_visible, "yes");
        assert_eq!(f.institutional_source, "no");
    }

    #[test]
    fn empty_event_features_unknown() {
        let e = event(Surface::Wcep, Category::Other, "", "");
        let (f, _) = extract_features(&e, &FallbackBackend);
        assert_eq!(f, FeatureVector::unknown());
        let e = event(Surface::Wcep, Category::Other, "", "x");
        assert_eq!(FallbackBackend.extract_features(&e).unwrap(), FeatureVector::unknown());
    }

    #[test]
    fn gate_examples() {
        let two_proper = BooleanQuery::new(
            QueryKind::XPermissive,
            vec![vec!["Mavericks".into()], vec!["Lakers".into()]],
        )
        .unwrap();
        let s = specificity_gate(&two_proper, &FallbackBackend, DEFAULT_SPECIFICITY_THRESHOLD);
        assert!(s.approved);
        assert!((s.value - 0.75).abs() < 1e-12);

        let empty = BooleanQuery { kind: QueryKind::XPermissive, clusters: vec![] };
        let s = specificity_gate(&empty, &FallbackBackend, DEFAULT_SPECIFICITY_THRESHOLD);
        assert_eq!(s.value, 0.0);
        assert!(!s.approved);

        let stop = BooleanQuery::new(QueryKind::XPermissive, vec![vec!["the".into(), "and".into()]]).unwrap();
        let s = specificity_gate(&stop, &FallbackBackend, DEFAULT_SPECIFICITY_THRESHOLD);
        assert!(s.value < DEFAULT_SPECIFICITY_THRESHOLD);
    }

    #[test]
    fn fallback_is_pure() {
        let e = event(Surface::Wcep, Category::Politics, "2026 Antiguan election",
            "Antigua and Barbuda holds a general election; U.S. observers report a calm vote.");
        let a = draft_event(&e, &FallbackBackend, 0.5).unwrap();
        let b = draft_event(&e, &FallbackBackend, 0.5).unwrap();
        assert_eq!(a, b);
        assert!(a.approved());
    }

    #[test]
    fn no_text_is_an_error() {
        let e = event(Surface::Wcep, Category::Other, " ", "");
        assert!(draft_event(&e, &FallbackBackend, 0.5).is_err());
    }

    struct Broken;
    impl ModelBackend for Broken {
        fn name(&self) -> &'static str { "broken" }
        fn extract_features(&self, _: &Event) -> Result<FeatureVector> { Err(Error::Backend("down".into())) }
        fn draft_booleans(&self, _: &Event, _: u32) -> Result<DraftPair> { Err(Error::Backend("garbled".into())) }
        fn specificity(&self, _: &BooleanQuery) -> Result<f64> { Err(Error::Backend("down".into())) }
        fn adjudicate(&self, _: &Event, _: &KeywordSet, _: &str) -> Result<bool> { Err(Error::Backend("down".into())) }
    }

    #[test]
    fn broken_backend_falls_back() {
        let e = event(Surface::Polymarket, Category::Sports, "Mavericks v Lakers game", "Mavericks v Lakers game tonight in Dallas");
        let out = draft_event(&e, &Broken, 0.5).unwrap();
        assert!(out.used_fallback);
        assert_eq!(out.features, FeatureVector::unknown());
        assert_eq!(out.warnings.iter().filter(|w| w.contains("drafting attempt")).count(), 2);
        assert!(out.approved());
    }
}
