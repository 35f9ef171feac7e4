//! Rule-based named-entity extraction backed by the bundled data tables.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::text;

const GAZETTEER_TSV: &str = include_str!("../../data/gazetteer.tsv");
const ALIASES_TSV: &str = include_str!("../../data/aliases.tsv");
const COMMON_WORDS_TSV: &str = include_str!("../../data/common_words.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaceKind {
    Country,
    State,
    City,
    Region,
    Demonym,
}

#[derive(Debug, Clone)]
pub struct Place {
    pub name: String,
    pub kind: PlaceKind,
    pub country: String,
}

pub struct Tables {
    places: HashMap<String, Place>,
    aliases: HashMap<String, Vec<String>>,
    rarity: HashMap<String, f64>,
}

fn data_lines(s: &str) -> impl Iterator<Item = Vec<&str>> {
    s.lines()
        .map(str::trim_end)
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split('\t').collect())
}

pub fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut places = HashMap::new();
        for cols in data_lines(GAZETTEER_TSV) {
            let [name, kind, country] = cols[..] else {
                continue;
            };
            let kind = match kind {
                "country" => PlaceKind::Country,
                "state" => PlaceKind::State,
                "city" => PlaceKind::City,
                "region" => PlaceKind::Region,
                _ => PlaceKind::Demonym,
            };
            places.insert(
                text::normalize(name),
                Place {
                    name: name.to_string(),
                    kind,
                    country: country.to_string(),
                },
            );
        }
        let mut aliases = HashMap::new();
        for cols in data_lines(ALIASES_TSV) {
            if cols.len() == 2 {
                aliases.insert(
                    text::normalize(cols[0]),
                    cols[1].split('|').map(|a| a.trim().to_string()).collect(),
                );
            }
        }
        let mut rarity = HashMap::new();
        for cols in data_lines(COMMON_WORDS_TSV) {
            if let [w, r] = cols[..] {
                if let Ok(v) = r.trim().parse::<f64>() {
                    rarity.insert(w.to_string(), v);
                }
            }
        }
        Tables { places, aliases, rarity }
    })
}

impl Tables {
    pub fn place(&self, name: &str) -> Option<&Place> {
        self.places.get(&text::normalize(name))
    }

    pub fn aliases(&self, name: &str) -> &[String] {
        self.aliases
            .get(&text::normalize(name))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn common_rarity(&self, word: &str) -> Option<f64> {
        self.rarity.get(word).copied()
    }

    /// Countries whose names are listed, excluding demonyms.
    pub fn country_names(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self
            .places
            .values()
            .filter(|p| p.kind == PlaceKind::Country && p.name == p.country)
            .map(|p| p.name.as_str())
            .collect();
        v.sort_unstable();
        v
    }
}

pub const MONTHS: &[&str] = &[
    "january", "february", "march", "april", "may", "june", "july", "august", "september",
    "october", "november", "december", "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep",
    "sept", "oct", "nov", "dec",
];

pub const WEEKDAYS: &[&str] = &[
    "monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday",
];

/// Words that express a market outcome rather than the entity it is about.
pub const OUTCOME_WORDS: &[&str] = &[
    "above", "approve", "approved", "below", "beat", "beats", "default", "defeat", "end", "ends",
    "exit", "fall", "falls", "happen", "happens", "hit", "hits", "leave", "leaves", "lose",
    "loses", "no", "ousted", "out", "pass", "passes", "reach", "reaches", "remain", "remains",
    "removed", "resign", "resigns", "rise", "rises", "stay", "stays", "win", "wins", "won", "yes",
];

/// Title words stripped from the front of an entity ("President X" → "X").
const TITLE_WORDS: &[&str] = &[
    "ayatollah", "chancellor", "dr", "former", "general", "governor", "king", "minister", "mr",
    "mrs", "ms", "pope", "president", "prime", "queen", "senator", "supreme", "leader",
];

/// Trailing words that mark an institution rather than a person.
const GENERIC_TAILS: &[&str] = &[
    "airport", "association", "bank", "club", "committee", "company", "corporation", "council",
    "fc", "high", "hospital", "inc", "league", "ministry", "party", "school", "team", "university",
    "championship", "cup", "open", "election", "draft",
];

const CONNECTORS: &[&str] = &["of", "de", "del", "la", "and", "du", "van", "von", "da"];

/// Sentence-initial capitalized words that never start an entity.
const LEADING_NOISE: &[&str] = &[
    "a", "an", "at", "after", "amid", "as", "during", "following", "for", "in", "it", "on", "the",
    "this", "will", "with", "which", "who", "what", "when", "how", "does", "is", "are", "can",
    "death", "breaking",
];

pub fn is_date_token(word: &str) -> bool {
    let w = word.to_lowercase();
    let w = w.trim_matches(|c: char| !c.is_alphanumeric());
    if MONTHS.contains(&w) || WEEKDAYS.contains(&w) {
        return true;
    }
    // Years, day numbers, ordinals, ISO dates.
    let digits = w.chars().filter(|c| c.is_ascii_digit()).count();
    if digits > 0 {
        let rest: String = w.chars().filter(|c| !c.is_ascii_digit()).collect();
        return rest.is_empty()
            || ["st", "nd", "rd", "th"].contains(&rest.as_str())
            || rest.chars().all(|c| c == '-' || c == '/');
    }
    false
}

pub fn is_outcome_word(word: &str) -> bool {
    OUTCOME_WORDS.contains(&word.to_lowercase().as_str())
}

/// A raw token with its surface form and whether punctuation ended the phrase after it.
#[derive(Debug, Clone)]
struct Tok {
    word: String,
    breaks_after: bool,
}

fn split_tokens(s: &str) -> Vec<Tok> {
    let mut out = Vec::new();
    for raw in s.split(|c: char| c.is_whitespace() || c == '/') {
        if raw.is_empty() {
            continue;
        }
        let trimmed_end = raw.trim_end_matches(|c: char| {
            matches!(c, ',' | ';' | ':' | '!' | '?' | ')' | ']' | '"' | '\u{201d}' | '.')
        });
        let mut word = trimmed_end
            .trim_start_matches(['(', '[', '"', '\u{201c}'])
            .to_string();
        // Keep dotted abbreviations ("U.S.") whole.
        let mut breaks_after = trimmed_end.len() != raw.len();
        if raw.ends_with('.') && is_dotted_abbrev(raw) {
            word = raw.trim_start_matches(['(', '[', '"']).to_string();
            breaks_after = false;
        }
        // Possessives belong to the entity before them.
        if let Some(stem) = word.strip_suffix("'s").or_else(|| word.strip_suffix("\u{2019}s")) {
            word = stem.to_string();
            breaks_after = true;
        }
        // En/em dashes between names ("Pakistan–Afghanistan") split into two entities.
        let pieces: Vec<&str> = word.split(['\u{2013}', '\u{2014}']).collect();
        let n = pieces.len();
        for (i, p) in pieces.into_iter().enumerate() {
            if p.is_empty() {
                continue;
            }
            out.push(Tok {
                word: p.to_string(),
                breaks_after: if i + 1 == n { breaks_after } else { true },
            });
        }
    }
    out
}

fn is_dotted_abbrev(s: &str) -> bool {
    let core = s.trim_end_matches('.');
    !core.is_empty()
        && core.split('.').all(|p| p.len() == 1 && p.chars().all(|c| c.is_ascii_uppercase()))
}

fn is_capitalized(word: &str) -> bool {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) if c.is_uppercase() => true,
        // Mixed tokens like "iPhone" or "eSports" count; pure lowercase does not.
        Some(c) if c.is_alphanumeric() => word.chars().skip(1).any(|c| c.is_uppercase()),
        _ => false,
    }
}

/// Named entities in order of first appearance, deduplicated case-insensitively.
pub fn extract_entities(s: &str) -> Vec<String> {
    let toks = split_tokens(s);
    let mut entities: Vec<String> = Vec::new();
    let mut current: Vec<String> = Vec::new();

    let flush = |current: &mut Vec<String>, entities: &mut Vec<String>| {
        // Drop trailing connectors.
        while current
            .last()
            .is_some_and(|w| CONNECTORS.contains(&w.to_lowercase().as_str()))
        {
            current.pop();
        }
        // Drop leading noise and titles.
        while current.first().is_some_and(|w| {
            let l = w.to_lowercase();
            LEADING_NOISE.contains(&l.as_str())
                || TITLE_WORDS.contains(&l.as_str())
                || CONNECTORS.contains(&l.as_str())
        }) {
            current.remove(0);
        }
        if !current.is_empty() {
            let ent = current.join(" ");
            if !entities.iter().any(|e| e.eq_ignore_ascii_case(&ent)) {
                entities.push(ent);
            }
        }
        current.clear();
    };

    for tok in &toks {
        let w = tok.word.as_str();
        let lower = w.to_lowercase();
        let is_conn = CONNECTORS.contains(&lower.as_str()) && !current.is_empty();
        let is_vs = matches!(lower.as_str(), "v" | "vs" | "vs." | "v.");
        if is_vs || is_date_token(w) {
            flush(&mut current, &mut entities);
            continue;
        }
        if is_capitalized(w) || is_conn {
            current.push(w.to_string());
        } else {
            flush(&mut current, &mut entities);
        }
        if tok.breaks_after {
            flush(&mut current, &mut entities);
        }
    }
    flush(&mut current, &mut entities);
    entities
}

/// Lowercase content words (non-stopword, length ≥ 4, not dates or outcomes) in order.
pub fn content_words(s: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for tok in split_tokens(s) {
        if is_capitalized(&tok.word) || is_date_token(&tok.word) {
            continue;
        }
        for w in text::tokens(&tok.word) {
            if w.len() >= 4
                && !text::is_stopword(&w)
                && !is_outcome_word(&w)
                && w.chars().all(|c| c.is_alphabetic())
                && !out.contains(&w)
            {
                out.push(w);
            }
        }
    }
    out
}

/// Short form of a multiword entity: institution names keep their head word,
/// personal names keep the surname.
pub fn short_form(entity: &str) -> Option<String> {
    let words: Vec<&str> = entity.split_whitespace().collect();
    if words.len() < 2 {
        return None;
    }
    let last = words[words.len() - 1].to_lowercase();
    let candidate = if GENERIC_TAILS.contains(&last.as_str())
        || words.iter().any(|w| GENERIC_TAILS.contains(&w.to_lowercase().as_str()))
    {
        words[0]
    } else if words.iter().any(|w| CONNECTORS.contains(&w.to_lowercase().as_str())) {
        return None;
    } else {
        words[words.len() - 1]
    };
    let norm = text::normalize(candidate);
    if norm.len() < 4 || text::is_stopword(&norm) || tables().place(candidate).is_some() {
        return None;
    }
    Some(candidate.to_string())
}

/// Rarity of a single term in [0,1]; proper nouns are maximally specific.
pub fn term_rarity(term: &str) -> f64 {
    let words: Vec<&str> = term.split_whitespace().collect();
    if words.is_empty() {
        return 0.0;
    }
    let t = tables();
    words
        .iter()
        .map(|w| {
            let norm = text::normalize(w);
            if norm.is_empty() || text::is_stopword(&norm) {
                0.0
            } else if let Some(r) = t.common_rarity(&norm) {
                r
            } else if is_capitalized(w) || w.chars().any(|c| c.is_ascii_digit()) {
                1.0
            } else {
                0.6
            }
        })
        .fold(0.0, f64::max)
}
