//! Progressive broadening of a permissive boolean, used by the coverage probe.
//!
//! Each level drops one AND-cluster or adds one OR-term, so under substring
//! matching every level matches a superset of the level before it. When the
//! drafted query carries a cluster made only of place names, the ladder ends at
//! that cluster alone (the country-only query). Otherwise no pure-country query
//! can contain the drafted one; the last level is then the surviving anchor
//! cluster widened with the event's country terms.

use super::entities::{self, PlaceKind};
use super::query::{BooleanQuery, QueryKind};
use super::{event_entities, FallbackBackend, ModelBackend};
use crate::error::Result;
use crate::model::Event;

pub const DEFAULT_LEVELS: usize = 5;

fn is_geo_cluster(c: &[String]) -> bool {
    let t = entities::tables();
    !c.is_empty() && c.iter().all(|term| t.place(term).is_some())
}

fn has_term(c: &[String], term: &str) -> bool {
    c.iter().any(|t| t.eq_ignore_ascii_case(term))
}

/// Country terms for an event, falling back to its geographic-scope label.
pub fn country_terms(event: &Event) -> Vec<String> {
    let t = entities::tables();
    let mut out: Vec<String> = Vec::new();
    for p in event_entities(event).places {
        if let Some(place) = t.place(&p) {
            let name = if place.kind == PlaceKind::Region {
                place.name.clone()
            } else {
                place.country.clone()
            };
            if !has_term(&out, &name) {
                out.push(name);
            }
        }
    }
    if out.is_empty() {
        let scope = FallbackBackend
            .extract_features(event)
            .map(|f| f.geographic_scope)
            .unwrap_or_default();
        out = match scope.as_str() {
            "us_national" | "us_local" => vec!["United States".into(), "U.S.".into()],
            "" | "unknown" => vec!["world".into()],
            other => vec![other.replace('_', " ")],
        };
    }
    out
}

const REGIONS: &[&str] = &[
    "Asia", "Europe", "Africa", "Middle East", "Latin America", "South Asia", "Caribbean",
    "North America", "Oceania",
];

pub fn broaden_ladder(x: &BooleanQuery, event: &Event, levels: usize) -> Result<Vec<BooleanQuery>> {
    x.validate()?;
    let levels = levels.max(1);
    let mut clusters = x.clusters.clone();
    let mut out = vec![BooleanQuery::new(QueryKind::Probe, clusters.clone())?];
    if levels == 1 {
        return Ok(out);
    }

    let geo: Vec<String> = country_terms(event);
    let ents = event_entities(event);
    let mut topic_pool: Vec<String> = ents.topic_words.clone();
    topic_pool.extend(ents.anchors.iter().filter_map(|a| entities::short_form(a)));
    let mut geo_pool: Vec<String> = geo.clone();
    geo_pool.extend(REGIONS.iter().map(|s| s.to_string()));

    let steps = levels - 1;
    let geo_idx = clusters.iter().position(|c| is_geo_cluster(c));

    // Which clusters must be dropped, and (without a geo cluster) the final geo-widening step.
    let (keep_idx, needs_geo_add) = match geo_idx {
        Some(g) => (g, false),
        None => (0, true),
    };
    let drops = clusters.len() - 1;
    let required = drops + usize::from(needs_geo_add);
    let widens = steps.saturating_sub(required);

    let next_unused = |pool: &mut Vec<String>, c: &[Vec<String>]| -> Option<String> {
        while !pool.is_empty() {
            let t = pool.remove(0);
            if !c.iter().any(|cl| has_term(cl, &t)) {
                return Some(t);
            }
        }
        None
    };

    let push = |clusters: &Vec<Vec<String>>, out: &mut Vec<BooleanQuery>| -> Result<()> {
        out.push(BooleanQuery::new(QueryKind::Probe, clusters.clone())?);
        Ok(())
    };

    // Widening first: anchor clusters take topic words, geo-only queries take regions.
    for _ in 0..widens {
        let anchor_target = (0..clusters.len()).find(|&i| Some(i) != geo_idx);
        let widened = match anchor_target {
            Some(i) => match next_unused(&mut topic_pool, &clusters) {
                Some(t) => {
                    clusters[i].push(t);
                    true
                }
                None => false,
            },
            None => false,
        };
        if !widened {
            let target = geo_idx.unwrap_or(0);
            match next_unused(&mut geo_pool, &clusters) {
                Some(t) => clusters[target].push(t),
                None => break,
            }
        }
        push(&clusters, &mut out)?;
    }

    // Drop every cluster except the one we keep, last first.
    let mut keep = keep_idx;
    while clusters.len() > 1 && out.len() < levels {
        let victim = (0..clusters.len()).rev().find(|&i| i != keep).expect("len > 1");
        clusters.remove(victim);
        if victim < keep {
            keep -= 1;
        }
        push(&clusters, &mut out)?;
    }

    if needs_geo_add && out.len() < levels {
        let missing: Vec<String> = geo.iter().filter(|g| !has_term(&clusters[0], g)).cloned().collect();
        if missing.is_empty() {
            if let Some(t) = next_unused(&mut geo_pool, &clusters) {
                clusters[0].push(t);
            }
        } else {
            clusters[0].extend(missing);
        }
        push(&clusters, &mut out)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Category, Surface, Timestamp};

    fn ev(title: &str, desc: &str) -> Event {
        Event {
            event_id: "e".into(),
            surface: Surface::Wcep,
            title: title.into(),
            description: desc.into(),
            category: Category::Politics,
            t_e: Timestamp(0),
            attention_prior: 0.0,
            source_key: "k".into(),
            event_group: None,
        }
    }

    #[test]
    fn markazi_ladder_ends_country_only() {
        let e = ev(
            "Markazi High School strike",
            "A drone strike hits the Markazi High School in northwestern Pakistan, killing several students; U.S. officials condemn the attack.",
        );
        let x = FallbackBackend.draft_booleans(&e, 0).unwrap().x;
        let ladder = broaden_ladder(&x, &e, 5).unwrap();
        assert_eq!(ladder.len(), 5);
        assert_eq!(ladder[0].clusters, x.clusters);
        assert_eq!(ladder[4].clusters, vec![vec!["Pakistan".to_string()]]);
    }

    #[test]
    fn one_level_is_identity() {
        let e = ev("Mavericks v Lakers", "Mavericks v Lakers game");
        let x = FallbackBackend.draft_booleans(&e, 0).unwrap().x;
        let ladder = broaden_ladder(&x, &e, 1).unwrap();
        assert_eq!(ladder.len(), 1);
        assert_eq!(ladder[0].clusters, x.clusters);
    }

    #[test]
    fn every_level_changes_the_query() {
        let e = ev("Mavericks v Lakers", "Mavericks v Lakers game in Dallas, Texas");
        let x = FallbackBackend.draft_booleans(&e, 0).unwrap().x;
        let ladder = broaden_ladder(&x, &e, 5).unwrap();
        assert_eq!(ladder.len(), 5);
        for w in ladder.windows(2) {
            assert_ne!(w[0].clusters, w[1].clusters);
            assert!(w[1].clusters.len() <= w[0].clusters.len());
        }
        assert_eq!(ladder[4].clusters.len(), 1);
        assert!(has_term(&ladder[4].clusters[0], "United States"));
    }
}
