//! AND-of-OR boolean queries and their provider query-string form.
//!
//! Grammar of the rendered form:
//!
//! ```text
//! query   := group ( " AND " group )*
//! group   := "(" term ( " OR " term )* ")"
//! term    := '"' <any chars except '"'> '"'
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryKind {
    NewsTight,
    XPermissive,
    /// Broadening-ladder levels; only the term/cluster invariants apply.
    Probe,
}

impl QueryKind {
    pub fn cluster_bounds(self) -> (usize, usize) {
        match self {
            QueryKind::NewsTight => (3, 4),
            QueryKind::XPermissive => (1, 2),
            QueryKind::Probe => (1, usize::MAX),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BooleanQuery {
    pub kind: QueryKind,
    pub clusters: Vec<Vec<String>>,
}

impl BooleanQuery {
    /// Build and validate; terms are trimmed and duplicate terms inside an OR-set removed.
    pub fn new(kind: QueryKind, clusters: Vec<Vec<String>>) -> Result<Self> {
        let clusters = clusters
            .into_iter()
            .map(|c| {
                let mut out: Vec<String> = Vec::with_capacity(c.len());
                for t in c {
                    let t = t.trim().to_string();
                    if !out.iter().any(|o| o.eq_ignore_ascii_case(&t)) {
                        out.push(t);
                    }
                }
                out
            })
            .collect();
        let q = BooleanQuery { kind, clusters };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.kind.cluster_bounds();
        let n = self.clusters.len();
        if n < lo || n > hi {
            return Err(Error::Invariant(format!(
                "{:?} query needs {lo}..={hi} clusters, got {n}",
                self.kind
            )));
        }
        for c in &self.clusters {
            if c.is_empty() {
                return Err(Error::Invariant("empty OR-set".into()));
            }
            for t in c {
                if t.trim().is_empty() {
                    return Err(Error::Invariant("empty term".into()));
                }
                if t.contains('"') {
                    return Err(Error::Invariant(format!("term {t:?} contains a quote")));
                }
            }
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.clusters.iter().flatten().map(String::as_str)
    }

    pub fn render(&self) -> String {
        self.clusters
            .iter()
            .map(|c| {
                let inner: Vec<String> = c.iter().map(|t| format!("\"{t}\"")).collect();
                format!("({})", inner.join(" OR "))
            })
            .collect::<Vec<_>>()
            .join(" AND ")
    }

    pub fn parse(kind: QueryKind, s: &str) -> Result<Self> {
        let mut p = Parser { s: s.as_bytes(), src: s, i: 0 };
        let mut clusters = vec![p.group()?];
        loop {
            p.skip_ws();
            if p.done() {
                break;
            }
            p.keyword("AND")?;
            clusters.push(p.group()?);
        }
        let q = BooleanQuery { kind, clusters };
        q.validate()?;
        Ok(q)
    }

    /// Reference matching semantics: every cluster has at least one term occurring
    /// case-insensitively as a substring of `text`.
    pub fn matches(&self, text: &str) -> bool {
        self.matches_lowercase(&text.to_lowercase())
    }

    /// Same as [`matches`](Self::matches) for text that is already lowercased.
    pub fn matches_lowercase(&self, hay: &str) -> bool {
        self.clusters
            .iter()
            .all(|c| c.iter().any(|t| hay.contains(&t.to_lowercase())))
    }
}

impl fmt::Display for BooleanQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    src: &'a str,
    i: usize,
}

impl Parser<'_> {
    fn done(&self) -> bool {
        self.i >= self.s.len()
    }

    fn skip_ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {} of {:?}", self.i, self.src))
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        self.skip_ws();
        if self.s.get(self.i) == Some(&b) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected {:?}", b as char)))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        self.skip_ws();
        if self.src[self.i..].starts_with(kw) {
            self.i += kw.len();
            Ok(())
        } else {
            Err(self.err(&format!("expected {kw}")))
        }
    }

    fn term(&mut self) -> Result<String> {
        self.expect(b'"')?;
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i] != b'"' {
            self.i += 1;
        }
        if self.done() {
            return Err(self.err("unterminated term"));
        }
        let t = self.src[start..self.i].to_string();
        self.i += 1;
        Ok(t)
    }

    fn group(&mut self) -> Result<Vec<String>> {
        self.expect(b'(')?;
        let mut terms = vec![self.term()?];
        loop {
            self.skip_ws();
            if self.s.get(self.i) == Some(&b')') {
                self.i += 1;
                return Ok(terms);
            }
            self.keyword("OR")?;
            terms.push(self.term()?);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(kind: QueryKind, c: &[&[&str]]) -> BooleanQuery {
        BooleanQuery::new(
            kind,
            c.iter().map(|g| g.iter().map(|s| s.to_string()).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn renders_provider_syntax() {
        let x = q(QueryKind::XPermissive, &[&["Mavericks", "Dallas"], &["Lakers", "Los Angeles"]]);
        assert_eq!(
            x.render(),
            r#"("Mavericks" OR "Dallas") AND ("Lakers" OR "Los Angeles")"#
        );
    }

    #[test]
    fn cluster_bounds_enforced() {
        let one: Vec<Vec<String>> = vec![vec!["a".into()]];
        assert!(BooleanQuery::new(QueryKind::NewsTight, one.clone()).is_err());
        assert!(BooleanQuery::new(QueryKind::XPermissive, one).is_ok());
        let three = vec![vec!["a".to_string()]; 3];
        assert!(BooleanQuery::new(QueryKind::XPermissive, three.clone()).is_err());
        assert!(BooleanQuery::new(QueryKind::NewsTight, three).is_ok());
        assert!(BooleanQuery::new(QueryKind::XPermissive, vec![vec![]]).is_err());
        assert!(BooleanQuery::new(QueryKind::XPermissive, vec![vec!["  ".into()]]).is_err());
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(BooleanQuery::parse(QueryKind::XPermissive, r#"("a" OR "b""#).is_err());
        assert!(BooleanQuery::parse(QueryKind::XPermissive, r#"("a") OR ("b")"#).is_err());
        assert!(BooleanQuery::parse(QueryKind::XPermissive, "").is_err());
    }

    #[test]
    fn matching_semantics() {
        let x = q(QueryKind::XPermissive, &[&["Mavericks", "Dallas"], &["Lakers"]]);
        assert!(x.matches("dallas hosts the LAKERS tonight"));
        assert!(!x.matches("Dallas hosts Boston"));
    }

    fn arb_query() -> impl Strategy<Value = BooleanQuery> {
        let term = "[A-Za-z0-9][A-Za-z0-9 .&'-]{0,12}[A-Za-z0-9]";
        proptest::collection::vec(proptest::collection::vec(term, 1..4), 1..5).prop_map(|c| {
            BooleanQuery::new(QueryKind::Probe, c).expect("generated query is valid")
        })
    }

    proptest! {
        #[test]
        fn render_parse_identity(query in arb_query()) {
            let back = BooleanQuery::parse(QueryKind::Probe, &query.render()).unwrap();
            prop_assert_eq!(back, query);
        }
    }
}
