//! Word-level normalization shared by the verifier and the drafting heuristics.

/// Case-fold, turn punctuation into spaces and collapse whitespace.
///
/// Apostrophes are dropped rather than split so "Macron's" folds to "macrons".
pub fn normalize(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut pending_space = false;
    for ch in s.chars() {
        if ch == '\'' || ch == '\u{2019}' {
            continue;
        }
        if ch.is_alphanumeric() {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.extend(ch.to_lowercase().filter(|c| c.is_alphanumeric()));
        } else {
            pending_space = true;
        }
    }
    out
}

pub fn tokens(s: &str) -> Vec<String> {
    normalize(s).split(' ').filter(|t| !t.is_empty()).map(str::to_string).collect()
}

/// Whole-word, contiguous-sequence match of `term` inside pre-tokenized `haystack`.
pub fn contains_term(haystack: &[String], term: &str) -> bool {
    let needle = tokens(term);
    if needle.is_empty() || needle.len() > haystack.len() {
        return false;
    }
    haystack
        .windows(needle.len())
        .any(|w| w.iter().zip(&needle).all(|(a, b)| a == b))
}

pub fn is_stopword(word: &str) -> bool {
    STOPWORDS.binary_search(&word).is_ok()
}

/// Sorted English function words.
pub const STOPWORDS: &[&str] = &[
    "a", "about", "above", "after", "again", "against", "all", "also", "am", "amid", "an", "and",
    "any", "are", "as", "at", "be", "been", "before", "being", "below", "between", "both", "but",
    "by", "can", "could", "did", "do", "does", "during", "each", "few", "for", "from", "further",
    "had", "has", "have", "having", "he", "her", "here", "hers", "him", "his", "how", "i", "if",
    "in", "into", "is", "it", "its", "itself", "just", "many", "me", "more", "most", "much", "my",
    "near", "new", "no", "nor", "not", "now", "of", "off", "on", "once", "one", "only", "or",
    "other", "our", "out", "over", "own", "same", "says", "she", "should", "since", "so", "some",
    "such", "than", "that", "the", "their", "them", "then", "there", "these", "they", "this",
    "those", "through", "to", "too", "two", "under", "until", "up", "upon", "very", "via", "was",
    "we", "were", "what", "when", "where", "which", "while", "who", "whom", "why", "will", "with",
    "within", "would", "you", "your",
];

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn stopwords_sorted() {
        let mut s = STOPWORDS.to_vec();
        s.sort_unstable();
        s.dedup();
        assert_eq!(s, STOPWORDS);
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(normalize("The U.S. Federal-Reserve, today!"), "the u s federal reserve today");
        assert_eq!(normalize("Macron's"), "macrons");
        assert_eq!(normalize("  "), "");
    }

    #[test]
    fn whole_word_matching() {
        let hay = tokens("Los Angeles Lakers beat the Mavericks");
        assert!(contains_term(&hay, "Lakers"));
        assert!(contains_term(&hay, "los angeles"));
        assert!(!contains_term(&hay, "Laker"));
        assert!(!contains_term(&hay, "Angeles Los"));
        assert!(!contains_term(&hay, "!!"));
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(s in "\\PC{0,60}") {
            let once = normalize(&s);
            prop_assert_eq!(normalize(&once), once.clone());
        }
    }
}
