//! Tokenization and stopword filtering.
//!
//! Tokens are maximal runs of ASCII alphabetic characters, lowercased.
//! Everything else (digits, punctuation, apostrophes, whitespace) is a
//! separator, so "computer's" yields ["computer", "s"] and "3-D" yields
//! ["d"]. Filtering happens on stems: a stopword list is tokenized and
//! stemmed with the same pipeline, and a token is dropped when its stem
//! is in that set.

use std::collections::HashSet;

use super::porter::stem;

/// Splits `text` into lowercase alphabetic tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in text.chars() {
        if ch.is_ascii_alphabetic() {
            current.push(ch.to_ascii_lowercase());
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Stemmed stopword set. Built from a word list; membership is tested on
/// stems so that inflected forms of a stop word are dropped too.
#[derive(Debug, Clone, Default)]
pub struct Stopwords {
    stems: HashSet<String>,
}

impl Stopwords {
    /// Empty set; every token passes.
    pub fn none() -> Self {
        Self::default()
    }

    /// The built-in standard English list (570 entries).
    pub fn standard() -> Self {
        Self::from_word_list(include_str!("../../data/stopwords_en.txt"))
    }

    /// Parses one stopword entry per line. Lines are run through the
    /// tokenizer, so an entry like "don't" contributes the stems of both
    /// "don" and "t". Blank lines and `#` comments are skipped.
    pub fn from_word_list(list: &str) -> Self {
        let mut stems = HashSet::new();
        for line in list.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            for token in tokenize(line) {
                stems.insert(stem(&token));
            }
        }
        Self { stems }
    }

    pub fn is_empty(&self) -> bool {
        self.stems.is_empty()
    }

    pub fn len(&self) -> usize {
        self.stems.len()
    }

    /// True when `stem` (already stemmed) should be dropped.
    pub fn contains_stem(&self, stem: &str) -> bool {
        self.stems.contains(stem)
    }
}

/// Tokenizes, stems, and stopword-filters `text` in one pass.
pub fn stem_tokens(text: &str, stopwords: &Stopwords) -> Vec<String> {
    tokenize(text)
        .into_iter()
        .map(|t| stem(&t))
        .filter(|s| !stopwords.contains_stem(s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenize_splits_on_non_alphabetic() {
        assert_eq!(
            tokenize("The computer's 3-D display!"),
            vec!["the", "computer", "s", "d", "display"]
        );
        assert_eq!(tokenize(""), Vec::<String>::new());
        assert_eq!(tokenize("42 7%"), Vec::<String>::new());
        assert_eq!(tokenize("one,two;three"), vec!["one", "two", "three"]);
    }

    #[test]
    fn tokenize_lowercases() {
        assert_eq!(tokenize("Line LINE lInE"), vec!["line", "line", "line"]);
    }

    #[test]
    fn standard_list_drops_function_words_and_keeps_content() {
        let sw = Stopwords::standard();
        let stems = stem_tokens("the computer is on the telephone line", &sw);
        assert_eq!(stems, vec!["comput", "telephon", "line"]);
    }

    #[test]
    fn filtering_matches_inflected_stopword_forms() {
        // "using" stems to "us" (same stem as "use"), so both are dropped
        // once "use" is listed.
        let sw = Stopwords::from_word_list("use\n");
        assert_eq!(stem_tokens("using the use", &sw), vec!["the"]);
    }

    #[test]
    fn apostrophe_entries_cover_their_fragments() {
        let sw = Stopwords::from_word_list("don't\n");
        assert_eq!(stem_tokens("don t party", &sw), vec!["parti"]);
    }

    #[test]
    fn empty_set_passes_everything() {
        let sw = Stopwords::none();
        assert_eq!(stem_tokens("the cat sat", &sw), vec!["the", "cat", "sat"]);
    }

    #[test]
    fn standard_list_size_is_documented() {
        // Entries collapse when they share a stem, so the stem set is a
        // little smaller than the 570-line word list.
        let sw = Stopwords::standard();
        assert!(sw.len() > 400 && sw.len() <= 570, "got {}", sw.len());
    }
}
