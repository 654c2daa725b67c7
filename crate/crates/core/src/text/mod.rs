//! Deterministic utterance processing: tokenization, stop-word removal,
//! suffix stemming and lexicon polarity.

mod polarity;
mod stem;

use std::collections::HashSet;
use std::fs;
use std::ops::Deref;
use std::path::Path;

use serde::Serialize;

pub use polarity::{PolarityLexicon, DEFAULT_NEGATION_WINDOW};
pub use stem::{Stemmer, MIN_STEM_LEN};

use crate::error::PersistenceError;

pub const DEFAULT_STOPWORDS: &str = include_str!("../../data/stopwords.txt");
pub const DEFAULT_LEXICON: &str = include_str!("../../data/lexicon.tsv");
pub const DEFAULT_STEMMER_RULES: &str = include_str!("../../data/stemmer_rules.tsv");

/// Ordered lowercase stems, duplicates preserved.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct TokenList(Vec<String>);

impl TokenList {
    pub fn into_vec(self) -> Vec<String> {
        self.0
    }

    /// Distinct tokens in first-seen order.
    pub fn distinct(&self) -> Vec<String> {
        let mut seen = HashSet::new();
        self.0
            .iter()
            .filter(|t| seen.insert(t.as_str()))
            .cloned()
            .collect()
    }
}

impl Deref for TokenList {
    type Target = [String];

    fn deref(&self) -> &[String] {
        &self.0
    }
}

/// Lowercases and splits on anything that is not a letter or digit.
/// Apostrophes are dropped so "don't" becomes "dont".
pub fn raw_words(sentence: &str) -> Vec<String> {
    let cleaned: String = sentence
        .chars()
        .filter(|c| !matches!(c, '\'' | '\u{2019}'))
        .flat_map(char::to_lowercase)
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .collect();
    cleaned.split_whitespace().map(str::to_string).collect()
}

fn parse_stopwords(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.replace('\'', "").to_lowercase())
        .collect()
}

#[derive(Debug, Clone)]
pub struct TextPipeline {
    stopwords: HashSet<String>,
    stemmer: Stemmer,
    lexicon: PolarityLexicon,
}

impl Default for TextPipeline {
    fn default() -> Self {
        TextPipeline {
            stopwords: parse_stopwords(DEFAULT_STOPWORDS),
            stemmer: Stemmer::parse(DEFAULT_STEMMER_RULES).expect("shipped stemmer rules"),
            lexicon: PolarityLexicon::parse(DEFAULT_LEXICON).expect("shipped lexicon"),
        }
    }
}

fn read_data(path: &Path) -> Result<String, PersistenceError> {
    fs::read_to_string(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            PersistenceError::NotFound(path.to_path_buf())
        } else {
            PersistenceError::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    })
}

impl TextPipeline {
    pub fn new(stopwords: HashSet<String>, stemmer: Stemmer, lexicon: PolarityLexicon) -> Self {
        TextPipeline {
            stopwords,
            stemmer,
            lexicon,
        }
    }

    /// Replaces any of the three data tables with files on disk.
    pub fn from_files(
        stopwords: Option<&Path>,
        lexicon: Option<&Path>,
        stemmer_rules: Option<&Path>,
    ) -> Result<Self, PersistenceError> {
        let mut pipeline = TextPipeline::default();
        if let Some(path) = stopwords {
            pipeline.stopwords = parse_stopwords(&read_data(path)?);
        }
        if let Some(path) = lexicon {
            pipeline.lexicon =
                PolarityLexicon::parse(&read_data(path)?).map_err(|(line, message)| {
                    PersistenceError::Malformed {
                        path: path.to_path_buf(),
                        line,
                        message,
                    }
                })?;
        }
        if let Some(path) = stemmer_rules {
            pipeline.stemmer = Stemmer::parse(&read_data(path)?).map_err(|(line, message)| {
                PersistenceError::Malformed {
                    path: path.to_path_buf(),
                    line,
                    message,
                }
            })?;
        }
        Ok(pipeline)
    }

    pub fn is_stopword(&self, word: &str) -> bool {
        self.stopwords.contains(word)
    }

    pub fn lexicon(&self) -> &PolarityLexicon {
        &self.lexicon
    }

    pub fn stem(&self, token: &str) -> String {
        self.stemmer.stem(token)
    }

    pub fn tokenize(&self, sentence: &str) -> TokenList {
        TokenList(
            raw_words(sentence)
                .into_iter()
                .filter(|w| !self.is_stopword(w))
                .map(|w| self.stem(&w))
                .filter(|s| !s.is_empty() && !self.is_stopword(s))
                .collect(),
        )
    }

    pub fn polarity(&self, sentence: &str) -> f64 {
        self.polarity_with(sentence, &self.lexicon)
    }

    pub fn polarity_with(&self, sentence: &str, lexicon: &PolarityLexicon) -> f64 {
        lexicon.polarity_of(&raw_words(sentence), |w| self.stem(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tokenizes_vacation_sentence() {
        let t = TextPipeline::default();
        assert_eq!(
            &*t.tokenize("I am going on vacation with my dad to Glasgow"),
            ["vacation", "dad", "glasgow"]
        );
        assert!(t.tokenize("").is_empty());
        assert_eq!(&*t.tokenize("Fishing, fishing!"), ["fish", "fish"]);
        assert_eq!(&*t.tokenize("I am 31 years old"), ["31", "year", "old"]);
        assert_eq!(
            &*t.tokenize("I went fishing with my dad"),
            ["went", "fish", "dad"]
        );
    }

    #[test]
    fn polarity_examples() {
        let t = TextPipeline::default();
        assert!(t.polarity("I am feeling good") > 0.0);
        assert!(t.polarity("I am not feeling good") < 0.0);
        assert_eq!(t.polarity(""), 0.0);
        assert_eq!(t.polarity("the table is brown"), 0.0);
        // negator outside the window does not flip
        assert!(t.polarity("not that I was ever really good") > 0.0);
        assert!(t.polarity("I don't like it") < 0.0);
    }

    #[test]
    fn custom_lexicon_and_missing_files() {
        let dir = tempfile::tempdir().unwrap();
        let lex = dir.path().join("lexicon.tsv");
        fs::write(&lex, "zorp\t0.9\n").unwrap();
        let t = TextPipeline::from_files(None, Some(&lex), None).unwrap();
        assert!(t.polarity("zorp") > 0.8);
        assert_eq!(t.polarity("good"), 0.0);

        fs::write(&lex, "zorp\t4\n").unwrap();
        let err = TextPipeline::from_files(None, Some(&lex), None).unwrap_err();
        assert!(matches!(err, PersistenceError::Malformed { line: 1, .. }));

        let err = TextPipeline::from_files(Some(&dir.path().join("nope")), None, None);
        assert!(matches!(err, Err(PersistenceError::NotFound(_))));
    }

    fn sentence() -> impl Strategy<Value = String> {
        proptest::collection::vec(
            prop_oneof![
                "[a-zA-Z]{1,9}",
                Just("good".to_string()),
                Just("sad".to_string()),
                Just("not".to_string()),
                Just("the".to_string()),
                Just(",".to_string()),
                Just("!".to_string()),
                Just("don't".to_string()),
            ],
            0..12,
        )
        .prop_map(|w| w.join(" "))
    }

    proptest! {
        #[test]
        fn polarity_is_bounded(s in sentence()) {
            let p = TextPipeline::default().polarity(&s);
            prop_assert!((-1.0..=1.0).contains(&p));
        }

        #[test]
        fn tokenize_is_idempotent(s in sentence()) {
            let t = TextPipeline::default();
            let once = t.tokenize(&s);
            let twice = t.tokenize(&once.join(" "));
            prop_assert_eq!(&once, &twice);
            prop_assert!(once.iter().all(|tok| !tok.is_empty() && !t.is_stopword(tok)));
        }

        #[test]
        fn single_negator_flips_sign(
            before in proptest::collection::vec("[a-z]{2,7}", 0..4),
            word in prop_oneof![Just("good"), Just("sad"), Just("happy"), Just("awful")],
            after in proptest::collection::vec("[a-z]{2,7}", 0..4),
        ) {
            let t = TextPipeline::default();
            let plain: Vec<&String> = before.iter().chain(after.iter()).collect();
            // only the chosen word may carry a score; no other negators
            prop_assume!(plain.iter().all(|w| t.lexicon().score(w).is_none()
                && t.lexicon().score(&t.stem(w)).is_none()
                && !t.lexicon().is_negator(w)));
            let base = format!("{} {} {}", before.join(" "), word, after.join(" "));
            let negated = format!("{} not {} {}", before.join(" "), word, after.join(" "));
            let (p, q) = (t.polarity(&base), t.polarity(&negated));
            prop_assert!(p != 0.0);
            prop_assert_eq!(p, -q);
        }

        #[test]
        fn deterministic(s in sentence()) {
            let (a, b) = (TextPipeline::default(), TextPipeline::default());
            prop_assert_eq!(a.tokenize(&s), b.tokenize(&s));
            prop_assert_eq!(a.polarity(&s).to_bits(), b.polarity(&s).to_bits());
        }
    }
}
