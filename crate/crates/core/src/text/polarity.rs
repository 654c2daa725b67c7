use std::collections::{HashMap, HashSet};

pub const DEFAULT_NEGATION_WINDOW: usize = 3;

const DEFAULT_NEGATORS: &[&str] = &[
    "not", "no", "never", "none", "nobody", "nothing", "neither", "nor", "nowhere", "cannot",
    "cant", "dont", "doesnt", "didnt", "isnt", "wasnt", "arent", "werent", "wont", "wouldnt",
    "shouldnt", "couldnt", "aint", "hardly", "without",
];

/// Signed word scores plus negation handling.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarityLexicon {
    entries: HashMap<String, f64>,
    negators: HashSet<String>,
    negation_window: usize,
}

impl PolarityLexicon {
    pub fn new(entries: HashMap<String, f64>) -> Self {
        PolarityLexicon {
            entries: entries
                .into_iter()
                .map(|(w, s)| (w, s.clamp(-1.0, 1.0)))
                .collect(),
            negators: DEFAULT_NEGATORS.iter().map(|s| s.to_string()).collect(),
            negation_window: DEFAULT_NEGATION_WINDOW,
        }
    }

    /// Parses `word<TAB>score` lines; `#` starts a comment.
    pub fn parse(table: &str) -> Result<Self, (usize, String)> {
        let mut entries = HashMap::new();
        for (idx, line) in table.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (word, score) = line
                .split_once('\t')
                .ok_or_else(|| (idx + 1, "expected word<TAB>score".to_string()))?;
            let score: f64 = score
                .trim()
                .parse()
                .map_err(|_| (idx + 1, format!("bad score '{}'", score.trim())))?;
            if !(-1.0..=1.0).contains(&score) {
                return Err((idx + 1, format!("score {score} outside [-1, 1]")));
            }
            entries.insert(word.trim().to_lowercase(), score);
        }
        Ok(Self::new(entries))
    }

    pub fn with_negators<I, S>(mut self, negators: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.negators = negators.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_negation_window(mut self, window: usize) -> Self {
        self.negation_window = window;
        self
    }

    pub fn score(&self, word: &str) -> Option<f64> {
        self.entries.get(word).copied()
    }

    pub fn is_negator(&self, word: &str) -> bool {
        self.negators.contains(word)
    }

    pub fn negation_window(&self) -> usize {
        self.negation_window
    }

    /// Mean signed score of the scored words, clamped to [-1, 1].
    ///
    /// A score is flipped when a negator appears within the window of words
    /// preceding it.
    pub fn polarity_of(&self, words: &[String], stem: impl Fn(&str) -> String) -> f64 {
        let mut sum = 0.0;
        let mut scored = 0usize;
        for (i, word) in words.iter().enumerate() {
            let Some(score) = self.score(word).or_else(|| self.score(&stem(word))) else {
                continue;
            };
            let from = i.saturating_sub(self.negation_window);
            let negated = words[from..i].iter().any(|w| self.is_negator(w));
            sum += if negated { -score } else { score };
            scored += 1;
        }
        (sum / scored.max(1) as f64).clamp(-1.0, 1.0)
    }
}
