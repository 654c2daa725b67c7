use std::collections::HashMap;

/// Shortest stem a strip rule may leave behind.
pub const MIN_STEM_LEN: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Condition {
    EndsWith(String),
    NotEndsWith(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct StripRule {
    suffix: String,
    replacement: String,
    requires: Vec<Condition>,
}

impl StripRule {
    fn apply(&self, word: &str) -> Option<String> {
        let stem = word.strip_suffix(self.suffix.as_str())?;
        if stem.chars().count() < MIN_STEM_LEN {
            return None;
        }
        let positives: Vec<&str> = self
            .requires
            .iter()
            .filter_map(|c| match c {
                Condition::EndsWith(s) => Some(s.as_str()),
                _ => None,
            })
            .collect();
        if !positives.is_empty() && !positives.iter().any(|s| stem.ends_with(s)) {
            return None;
        }
        let blocked = self.requires.iter().any(|c| match c {
            Condition::NotEndsWith(s) => stem.ends_with(s.as_str()),
            _ => false,
        });
        if blocked {
            return None;
        }
        Some(format!("{stem}{}", self.replacement))
    }
}

/// Table-driven suffix stripper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stemmer {
    rules: Vec<StripRule>,
    restore: HashMap<String, String>,
}

impl Stemmer {
    /// Parses the `stemmer_rules.tsv` format. Errors carry a 1-based line.
    pub fn parse(table: &str) -> Result<Self, (usize, String)> {
        let mut rules = Vec::new();
        let mut restore = HashMap::new();
        for (idx, line) in table.lines().enumerate() {
            let lineno = idx + 1;
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            match cols.as_slice() {
                ["strip", suffix, rest @ ..] => {
                    if suffix.is_empty() {
                        return Err((lineno, "strip rule has an empty suffix".into()));
                    }
                    let replacement = rest.first().copied().unwrap_or("").to_string();
                    let requires = rest
                        .get(1)
                        .map(|c| {
                            c.split(',')
                                .map(str::trim)
                                .filter(|c| !c.is_empty())
                                .map(|c| match c.strip_prefix('!') {
                                    Some(neg) => Condition::NotEndsWith(neg.to_string()),
                                    None => Condition::EndsWith(c.to_string()),
                                })
                                .collect()
                        })
                        .unwrap_or_default();
                    rules.push(StripRule {
                        suffix: suffix.to_string(),
                        replacement,
                        requires,
                    });
                }
                ["restore", stem, word, ..] => {
                    if word.chars().count() < MIN_STEM_LEN || stem.is_empty() {
                        return Err((lineno, format!("restore target '{word}' is too short")));
                    }
                    restore.insert(stem.to_string(), word.to_string());
                }
                _ => return Err((lineno, format!("unrecognized rule '{line}'"))),
            }
        }
        Ok(Stemmer { rules, restore })
    }

    /// Applies rules until none fires. Expects a lowercase token.
    pub fn stem(&self, token: &str) -> String {
        let mut word = token.to_string();
        // every strip shortens the word, so the loop is bounded by its length
        for _ in 0..=token.len() {
            let Some(next) = self.rules.iter().find_map(|r| r.apply(&word)) else {
                break;
            };
            word = match self.restore.get(&next) {
                Some(full) => full.clone(),
                None => next,
            };
        }
        word
    }
}
