//! Turning free-text answers to icebreaker questions into facts.

use super::state::QuestionId;
use crate::memory::{display_name, Attribute, FactTriple};
use crate::text::raw_words;

const NEGATIVE: &[&str] = &[
    "no",
    "nope",
    "nah",
    "not",
    "dont",
    "doesnt",
    "never",
    "none",
    "unemployed",
    "retired",
];
const POSITIVE: &[&str] = &[
    "yes",
    "yeah",
    "yep",
    "yup",
    "sure",
    "ok",
    "okay",
    "absolutely",
    "definitely",
    "course",
    "do",
    "does",
    "indeed",
    "certainly",
    "please",
];

const NUMBER_WORDS: &[&str] = &[
    "zero",
    "one",
    "two",
    "three",
    "four",
    "five",
    "six",
    "seven",
    "eight",
    "nine",
    "ten",
    "eleven",
    "twelve",
    "thirteen",
    "fourteen",
    "fifteen",
    "sixteen",
    "seventeen",
    "eighteen",
    "nineteen",
    "twenty",
];
const TENS: &[(&str, u32)] = &[
    ("twenty", 20),
    ("thirty", 30),
    ("forty", 40),
    ("fifty", 50),
    ("sixty", 60),
    ("seventy", 70),
    ("eighty", 80),
    ("ninety", 90),
];

const NAME_FILLER: &[&str] = &[
    "my",
    "our",
    "their",
    "his",
    "her",
    "children",
    "child",
    "kids",
    "kid",
    "son",
    "sons",
    "daughter",
    "daughters",
    "names",
    "name",
    "are",
    "is",
    "called",
    "named",
    "they",
    "the",
    "and",
    "a",
    "an",
    "of",
    "them",
    "he",
    "she",
    "have",
    "i",
    "we",
];

fn topic_words(question: QuestionId) -> &'static [&'static str] {
    match question {
        QuestionId::Work => &["work", "working", "job", "employed", "office", "teacher"],
        QuestionId::Study => &[
            "study",
            "studying",
            "student",
            "university",
            "college",
            "school",
        ],
        QuestionId::Children => &[
            "have",
            "children",
            "kids",
            "son",
            "daughter",
            "sons",
            "daughters",
        ],
        _ => &[],
    }
}

/// Yes/no reading of an answer. Negative words win over positive ones.
pub fn yes_no(text: &str) -> Option<bool> {
    yes_no_about(text, &[])
}

fn yes_no_about(text: &str, topic: &[&str]) -> Option<bool> {
    let words = raw_words(text);
    if words.iter().any(|w| NEGATIVE.contains(&w.as_str())) {
        return Some(false);
    }
    if words
        .iter()
        .any(|w| POSITIVE.contains(&w.as_str()) || topic.contains(&w.as_str()))
    {
        return Some(true);
    }
    None
}

/// First number in the text, written with digits or words up to ninety-nine.
pub fn extract_number(text: &str) -> Option<u32> {
    let words = raw_words(text.replace('-', " ").as_str());
    for (i, w) in words.iter().enumerate() {
        if let Ok(n) = w.parse::<u32>() {
            return Some(n);
        }
        if let Some(n) = NUMBER_WORDS.iter().position(|x| x == w) {
            return Some(n as u32);
        }
        if let Some((_, tens)) = TENS.iter().find(|(x, _)| x == w) {
            let unit = words
                .get(i + 1)
                .and_then(|next| NUMBER_WORDS[1..10].iter().position(|x| x == next))
                .map_or(0, |u| u as u32 + 1);
            return Some(tens + unit);
        }
    }
    None
}

/// Capitalised names listed in an answer, joined with ", ".
pub fn extract_names(text: &str) -> Option<String> {
    let names: Vec<String> = raw_words(text)
        .into_iter()
        .filter(|w| !NAME_FILLER.contains(&w.as_str()))
        .filter(|w| w.chars().all(char::is_alphabetic))
        .map(|w| display_name(&w))
        .collect();
    (!names.is_empty()).then(|| names.join(", "))
}

/// Facts stated by `person` in answer to `question`. Empty when the answer
/// could not be understood.
pub fn facts_from_answer(question: QuestionId, person: &str, text: &str) -> Vec<FactTriple> {
    let fact = |attribute: Attribute, value: String| FactTriple::new(person, attribute, value);
    match question {
        QuestionId::Age => extract_number(text)
            .filter(|n| (1..=130).contains(n))
            .map(|n| vec![fact(Attribute::Age, n.to_string())])
            .unwrap_or_default(),
        QuestionId::Work | QuestionId::Study => yes_no_about(text, topic_words(question))
            .map(|b| vec![fact(question.attribute(), b.to_string())])
            .unwrap_or_default(),
        QuestionId::Children => {
            let count = extract_number(text);
            let has = match count {
                Some(0) => Some(false),
                Some(_) => Some(true),
                None => yes_no_about(text, topic_words(question)),
            };
            let mut facts: Vec<FactTriple> = has
                .map(|b| fact(Attribute::HasChildren, b.to_string()))
                .into_iter()
                .collect();
            if let Some(n) = count.filter(|n| *n > 0) {
                facts.push(fact(Attribute::ChildrenCount, n.to_string()));
            }
            facts
        }
        QuestionId::ChildrenCount => extract_number(text)
            .map(|n| vec![fact(Attribute::ChildrenCount, n.to_string())])
            .unwrap_or_default(),
        QuestionId::ChildrenNames => extract_names(text)
            .map(|n| vec![fact(Attribute::ChildrenNames, n)])
            .unwrap_or_default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(q: QuestionId, text: &str) -> Vec<(Attribute, String)> {
        facts_from_answer(q, "knob", text)
            .into_iter()
            .map(|f| (f.attribute, f.value))
            .collect()
    }

    #[test]
    fn ages() {
        assert_eq!(
            values(QuestionId::Age, "I am 31 years old"),
            [(Attribute::Age, "31".into())]
        );
        assert_eq!(
            values(QuestionId::Age, "thirty-one"),
            [(Attribute::Age, "31".into())]
        );
        assert_eq!(
            values(QuestionId::Age, "twelve"),
            [(Attribute::Age, "12".into())]
        );
        assert!(values(QuestionId::Age, "old enough").is_empty());
        assert!(values(QuestionId::Age, "I am 900").is_empty());
    }

    #[test]
    fn yes_no_answers() {
        assert_eq!(
            values(QuestionId::Work, "Yes I do"),
            [(Attribute::Works, "true".into())]
        );
        assert_eq!(
            values(QuestionId::Work, "I work as a nurse"),
            [(Attribute::Works, "true".into())]
        );
        assert_eq!(
            values(QuestionId::Work, "No, I don't"),
            [(Attribute::Works, "false".into())]
        );
        assert_eq!(
            values(QuestionId::Study, "I am a student"),
            [(Attribute::Studies, "true".into())]
        );
        assert!(values(QuestionId::Study, "hmm").is_empty());
        assert_eq!(yes_no("sure"), Some(true));
        assert_eq!(yes_no("not now"), Some(false));
        assert_eq!(yes_no("blue"), None);
    }

    #[test]
    fn children() {
        assert_eq!(
            values(QuestionId::Children, "Yes, I have two kids"),
            [
                (Attribute::HasChildren, "true".into()),
                (Attribute::ChildrenCount, "2".into())
            ]
        );
        assert_eq!(
            values(QuestionId::Children, "I don't have children"),
            [(Attribute::HasChildren, "false".into())]
        );
        assert_eq!(
            values(QuestionId::ChildrenNames, "Anna and Tom"),
            [(Attribute::ChildrenNames, "Anna, Tom".into())]
        );
        assert_eq!(
            values(QuestionId::ChildrenCount, "3"),
            [(Attribute::ChildrenCount, "3".into())]
        );
    }
}
