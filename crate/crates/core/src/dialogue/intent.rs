use serde::Serialize;

use super::state::Phase;
use crate::memory::Attribute;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "intent", rename_all = "snake_case")]
pub enum Intent {
    FactQuery {
        person: String,
        attribute: Attribute,
    },
    ObjectQuery {
        term: String,
    },
    NameIntro {
        name: String,
    },
    Statement,
    Fallback,
}

const PRONOUNS: &[&str] = &[
    "you", "i", "he", "she", "it", "they", "we", "me", "him", "her", "them", "us", "your", "my",
    "his", "their", "our", "this", "that",
];

const QUESTION_WORDS: &[&str] = &[
    "what", "who", "whom", "whose", "where", "when", "why", "how", "which", "do", "does", "did",
    "can", "could", "would", "will", "is", "are", "was", "were", "should", "shall", "may", "might",
    "have", "has",
];

const NOT_NAMES: &[&str] = &[
    "hi", "hello", "hey", "yes", "no", "yeah", "nope", "ok", "okay", "sure", "thanks", "bye",
    "good", "fine", "well", "hmm", "what", "why", "nothing", "nobody", "sorry", "please", "not",
    "never", "maybe", "really", "just", "nice",
];

const ARTICLES: &[&str] = &["a", "an", "the"];

/// Lowercased words with trailing punctuation removed. Apostrophes are kept
/// so possessives survive.
fn words(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|w| {
            w.replace('\u{2019}', "'")
                .trim_matches(|c: char| !c.is_alphanumeric() && c != '\'' && c != '-')
                .trim_matches('\'')
                .to_lowercase()
        })
        .filter(|w| !w.is_empty())
        .collect()
}

fn strip_article(words: &[String]) -> &[String] {
    match words.first() {
        Some(w) if ARTICLES.contains(&w.as_str()) => &words[1..],
        _ => words,
    }
}

fn is_person(words: &[String]) -> bool {
    !words.is_empty()
        && words.len() <= 3
        && !(words.len() == 1 && PRONOUNS.contains(&words[0].as_str()))
        && words.iter().all(|w| is_name_word(w))
}

fn is_name_word(w: &str) -> bool {
    w.chars().next().is_some_and(char::is_alphabetic)
        && w.chars()
            .all(|c| c.is_alphabetic() || c == '-' || c == '\'')
}

fn possessive(word: &str) -> Option<&str> {
    word.strip_suffix("'s")
        .or_else(|| word.strip_suffix('\''))
        .filter(|s| !s.is_empty())
}

fn term_of(words: &[String]) -> Option<String> {
    let words = strip_article(words);
    let words: Vec<&str> = words
        .iter()
        .map(String::as_str)
        .take_while(|w| !matches!(*w, "is" | "are" | "looks" | "look"))
        .collect();
    (!words.is_empty() && words.len() <= 3).then(|| words.join(" "))
}

fn fact_query(w: &[String]) -> Option<(Vec<String>, Attribute)> {
    let s: Vec<&str> = w.iter().map(String::as_str).collect();
    match s.as_slice() {
        ["how", "old", "is", rest @ ..] if !rest.is_empty() => {
            Some((to_owned(rest), Attribute::Age))
        }
        ["what", "is", rest @ .., "age"] | ["what's", rest @ .., "age"] => {
            let (last, init) = rest.split_last()?;
            let owner = possessive(last)?;
            let mut name = to_owned(init);
            name.push(owner.to_string());
            Some((name, Attribute::Age))
        }
        ["how", "many", "children" | "kids", "does", rest @ .., "have"] => {
            Some((to_owned(rest), Attribute::ChildrenCount))
        }
        ["does", rest @ .., "have", "children" | "kids" | "any"]
        | ["does", rest @ .., "have", "any", "children" | "kids"] => {
            Some((to_owned(rest), Attribute::HasChildren))
        }
        ["does", rest @ .., "work"] => Some((to_owned(rest), Attribute::Works)),
        ["does", rest @ .., "study"] => Some((to_owned(rest), Attribute::Studies)),
        ["what", "are", "the", "names", "of", rest @ .., "children" | "kids"] => {
            let (last, init) = rest.split_last()?;
            let owner = possessive(last)?;
            let mut name = to_owned(init);
            name.push(owner.to_string());
            Some((name, Attribute::ChildrenNames))
        }
        ["what", "are", rest @ .., "children's" | "childrens" | "kids", "names"] => {
            let (last, init) = rest.split_last()?;
            let owner = possessive(last)?;
            let mut name = to_owned(init);
            name.push(owner.to_string());
            Some((name, Attribute::ChildrenNames))
        }
        _ => None,
    }
}

fn to_owned(s: &[&str]) -> Vec<String> {
    s.iter().map(|w| w.to_string()).collect()
}

fn object_query(w: &[String]) -> Option<String> {
    let s: Vec<&str> = w.iter().map(String::as_str).collect();
    match s.as_slice() {
        ["do", "you", "know", "what", rest @ ..] if !rest.is_empty() => term_of(&w[4..]),
        ["do", "you", "know", "a" | "an", ..] => term_of(&w[3..]),
        ["what", "is", "a" | "an", ..] | ["what's", "a" | "an", ..] => {
            let start = if s[0] == "what's" { 1 } else { 2 };
            term_of(&w[start..])
        }
        ["have", "you", "seen", "a" | "an", ..] => term_of(&w[3..]),
        _ => None,
    }
}

fn name_intro(w: &[String], phase: &Phase) -> Option<String> {
    let s: Vec<&str> = w.iter().map(String::as_str).collect();
    let rest: &[String] = match s.as_slice() {
        ["my", "name", "is", ..] => &w[3..],
        ["my", "name's", ..] | ["call", "me", ..] | ["it's", ..] | ["its", ..] => {
            if matches!(s[0], "it's" | "its") && *phase != Phase::AwaitName {
                return None;
            }
            &w[if s[0] == "my" || s[0] == "call" { 2 } else { 1 }..]
        }
        ["i", "am", ..] if *phase == Phase::AwaitName => &w[2..],
        ["i'm", ..] | ["im", ..] if *phase == Phase::AwaitName => &w[1..],
        _ if *phase == Phase::AwaitName => w,
        _ => return None,
    };
    let first_only = *phase == Phase::AwaitName && s.first() != Some(&"my");
    if !is_person(rest) || (first_only && NOT_NAMES.contains(&rest[0].as_str())) {
        return None;
    }
    Some(rest.join(" "))
}

fn looks_like_question(text: &str, w: &[String]) -> bool {
    text.trim_end().ends_with('?')
        || w.first()
            .is_some_and(|first| QUESTION_WORDS.contains(&first.as_str()))
}

/// Classifies an utterance. Fact and object queries are recognised in every
/// phase; bare names are only taken as introductions while a name is awaited.
pub fn parse_utterance(text: &str, phase: &Phase) -> Intent {
    let w = words(text);
    if w.is_empty() {
        return Intent::Statement;
    }
    if let Some((person, attribute)) = fact_query(&w) {
        if is_person(&person) {
            return Intent::FactQuery {
                person: person.join(" "),
                attribute,
            };
        }
    }
    if let Some(term) = object_query(&w) {
        return Intent::ObjectQuery { term };
    }
    if let Some(name) = name_intro(&w, phase) {
        return Intent::NameIntro { name };
    }
    if looks_like_question(text, &w) {
        Intent::Fallback
    } else {
        Intent::Statement
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> Intent {
        parse_utterance(text, &Phase::Idle)
    }

    fn fq(person: &str, attribute: Attribute) -> Intent {
        Intent::FactQuery {
            person: person.into(),
            attribute,
        }
    }

    #[test]
    fn fact_queries() {
        assert_eq!(p("How old is Knob?"), fq("knob", Attribute::Age));
        assert_eq!(p("how old is knob smith"), fq("knob smith", Attribute::Age));
        assert_eq!(p("What is Knob's age?"), fq("knob", Attribute::Age));
        assert_eq!(p("Does Knob work?"), fq("knob", Attribute::Works));
        assert_eq!(p("Does Knob study?"), fq("knob", Attribute::Studies));
        assert_eq!(
            p("Does Knob have children?"),
            fq("knob", Attribute::HasChildren)
        );
        assert_eq!(
            p("How many children does Knob have?"),
            fq("knob", Attribute::ChildrenCount)
        );
        assert_eq!(
            p("What are the names of Knob's children?"),
            fq("knob", Attribute::ChildrenNames)
        );
        assert_eq!(p("How old is he?"), Intent::Fallback);
        assert_eq!(p("Does it work?"), Intent::Fallback);
    }

    #[test]
    fn object_queries() {
        let oq = |t: &str| Intent::ObjectQuery { term: t.into() };
        assert_eq!(p("Do you know what a cellphone is?"), oq("cellphone"));
        assert_eq!(p("do you know what an apple is"), oq("apple"));
        assert_eq!(p("Do you know a cellphone?"), oq("cellphone"));
        assert_eq!(p("What is a cellphone?"), oq("cellphone"));
        assert_eq!(p("what's an ice cream"), oq("ice cream"));
    }

    #[test]
    fn names() {
        let ni = |n: &str| Intent::NameIntro { name: n.into() };
        assert_eq!(p("My name is Knob"), ni("knob"));
        assert_eq!(p("call me Knob Smith."), ni("knob smith"));
        assert_eq!(p("Knob"), Intent::Statement);
        assert_eq!(p("I am happy"), Intent::Statement);
        let wait = Phase::AwaitName;
        assert_eq!(parse_utterance("Knob", &wait), ni("knob"));
        assert_eq!(parse_utterance("I'm Knob!", &wait), ni("knob"));
        assert_eq!(parse_utterance("I am Knob", &wait), ni("knob"));
        assert_eq!(parse_utterance("hello", &wait), Intent::Statement);
        assert_eq!(
            parse_utterance("I went fishing with my dad last week", &wait),
            Intent::Statement
        );
    }

    #[test]
    fn questions_fall_back() {
        assert_eq!(p("What is the meaning of life?"), Intent::Fallback);
        assert_eq!(p("are you a robot"), Intent::Fallback);
        assert_eq!(p("I went fishing with my dad"), Intent::Statement);
        assert_eq!(p("!!!"), Intent::Statement);
    }
}
