use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::Error;

macro_rules! id_newtype {
    ($name:ident, $prefix:literal) => {
        #[derive(
            Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(pub u64);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }
    };
}

id_newtype!(EventId, "e");
id_newtype!(ResourceId, "r");

/// Emotion attached to a general event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmotionLabel {
    Anger,
    Disgust,
    Doubt,
    Fear,
    Joy,
    Sadness,
    Surprise,
    Worry,
    #[default]
    Neutral,
}

impl EmotionLabel {
    pub const ALL: [EmotionLabel; 9] = [
        EmotionLabel::Anger,
        EmotionLabel::Disgust,
        EmotionLabel::Doubt,
        EmotionLabel::Fear,
        EmotionLabel::Joy,
        EmotionLabel::Sadness,
        EmotionLabel::Surprise,
        EmotionLabel::Worry,
        EmotionLabel::Neutral,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EmotionLabel::Anger => "anger",
            EmotionLabel::Disgust => "disgust",
            EmotionLabel::Doubt => "doubt",
            EmotionLabel::Fear => "fear",
            EmotionLabel::Joy => "joy",
            EmotionLabel::Sadness => "sadness",
            EmotionLabel::Surprise => "surprise",
            EmotionLabel::Worry => "worry",
            EmotionLabel::Neutral => "neutral",
        }
    }
}

impl fmt::Display for EmotionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EmotionLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        EmotionLabel::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::validation(format!("unknown emotion label '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventType {
    MeetNewPerson,
    LearnThing,
    Interaction,
}

impl EventType {
    /// Initial STM weight for resources of an event of this type.
    pub fn initial_weight(self) -> f64 {
        match self {
            EventType::MeetNewPerson => 0.9,
            EventType::LearnThing => 0.9,
            EventType::Interaction => 0.1,
        }
    }
}

/// Logical tick count plus wall-clock instant.
///
/// Ordering compares the tick first, so two timestamps taken under a logical
/// clock and a system clock still sort by engine time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Timestamp {
    pub tick: u64,
    pub at: DateTime<Utc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attribute {
    Age,
    Works,
    Studies,
    HasChildren,
    ChildrenCount,
    ChildrenNames,
}

impl Attribute {
    pub const ALL: [Attribute; 6] = [
        Attribute::Age,
        Attribute::Works,
        Attribute::Studies,
        Attribute::HasChildren,
        Attribute::ChildrenCount,
        Attribute::ChildrenNames,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Attribute::Age => "age",
            Attribute::Works => "works",
            Attribute::Studies => "studies",
            Attribute::HasChildren => "has_children",
            Attribute::ChildrenCount => "children_count",
            Attribute::ChildrenNames => "children_names",
        }
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Attribute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        Attribute::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::validation(format!("unsupported attribute '{s}'")))
    }
}

/// (subject, attribute, value) carried by a grammatical resource.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactTriple {
    pub subject: String,
    pub attribute: Attribute,
    pub value: String,
}

impl FactTriple {
    pub fn new(subject: &str, attribute: Attribute, value: impl Into<String>) -> Self {
        FactTriple {
            subject: normalize_name(subject),
            attribute,
            value: value.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResourceType {
    Grammatical,
    Image,
    Audio,
}

/// Payload of an event-specific knowledge item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Information {
    Grammatical {
        token: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        fact: Option<FactTriple>,
    },
    Image {
        path: String,
    },
    Audio {
        tag: String,
    },
}

impl Information {
    pub fn token(token: impl Into<String>) -> Self {
        Information::Grammatical {
            token: token.into(),
            fact: None,
        }
    }

    pub fn fact(token: impl Into<String>, fact: FactTriple) -> Self {
        Information::Grammatical {
            token: token.into(),
            fact: Some(fact),
        }
    }

    pub fn image(path: impl Into<String>) -> Self {
        Information::Image { path: path.into() }
    }

    pub fn resource_type(&self) -> ResourceType {
        match self {
            Information::Grammatical { .. } => ResourceType::Grammatical,
            Information::Image { .. } => ResourceType::Image,
            Information::Audio { .. } => ResourceType::Audio,
        }
    }

    pub fn as_token(&self) -> Option<&str> {
        match self {
            Information::Grammatical { token, .. } => Some(token),
            _ => None,
        }
    }

    pub fn as_fact(&self) -> Option<&FactTriple> {
        match self {
            Information::Grammatical { fact, .. } => fact.as_ref(),
            _ => None,
        }
    }

    pub fn summary(&self) -> String {
        match self {
            Information::Grammatical { token, fact: None } => token.clone(),
            Information::Grammatical {
                token,
                fact: Some(f),
            } => format!("{token} ({} {} = {})", f.subject, f.attribute, f.value),
            Information::Image { path } => format!("image:{path}"),
            Information::Audio { tag } => format!("audio:{tag}"),
        }
    }

    /// Lowercases and trims grammatical tokens; rejects empty ones.
    pub(crate) fn normalized(self) -> Result<Self, Error> {
        match self {
            Information::Grammatical { token, fact } => {
                let token = token.split_whitespace().collect::<Vec<_>>().join(" ");
                let token = token.to_lowercase();
                if token.is_empty() {
                    return Err(Error::validation("grammatical token is empty"));
                }
                Ok(Information::Grammatical { token, fact })
            }
            Information::Image { path } if path.trim().is_empty() => {
                Err(Error::validation("image path is empty"))
            }
            other => Ok(other),
        }
    }
}

/// An event-specific knowledge item.
///
/// Activation is not stored here: it lives on the short-term memory slot
/// while the resource is resident there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resource {
    pub id: ResourceId,
    pub timestamp: Timestamp,
    pub information: Information,
    pub weight: f64,
    pub owner_event_id: EventId,
    /// Set once the resource has gone through a consolidation.
    #[serde(default)]
    pub consolidated: bool,
}

impl Resource {
    pub fn resource_type(&self) -> ResourceType {
        self.information.resource_type()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralEvent {
    pub id: EventId,
    pub timestamp: Timestamp,
    pub event_type: EventType,
    pub emotion: EmotionLabel,
    pub polarity: f64,
    pub resource_ids: Vec<ResourceId>,
}

/// Stored profile record. Facts are derived from live resources, see
/// [`PersonView`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersonProfile {
    /// Display name as introduced ("Knob").
    pub name: String,
    pub first_met: Timestamp,
    /// The meet-new-person event that backs this profile.
    pub intro_event: EventId,
}

impl PersonProfile {
    pub fn key(&self) -> String {
        normalize_name(&self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PersonView {
    pub name: String,
    pub first_met: Timestamp,
    pub facts: std::collections::BTreeMap<Attribute, String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConsolidationReport {
    /// (resource, old weight, new weight) for every under-activated resource.
    pub reduced: Vec<(ResourceId, f64, f64)>,
    pub forgotten_resources: Vec<ResourceId>,
    pub forgotten_events: Vec<EventId>,
    pub forgotten_people: Vec<String>,
    pub stm_cleared_count: usize,
}

impl ConsolidationReport {
    pub fn is_empty(&self) -> bool {
        self.reduced.is_empty()
            && self.forgotten_resources.is_empty()
            && self.forgotten_events.is_empty()
            && self.forgotten_people.is_empty()
            && self.stm_cleared_count == 0
    }
}

/// Case-insensitive key for person names and fact subjects.
pub fn normalize_name(name: &str) -> String {
    name.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

/// "knob smith" -> "Knob Smith".
pub fn display_name(name: &str) -> String {
    name.split_whitespace()
        .map(|w| {
            let mut chars = w.chars();
            match chars.next() {
                Some(first) => first
                    .to_uppercase()
                    .chain(chars.flat_map(char::to_lowercase))
                    .collect(),
                None => String::new(),
            }
        })
        .collect::<Vec<String>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn emotion_labels_parse() {
        assert_eq!("Joy".parse::<EmotionLabel>().unwrap(), EmotionLabel::Joy);
        assert!("sleeping".parse::<EmotionLabel>().is_err());
        assert_eq!(EmotionLabel::ALL.len(), 9);
    }

    #[test]
    fn initial_weights() {
        assert_eq!(EventType::MeetNewPerson.initial_weight(), 0.9);
        assert_eq!(EventType::LearnThing.initial_weight(), 0.9);
        assert_eq!(EventType::Interaction.initial_weight(), 0.1);
    }

    #[test]
    fn names() {
        assert_eq!(normalize_name("  Knob  Smith "), "knob smith");
        assert_eq!(display_name("kNOB smith"), "Knob Smith");
    }

    #[test]
    fn empty_token_rejected() {
        assert!(Information::token("   ").normalized().is_err());
        assert_eq!(
            Information::token(" Fish ").normalized().unwrap(),
            Information::token("fish")
        );
    }
}
