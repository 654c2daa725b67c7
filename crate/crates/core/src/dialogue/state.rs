use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::memory::{Attribute, ConsolidationReport, EmotionLabel, EventId, EventType, ResourceId};

/// Icebreaker questions and their follow-ups, in asking order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuestionId {
    Age,
    Work,
    Study,
    Children,
    ChildrenCount,
    ChildrenNames,
}

impl QuestionId {
    pub const ICEBREAKERS: [QuestionId; 4] = [
        QuestionId::Age,
        QuestionId::Work,
        QuestionId::Study,
        QuestionId::Children,
    ];
    pub const FOLLOW_UPS: [QuestionId; 2] = [QuestionId::ChildrenCount, QuestionId::ChildrenNames];

    pub fn attribute(self) -> Attribute {
        match self {
            QuestionId::Age => Attribute::Age,
            QuestionId::Work => Attribute::Works,
            QuestionId::Study => Attribute::Studies,
            QuestionId::Children => Attribute::HasChildren,
            QuestionId::ChildrenCount => Attribute::ChildrenCount,
            QuestionId::ChildrenNames => Attribute::ChildrenNames,
        }
    }

    pub fn is_follow_up(self) -> bool {
        Self::FOLLOW_UPS.contains(&self)
    }

    pub fn prompt(self) -> &'static str {
        match self {
            QuestionId::Age => "How old are you?",
            QuestionId::Work => "Do you work?",
            QuestionId::Study => "Do you study?",
            QuestionId::Children => "Do you have children?",
            // follow-up wording is our own
            QuestionId::ChildrenCount => "How many children do you have?",
            QuestionId::ChildrenNames => "What are your children's names?",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "phase", content = "arg", rename_all = "snake_case")]
pub enum Phase {
    AwaitName,
    Icebreaker(QuestionId),
    AwaitFollowUp(QuestionId),
    OfferImage(String),
    AwaitImage(String),
    Idle,
}

impl Phase {
    pub(crate) fn asking(question: QuestionId) -> Phase {
        if question.is_follow_up() {
            Phase::AwaitFollowUp(question)
        } else {
            Phase::Icebreaker(question)
        }
    }

    pub fn question(&self) -> Option<QuestionId> {
        match self {
            Phase::Icebreaker(q) | Phase::AwaitFollowUp(q) => Some(*q),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DialogueState {
    pub phase: Phase,
    pub current_person: Option<String>,
    pub pending_questions: VecDeque<QuestionId>,
    /// Questions asked this encounter whose answer could not be parsed.
    #[serde(default)]
    pub skipped: Vec<QuestionId>,
}

impl Default for DialogueState {
    fn default() -> Self {
        DialogueState {
            phase: Phase::Idle,
            current_person: None,
            pending_questions: VecDeque::new(),
            skipped: Vec::new(),
        }
    }
}

impl DialogueState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn check(&self) -> Result<()> {
        if self.phase == Phase::AwaitName && self.current_person.is_some() {
            return Err(Error::validation("awaiting a name while a person is known"));
        }
        Ok(())
    }
}

/// One user turn. Identity and emotion are declared by the caller.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TurnInput {
    #[serde(default)]
    pub declared_person: Option<String>,
    #[serde(default)]
    pub text: String,
    #[serde(default)]
    pub declared_emotion: EmotionLabel,
    #[serde(default)]
    pub attached_image: Option<String>,
}

impl TurnInput {
    pub fn say(text: impl Into<String>) -> Self {
        TurnInput {
            text: text.into(),
            ..Default::default()
        }
    }

    pub fn from(mut self, person: impl Into<String>) -> Self {
        self.declared_person = Some(person.into());
        self
    }

    pub fn feeling(mut self, emotion: EmotionLabel) -> Self {
        self.declared_emotion = emotion;
        self
    }

    pub fn with_image(mut self, path: impl Into<String>) -> Self {
        self.attached_image = Some(path.into());
        self
    }

    pub fn validate(&self) -> Result<()> {
        let has_image = self
            .attached_image
            .as_deref()
            .is_some_and(|p| !p.trim().is_empty());
        if self.text.trim().is_empty() && !has_image {
            return Err(Error::validation("a turn needs text or an attached image"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expression {
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
    Sleeping,
}

impl From<EmotionLabel> for Expression {
    fn from(e: EmotionLabel) -> Self {
        match e {
            EmotionLabel::Anger => Expression::Anger,
            EmotionLabel::Disgust => Expression::Disgust,
            EmotionLabel::Doubt => Expression::Doubt,
            EmotionLabel::Fear => Expression::Fear,
            EmotionLabel::Joy => Expression::Joy,
            EmotionLabel::Sadness => Expression::Sadness,
            EmotionLabel::Surprise => Expression::Surprise,
            EmotionLabel::Worry => Expression::Worry,
            EmotionLabel::Neutral => Expression::Neutral,
        }
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Expression::Sleeping => "sleeping",
            Expression::Anger => "anger",
            Expression::Disgust => "disgust",
            Expression::Doubt => "doubt",
            Expression::Fear => "fear",
            Expression::Joy => "joy",
            Expression::Sadness => "sadness",
            Expression::Surprise => "surprise",
            Expression::Worry => "worry",
            Expression::Neutral => "neutral",
        };
        f.write_str(s)
    }
}

/// A memory operation performed while producing a reply.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Action {
    CreateEvent {
        event_id: EventId,
        event_type: EventType,
        resources: usize,
    },
    AppendResources {
        event_id: EventId,
        resource_ids: Vec<ResourceId>,
    },
    RegisterPerson {
        name: String,
    },
    Retrieve {
        cues: Vec<String>,
        hits: usize,
    },
    Rehearse {
        resource_id: ResourceId,
    },
    FactLookup {
        person: String,
        attribute: Attribute,
        found: bool,
    },
    Fallback {
        ok: bool,
    },
    Consolidate {
        reduced: usize,
        forgotten_resources: usize,
        forgotten_events: usize,
    },
}

impl Action {
    pub(crate) fn consolidate(report: &ConsolidationReport) -> Self {
        Action::Consolidate {
            reduced: report.reduced.len(),
            forgotten_resources: report.forgotten_resources.len(),
            forgotten_events: report.forgotten_events.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgentReply {
    pub text: String,
    pub expression: Expression,
    pub retrieved_event_ids: Vec<EventId>,
    pub actions: Vec<Action>,
    /// Stored picture shown alongside the text, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub image: Option<String>,
    pub phase: Phase,
}
