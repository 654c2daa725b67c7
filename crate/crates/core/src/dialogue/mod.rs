//! Scripted dialogue: intents, icebreaker questions and the conversational
//! state machine driven by [`Agent`](crate::agent::Agent).

pub mod answers;
mod chatbot;
mod intent;
mod state;

pub use chatbot::{
    chatbot_from, CannedChatbot, ChatbotClient, ChatbotError, HttpChatbot, APOLOGY, CANNED_REPLY,
    CHATBOT_URL_ENV, DEFAULT_CHATBOT_TIMEOUT,
};
pub use intent::{parse_utterance, Intent};
pub use state::{Action, AgentReply, DialogueState, Expression, Phase, QuestionId, TurnInput};

use std::collections::VecDeque;

use crate::memory::PersonView;

/// Questions still worth asking this person, in order. Follow-ups about
/// children are only added once the person said they have some.
pub fn remaining_questions(
    state: &DialogueState,
    person: Option<&PersonView>,
) -> VecDeque<QuestionId> {
    let known = |q: QuestionId| person.is_some_and(|p| p.facts.contains_key(&q.attribute()));
    let has_children = person.is_some_and(|p| {
        p.facts
            .get(&QuestionId::Children.attribute())
            .is_some_and(|v| v == "true")
    });
    QuestionId::ICEBREAKERS
        .into_iter()
        .chain(QuestionId::FOLLOW_UPS.into_iter().filter(|_| has_children))
        .filter(|q| !known(*q) && !state.skipped.contains(q))
        .collect()
}

pub fn next_icebreaker(state: &DialogueState, person: Option<&PersonView>) -> Option<QuestionId> {
    remaining_questions(state, person).front().copied()
}
