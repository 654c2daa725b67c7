//! The conversational agent: one memory, one text pipeline, many dialogue
//! sessions.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use crate::dialogue::answers::{facts_from_answer, yes_no};
use crate::dialogue::{
    chatbot_from, next_icebreaker, parse_utterance, remaining_questions, Action, AgentReply,
    CannedChatbot, ChatbotClient, DialogueState, Expression, Intent, Phase, QuestionId, TurnInput,
    APOLOGY,
};
use crate::error::{Error, Result};
use crate::memory::{
    display_name, normalize_name, Attribute, Clock, ConsolidationReport, EmotionLabel, EventId,
    EventType, FactTriple, GeneralEvent, Information, LongTermMemory, MemoryCore, ResourceId,
    RetrievalHit, DEFAULT_K,
};
use crate::persistence::{ClockMode, Config, TickMode};
use crate::text::TextPipeline;

pub const STRANGER_GREETING: &str = "Hello stranger! May I know your name?";

/// Reply under construction.
struct Turn {
    parts: Vec<String>,
    actions: Vec<Action>,
    retrieved: Vec<EventId>,
    recalled_emotion: Option<EmotionLabel>,
    user_emotion: EmotionLabel,
    image: Option<String>,
}

impl Turn {
    fn new(user_emotion: EmotionLabel) -> Self {
        Turn {
            parts: Vec::new(),
            actions: Vec::new(),
            retrieved: Vec::new(),
            recalled_emotion: None,
            user_emotion,
            image: None,
        }
    }

    fn say(&mut self, part: impl Into<String>) {
        self.parts.push(part.into());
    }

    fn recall(&mut self, event: &GeneralEvent) {
        if !self.retrieved.contains(&event.id) {
            self.retrieved.push(event.id);
        }
        if self.recalled_emotion.is_none() && event.emotion != EmotionLabel::Neutral {
            self.recalled_emotion = Some(event.emotion);
        }
    }

    fn finish(self, state: &DialogueState) -> AgentReply {
        AgentReply {
            text: self.parts.join(" "),
            expression: self
                .recalled_emotion
                .map_or(Expression::from(self.user_emotion), Expression::from),
            retrieved_event_ids: self.retrieved,
            actions: self.actions,
            image: self.image,
            phase: state.phase.clone(),
        }
    }
}

fn with_article(term: &str) -> String {
    let article = match term.chars().next() {
        Some('a' | 'e' | 'i' | 'o' | 'u') => "an",
        _ => "a",
    };
    format!("{article} {term}")
}

fn fact_token(fact: &FactTriple) -> String {
    match fact.attribute {
        Attribute::Age | Attribute::ChildrenCount => fact.value.clone(),
        Attribute::ChildrenNames => fact.value.replace(',', " ").to_lowercase(),
        Attribute::Works => "work".into(),
        Attribute::Studies => "study".into(),
        Attribute::HasChildren => "children".into(),
    }
}

fn acknowledge(fact: &FactTriple) -> String {
    let yes = fact.value == "true";
    match fact.attribute {
        Attribute::Age => format!("So you are {} years old.", fact.value),
        Attribute::Works if yes => "Good to know that you work.".into(),
        Attribute::Works => "Okay, you do not work.".into(),
        Attribute::Studies if yes => "Good to know that you study.".into(),
        Attribute::Studies => "Okay, you do not study.".into(),
        Attribute::HasChildren if yes => "How lovely, you have children!".into(),
        Attribute::HasChildren => "Okay, you do not have children.".into(),
        Attribute::ChildrenCount => format!("So you have {} children.", fact.value),
        Attribute::ChildrenNames => format!("What lovely names: {}.", fact.value),
    }
}

fn describe_fact(person: &str, attribute: Attribute, value: &str) -> String {
    let yes = value == "true";
    match attribute {
        Attribute::Age => format!("{person} is {value} years old."),
        Attribute::Works if yes => format!("Yes, {person} works."),
        Attribute::Works => format!("No, {person} does not work."),
        Attribute::Studies if yes => format!("Yes, {person} studies."),
        Attribute::Studies => format!("No, {person} does not study."),
        Attribute::HasChildren if yes => format!("Yes, {person} has children."),
        Attribute::HasChildren => format!("No, {person} does not have children."),
        Attribute::ChildrenCount if value == "1" => format!("{person} has 1 child."),
        Attribute::ChildrenCount => format!("{person} has {value} children."),
        Attribute::ChildrenNames => format!("{person}'s children are called {value}."),
    }
}

fn join_words(words: &[String]) -> String {
    match words {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{} and {}", init.join(", "), last),
    }
}

#[derive(Debug)]
pub struct Agent {
    memory: MemoryCore,
    text: TextPipeline,
    chatbot: Box<dyn ChatbotClient>,
    tick_mode: TickMode,
    tick_period: Duration,
    last_tick: Instant,
    image_root: Option<PathBuf>,
}

impl Default for Agent {
    fn default() -> Self {
        Agent::new(MemoryCore::default(), TextPipeline::default())
    }
}

impl Agent {
    pub fn new(memory: MemoryCore, text: TextPipeline) -> Self {
        Agent {
            memory,
            text,
            chatbot: Box::new(CannedChatbot),
            tick_mode: TickMode::Turns,
            tick_period: Duration::from_secs(2),
            last_tick: Instant::now(),
            image_root: None,
        }
    }

    /// Builds an agent over `ltm` with the clock, text tables and chatbot
    /// named in `config`.
    pub fn from_config(config: &Config, ltm: LongTermMemory) -> Result<Self> {
        let clock = match config.clock_mode() {
            ClockMode::Logical => Clock::logical(),
            ClockMode::System => Clock::System,
        };
        let text = TextPipeline::from_files(
            config.stopwords.as_deref(),
            config.lexicon.as_deref(),
            config.stemmer_rules.as_deref(),
        )?;
        Ok(Agent::new(MemoryCore::with_ltm(ltm, clock), text)
            .with_chatbot(chatbot_from(
                config.chatbot_url.as_deref(),
                config.chatbot_timeout,
            ))
            .with_tick_mode(config.tick_mode, config.tick_period))
    }

    pub fn with_chatbot(mut self, chatbot: Box<dyn ChatbotClient>) -> Self {
        self.chatbot = chatbot;
        self
    }

    pub fn with_tick_mode(mut self, mode: TickMode, period: Duration) -> Self {
        self.tick_mode = mode;
        self.tick_period = period.max(Duration::from_millis(1));
        self.last_tick = Instant::now();
        self
    }

    /// Directory against which relative image paths are checked.
    pub fn with_image_root(mut self, root: impl Into<PathBuf>) -> Self {
        self.image_root = Some(root.into());
        self
    }

    pub fn memory(&self) -> &MemoryCore {
        &self.memory
    }

    pub fn memory_mut(&mut self) -> &mut MemoryCore {
        &mut self.memory
    }

    pub fn text(&self) -> &TextPipeline {
        &self.text
    }

    pub fn tick_mode(&self) -> TickMode {
        self.tick_mode
    }

    /// A full turn: pending wall-clock decay, the dialogue step, then one
    /// decay tick in turns mode.
    pub fn turn(&mut self, state: &mut DialogueState, input: TurnInput) -> Result<AgentReply> {
        self.catch_up();
        let reply = self.handle_turn(state, input)?;
        if self.tick_mode == TickMode::Turns {
            self.memory.decay_tick(1);
        }
        Ok(reply)
    }

    /// Applies the decay ticks that elapsed since the last one in seconds
    /// mode. Returns the number applied.
    pub fn catch_up(&mut self) -> u64 {
        if self.tick_mode != TickMode::Seconds {
            return 0;
        }
        let period = self.tick_period.as_nanos().max(1);
        let n = (self.last_tick.elapsed().as_nanos() / period) as u64;
        if n > 0 {
            self.memory.decay_tick(n);
            self.last_tick += self.tick_period * n.min(u32::MAX as u64) as u32;
        }
        n
    }

    pub fn tick(&mut self, n: u64) {
        self.memory.decay_tick(n);
    }

    /// Starts an encounter. Known people are greeted by name, anyone else is
    /// asked for their name.
    pub fn identify(&mut self, state: &mut DialogueState, person: Option<&str>) -> AgentReply {
        let mut t = Turn::new(EmotionLabel::Neutral);
        self.greet(state, person, &mut t);
        t.finish(state)
    }

    /// One dialogue step without any decay.
    pub fn handle_turn(
        &mut self,
        state: &mut DialogueState,
        input: TurnInput,
    ) -> Result<AgentReply> {
        input.validate()?;
        let mut t = Turn::new(input.declared_emotion);
        let text = input.text.trim().to_string();
        let image = input
            .attached_image
            .as_deref()
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(str::to_string);

        let declared = input
            .declared_person
            .as_deref()
            .map(str::trim)
            .filter(|p| !p.is_empty());
        if self.needs_greeting(state, declared) {
            self.greet(state, declared, &mut t);
            self.store_interaction(&text, image, &mut t)?;
            return Ok(t.finish(state));
        }

        let intent = parse_utterance(&text, &state.phase);
        match intent {
            Intent::FactQuery { person, attribute } => {
                self.answer_fact(&person, attribute, &mut t)?
            }
            Intent::ObjectQuery { term } => self.object_query(state, &term, &mut t)?,
            Intent::NameIntro { name } => self.introduce(state, &name, &text, &mut t)?,
            Intent::Statement | Intent::Fallback => {
                let fallback = intent == Intent::Fallback;
                match state.phase.clone() {
                    Phase::AwaitName => {
                        self.store_interaction(&text, image, &mut t)?;
                        if fallback {
                            self.fallback(&text, &mut t);
                        }
                        t.say("May I know your name?");
                    }
                    Phase::Icebreaker(q) | Phase::AwaitFollowUp(q) => {
                        if fallback {
                            self.fallback(&text, &mut t);
                            t.say(q.prompt());
                        } else {
                            self.record_answer(state, q, &text, image, &mut t)?;
                        }
                    }
                    Phase::OfferImage(term) => match (image, yes_no(&text)) {
                        (Some(path), _) => self.learn_object(state, &term, &path, &text, &mut t)?,
                        (None, Some(true)) => {
                            self.store_interaction(&text, None, &mut t)?;
                            t.say(format!(
                                "Great! Please show me a picture of {}.",
                                with_article(&term)
                            ));
                            state.phase = Phase::AwaitImage(term);
                        }
                        (None, Some(false)) => self.decline(state, &text, &mut t)?,
                        (None, None) => self.converse(state, &text, None, fallback, &mut t)?,
                    },
                    Phase::AwaitImage(term) => match (image, yes_no(&text)) {
                        (Some(path), _) => self.learn_object(state, &term, &path, &text, &mut t)?,
                        (None, Some(false)) => self.decline(state, &text, &mut t)?,
                        (None, _) => {
                            self.store_interaction(&text, None, &mut t)?;
                            t.say(format!(
                                "Please show me the picture of {}.",
                                with_article(&term)
                            ));
                        }
                    },
                    Phase::Idle => self.converse(state, &text, image, fallback, &mut t)?,
                }
            }
        }
        Ok(t.finish(state))
    }

    /// Stores a picture of `term`, extending the existing memory of it if
    /// there is one.
    pub fn teach(&mut self, term: &str, image: &str) -> Result<AgentReply> {
        let term = normalize_name(term);
        if term.is_empty() {
            return Err(Error::validation("term is empty"));
        }
        if !self.image_exists(image) {
            return Err(Error::validation(format!("image not found: {image}")));
        }
        let mut t = Turn::new(EmotionLabel::Neutral);
        self.store_object(&term, image, "", &mut t)?;
        Ok(t.finish(&DialogueState::default()))
    }

    pub fn sleep(&mut self) -> (AgentReply, ConsolidationReport) {
        let report = self.memory.consolidate();
        self.last_tick = Instant::now();
        let forgotten = report.forgotten_resources.len();
        let text = format!(
            "Zzz... I went through {} memories and forgot {}.",
            report.stm_cleared_count + report.reduced.len(),
            forgotten
        );
        let reply = AgentReply {
            text,
            expression: Expression::Sleeping,
            retrieved_event_ids: Vec::new(),
            actions: vec![Action::consolidate(&report)],
            image: None,
            phase: Phase::Idle,
        };
        (reply, report)
    }

    fn needs_greeting(&self, state: &DialogueState, declared: Option<&str>) -> bool {
        match declared {
            Some(name) => {
                let same = state.current_person.as_deref().map(normalize_name)
                    == Some(normalize_name(name));
                let already_asked = state.current_person.is_none()
                    && state.phase == Phase::AwaitName
                    && self.memory.person(name).is_none();
                !same && !already_asked
            }
            None => state.current_person.is_none() && state.phase != Phase::AwaitName,
        }
    }

    fn greet(&mut self, state: &mut DialogueState, person: Option<&str>, t: &mut Turn) {
        state.skipped.clear();
        state.pending_questions.clear();
        let known = person.and_then(|p| self.memory.ltm().person(p).cloned());
        match known {
            Some(profile) => {
                state.current_person = Some(profile.name.clone());
                let intro: Vec<ResourceId> = self
                    .memory
                    .ltm()
                    .event(profile.intro_event)
                    .map(|e| e.resource_ids.clone())
                    .unwrap_or_default();
                self.rehearse_all(&intro, t);
                t.say(format!("Greetings {}!", profile.name));
                state.phase = Phase::Idle;
                self.ask_next(state, t);
            }
            None => {
                state.current_person = None;
                state.phase = Phase::AwaitName;
                t.say(STRANGER_GREETING);
            }
        }
    }

    fn ask_next(&self, state: &mut DialogueState, t: &mut Turn) {
        let view = state
            .current_person
            .as_deref()
            .and_then(|p| self.memory.person(p));
        state.pending_questions = remaining_questions(state, view.as_ref());
        match next_icebreaker(state, view.as_ref()) {
            Some(q) => {
                t.say(q.prompt());
                state.phase = Phase::asking(q);
            }
            None => state.phase = Phase::Idle,
        }
    }

    fn rehearse_all(&mut self, ids: &[ResourceId], t: &mut Turn) {
        for &id in ids {
            // an earlier rehearsal may have evicted and deleted it
            if self.memory.ltm().resource(id).is_some() && self.memory.rehearse(id).is_ok() {
                t.actions.push(Action::Rehearse { resource_id: id });
            }
        }
    }

    fn store_interaction(
        &mut self,
        text: &str,
        image: Option<String>,
        t: &mut Turn,
    ) -> Result<Option<EventId>> {
        let mut payloads: Vec<Information> = self
            .text
            .tokenize(text)
            .distinct()
            .into_iter()
            .map(Information::token)
            .collect();
        payloads.extend(image.map(Information::image));
        if payloads.is_empty() {
            return Ok(None);
        }
        let polarity = self.text.polarity(text);
        let event =
            self.memory
                .create_event(EventType::Interaction, t.user_emotion, polarity, payloads)?;
        t.actions.push(Action::CreateEvent {
            event_id: event.id,
            event_type: event.event_type,
            resources: event.resource_ids.len(),
        });
        Ok(Some(event.id))
    }

    fn fallback(&mut self, text: &str, t: &mut Turn) {
        match self.chatbot.reply(text) {
            Ok(reply) => {
                t.say(reply);
                t.actions.push(Action::Fallback { ok: true });
            }
            Err(_) => {
                t.say(APOLOGY);
                t.actions.push(Action::Fallback { ok: false });
            }
        }
    }

    fn converse(
        &mut self,
        state: &mut DialogueState,
        text: &str,
        image: Option<String>,
        fallback: bool,
        t: &mut Turn,
    ) -> Result<()> {
        let cues = self.text.tokenize(text).distinct();
        let mut top: Option<RetrievalHit> = None;
        if !cues.is_empty() {
            let hits = self.memory.retrieve(&cues, DEFAULT_K)?;
            t.actions.push(Action::Retrieve {
                cues: cues.clone(),
                hits: hits.len(),
            });
            for hit in &hits {
                t.recall(&hit.event);
            }
            top = hits.into_iter().next();
        }
        self.store_interaction(text, image, t)?;
        if fallback {
            self.fallback(text, t);
        } else if let Some(hit) = top {
            t.say(self.reminisce(&hit));
        } else if cues.is_empty() {
            t.say("I see.");
        } else {
            t.say("I will remember that.");
        }
        state.phase = Phase::Idle;
        self.ask_next(state, t);
        Ok(())
    }

    fn reminisce(&self, hit: &RetrievalHit) -> String {
        let ltm = self.memory.ltm();
        if hit.event.event_type == EventType::MeetNewPerson {
            if let Some(p) = ltm.people().find(|p| p.intro_event == hit.event.id) {
                return format!("That reminds me of when I met {}.", p.name);
            }
        }
        let words: Vec<String> = ltm
            .event_resources(&hit.event)
            .filter_map(|r| match &r.information {
                Information::Grammatical { token, fact: None } => Some(token.clone()),
                Information::Grammatical { fact: Some(f), .. } => Some(f.value.clone()),
                _ => None,
            })
            .take(6)
            .collect();
        format!(
            "That reminds me of when we talked about {}.",
            join_words(&words)
        )
    }

    fn decline(&mut self, state: &mut DialogueState, text: &str, t: &mut Turn) -> Result<()> {
        self.store_interaction(text, None, t)?;
        t.say("Okay, maybe another time.");
        state.phase = Phase::Idle;
        self.ask_next(state, t);
        Ok(())
    }

    fn introduce(
        &mut self,
        state: &mut DialogueState,
        name: &str,
        text: &str,
        t: &mut Turn,
    ) -> Result<()> {
        if self.memory.ltm().person(name).is_some() {
            self.greet(state, Some(name), t);
            return Ok(());
        }
        let polarity = self.text.polarity(text);
        let event = self.memory.create_event(
            EventType::MeetNewPerson,
            t.user_emotion,
            polarity,
            vec![Information::token(normalize_name(name))],
        )?;
        self.memory.register_person(name, event.id)?;
        let display = display_name(name);
        t.actions.push(Action::CreateEvent {
            event_id: event.id,
            event_type: event.event_type,
            resources: event.resource_ids.len(),
        });
        t.actions.push(Action::RegisterPerson {
            name: display.clone(),
        });
        state.current_person = Some(display.clone());
        state.skipped.clear();
        t.say(format!("Nice to meet you, {display}!"));
        state.phase = Phase::Idle;
        self.ask_next(state, t);
        Ok(())
    }

    fn record_answer(
        &mut self,
        state: &mut DialogueState,
        question: QuestionId,
        text: &str,
        image: Option<String>,
        t: &mut Turn,
    ) -> Result<()> {
        let Some(person) = state.current_person.clone() else {
            state.phase = Phase::AwaitName;
            self.store_interaction(text, image, t)?;
            t.say("May I know your name?");
            return Ok(());
        };
        let facts = facts_from_answer(question, &person, text);
        if facts.is_empty() {
            state.skipped.push(question);
            self.store_interaction(text, image, t)?;
            t.say("I see.");
        } else {
            let ack = acknowledge(&facts[0]);
            let payloads = facts
                .into_iter()
                .map(|f| Information::fact(fact_token(&f), f))
                .collect();
            let polarity = self.text.polarity(text);
            let event = self.memory.create_event(
                EventType::LearnThing,
                t.user_emotion,
                polarity,
                payloads,
            )?;
            t.actions.push(Action::CreateEvent {
                event_id: event.id,
                event_type: event.event_type,
                resources: event.resource_ids.len(),
            });
            t.say(ack);
        }
        state.phase = Phase::Idle;
        self.ask_next(state, t);
        Ok(())
    }

    fn answer_fact(&mut self, person: &str, attribute: Attribute, t: &mut Turn) -> Result<()> {
        let Some(profile) = self.memory.ltm().person(person).cloned() else {
            t.actions.push(Action::FactLookup {
                person: display_name(person),
                attribute,
                found: false,
            });
            t.say(format!(
                "I don't know anyone called {}.",
                display_name(person)
            ));
            return Ok(());
        };
        let found = self
            .memory
            .fact_resource(&profile.name, attribute)
            .and_then(|rid| self.memory.ltm().resource(rid).cloned());
        t.actions.push(Action::FactLookup {
            person: profile.name.clone(),
            attribute,
            found: found.is_some(),
        });
        match found {
            Some(resource) => {
                let value = resource
                    .information
                    .as_fact()
                    .map(|f| f.value.clone())
                    .unwrap_or_default();
                if let Some(event) = self.memory.ltm().event(resource.owner_event_id).cloned() {
                    t.recall(&event);
                }
                self.rehearse_all(&[resource.id], t);
                t.say(describe_fact(&profile.name, attribute, &value));
            }
            None if attribute == Attribute::Age => {
                t.say(format!("I don't know how old {} is.", profile.name))
            }
            None => t.say(format!("I don't know that about {} yet.", profile.name)),
        }
        Ok(())
    }

    fn object_query(&mut self, state: &mut DialogueState, term: &str, t: &mut Turn) -> Result<()> {
        match self.memory.find_term(term) {
            Some(recall) => {
                if let Some(event) = self.memory.ltm().event(recall.event_id).cloned() {
                    t.recall(&event);
                }
                let mut ids = vec![recall.term_resource];
                ids.extend(recall.image.as_ref().map(|(id, _)| *id));
                self.rehearse_all(&ids, t);
                match recall.image {
                    Some((_, path)) => {
                        t.say(format!(
                            "Yes, I know what {} is! Here is the picture you showed me: {}",
                            with_article(term),
                            path
                        ));
                        t.image = Some(path);
                    }
                    None => t.say(format!(
                        "Yes, I know what {} is, but I don't remember what it looks like.",
                        with_article(term)
                    )),
                }
                if matches!(state.phase, Phase::OfferImage(_) | Phase::AwaitImage(_)) {
                    state.phase = Phase::Idle;
                }
            }
            None => {
                t.say(format!(
                    "No, I do not! Would you like to show me a picture of {}?",
                    with_article(term)
                ));
                state.phase = Phase::OfferImage(term.to_string());
            }
        }
        Ok(())
    }

    fn learn_object(
        &mut self,
        state: &mut DialogueState,
        term: &str,
        image: &str,
        text: &str,
        t: &mut Turn,
    ) -> Result<()> {
        state.phase = Phase::Idle;
        if !self.image_exists(image) {
            t.say(format!("I could not find the picture at {image}."));
            return Ok(());
        }
        self.store_object(term, image, text, t)
    }

    fn store_object(&mut self, term: &str, image: &str, text: &str, t: &mut Turn) -> Result<()> {
        match self.memory.find_term(term) {
            Some(recall) => {
                let ids = self
                    .memory
                    .append_resources(recall.event_id, vec![Information::image(image)])?;
                t.actions.push(Action::AppendResources {
                    event_id: recall.event_id,
                    resource_ids: ids,
                });
                t.say(format!(
                    "Thank you! I will remember this picture of {} too.",
                    with_article(term)
                ));
            }
            None => {
                let polarity = self.text.polarity(text);
                let event = self.memory.create_event(
                    EventType::LearnThing,
                    t.user_emotion,
                    polarity,
                    vec![Information::token(term), Information::image(image)],
                )?;
                t.actions.push(Action::CreateEvent {
                    event_id: event.id,
                    event_type: event.event_type,
                    resources: event.resource_ids.len(),
                });
                t.say(format!(
                    "Thank you! Now I know what {} is.",
                    with_article(term)
                ));
            }
        }
        t.image = Some(image.to_string());
        Ok(())
    }

    fn image_exists(&self, image: &str) -> bool {
        let path = Path::new(image);
        let resolved = match &self.image_root {
            Some(root) if path.is_relative() => root.join(path),
            _ => path.to_path_buf(),
        };
        resolved.is_file()
    }
}
