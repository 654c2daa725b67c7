//! Autobiographical memory: general events, event-specific resources,
//! short-term and long-term stores.
//!
//! Every resource lives in the long-term store from the moment it is created
//! and is flagged `consolidated` once it has gone through a sleep cycle. A
//! resource evicted from short-term memory before its first consolidation is
//! discarded. All lookups (retrieval, facts, people, terms) see both
//! consolidated and not-yet-consolidated resources.

mod decay;
mod ltm;
mod retrieve;
mod stm;
mod types;

use chrono::{DateTime, Duration, TimeZone, Utc};
use serde::Serialize;

pub use decay::{
    decay_activation, decay_activation_n, reduce_weight, ACTIVATION_THRESHOLD, FORGET_THRESHOLD,
    STM_CAPACITY,
};
pub use ltm::LongTermMemory;
pub use retrieve::{normalize_cues, RetrievalHit, DEFAULT_K};
pub use stm::{ShortTermMemory, StmSlot};
pub use types::{
    display_name, normalize_name, Attribute, ConsolidationReport, EmotionLabel, EventId, EventType,
    FactTriple, GeneralEvent, Information, PersonProfile, PersonView, Resource, ResourceId,
    ResourceType, Timestamp,
};

use crate::error::{Error, IntegrityError, Result};

/// Source of wall-clock instants for timestamps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clock {
    System,
    /// Derives the instant from the logical tick: `epoch + tick * step`.
    /// Keeps scripted runs byte-for-byte reproducible.
    Logical {
        epoch: DateTime<Utc>,
        step: Duration,
    },
}

impl Clock {
    pub fn logical() -> Self {
        Clock::Logical {
            epoch: Utc.with_ymd_and_hms(2020, 1, 1, 0, 0, 0).unwrap(),
            step: Duration::seconds(2),
        }
    }

    fn at(&self, tick: u64) -> DateTime<Utc> {
        match self {
            Clock::System => Utc::now(),
            Clock::Logical { epoch, step } => {
                *epoch + Duration::milliseconds(step.num_milliseconds().saturating_mul(tick as i64))
            }
        }
    }
}

/// A learned object: its term resource and the most recent picture.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermRecall {
    pub event_id: EventId,
    pub term_resource: ResourceId,
    pub image: Option<(ResourceId, String)>,
    pub image_count: usize,
}

#[derive(Debug, Clone)]
pub struct MemoryCore {
    ltm: LongTermMemory,
    stm: ShortTermMemory,
    clock: Clock,
    elapsed_ticks: u64,
    next_event: u64,
    next_resource: u64,
}

impl Default for MemoryCore {
    fn default() -> Self {
        Self::new(Clock::logical())
    }
}

impl MemoryCore {
    pub fn new(clock: Clock) -> Self {
        Self::with_ltm(LongTermMemory::new(), clock)
    }

    /// Starts from a loaded long-term store with an empty short-term memory.
    pub fn with_ltm(ltm: LongTermMemory, clock: Clock) -> Self {
        let (max_event, max_resource) = ltm.max_ids();
        let elapsed_ticks = ltm
            .events()
            .map(|e| e.timestamp.tick)
            .chain(ltm.resources().map(|r| r.timestamp.tick))
            .max()
            .unwrap_or(0);
        MemoryCore {
            ltm,
            stm: ShortTermMemory::new(),
            clock,
            elapsed_ticks,
            next_event: max_event + 1,
            next_resource: max_resource + 1,
        }
    }

    pub fn ltm(&self) -> &LongTermMemory {
        &self.ltm
    }

    pub fn stm(&self) -> &ShortTermMemory {
        &self.stm
    }

    pub fn clock(&self) -> Clock {
        self.clock
    }

    /// Ticks since the engine started; never reset (unlike the STM counter).
    pub fn elapsed_ticks(&self) -> u64 {
        self.elapsed_ticks
    }

    pub fn now(&self) -> Timestamp {
        Timestamp {
            tick: self.elapsed_ticks,
            at: self.clock.at(self.elapsed_ticks),
        }
    }

    fn fresh_resource(
        &mut self,
        owner: EventId,
        information: Information,
        weight: f64,
        timestamp: Timestamp,
    ) -> Resource {
        let id = ResourceId(self.next_resource);
        self.next_resource += 1;
        Resource {
            id,
            timestamp,
            information,
            weight,
            owner_event_id: owner,
            consolidated: false,
        }
    }

    /// Creates a general event with one resource per payload and pushes every
    /// resource into short-term memory.
    pub fn create_event(
        &mut self,
        event_type: EventType,
        emotion: EmotionLabel,
        polarity: f64,
        payloads: Vec<Information>,
    ) -> Result<GeneralEvent> {
        if !(-1.0..=1.0).contains(&polarity) {
            return Err(Error::validation(format!(
                "polarity {polarity} outside [-1, 1]"
            )));
        }
        if payloads.is_empty() {
            return Err(Error::validation("an event needs at least one resource"));
        }
        let payloads = payloads
            .into_iter()
            .map(Information::normalized)
            .collect::<Result<Vec<_>>>()?;

        let timestamp = self.now();
        let id = EventId(self.next_event);
        self.next_event += 1;
        let weight = event_type.initial_weight();
        let resources: Vec<Resource> = payloads
            .into_iter()
            .map(|info| self.fresh_resource(id, info, weight, timestamp))
            .collect();
        let ids: Vec<ResourceId> = resources.iter().map(|r| r.id).collect();

        self.ltm.insert_event(GeneralEvent {
            id,
            timestamp,
            event_type,
            emotion,
            polarity,
            resource_ids: ids.clone(),
        });
        for resource in resources {
            self.ltm.insert_resource(resource);
        }
        for rid in ids {
            self.stm_insert(rid)?;
        }
        self.ltm.event(id).cloned().ok_or(Error::UnknownEvent(id))
    }

    /// Adds resources to an existing event, weighted by its type, and marks
    /// the event as updated.
    pub fn append_resources(
        &mut self,
        event_id: EventId,
        payloads: Vec<Information>,
    ) -> Result<Vec<ResourceId>> {
        let payloads = payloads
            .into_iter()
            .map(Information::normalized)
            .collect::<Result<Vec<_>>>()?;
        let event_type = self
            .ltm
            .event(event_id)
            .ok_or(Error::UnknownEvent(event_id))?
            .event_type;
        let timestamp = self.now();
        let mut ids = Vec::with_capacity(payloads.len());
        for info in payloads {
            let resource =
                self.fresh_resource(event_id, info, event_type.initial_weight(), timestamp);
            ids.push(resource.id);
            self.ltm.insert_resource(resource);
        }
        if let Some(event) = self.ltm.event_mut(event_id) {
            event.resource_ids.extend(&ids);
            event.timestamp = timestamp;
        }
        for rid in &ids {
            self.stm_insert(*rid)?;
        }
        Ok(ids)
    }

    /// Places a resource in short-term memory with activation 1.
    ///
    /// When the store is full the resident with the lowest weight is evicted
    /// first (ties: older timestamp, then smaller id). An evicted resource
    /// that was never consolidated is deleted from memory.
    pub fn stm_insert(&mut self, id: ResourceId) -> Result<Option<ResourceId>> {
        if self.ltm.resource(id).is_none() {
            return Err(Error::UnknownResource(id));
        }
        if self.stm.refresh(id) {
            return Ok(None);
        }
        let mut evicted = None;
        if self.stm.is_full() {
            let victim = self
                .stm
                .slots()
                .iter()
                .filter_map(|s| self.ltm.resource(s.resource_id))
                .min_by(|a, b| {
                    a.weight
                        .total_cmp(&b.weight)
                        .then_with(|| a.timestamp.cmp(&b.timestamp))
                        .then_with(|| a.id.cmp(&b.id))
                })
                .map(|r| (r.id, r.consolidated));
            if let Some((victim, consolidated)) = victim {
                self.stm.remove(victim);
                if !consolidated {
                    self.ltm.remove_resource(victim);
                }
                evicted = Some(victim);
            }
        }
        self.stm.push(id);
        Ok(evicted)
    }

    /// Applies `n` decay steps to every short-term activation.
    pub fn decay_tick(&mut self, n: u64) {
        self.stm.decay(n);
        self.elapsed_ticks += n;
    }

    /// Resets a resource's activation to 1, bringing it back into short-term
    /// memory if it is only held long-term.
    pub fn rehearse(&mut self, id: ResourceId) -> Result<Option<ResourceId>> {
        if self.stm.refresh(id) {
            return Ok(None);
        }
        self.stm_insert(id)
    }

    /// Sleep-time transfer from short-term to long-term memory.
    pub fn consolidate(&mut self) -> ConsolidationReport {
        let slots = self.stm.clear();
        let mut report = ConsolidationReport {
            stm_cleared_count: slots.len(),
            ..Default::default()
        };
        for slot in slots {
            let Some(resource) = self.ltm.resource_mut(slot.resource_id) else {
                continue;
            };
            let stm_weight = resource.weight;
            if slot.activation < ACTIVATION_THRESHOLD {
                let reduced = reduce_weight(stm_weight);
                resource.weight = reduced;
                report.reduced.push((resource.id, stm_weight, reduced));
            } else {
                resource.weight = resource.weight.max(stm_weight);
            }
            resource.consolidated = true;
        }

        let doomed: Vec<ResourceId> = self
            .ltm
            .resources()
            .filter(|r| r.weight < FORGET_THRESHOLD)
            .map(|r| r.id)
            .collect();
        for id in doomed {
            if let Some(removal) = self.ltm.remove_resource(id) {
                report.forgotten_resources.push(id);
                report.forgotten_events.extend(removal.event);
                report.forgotten_people.extend(removal.people);
            }
        }
        report
    }

    /// Generative retrieval. Every resource that matched a cue in a returned
    /// event is rehearsed.
    pub fn retrieve<S: AsRef<str>>(&mut self, cues: &[S], k: usize) -> Result<Vec<RetrievalHit>> {
        let hits = self.peek(cues, k)?;
        let matched: Vec<ResourceId> = hits
            .iter()
            .flat_map(|hit| {
                hit.event
                    .resource_ids
                    .iter()
                    .copied()
                    .filter(|rid| {
                        self.ltm.resource(*rid).is_some_and(|r| {
                            hit.matched_cues.iter().any(|c| retrieve::cue_matches(c, r))
                        })
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        for rid in matched {
            // an earlier rehearsal in this loop may have evicted it
            if self.ltm.resource(rid).is_some() {
                self.rehearse(rid)?;
            }
        }
        Ok(hits)
    }

    /// Same ranking as [`retrieve`](Self::retrieve) without rehearsal.
    pub fn peek<S: AsRef<str>>(&self, cues: &[S], k: usize) -> Result<Vec<RetrievalHit>> {
        let cues = normalize_cues(cues)?;
        Ok(retrieve::rank_events(&self.ltm, &cues, k))
    }

    fn latest_fact(&self, person: &str, attribute: Attribute) -> Option<&Resource> {
        let key = normalize_name(person);
        self.ltm.person(&key)?;
        self.ltm
            .resources()
            .filter(|r| {
                r.information
                    .as_fact()
                    .is_some_and(|f| f.subject == key && f.attribute == attribute)
            })
            .max_by(|a, b| a.timestamp.cmp(&b.timestamp).then(a.id.cmp(&b.id)))
    }

    /// Most recent live value of a person's attribute.
    pub fn fact_lookup(&self, person: &str, attribute: Attribute) -> Option<String> {
        self.latest_fact(person, attribute)
            .and_then(|r| r.information.as_fact())
            .map(|f| f.value.clone())
    }

    /// String-keyed variant used by external interfaces.
    pub fn fact_lookup_named(&self, person: &str, attribute: &str) -> Result<Option<String>> {
        let attribute: Attribute = attribute.parse()?;
        Ok(self.fact_lookup(person, attribute))
    }

    pub fn fact_resource(&self, person: &str, attribute: Attribute) -> Option<ResourceId> {
        self.latest_fact(person, attribute).map(|r| r.id)
    }

    pub fn register_person(&mut self, name: &str, intro_event: EventId) -> Result<()> {
        if self.ltm.event(intro_event).is_none() {
            return Err(Error::UnknownEvent(intro_event));
        }
        let display = display_name(name);
        if display.is_empty() {
            return Err(Error::validation("person name is empty"));
        }
        let first_met = self.ltm.event(intro_event).map(|e| e.timestamp).unwrap();
        self.ltm.insert_person(PersonProfile {
            name: display,
            first_met,
            intro_event,
        });
        Ok(())
    }

    pub fn person(&self, name: &str) -> Option<PersonView> {
        let profile = self.ltm.person(name)?;
        let facts = Attribute::ALL
            .into_iter()
            .filter_map(|a| self.fact_lookup(&profile.name, a).map(|v| (a, v)))
            .collect();
        Some(PersonView {
            name: profile.name.clone(),
            first_met: profile.first_met,
            facts,
        })
    }

    pub fn people(&self) -> Vec<PersonView> {
        self.ltm
            .people()
            .filter_map(|p| self.person(&p.name))
            .collect()
    }

    /// The most recently updated learn-thing event that names `term`.
    pub fn find_term(&self, term: &str) -> Option<TermRecall> {
        let term = normalize_name(term);
        self.ltm
            .events()
            .filter(|e| e.event_type == EventType::LearnThing)
            .filter_map(|e| {
                let term_resource = self.ltm.event_resources(e).find(|r| {
                    matches!(&r.information, Information::Grammatical { token, fact: None } if *token == term)
                })?;
                Some((e, term_resource.id))
            })
            .max_by(|(a, _), (b, _)| a.timestamp.cmp(&b.timestamp).then(a.id.cmp(&b.id)))
            .map(|(event, term_resource)| {
                let images: Vec<&Resource> = self
                    .ltm
                    .event_resources(event)
                    .filter(|r| r.resource_type() == ResourceType::Image)
                    .collect();
                let image = images
                    .iter()
                    .max_by(|a, b| a.timestamp.cmp(&b.timestamp).then(a.id.cmp(&b.id)))
                    .and_then(|r| match &r.information {
                        Information::Image { path } => Some((r.id, path.clone())),
                        _ => None,
                    });
                TermRecall {
                    event_id: event.id,
                    term_resource,
                    image,
                    image_count: images.len(),
                }
            })
    }

    /// Referential integrity of the long-term store plus short-term bounds.
    pub fn validate(&self) -> Result<(), IntegrityError> {
        self.ltm.validate()?;
        if self.stm.len() > STM_CAPACITY {
            return Err(IntegrityError::StmOverCapacity(self.stm.len()));
        }
        for slot in self.stm.slots() {
            if self.ltm.resource(slot.resource_id).is_none() {
                return Err(IntegrityError::DanglingSlot(slot.resource_id));
            }
            if !(0.0..=1.0).contains(&slot.activation) {
                return Err(IntegrityError::OutOfRange {
                    resource: slot.resource_id,
                    field: "activation",
                    value: slot.activation,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
