use std::collections::BTreeMap;

use serde::Serialize;

use super::types::{normalize_name, EventId, GeneralEvent, PersonProfile, Resource, ResourceId};
use crate::error::IntegrityError;

/// Unbounded store of events, resources and people.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LongTermMemory {
    pub(crate) events: BTreeMap<EventId, GeneralEvent>,
    pub(crate) resources: BTreeMap<ResourceId, Resource>,
    pub(crate) people: BTreeMap<String, PersonProfile>,
}

/// What disappeared when a resource was removed.
#[derive(Debug, Default, Clone, PartialEq)]
pub(crate) struct Removal {
    pub event: Option<EventId>,
    pub people: Vec<String>,
}

impl LongTermMemory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn events(&self) -> impl Iterator<Item = &GeneralEvent> {
        self.events.values()
    }

    pub fn resources(&self) -> impl Iterator<Item = &Resource> {
        self.resources.values()
    }

    pub fn people(&self) -> impl Iterator<Item = &PersonProfile> {
        self.people.values()
    }

    pub fn event(&self, id: EventId) -> Option<&GeneralEvent> {
        self.events.get(&id)
    }

    pub fn resource(&self, id: ResourceId) -> Option<&Resource> {
        self.resources.get(&id)
    }

    pub fn person(&self, name: &str) -> Option<&PersonProfile> {
        self.people.get(&normalize_name(name))
    }

    pub fn event_count(&self) -> usize {
        self.events.len()
    }

    pub fn resource_count(&self) -> usize {
        self.resources.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty() && self.resources.is_empty() && self.people.is_empty()
    }

    pub fn event_resources<'a>(
        &'a self,
        event: &'a GeneralEvent,
    ) -> impl Iterator<Item = &'a Resource> + 'a {
        event
            .resource_ids
            .iter()
            .filter_map(|id| self.resources.get(id))
    }

    /// Builds a store from already-loaded records and checks it.
    pub fn from_parts(
        events: impl IntoIterator<Item = GeneralEvent>,
        resources: impl IntoIterator<Item = Resource>,
        people: impl IntoIterator<Item = PersonProfile>,
    ) -> Result<Self, IntegrityError> {
        let ltm = LongTermMemory {
            events: events.into_iter().map(|e| (e.id, e)).collect(),
            resources: resources.into_iter().map(|r| (r.id, r)).collect(),
            people: people.into_iter().map(|p| (p.key(), p)).collect(),
        };
        ltm.validate()?;
        Ok(ltm)
    }

    pub(crate) fn max_ids(&self) -> (u64, u64) {
        let e = self.events.keys().next_back().map_or(0, |id| id.0);
        let r = self.resources.keys().next_back().map_or(0, |id| id.0);
        (e, r)
    }

    pub(crate) fn insert_event(&mut self, event: GeneralEvent) {
        self.events.insert(event.id, event);
    }

    pub(crate) fn insert_resource(&mut self, resource: Resource) {
        self.resources.insert(resource.id, resource);
    }

    pub(crate) fn insert_person(&mut self, person: PersonProfile) {
        self.people.insert(person.key(), person);
    }

    pub(crate) fn resource_mut(&mut self, id: ResourceId) -> Option<&mut Resource> {
        self.resources.get_mut(&id)
    }

    pub(crate) fn event_mut(&mut self, id: EventId) -> Option<&mut GeneralEvent> {
        self.events.get_mut(&id)
    }

    /// Deletes a resource, cascading to its event when that event is left
    /// empty and to any person introduced by that event.
    pub(crate) fn remove_resource(&mut self, id: ResourceId) -> Option<Removal> {
        let resource = self.resources.remove(&id)?;
        let mut removal = Removal::default();
        let owner = resource.owner_event_id;
        let emptied = match self.events.get_mut(&owner) {
            Some(event) => {
                event.resource_ids.retain(|r| *r != id);
                event.resource_ids.is_empty()
            }
            None => false,
        };
        if emptied {
            self.events.remove(&owner);
            removal.event = Some(owner);
            removal.people = self.drop_people_of(owner);
        }
        Some(removal)
    }

    fn drop_people_of(&mut self, event: EventId) -> Vec<String> {
        let gone: Vec<String> = self
            .people
            .iter()
            .filter(|(_, p)| p.intro_event == event)
            .map(|(k, _)| k.clone())
            .collect();
        for key in &gone {
            self.people.remove(key);
        }
        gone
    }

    /// Full-scan referential integrity check.
    pub fn validate(&self) -> Result<(), IntegrityError> {
        for resource in self.resources.values() {
            let Some(owner) = self.events.get(&resource.owner_event_id) else {
                return Err(IntegrityError::DanglingOwner {
                    resource: resource.id,
                    event: resource.owner_event_id,
                });
            };
            if !owner.resource_ids.contains(&resource.id) {
                return Err(IntegrityError::OwnerMismatch {
                    resource: resource.id,
                    listed_by: owner.id,
                    owner: resource.owner_event_id,
                });
            }
            if !(0.0..=1.0).contains(&resource.weight) {
                return Err(IntegrityError::OutOfRange {
                    resource: resource.id,
                    field: "weight",
                    value: resource.weight,
                });
            }
        }
        for event in self.events.values() {
            if event.resource_ids.is_empty() {
                return Err(IntegrityError::EmptyEvent(event.id));
            }
            if !(-1.0..=1.0).contains(&event.polarity) {
                return Err(IntegrityError::PolarityOutOfRange {
                    event: event.id,
                    value: event.polarity,
                });
            }
            for rid in &event.resource_ids {
                match self.resources.get(rid) {
                    None => {
                        return Err(IntegrityError::DanglingResource {
                            event: event.id,
                            resource: *rid,
                        })
                    }
                    Some(r) if r.owner_event_id != event.id => {
                        return Err(IntegrityError::OwnerMismatch {
                            resource: *rid,
                            listed_by: event.id,
                            owner: r.owner_event_id,
                        })
                    }
                    Some(_) => {}
                }
            }
        }
        for person in self.people.values() {
            if !self.events.contains_key(&person.intro_event) {
                return Err(IntegrityError::DanglingPerson {
                    person: person.name.clone(),
                    event: person.intro_event,
                });
            }
        }
        Ok(())
    }
}
