use serde::{Deserialize, Serialize};

use super::decay::{decay_activation, STM_CAPACITY};
use super::types::ResourceId;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StmSlot {
    pub resource_id: ResourceId,
    pub activation: f64,
}

/// Capacity-bounded working set. Eviction policy lives in
/// [`MemoryCore`](super::MemoryCore) because it needs resource weights.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ShortTermMemory {
    slots: Vec<StmSlot>,
    tick_counter: u64,
}

impl ShortTermMemory {
    pub const CAPACITY: usize = STM_CAPACITY;

    pub fn new() -> Self {
        Self::default()
    }

    pub fn slots(&self) -> &[StmSlot] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.slots.len() >= Self::CAPACITY
    }

    pub fn tick_counter(&self) -> u64 {
        self.tick_counter
    }

    pub fn contains(&self, id: ResourceId) -> bool {
        self.slots.iter().any(|s| s.resource_id == id)
    }

    pub fn activation(&self, id: ResourceId) -> Option<f64> {
        self.slots
            .iter()
            .find(|s| s.resource_id == id)
            .map(|s| s.activation)
    }

    /// Sets activation back to 1. Returns false when the id is not resident.
    pub(crate) fn refresh(&mut self, id: ResourceId) -> bool {
        match self.slots.iter_mut().find(|s| s.resource_id == id) {
            Some(slot) => {
                slot.activation = 1.0;
                true
            }
            None => false,
        }
    }

    pub(crate) fn push(&mut self, id: ResourceId) {
        debug_assert!(!self.is_full() && !self.contains(id));
        self.slots.push(StmSlot {
            resource_id: id,
            activation: 1.0,
        });
    }

    pub(crate) fn remove(&mut self, id: ResourceId) -> bool {
        let before = self.slots.len();
        self.slots.retain(|s| s.resource_id != id);
        self.slots.len() != before
    }

    pub(crate) fn decay(&mut self, ticks: u64) {
        for slot in &mut self.slots {
            for _ in 0..ticks {
                slot.activation = decay_activation(slot.activation);
            }
        }
        self.tick_counter += ticks;
    }

    /// Empties the store and resets the tick counter. Returns the drained slots.
    pub(crate) fn clear(&mut self) -> Vec<StmSlot> {
        self.tick_counter = 0;
        std::mem::take(&mut self.slots)
    }
}
