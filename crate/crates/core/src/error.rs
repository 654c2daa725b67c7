use std::path::PathBuf;

use thiserror::Error;

use crate::memory::{EventId, ResourceId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("unknown resource {0}")]
    UnknownResource(ResourceId),

    #[error("unknown event {0}")]
    UnknownEvent(EventId),

    #[error(transparent)]
    Integrity(#[from] IntegrityError),

    #[error(transparent)]
    Persistence(#[from] PersistenceError),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

/// A broken reference inside long-term memory.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrityError {
    #[error("resource {resource} references missing event {event}")]
    DanglingOwner {
        resource: ResourceId,
        event: EventId,
    },

    #[error("event {event} lists missing resource {resource}")]
    DanglingResource {
        event: EventId,
        resource: ResourceId,
    },

    #[error("resource {resource} is listed by event {listed_by} but owned by event {owner}")]
    OwnerMismatch {
        resource: ResourceId,
        listed_by: EventId,
        owner: EventId,
    },

    #[error("event {0} has no resources")]
    EmptyEvent(EventId),

    #[error("person {person} references missing event {event}")]
    DanglingPerson { person: String, event: EventId },

    #[error("resource {resource} has {field} {value} outside [0, 1]")]
    OutOfRange {
        resource: ResourceId,
        field: &'static str,
        value: f64,
    },

    #[error("event {event} has polarity {value} outside [-1, 1]")]
    PolarityOutOfRange { event: EventId, value: f64 },

    #[error("short-term memory holds {0} items")]
    StmOverCapacity(usize),

    #[error("short-term memory slot references missing resource {0}")]
    DanglingSlot(ResourceId),
}

#[derive(Debug, Error)]
pub enum PersistenceError {
    #[error("file not found: {}", .0.display())]
    NotFound(PathBuf),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}:{line}: malformed record: {message}", path.display())]
    Malformed {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{}:{line}: {message}", path.display())]
    Config {
        path: PathBuf,
        line: usize,
        message: String,
    },
}
