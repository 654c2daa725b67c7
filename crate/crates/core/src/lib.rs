pub mod agent;
pub mod dialogue;
pub mod error;
pub mod memory;
pub mod persistence;
pub mod text;

pub use agent::Agent;
pub use error::{Error, IntegrityError, PersistenceError, Result};
