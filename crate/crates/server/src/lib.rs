//! HTTP facade over the arthur agent.
//!
//! | route | body | reply |
//! |---|---|---|
//! | `POST /sessions` | none | session summary |
//! | `GET /sessions` | none | all session summaries |
//! | `POST /sessions/{id}/turns` | `TurnInput` | `AgentReply` |
//! | `POST /sessions/{id}/identify` | `{"name": ...}` | `AgentReply` |
//! | `POST /sessions/{id}/sleep` | none | text, expression and report |
//! | `POST /teach` | `{"term", "image_path"}` | `AgentReply` |
//! | `GET /sessions/{id}/stm` | none | activations and weights |
//! | `GET /memory/ltm` | none | events, resources, people |
//! | `GET /people` | none | people with their facts |
//! | `GET /events?cue=a,b&k=3` | none | ranked retrieval hits |
//!
//! Validation failures answer 400 and unknown ids 404, both with a JSON
//! `{"error", "kind"}` body.

pub mod error;
pub mod routes;
pub mod state;

pub use error::{ApiError, ApiResult};
pub use routes::router;
pub use state::{AppState, Session};

pub const DEFAULT_HOST: &str = "127.0.0.1";
pub const DEFAULT_PORT: u16 = 8717;
