use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use chrono::{DateTime, Utc};
use serde::Serialize;
use tokio::sync::Mutex as AsyncMutex;

use arthur_core::dialogue::DialogueState;
use arthur_core::persistence::save_ltm;
use arthur_core::Agent;

use crate::error::{ApiError, ApiResult};

#[derive(Debug, Clone, Serialize)]
pub struct Session {
    pub session_id: String,
    pub dialogue_state: DialogueState,
    pub created_at: DateTime<Utc>,
    pub turns: u64,
}

pub type SessionHandle = Arc<AsyncMutex<Session>>;

/// Shared service state. The agent is the single writer of long-term
/// memory; each session is additionally serialized by its own fair lock, so
/// turns to one session run in arrival order.
#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

struct Inner {
    agent: Mutex<Agent>,
    sessions: RwLock<BTreeMap<String, SessionHandle>>,
    next_session: AtomicU64,
    ltm_path: Option<PathBuf>,
}

impl AppState {
    pub fn new(agent: Agent) -> Self {
        AppState {
            inner: Arc::new(Inner {
                agent: Mutex::new(agent),
                sessions: RwLock::new(BTreeMap::new()),
                next_session: AtomicU64::new(1),
                ltm_path: None,
            }),
        }
    }

    /// Also writes long-term memory to `path` after every sleep.
    pub fn with_ltm_path(agent: Agent, path: PathBuf) -> Self {
        AppState {
            inner: Arc::new(Inner {
                agent: Mutex::new(agent),
                sessions: RwLock::new(BTreeMap::new()),
                next_session: AtomicU64::new(1),
                ltm_path: Some(path),
            }),
        }
    }

    pub fn create_session(&self) -> Session {
        let n = self.inner.next_session.fetch_add(1, Ordering::SeqCst);
        let session = Session {
            session_id: format!("s{n}"),
            dialogue_state: DialogueState::new(),
            created_at: Utc::now(),
            turns: 0,
        };
        self.inner
            .sessions
            .write()
            .expect("session table poisoned")
            .insert(
                session.session_id.clone(),
                Arc::new(AsyncMutex::new(session.clone())),
            );
        session
    }

    pub fn session(&self, id: &str) -> ApiResult<SessionHandle> {
        self.inner
            .sessions
            .read()
            .expect("session table poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::unknown_session(id))
    }

    pub fn session_handles(&self) -> Vec<SessionHandle> {
        self.inner
            .sessions
            .read()
            .expect("session table poisoned")
            .values()
            .cloned()
            .collect()
    }

    /// Runs `f` with exclusive access to the agent on the blocking pool.
    pub async fn with_agent<T, F>(&self, f: F) -> ApiResult<T>
    where
        F: FnOnce(&mut Agent) -> T + Send + 'static,
        T: Send + 'static,
    {
        let inner = Arc::clone(&self.inner);
        let out = tokio::task::spawn_blocking(move || {
            let mut agent = inner
                .agent
                .lock()
                .map_err(|_| ApiError::Internal("agent lock poisoned".into()))?;
            Ok::<T, ApiError>(f(&mut agent))
        })
        .await??;
        Ok(out)
    }

    /// Writes long-term memory if a path was configured.
    pub async fn persist(&self) -> ApiResult<Option<usize>> {
        let Some(path) = self.inner.ltm_path.clone() else {
            return Ok(None);
        };
        let written = self
            .with_agent(move |agent| save_ltm(agent.memory().ltm(), &path))
            .await?
            .map_err(|e| ApiError::Internal(e.to_string()))?;
        Ok(Some(written))
    }
}
