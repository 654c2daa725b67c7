use axum::extract::{FromRequest, Path, Query, State};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use arthur_core::dialogue::{AgentReply, Expression, TurnInput};
use arthur_core::memory::{
    ConsolidationReport, EventId, GeneralEvent, PersonProfile, PersonView, Resource, ResourceId,
    ResourceType, RetrievalHit, DEFAULT_K, STM_CAPACITY,
};

use crate::error::{ApiError, ApiResult};
use crate::state::{AppState, Session};

/// JSON body extractor whose failures are reported as validation errors.
#[derive(FromRequest)]
#[from_request(via(axum::Json), rejection(ApiError))]
pub struct ApiJson<T>(pub T);

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create_session).get(list_sessions))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/turns", post(post_turn))
        .route("/sessions/{id}/identify", post(identify))
        .route("/sessions/{id}/sleep", post(sleep))
        .route("/sessions/{id}/stm", get(stm))
        .route("/teach", post(teach))
        .route("/memory/ltm", get(ltm))
        .route("/people", get(people))
        .route("/events", get(events))
        .with_state(state)
}

#[derive(Debug, Serialize)]
pub struct SessionSummary {
    pub session_id: String,
    pub created_at: chrono::DateTime<chrono::Utc>,
    pub turns: u64,
    pub current_person: Option<String>,
    pub phase: arthur_core::dialogue::Phase,
}

impl From<&Session> for SessionSummary {
    fn from(s: &Session) -> Self {
        SessionSummary {
            session_id: s.session_id.clone(),
            created_at: s.created_at,
            turns: s.turns,
            current_person: s.dialogue_state.current_person.clone(),
            phase: s.dialogue_state.phase.clone(),
        }
    }
}

async fn create_session(State(app): State<AppState>) -> Json<SessionSummary> {
    let session = app.create_session();
    tracing::info!(session_id = %session.session_id, "created session");
    Json(SessionSummary::from(&session))
}

async fn list_sessions(State(app): State<AppState>) -> Json<Vec<SessionSummary>> {
    let mut out = Vec::new();
    for handle in app.session_handles() {
        out.push(SessionSummary::from(&*handle.lock().await));
    }
    out.sort_by_key(|s| {
        s.session_id
            .trim_start_matches('s')
            .parse::<u64>()
            .unwrap_or(u64::MAX)
    });
    Json(out)
}

async fn get_session(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<Json<SessionSummary>> {
    let handle = app.session(&id)?;
    let session = handle.lock().await;
    Ok(Json(SessionSummary::from(&*session)))
}

async fn post_turn(
    State(app): State<AppState>,
    Path(id): Path<String>,
    ApiJson(input): ApiJson<TurnInput>,
) -> ApiResult<Json<AgentReply>> {
    let mut session = app.session(&id)?.lock_owned().await;
    let reply = app
        .with_agent(move |agent| {
            let reply = agent.turn(&mut session.dialogue_state, input)?;
            session.turns += 1;
            Ok::<_, arthur_core::Error>(reply)
        })
        .await??;
    Ok(Json(reply))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentifyRequest {
    #[serde(default)]
    pub name: Option<String>,
}

async fn identify(
    State(app): State<AppState>,
    Path(id): Path<String>,
    ApiJson(body): ApiJson<IdentifyRequest>,
) -> ApiResult<Json<AgentReply>> {
    let mut session = app.session(&id)?.lock_owned().await;
    let name = body.name.filter(|n| !n.trim().is_empty());
    let reply = app
        .with_agent(move |agent| agent.identify(&mut session.dialogue_state, name.as_deref()))
        .await?;
    Ok(Json(reply))
}

#[derive(Debug, Serialize)]
pub struct SleepResponse {
    pub text: String,
    pub expression: Expression,
    pub report: ConsolidationReport,
}

async fn sleep(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<Json<SleepResponse>> {
    let _session = app.session(&id)?.lock_owned().await;
    let (reply, report) = app.with_agent(|agent| agent.sleep()).await?;
    app.persist().await?;
    Ok(Json(SleepResponse {
        text: reply.text,
        expression: reply.expression,
        report,
    }))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TeachRequest {
    pub term: String,
    pub image_path: String,
}

async fn teach(
    State(app): State<AppState>,
    ApiJson(body): ApiJson<TeachRequest>,
) -> ApiResult<Json<AgentReply>> {
    let reply = app
        .with_agent(move |agent| agent.teach(&body.term, &body.image_path))
        .await??;
    Ok(Json(reply))
}

#[derive(Debug, Serialize)]
pub struct StmEntry {
    pub resource_id: ResourceId,
    pub event_id: EventId,
    pub token: String,
    pub resource_type: ResourceType,
    pub activation: f64,
    pub weight: f64,
}

#[derive(Debug, Serialize)]
pub struct StmView {
    pub session_id: String,
    pub capacity: usize,
    pub elapsed_ticks: u64,
    pub tick_counter: u64,
    pub slots: Vec<StmEntry>,
}

async fn stm(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<StmView>> {
    app.session(&id)?;
    let view = app
        .with_agent(move |agent| {
            let memory = agent.memory();
            let slots = memory
                .stm()
                .slots()
                .iter()
                .filter_map(|slot| {
                    let r = memory.ltm().resource(slot.resource_id)?;
                    Some(StmEntry {
                        resource_id: r.id,
                        event_id: r.owner_event_id,
                        token: r.information.summary(),
                        resource_type: r.resource_type(),
                        activation: slot.activation,
                        weight: r.weight,
                    })
                })
                .collect();
            StmView {
                session_id: id,
                capacity: STM_CAPACITY,
                elapsed_ticks: memory.elapsed_ticks(),
                tick_counter: memory.stm().tick_counter(),
                slots,
            }
        })
        .await?;
    Ok(Json(view))
}

#[derive(Debug, Serialize)]
pub struct LtmView {
    pub event_count: usize,
    pub resource_count: usize,
    pub events: Vec<GeneralEvent>,
    pub resources: Vec<Resource>,
    pub people: Vec<PersonProfile>,
}

async fn ltm(State(app): State<AppState>) -> ApiResult<Json<LtmView>> {
    let view = app
        .with_agent(|agent| {
            let ltm = agent.memory().ltm();
            LtmView {
                event_count: ltm.event_count(),
                resource_count: ltm.resource_count(),
                events: ltm.events().cloned().collect(),
                resources: ltm.resources().cloned().collect(),
                people: ltm.people().cloned().collect(),
            }
        })
        .await?;
    Ok(Json(view))
}

async fn people(State(app): State<AppState>) -> ApiResult<Json<Vec<PersonView>>> {
    Ok(Json(app.with_agent(|agent| agent.memory().people()).await?))
}

#[derive(Debug, Deserialize)]
pub struct EventsQuery {
    /// Comma or space separated cues.
    pub cue: String,
    #[serde(default)]
    pub k: Option<usize>,
}

async fn events(
    State(app): State<AppState>,
    query: Result<Query<EventsQuery>, axum::extract::rejection::QueryRejection>,
) -> ApiResult<Json<Vec<RetrievalHit>>> {
    let Query(query) = query?;
    let cues: Vec<String> = query
        .cue
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|c| !c.is_empty())
        .map(str::to_string)
        .collect();
    let k = query.k.unwrap_or(DEFAULT_K);
    let hits = app
        .with_agent(move |agent| agent.memory().peek(&cues, k))
        .await??;
    Ok(Json(hits))
}
