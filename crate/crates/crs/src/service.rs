//! HTTP API over the dialog engine.
//!
//! Every mutation is written to the event store before the response leaves,
//! and requests for one session are serialized by a per-session lock.

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, RwLock};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response as HttpResponse};
use axum::routing::{get, post};
use axum::{Json, Router};
use crs_core::catalog::View;
use crs_core::dialog::{DialogError, DialogState, Mode, OptionSummary, Response, ViewPayload};
use crs_core::recommender::Recommendation;
use crs_core::simulator::builtin_scenarios;
use crs_core::{Engine, Session};
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

use crate::store::{EventStore, StoreError};

pub type Clock = Arc<dyn Fn() -> u64 + Send + Sync>;

pub fn system_clock() -> Clock {
    Arc::new(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiSessionSnapshot {
    pub session_id: String,
    pub mode: Mode,
    pub state: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    /// Restaurant in focus, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restaurant_id: Option<String>,
    pub options: Vec<OptionSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub view: Option<ViewPayload>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recommendation: Option<Recommendation>,
    pub last_responses: Vec<Response>,
    pub command_count: u64,
}

impl ApiSessionSnapshot {
    pub fn of(engine: &Engine, session: &Session, scenario: Option<&str>) -> Self {
        let options = session
            .options
            .iter()
            .filter_map(|id| engine.catalog().get(id))
            .map(OptionSummary::of)
            .collect();
        let recommendation = match &session.state {
            DialogState::Recommended { recommendation } => Some(recommendation.clone()),
            _ => None,
        };
        Self {
            session_id: session.id.clone(),
            mode: session.mode,
            state: session.state.tag().to_string(),
            scenario: scenario.map(str::to_string),
            restaurant_id: session.state.focus().map(str::to_string),
            options,
            view: engine.render_view(session).ok(),
            recommendation,
            last_responses: session.last_responses.clone(),
            command_count: session.command_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtteranceReply {
    pub responses: Vec<Response>,
    pub snapshot: ApiSessionSnapshot,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    pub error: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
}

struct Failure(StatusCode, ApiError);

impl Failure {
    fn new(status: StatusCode, error: impl Into<String>) -> Self {
        Failure(status, ApiError { error: error.into(), field: None })
    }

    fn field(field: impl Into<String>, error: impl Into<String>) -> Self {
        Failure(
            StatusCode::BAD_REQUEST,
            ApiError {
                error: error.into(),
                field: Some(field.into()),
            },
        )
    }

    fn not_found(what: &str, id: &str) -> Self {
        Failure::new(StatusCode::NOT_FOUND, format!("unknown {what} `{id}`"))
    }
}

impl From<StoreError> for Failure {
    fn from(e: StoreError) -> Self {
        tracing::error!("persistence failed: {e}");
        Failure::new(StatusCode::INTERNAL_SERVER_ERROR, "could not persist session")
    }
}

impl IntoResponse for Failure {
    fn into_response(self) -> HttpResponse {
        (self.0, Json(self.1)).into_response()
    }
}

struct Slot {
    session: Session,
    scenario: Option<String>,
    last_active: u64,
    removed: bool,
}

pub struct AppState {
    engine: Arc<Engine>,
    store: EventStore,
    sessions: RwLock<HashMap<String, Arc<tokio::sync::Mutex<Slot>>>>,
    ttl_ms: u64,
    clock: Clock,
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Recovery {
    pub restored: usize,
    pub expired: usize,
    pub failed: Vec<String>,
}

impl AppState {
    pub fn new(engine: Arc<Engine>, store: EventStore, ttl: Duration, clock: Clock) -> Self {
        Self {
            engine,
            store,
            sessions: RwLock::new(HashMap::new()),
            ttl_ms: ttl.as_millis() as u64,
            clock,
        }
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn store(&self) -> &EventStore {
        &self.store
    }

    pub fn session_count(&self) -> usize {
        self.sessions.read().unwrap().len()
    }

    /// Replay every log on disk. Logs that no longer replay are left in
    /// place and reported.
    pub fn recover(&self) -> Result<Recovery, StoreError> {
        let now = (self.clock)();
        let mut report = Recovery::default();
        for id in self.store.ids()? {
            let restored = self
                .store
                .load(&id)
                .map_err(|e| e.to_string())
                .and_then(|log| self.engine.replay(&log).map_err(|e| format!("{e:?}")));
            let session = match restored {
                Ok(s) => s,
                Err(e) => {
                    tracing::warn!("session {id} not restored: {e}");
                    report.failed.push(id);
                    continue;
                }
            };
            let last_active = session.event_log.last().map_or(0, |e| e.timestamp);
            if self.expired(last_active, now) {
                self.store.remove(&id)?;
                report.expired += 1;
                continue;
            }
            let scenario = self.store.load_scenario(&id)?;
            self.insert(session, scenario, last_active);
            report.restored += 1;
        }
        Ok(report)
    }

    fn expired(&self, last_active: u64, now: u64) -> bool {
        now.saturating_sub(last_active) > self.ttl_ms
    }

    fn insert(&self, session: Session, scenario: Option<String>, last_active: u64) {
        let id = session.id.clone();
        let slot = Slot {
            session,
            scenario,
            last_active,
            removed: false,
        };
        self.sessions
            .write()
            .unwrap()
            .insert(id, Arc::new(tokio::sync::Mutex::new(slot)));
    }

    fn slot(&self, id: &str) -> Option<Arc<tokio::sync::Mutex<Slot>>> {
        self.sessions.read().unwrap().get(id).cloned()
    }

    /// Delete sessions idle for longer than the TTL. Returns how many went.
    pub async fn sweep(&self) -> Result<usize, StoreError> {
        let now = (self.clock)();
        let slots: Vec<_> = self.sessions.read().unwrap().iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        let mut removed = 0;
        for (id, slot) in slots {
            let mut slot = slot.lock().await;
            if !slot.removed && self.expired(slot.last_active, now) {
                self.store.remove(&id)?;
                slot.removed = true;
                self.sessions.write().unwrap().remove(&id);
                removed += 1;
            }
        }
        Ok(removed)
    }
}

pub fn router(state: Arc<AppState>, static_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}", get(get_session))
        .route("/api/sessions/{id}/utterance", post(post_utterance))
        .route("/api/restaurants/{id}", get(get_restaurant))
        .route("/api/catalog", get(get_catalog))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

fn decode<T: serde::de::DeserializeOwned>(body: &[u8]) -> Result<T, Failure> {
    let de = &mut serde_json::Deserializer::from_slice(body);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let message = e.into_inner().to_string();
        // serde reports missing fields at the parent path
        let field = message
            .strip_prefix("missing field `")
            .and_then(|m| m.split('`').next())
            .map_or(path, str::to_string);
        Failure::field(field, message)
    })
}

#[derive(Deserialize)]
struct CreateRequest {
    mode: String,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    scenario: Option<String>,
}

async fn create_session(State(app): State<Arc<AppState>>, body: Bytes) -> Result<HttpResponse, Failure> {
    let req: CreateRequest = decode(&body)?;
    let mode = Mode::from_tag(&req.mode)
        .ok_or_else(|| Failure::field("mode", format!("mode must be guided or baseline, got `{}`", req.mode)))?;
    if let Some(tag) = &req.scenario {
        if !builtin_scenarios().iter().any(|s| &s.tag == tag) {
            return Err(Failure::field("scenario", format!("unknown scenario `{tag}`")));
        }
    }
    app.sweep().await?;
    let id = uuid::Uuid::new_v4().to_string();
    let seed = req.seed.unwrap_or_else(|| uuid::Uuid::new_v4().as_u64_pair().0);
    let now = (app.clock)();
    let session = app.engine.start_session(id.clone(), mode, seed, now);
    if let Some(tag) = &req.scenario {
        app.store.save_scenario(&id, tag)?;
    }
    app.store.append(&id, &session.event_log, false)?;
    let snapshot = ApiSessionSnapshot::of(&app.engine, &session, req.scenario.as_deref());
    app.insert(session, req.scenario, now);
    Ok((StatusCode::CREATED, Json(snapshot)).into_response())
}

async fn get_session(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
) -> Result<Json<ApiSessionSnapshot>, Failure> {
    let slot = app.slot(&id).ok_or_else(|| Failure::not_found("session", &id))?;
    let slot = slot.lock().await;
    if slot.removed {
        return Err(Failure::not_found("session", &id));
    }
    Ok(Json(ApiSessionSnapshot::of(&app.engine, &slot.session, slot.scenario.as_deref())))
}

#[derive(Deserialize)]
struct UtteranceRequest {
    text: String,
}

async fn post_utterance(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> Result<Json<UtteranceReply>, Failure> {
    let slot = app.slot(&id).ok_or_else(|| Failure::not_found("session", &id))?;
    let req: UtteranceRequest = decode(&body)?;
    if req.text.trim().is_empty() {
        return Err(Failure::field("text", "utterance must not be empty"));
    }
    let mut slot = slot.lock().await;
    if slot.removed {
        return Err(Failure::not_found("session", &id));
    }
    let conflict = || Failure::new(StatusCode::CONFLICT, format!("session `{id}` is booked"));
    if slot.session.is_terminal() {
        return Err(conflict());
    }
    let now = (app.clock)();
    let mut next = slot.session.clone();
    let written = next.event_log.len();
    let responses = match app.engine.step(&mut next, &req.text, now) {
        Ok(r) => r,
        Err(DialogError::Terminal(_)) => return Err(conflict()),
        Err(e) => return Err(Failure::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string())),
    };
    app.store.append(&id, &next.event_log[written..], next.is_terminal())?;
    slot.session = next;
    slot.last_active = now;
    let snapshot = ApiSessionSnapshot::of(&app.engine, &slot.session, slot.scenario.as_deref());
    Ok(Json(UtteranceReply { responses, snapshot }))
}

#[derive(Deserialize)]
struct ViewQuery {
    view: Option<String>,
}

async fn get_restaurant(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    Query(q): Query<ViewQuery>,
) -> Result<Json<ViewPayload>, Failure> {
    let view = match q.view.as_deref() {
        None => View::Overview,
        Some(tag) => View::from_tag(tag).ok_or_else(|| Failure::field("view", format!("unknown view `{tag}`")))?,
    };
    app.engine
        .view_payload(&id, view)
        .map(Json)
        .ok_or_else(|| Failure::not_found("restaurant", &id))
}

async fn get_catalog(State(app): State<Arc<AppState>>) -> Json<Vec<OptionSummary>> {
    Json(app.engine.catalog().restaurants().iter().map(OptionSummary::of).collect())
}
