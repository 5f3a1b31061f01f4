//! HTTP interface for the companion UI.
//!
//! Every response is `{"schema_version": 1, "data": ...}` or
//! `{"schema_version": 1, "error": {"code", "message", "field"}}`.
//! Reads run concurrently. Mutations take a single writer slot, stage and
//! persist under a shared lock, and hold the exclusive lock only to apply.

use std::net::SocketAddr;
use std::sync::{Arc, RwLock, RwLockReadGuard, RwLockWriteGuard};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::NaiveDate;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tokio::sync::Mutex;

use crate::canonical::f6;
use crate::engine::{EngineError, LocusPoint, Registry, Signal, SignalId, SignalStatus};
use crate::model::{AssessorScore, CommitteeAssessment, Position, Region, SeverityBand};
use crate::persistence::{JournalError, Staged, Store, StoreError};

pub const API_SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_ADDR: &str = "127.0.0.1:7878";

#[derive(Clone)]
pub struct AppState {
    shared: Arc<Shared>,
}

struct Shared {
    store: RwLock<Store>,
    writer: Mutex<()>,
}

impl AppState {
    pub fn new(store: Store) -> Self {
        Self {
            shared: Arc::new(Shared {
                store: RwLock::new(store),
                writer: Mutex::new(()),
            }),
        }
    }

    fn read(&self) -> RwLockReadGuard<'_, Store> {
        self.shared.store.read().unwrap_or_else(|e| e.into_inner())
    }

    fn write(&self) -> RwLockWriteGuard<'_, Store> {
        self.shared.store.write().unwrap_or_else(|e| e.into_inner())
    }

    /// Runs one mutation under the single-writer contract and renders the
    /// resulting signal.
    async fn mutate<T>(
        &self,
        stage: impl FnOnce(&Store) -> Result<Staged, StoreError>,
        render: impl FnOnce(&Signal) -> T,
    ) -> Result<T, ApiError> {
        let _writer = self.shared.writer.lock().await;
        let staged = {
            let store = self.read();
            let staged = stage(&store).map_err(|e| ApiError::from_store(e, store.registry()))?;
            store
                .persist(&staged)
                .map_err(|e| ApiError::from_store(e, store.registry()))?;
            staged
        };
        let mut store = self.write();
        let signal = store
            .apply(staged)
            .map_err(|e| ApiError::from_store(e, &Registry::default()))?;
        Ok(render(signal))
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/signals", get(list_signals).post(register_signal))
        .route("/api/signals/{id}", get(get_signal))
        .route("/api/signals/{id}/assessments", post(submit_session))
        .route("/api/signals/{id}/decay", post(submit_decay))
        .route("/api/signals/{id}/preview", post(preview_session))
        .route("/api/signals/{id}/retire", post(retire_signal))
        .route("/api/signals/{id}/close", post(close_signal))
        .route("/api/dashboard", get(dashboard))
        .fallback(|| async { ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such route", None) })
        .with_state(state)
}

/// Serves the API until interrupted.
pub async fn serve(store: Store, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(AppState::new(store)))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

#[derive(Serialize)]
struct Envelope<T> {
    schema_version: u32,
    data: T,
}

fn ok<T: Serialize>(status: StatusCode, data: T) -> Response {
    (
        status,
        Json(Envelope {
            schema_version: API_SCHEMA_VERSION,
            data,
        }),
    )
        .into_response()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    pub field: Option<String>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>, field: Option<&str>) -> Self {
        Self {
            status,
            body: ErrorBody {
                code: code.to_owned(),
                message: message.into(),
                field: field.map(str::to_owned),
            },
        }
    }

    fn invalid(code: &str, message: impl Into<String>, field: Option<&str>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, code, message, field)
    }

    fn from_engine(e: EngineError, registry: &Registry) -> Self {
        match &e {
            EngineError::UnknownSignal(key) => {
                let near = registry.near_matches(key, 3);
                let mut message = e.to_string();
                if !near.is_empty() {
                    message.push_str(&format!("; did you mean: {}", near.join(", ")));
                }
                Self::new(StatusCode::NOT_FOUND, e.code(), message, e.field())
            }
            _ => Self::invalid(e.code(), e.to_string(), e.field()),
        }
    }

    fn from_store(e: StoreError, registry: &Registry) -> Self {
        match e {
            StoreError::Engine(e) => Self::from_engine(e, registry),
            StoreError::Journal(JournalError::DateRegression { .. }) => {
                Self::invalid("date_order", e.to_string(), Some("date"))
            }
            e if e.is_validation() => Self::invalid("invalid_input", e.to_string(), None),
            StoreError::Replay(_) => Self::new(
                StatusCode::INTERNAL_SERVER_ERROR,
                "integrity_error",
                e.to_string(),
                None,
            ),
            e => Self::new(StatusCode::INTERNAL_SERVER_ERROR, "storage_error", e.to_string(), None),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        #[derive(Serialize)]
        struct ErrorEnvelope {
            schema_version: u32,
            error: ErrorBody,
        }
        (
            self.status,
            Json(ErrorEnvelope {
                schema_version: API_SCHEMA_VERSION,
                error: self.body,
            }),
        )
            .into_response()
    }
}

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::invalid("invalid_body", e.to_string(), None))
}

/// One row of the signal list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignalSummary {
    pub id: SignalId,
    pub name: String,
    pub status: SignalStatus,
    pub session_index: u32,
    pub date: NaiveDate,
    pub position: Position,
    pub region: Region,
    #[serde(serialize_with = "f6")]
    pub d: f64,
    #[serde(serialize_with = "f6")]
    pub severity: f64,
    pub band: SeverityBand,
    pub frequency_count: u32,
    pub escalation_flag: bool,
    pub escalated_on: Option<NaiveDate>,
}

impl SignalSummary {
    pub fn of(signal: &Signal) -> Self {
        let p = signal.current();
        Self {
            id: signal.id.clone(),
            name: signal.name.clone(),
            status: signal.status,
            session_index: p.session_index,
            date: p.date,
            position: p.position,
            region: p.region,
            d: p.d,
            severity: p.severity,
            band: p.band,
            frequency_count: p.frequency_count,
            escalation_flag: p.escalation_flag,
            escalated_on: signal.escalated_on,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionCount {
    pub region: Region,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandCount {
    pub band: SeverityBand,
    pub count: usize,
    pub recommended_action: &'static str,
}

/// Occupancy of the active signals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dashboard {
    pub active: usize,
    pub regions: Vec<RegionCount>,
    pub bands: Vec<BandCount>,
    pub escalated: Vec<SignalSummary>,
}

impl Dashboard {
    pub fn of(registry: &Registry) -> Self {
        let active: Vec<&Signal> = registry.signals().iter().filter(|s| s.is_active()).collect();
        Self {
            active: active.len(),
            regions: Region::ALL
                .into_iter()
                .map(|region| RegionCount {
                    region,
                    count: active.iter().filter(|s| s.current().region == region).count(),
                })
                .collect(),
            bands: SeverityBand::ALL
                .into_iter()
                .map(|band| BandCount {
                    band,
                    count: active.iter().filter(|s| s.current().band == band).count(),
                    recommended_action: band.recommended_action(),
                })
                .collect(),
            escalated: active
                .iter()
                .filter(|s| s.current().escalation_flag)
                .map(|s| SignalSummary::of(s))
                .collect(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegisterBody {
    name: String,
    #[serde(default)]
    definition: String,
    #[serde(default)]
    scope: String,
    date: NaiveDate,
    scores: Vec<AssessorScore>,
    frequency_count: u32,
    #[serde(default)]
    notes: String,
}

/// An assessment, or a decay tick when `decay` is set.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SessionBody {
    date: NaiveDate,
    #[serde(default)]
    decay: bool,
    #[serde(default)]
    scores: Option<Vec<AssessorScore>>,
    #[serde(default)]
    frequency_count: Option<u32>,
    #[serde(default)]
    notes: String,
}

enum Session {
    Assess(CommitteeAssessment),
    Decay(NaiveDate),
}

impl SessionBody {
    fn into_session(self) -> Result<Session, ApiError> {
        if self.decay {
            if self.scores.is_some() {
                return Err(ApiError::invalid(
                    "invalid_body",
                    "a decay tick takes no scores",
                    Some("scores"),
                ));
            }
            return Ok(Session::Decay(self.date));
        }
        let scores = self
            .scores
            .ok_or_else(|| ApiError::invalid("invalid_body", "scores are required", Some("scores")))?;
        let frequency_count = self
            .frequency_count
            .ok_or_else(|| ApiError::invalid("invalid_body", "frequency_count is required", Some("frequency_count")))?;
        Ok(Session::Assess(
            CommitteeAssessment::new(self.date, frequency_count, scores).with_notes(self.notes),
        ))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExitBody {
    date: NaiveDate,
    #[serde(default)]
    rationale: String,
    #[serde(default, rename = "override")]
    override_gate: bool,
}

async fn list_signals(State(state): State<AppState>) -> Response {
    let store = state.read();
    let list: Vec<SignalSummary> = store.registry().signals().iter().map(SignalSummary::of).collect();
    ok(StatusCode::OK, list)
}

async fn get_signal(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let store = state.read();
    let registry = store.registry();
    let signal = registry.resolve(&id).map_err(|e| ApiError::from_engine(e, registry))?;
    Ok(ok(StatusCode::OK, signal))
}

async fn dashboard(State(state): State<AppState>) -> Response {
    ok(StatusCode::OK, Dashboard::of(state.read().registry()))
}

async fn register_signal(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let b: RegisterBody = parse_body(&body)?;
    let assessment = CommitteeAssessment::new(b.date, b.frequency_count, b.scores).with_notes(b.notes);
    state
        .mutate(
            |store| store.stage_register(&b.name, &b.definition, &b.scope, &assessment),
            |signal| ok(StatusCode::CREATED, signal),
        )
        .await
}

async fn run_session(state: &AppState, id: &str, session: Session) -> Result<Response, ApiError> {
    state
        .mutate(
            |store| match &session {
                Session::Assess(a) => store.stage_assessment(id, a),
                Session::Decay(date) => store.stage_decay(id, *date),
            },
            |signal| ok(StatusCode::CREATED, signal.current()),
        )
        .await
}

async fn submit_session(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let session = parse_body::<SessionBody>(&body)?.into_session()?;
    run_session(&state, &id, session).await
}

async fn submit_decay(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct DecayBody {
        date: NaiveDate,
    }
    let b: DecayBody = parse_body(&body)?;
    run_session(&state, &id, Session::Decay(b.date)).await
}

async fn preview_session(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let session = parse_body::<SessionBody>(&body)?.into_session()?;
    let store = state.read();
    let result: Result<LocusPoint, StoreError> = match &session {
        Session::Assess(a) => store.preview_assessment(&id, a),
        Session::Decay(date) => store.preview_decay(&id, *date),
    };
    let point = result.map_err(|e| ApiError::from_store(e, store.registry()))?;
    Ok(ok(StatusCode::OK, point))
}

async fn retire_signal(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let b: ExitBody = parse_body(&body)?;
    if b.override_gate {
        return Err(ApiError::invalid(
            "invalid_body",
            "retirement has no gate to override",
            Some("override"),
        ));
    }
    state
        .mutate(
            |store| store.stage_retire(&id, b.date, &b.rationale),
            |signal| ok(StatusCode::OK, signal),
        )
        .await
}

async fn close_signal(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let b: ExitBody = parse_body(&body)?;
    state
        .mutate(
            |store| store.stage_close(&id, b.date, b.override_gate, &b.rationale),
            |signal| ok(StatusCode::OK, signal),
        )
        .await
}
