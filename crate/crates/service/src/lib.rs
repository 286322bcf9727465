//! JSON API over a [`SessionStore`] for the annotation front end.
//!
//! | method | path | |
//! |---|---|---|
//! | GET | `/healthz` | liveness |
//! | GET | `/docs` | summaries available for annotation |
//! | GET, POST | `/sessions` | list / create sessions |
//! | GET | `/sessions/{id}` | overview and metrics |
//! | GET | `/sessions/{id}/docs/{doc}` | tokens, suggestions, working list, version |
//! | POST | `/sessions/{id}/docs/{doc}/edits` | apply one edit |
//! | POST | `/sessions/{id}/export` | GSML of the working lists |
//! | POST | `/sessions/{id}/lease`, `.../lease/heartbeat`, `.../lease/release` | single-writer lease |
//!
//! Errors are `{"error": <kind>, "message": ...}` plus kind-specific fields.

use std::net::SocketAddr;
use std::sync::Arc;

use accucheck_core::annotation::{Mistake, MistakeList, Texts, TokenizedText};
use accucheck_core::factcheck::{check_document, CheckOptions};
use accucheck_core::game::GameSet;
use accucheck_core::session::{
    export_gsml, session_metrics, AnnotationSession, DocState, EditCommand, Export, Lease, SessionError, SessionMetrics,
    SessionStore, StoreError,
};
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use chrono::Duration;

pub type Clock = Arc<dyn Fn() -> DateTime<Utc> + Send + Sync>;

/// Where suggestions for a new session come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreSource {
    /// The loaded pre-annotation file if any, else the fact checker if
    /// games are loaded, else nothing.
    #[default]
    Auto,
    File,
    Checker,
    None,
}

pub struct AppState {
    pub store: SessionStore,
    pub texts: Texts,
    pub games: GameSet,
    pub pre: Option<MistakeList>,
    pub lease_ttl: Duration,
    pub clock: Clock,
}

impl AppState {
    pub fn new(store: SessionStore, texts: Texts, games: GameSet, pre: Option<MistakeList>) -> Self {
        Self { store, texts, games, pre, lease_ttl: Duration::seconds(60), clock: Arc::new(Utc::now) }
    }

    fn now(&self) -> DateTime<Utc> {
        (self.clock)()
    }

    fn suggestions(&self, texts: &[TokenizedText], source: PreSource) -> Result<MistakeList, ApiError> {
        let wanted = |m: &Mistake| texts.iter().any(|t| t.doc_id == m.doc_id);
        let from_file = |pre: &MistakeList| pre.iter().filter(|m| wanted(m)).cloned().collect();
        let from_checker = || {
            texts
                .iter()
                .filter_map(|t| self.games.for_doc(&t.doc_id).map(|g| check_document(t, g, CheckOptions::default())))
                .flat_map(|l| l.entries)
                .collect()
        };
        match (source, &self.pre) {
            (PreSource::File | PreSource::Auto, Some(pre)) => Ok(from_file(pre)),
            (PreSource::File, None) => Err(ApiError::bad_request("no pre-annotation file is loaded")),
            (PreSource::Checker, _) | (PreSource::Auto, None) => Ok(from_checker()),
            (PreSource::None, _) => Ok(MistakeList::default()),
        }
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, kind: &str, message: impl Into<String>) -> Self {
        Self { status, body: json!({ "error": kind, "message": message.into() }) }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let status = match &e {
            SessionError::StaleWrite { .. } | SessionError::DocDone(_) => StatusCode::CONFLICT,
            SessionError::UnknownDoc(_) => StatusCode::NOT_FOUND,
            SessionError::DuplicateDoc(_) => StatusCode::BAD_REQUEST,
            SessionError::InvalidSuggestions(_)
            | SessionError::Rejected(_)
            | SessionError::NoSuchMistake { .. }
            | SessionError::NoSuchSuggestion(_) => StatusCode::UNPROCESSABLE_ENTITY,
        };
        let tagged = serde_json::to_value(&e).expect("error serializes");
        let mut body = json!({ "error": tagged["error"], "message": e.to_string() });
        match &tagged["detail"] {
            Value::Object(fields) => body.as_object_mut().expect("object").extend(fields.clone()),
            Value::Null => {}
            other => body["detail"] = other.clone(),
        }
        Self { status, body }
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::Session(e) => e.into(),
            StoreError::UnknownSession(_) => Self::new(StatusCode::NOT_FOUND, "unknown_session", e.to_string()),
            StoreError::LeaseHeld { ref holder, expires_at } => {
                let mut err = Self::new(StatusCode::LOCKED, "lease_held", e.to_string());
                err.body["holder"] = holder.clone().into();
                err.body["expires_at"] = expires_at.to_rfc3339().into();
                err
            }
            StoreError::NoLease(_) => Self::new(StatusCode::CONFLICT, "no_lease", e.to_string()),
            StoreError::Io { .. } | StoreError::Corrupt { .. } => {
                Self::new(StatusCode::INTERNAL_SERVER_ERROR, "storage", e.to_string())
            }
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type Shared = Arc<AppState>;
type ApiResult<T> = Result<Json<T>, ApiError>;

pub fn router(state: Shared) -> Router {
    Router::new()
        .route("/healthz", get(healthz))
        .route("/docs", get(list_docs))
        .route("/sessions", get(list_sessions).post(create))
        .route("/sessions/{id}", get(overview))
        .route("/sessions/{id}/docs/{doc}", get(doc))
        .route("/sessions/{id}/docs/{doc}/edits", post(edit))
        .route("/sessions/{id}/export", post(export))
        .route("/sessions/{id}/lease", post(acquire))
        .route("/sessions/{id}/lease/heartbeat", post(heartbeat))
        .route("/sessions/{id}/lease/release", post(release))
        .with_state(state)
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .unwrap_or_else(|e| Err(ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string())))
}

async fn healthz(State(state): State<Shared>) -> Json<Value> {
    Json(json!({ "status": "ok", "sessions": state.store.ids().len(), "docs": state.texts.len(), "games": state.games.len() }))
}

#[derive(Serialize)]
struct DocEntry<'a> {
    doc_id: &'a str,
    system_id: &'a str,
    tokens: usize,
    has_game: bool,
}

async fn list_docs(State(state): State<Shared>) -> Json<Value> {
    let docs: Vec<DocEntry> = state
        .texts
        .iter()
        .map(|t| DocEntry {
            doc_id: &t.doc_id,
            system_id: &t.system_id,
            tokens: t.len(),
            has_game: state.games.for_doc(&t.doc_id).is_some(),
        })
        .collect();
    Json(json!({ "docs": docs }))
}

async fn list_sessions(State(state): State<Shared>) -> Json<Value> {
    Json(json!({ "sessions": state.store.ids() }))
}

#[derive(Debug, Deserialize)]
pub struct CreateRequest {
    pub annotator: String,
    /// Defaults to every loaded summary.
    #[serde(default)]
    pub docs: Option<Vec<String>>,
    #[serde(default)]
    pub pre: PreSource,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DocSummary {
    pub doc_id: String,
    pub system_id: String,
    pub state: DocState,
    pub version: u64,
    pub mistakes: usize,
    pub open_suggestions: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Overview {
    pub session_id: String,
    pub annotator_id: String,
    pub created_at: DateTime<Utc>,
    pub lease: Option<Lease>,
    pub docs: Vec<DocSummary>,
    pub metrics: SessionMetrics,
}

fn overview_of(session: &AnnotationSession, lease: Option<Lease>) -> Overview {
    use accucheck_core::session::SuggestionStatus;
    Overview {
        session_id: session.session_id.clone(),
        annotator_id: session.annotator_id.clone(),
        created_at: session.created_at,
        lease,
        docs: session
            .docs
            .iter()
            .map(|d| DocSummary {
                doc_id: d.doc_id.clone(),
                system_id: d.system_id.clone(),
                state: d.state,
                version: d.version,
                mistakes: d.working.len(),
                open_suggestions: d.suggestions.iter().filter(|s| s.status == SuggestionStatus::Open).count(),
            })
            .collect(),
        metrics: session_metrics(session),
    }
}

async fn create(State(state): State<Shared>, Json(req): Json<CreateRequest>) -> Result<(StatusCode, Json<Overview>), ApiError> {
    if req.annotator.trim().is_empty() {
        return Err(ApiError::bad_request("annotator must not be empty"));
    }
    let texts: Vec<TokenizedText> = match &req.docs {
        None => state.texts.iter().cloned().collect(),
        Some(ids) => ids
            .iter()
            .map(|id| state.texts.get(id).cloned().ok_or_else(|| SessionError::UnknownDoc(id.clone()).into()))
            .collect::<Result<_, ApiError>>()?,
    };
    if texts.is_empty() {
        return Err(ApiError::bad_request("a session needs at least one document"));
    }
    let pre = state.suggestions(&texts, req.pre)?;
    let session = blocking(move || {
        let now = state.now();
        Ok(state.store.create(&req.annotator, texts, &pre, now)?)
    })
    .await?;
    Ok((StatusCode::CREATED, Json(overview_of(&session, None))))
}

async fn overview(State(state): State<Shared>, Path(id): Path<String>) -> ApiResult<Overview> {
    let session = state.store.get(&id)?;
    let lease = state.store.lease(&id, state.now())?;
    Ok(Json(overview_of(&session, lease)))
}

async fn doc(State(state): State<Shared>, Path((id, doc)): Path<(String, String)>) -> ApiResult<Value> {
    let session = state.store.get(&id)?;
    let d = session.doc(&doc).ok_or_else(|| SessionError::UnknownDoc(doc.clone()))?;
    Ok(Json(serde_json::to_value(d).expect("doc serializes")))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EditRequest {
    /// The document version the client last saw.
    pub version: u64,
    pub command: EditCommand,
    #[serde(default)]
    pub writer: Option<String>,
}

async fn edit(
    State(state): State<Shared>,
    Path((id, doc)): Path<(String, String)>,
    Json(req): Json<EditRequest>,
) -> ApiResult<Value> {
    let updated = blocking(move || {
        let now = state.now();
        Ok(state.store.apply(&id, &doc, req.version, &req.command, req.writer.as_deref(), now)?)
    })
    .await?;
    Ok(Json(serde_json::to_value(updated).expect("doc serializes")))
}

async fn export(State(state): State<Shared>, Path(id): Path<String>) -> ApiResult<Export> {
    Ok(Json(export_gsml(&state.store.get(&id)?)))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LeaseRequest {
    pub holder: String,
}

async fn acquire(State(state): State<Shared>, Path(id): Path<String>, Json(req): Json<LeaseRequest>) -> ApiResult<Lease> {
    Ok(Json(state.store.acquire_lease(&id, &req.holder, state.lease_ttl, state.now())?))
}

async fn heartbeat(State(state): State<Shared>, Path(id): Path<String>, Json(req): Json<LeaseRequest>) -> ApiResult<Lease> {
    Ok(Json(state.store.heartbeat(&id, &req.holder, state.lease_ttl, state.now())?))
}

async fn release(State(state): State<Shared>, Path(id): Path<String>, Json(req): Json<LeaseRequest>) -> ApiResult<Value> {
    state.store.release(&id, &req.holder)?;
    Ok(Json(json!({ "released": true })))
}

/// Serves until Ctrl-C, then folds every edit log into its snapshot.
pub async fn serve(state: AppState, addr: SocketAddr) -> std::io::Result<()> {
    let state = Arc::new(state);
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state.clone()))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    state.store.compact_all().map_err(std::io::Error::other)
}
