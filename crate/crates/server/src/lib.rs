//! JSON service exposing archer sessions over HTTP.
//!
//! | method   | path                       | body                          |
//! |----------|----------------------------|-------------------------------|
//! | `POST`   | `/sessions`                |                               |
//! | `GET`    | `/sessions/{id}`           |                               |
//! | `DELETE` | `/sessions/{id}`           |                               |
//! | `POST`   | `/sessions/{id}/commands`  | `{"command": "a 0 1 2"}`      |
//! | `POST`   | `/sessions/{id}/family`    | `{"tag": "G3", "params": [2]}`|
//! | `GET`    | `/families`                |                               |
//!
//! Command errors are reported in the response body with `ok: false` and
//! the unchanged state. Unknown sessions give 404, malformed bodies 400.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tokio::sync::RwLock;

use tigraph::families::FamilySpec;
use tigraph::session::{CommandResponse, Session, SessionState};

type SharedSession = Arc<Mutex<Session>>;

/// Registry of live sessions. Each session has its own lock, so commands to
/// one session are serialized while distinct sessions proceed in parallel.
#[derive(Clone, Default)]
pub struct AppState {
    sessions: Arc<RwLock<HashMap<u64, SharedSession>>>,
    next_id: Arc<AtomicU64>,
}

impl AppState {
    pub fn new() -> Self {
        AppState::default()
    }

    async fn get(&self, id: &str) -> Result<SharedSession, ApiError> {
        let key: u64 = id.parse().map_err(|_| ApiError::not_found(id))?;
        self.sessions
            .read()
            .await
            .get(&key)
            .cloned()
            .ok_or_else(|| ApiError::not_found(id))
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn not_found(id: &str) -> Self {
        ApiError {
            status: StatusCode::NOT_FOUND,
            message: format!("no session with id {id:?}"),
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            message: message.into(),
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        ApiError::bad_request(r.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(ErrorBody { error: self.message })).into_response()
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub state: SessionState,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CommandRequest {
    pub command: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FamilyRequest {
    pub tag: String,
    pub params: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FamilyResponse {
    /// Archer commands that were applied.
    pub script: Vec<String>,
    pub response: CommandResponse,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FamilyInfo {
    pub tag: String,
    pub params: Vec<String>,
    pub minimums: Vec<usize>,
}

/// Runs blocking session work off the async executor.
async fn with_session<T: Send + 'static>(
    session: SharedSession,
    f: impl FnOnce(&mut Session) -> T + Send + 'static,
) -> T {
    tokio::task::spawn_blocking(move || {
        let mut guard = session.lock().unwrap_or_else(|p| p.into_inner());
        f(&mut guard)
    })
    .await
    .expect("session task panicked")
}

async fn create_session(State(app): State<AppState>) -> (StatusCode, Json<SessionView>) {
    let id = app.next_id.fetch_add(1, Ordering::Relaxed) + 1;
    let session = Session::new();
    let state = session.state();
    app.sessions.write().await.insert(id, Arc::new(Mutex::new(session)));
    (
        StatusCode::CREATED,
        Json(SessionView {
            id: id.to_string(),
            state,
        }),
    )
}

async fn get_session(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<SessionView>, ApiError> {
    let session = app.get(&id).await?;
    let state = with_session(session, |s| s.state()).await;
    Ok(Json(SessionView { id, state }))
}

async fn delete_session(State(app): State<AppState>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    let key: u64 = id.parse().map_err(|_| ApiError::not_found(&id))?;
    match app.sessions.write().await.remove(&key) {
        Some(_) => Ok(StatusCode::NO_CONTENT),
        None => Err(ApiError::not_found(&id)),
    }
}

async fn post_command(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<CommandRequest>, JsonRejection>,
) -> Result<Json<CommandResponse>, ApiError> {
    let session = app.get(&id).await?;
    let Json(req) = body?;
    Ok(Json(with_session(session, move |s| s.execute(&req.command)).await))
}

async fn post_family(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<FamilyRequest>, JsonRejection>,
) -> Result<Json<FamilyResponse>, ApiError> {
    let session = app.get(&id).await?;
    let Json(req) = body?;
    let spec = FamilySpec::from_tag(&req.tag, &req.params).map_err(|e| ApiError::bad_request(e.to_string()))?;
    let script = tigraph::session::family_script(spec).map_err(|e| ApiError::bad_request(e.to_string()))?;
    let lines: Vec<String> = script.iter().map(|c| c.to_string()).collect();
    let replay = lines.clone();
    let response = with_session(session, move |s| {
        let mut last = None;
        for line in &replay {
            let r = s.execute(line);
            let failed = !r.ok;
            last = Some(r);
            if failed {
                break;
            }
        }
        last.expect("scripts are nonempty")
    })
    .await;
    Ok(Json(FamilyResponse {
        script: lines,
        response,
    }))
}

async fn list_families() -> Json<Vec<FamilyInfo>> {
    let info = |tag: &str, params: &[&str], minimums: &[usize]| FamilyInfo {
        tag: tag.to_string(),
        params: params.iter().map(|p| p.to_string()).collect(),
        minimums: minimums.to_vec(),
    };
    Json(vec![
        info("G1", &["n"], &[2]),
        info("G2", &["n"], &[3]),
        info("G3", &["n"], &[1]),
        info("G4", &["n", "m"], &[1, 1]),
        info("DOB", &["k"], &[1]),
    ])
}

pub fn router(app: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session).delete(delete_session))
        .route("/sessions/{id}/commands", post(post_command))
        .route("/sessions/{id}/family", post(post_family))
        .route("/families", get(list_families))
        .with_state(app)
}

/// Serves until the process is stopped.
pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(AppState::new())).await
}
