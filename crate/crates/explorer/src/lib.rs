//! HTTP/JSON service for interactive mutation sessions.
//!
//! Endpoints:
//!
//! - `POST /session` with `{"type": "A3"}` creates a session at the built-in
//!   initial module.
//! - `GET /session/{id}` returns the current state.
//! - `POST /session/{id}/mutate` with `{"k": 2}` mutates at position `k`
//!   (1-based) and returns `{"state", "mutation"}`.
//! - `GET /session/{id}/export` returns `{"type", "history", "state_hash"}`.
//! - `POST /session/import` with `{"type", "history"}` replays a history in
//!   a fresh session.
//! - `GET /catalog/{type}` lists the indecomposable rigid modules.
//!
//! Errors are `{"error": message}` with status 400 (bad input), 404
//! (unknown session), 409 (projective direction) or 500 (a failed internal
//! check, with a `report` field).

pub mod session;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex};

use axum::extract::{Path, State};
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use ppalg_core::catalog::Catalog;
use ppalg_core::quiver::DynkinType;
use ppalg_core::Error;
use serde::Deserialize;
use serde_json::{json, Value};
use tower_http::cors::{Any, CorsLayer};

use crate::session::{Session, SessionError};

pub const SESSION_CAP: usize = 64;

#[derive(Debug)]
pub enum ApiError {
    BadRequest(String),
    NotFound(String),
    Conflict(String),
    Internal(Value),
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        match e {
            Error::ProjectiveDirection(_) => ApiError::Conflict(e.to_string()),
            _ => ApiError::BadRequest(e.to_string()),
        }
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        match e {
            SessionError::Domain(e) => e.into(),
            SessionError::Bug(report) => ApiError::Internal(report),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, body) = match self {
            ApiError::BadRequest(m) => (StatusCode::BAD_REQUEST, json!({"error": m})),
            ApiError::NotFound(m) => (StatusCode::NOT_FOUND, json!({"error": m})),
            ApiError::Conflict(m) => (StatusCode::CONFLICT, json!({"error": m})),
            ApiError::Internal(report) => {
                (StatusCode::INTERNAL_SERVER_ERROR, json!({"error": "internal check failed", "report": report}))
            }
        };
        (status, Json(body)).into_response()
    }
}

type Shared = Arc<tokio::sync::Mutex<Session>>;

/// Sessions by id, evicting the least recently used beyond the cap.
struct Sessions {
    map: HashMap<String, (Shared, u64)>,
    tick: u64,
    next_id: u64,
    cap: usize,
}

impl Sessions {
    fn get(&mut self, id: &str) -> Option<Shared> {
        self.tick += 1;
        let tick = self.tick;
        self.map.get_mut(id).map(|(s, t)| {
            *t = tick;
            s.clone()
        })
    }

    fn insert(&mut self, id: String, s: Session) -> Shared {
        self.tick += 1;
        while self.map.len() >= self.cap {
            let oldest = self.map.iter().min_by_key(|(_, (_, t))| *t).map(|(k, _)| k.clone());
            match oldest {
                Some(k) => self.map.remove(&k),
                None => break,
            };
        }
        let shared = Arc::new(tokio::sync::Mutex::new(s));
        self.map.insert(id, (shared.clone(), self.tick));
        shared
    }

    fn fresh_id(&mut self) -> String {
        self.next_id += 1;
        format!("s{}", self.next_id)
    }
}

pub struct AppState {
    catalogs: Mutex<HashMap<DynkinType, Arc<Catalog>>>,
    sessions: Mutex<Sessions>,
}

impl AppState {
    pub fn new(cap: usize) -> AppState {
        AppState {
            catalogs: Mutex::new(HashMap::new()),
            sessions: Mutex::new(Sessions { map: HashMap::new(), tick: 0, next_id: 0, cap }),
        }
    }

    pub fn session_count(&self) -> usize {
        self.sessions.lock().expect("session table").map.len()
    }

    fn catalog(&self, t: DynkinType) -> Result<Arc<Catalog>, Error> {
        let mut cats = self.catalogs.lock().expect("catalog table");
        if let Some(c) = cats.get(&t) {
            return Ok(c.clone());
        }
        let c = Arc::new(Catalog::enumerate(t)?);
        cats.insert(t, c.clone());
        Ok(c)
    }

    fn session(&self, id: &str) -> Result<Shared, ApiError> {
        self.sessions
            .lock()
            .expect("session table")
            .get(id)
            .ok_or_else(|| ApiError::NotFound(format!("unknown session {id}")))
    }
}

fn parse_type(s: &str) -> Result<DynkinType, ApiError> {
    let t: DynkinType = s.parse()?;
    ppalg_core::catalog::check_catalog_type(t)?;
    Ok(t)
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError::Internal(json!({"panic": e.to_string()})))
}

#[derive(Deserialize)]
struct CreateRequest {
    #[serde(rename = "type")]
    dynkin: String,
}

#[derive(Deserialize)]
struct MutateRequest {
    k: usize,
}

#[derive(Deserialize)]
struct ImportRequest {
    #[serde(rename = "type")]
    dynkin: String,
    history: Vec<usize>,
}

async fn create(State(app): State<Arc<AppState>>, Json(req): Json<CreateRequest>) -> Result<Json<Value>, ApiError> {
    let t = parse_type(&req.dynkin)?;
    let app2 = app.clone();
    let (id, session) = blocking(move || -> Result<(String, Session), ApiError> {
        let cat = app2.catalog(t)?;
        let id = app2.sessions.lock().expect("session table").fresh_id();
        Ok((id.clone(), Session::create(id, cat)?))
    })
    .await??;
    let state = session.state();
    app.sessions.lock().expect("session table").insert(id, session);
    Ok(Json(state))
}

async fn import(State(app): State<Arc<AppState>>, Json(req): Json<ImportRequest>) -> Result<Json<Value>, ApiError> {
    let t = parse_type(&req.dynkin)?;
    let app2 = app.clone();
    let (id, session) = blocking(move || -> Result<(String, Session), ApiError> {
        let cat = app2.catalog(t)?;
        let id = app2.sessions.lock().expect("session table").fresh_id();
        Ok((id.clone(), Session::replay(id, cat, &req.history)?))
    })
    .await??;
    let state = session.state();
    app.sessions.lock().expect("session table").insert(id, session);
    Ok(Json(state))
}

async fn show(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let s = app.session(&id)?;
    let guard = s.lock().await;
    Ok(Json(guard.state()))
}

async fn export(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let s = app.session(&id)?;
    let guard = s.lock().await;
    Ok(Json(guard.export()))
}

async fn mutate(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(req): Json<MutateRequest>,
) -> Result<Json<Value>, ApiError> {
    let s = app.session(&id)?;
    // requests on one session queue on this lock
    let mut guard = s.lock_owned().await;
    blocking(move || -> Result<Value, ApiError> {
        guard.mutate(req.k)?;
        let h = guard.history.last().expect("just pushed").clone();
        let state = guard.state();
        let expr = state["cluster_variables"][req.k - 1]["expr"].clone();
        Ok(json!({
            "state": state,
            "mutation": {
                "k": h.k,
                "removed": h.removed,
                "added": h.added,
                "left": h.left,
                "right": h.right,
                "new_variable": expr,
                "b_circ": guard.data.b_circ,
            },
        }))
    })
    .await?
    .map(Json)
}

async fn catalog(State(app): State<Arc<AppState>>, Path(t): Path<String>) -> Result<Json<Value>, ApiError> {
    let t = parse_type(&t)?;
    let cat = blocking(move || app.catalog(t)).await??;
    Ok(Json(cat.to_json()))
}

/// The service routes. `origin` restricts CORS to one origin; `None` allows
/// any.
pub fn router(state: Arc<AppState>, origin: Option<&str>) -> Router {
    let cors = CorsLayer::new().allow_methods(Any).allow_headers(Any);
    let cors = match origin.and_then(|o| HeaderValue::from_str(o).ok()) {
        Some(o) => cors.allow_origin(o),
        None => cors.allow_origin(Any),
    };
    Router::new()
        .route("/session", post(create))
        .route("/session/import", post(import))
        .route("/session/{id}", get(show))
        .route("/session/{id}/mutate", post(mutate))
        .route("/session/{id}/export", get(export))
        .route("/catalog/{type}", get(catalog))
        .layer(cors)
        .with_state(state)
}

pub async fn serve(addr: SocketAddr, origin: Option<String>) -> std::io::Result<()> {
    let app = router(Arc::new(AppState::new(SESSION_CAP)), origin.as_deref());
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, app).await
}
