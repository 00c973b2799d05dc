//! HTTP API under `/v1`: create a game, read it, post moves, ask for a hint.
//!
//! Each session sits behind its own mutex, so moves on one game are applied
//! in arrival order while other games proceed. Search runs on blocking
//! threads; hints additionally wait for one of a fixed number of permits.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use aggression_core::verifier::Budgets;
use aggression_core::{GameState, Graph, GraphFamily, Move, Player, RuleConfig, SearchLimits};
use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::json;
use tokio::sync::{Mutex, RwLock, Semaphore};

use crate::session::{Hint, Opponent, Session, SessionError, SessionSnapshot};

#[derive(Clone, Debug)]
pub struct ServerConfig {
    /// Limits for every solver call (opponent moves and hints).
    pub limits: SearchLimits,
    /// Hints computed at the same time.
    pub hint_workers: usize,
    /// Append-only JSON-lines log of created games and moves.
    pub log_path: Option<PathBuf>,
}

#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

struct Inner {
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    next_id: AtomicU64,
    limits: SearchLimits,
    hint_permits: Semaphore,
    log: Option<std::sync::Mutex<File>>,
}

impl AppState {
    pub fn new(config: ServerConfig) -> std::io::Result<Self> {
        let log = match &config.log_path {
            Some(p) => Some(std::sync::Mutex::new(
                OpenOptions::new().create(true).append(true).open(p)?,
            )),
            None => None,
        };
        Ok(Self {
            inner: Arc::new(Inner {
                sessions: RwLock::new(HashMap::new()),
                next_id: AtomicU64::new(1),
                limits: config.limits,
                hint_permits: Semaphore::new(config.hint_workers.max(1)),
                log,
            }),
        })
    }

    fn append_log(&self, entry: serde_json::Value) {
        if let Some(file) = &self.inner.log {
            let mut f = file.lock().unwrap_or_else(|e| e.into_inner());
            // The log is best effort; a full disk must not fail the game.
            let _ = writeln!(f, "{entry}");
        }
    }

    async fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.inner
            .sessions
            .read()
            .await
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found(id))
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/v1/games", post(create_game))
        .route("/v1/games/{id}", get(get_game).delete(delete_game))
        .route("/v1/games/{id}/moves", post(post_move))
        .route("/v1/games/{id}/hint", get(get_hint))
        .with_state(state)
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    rule: Option<&'static str>,
    message: String,
}

impl ApiError {
    fn unprocessable(message: impl Into<String>) -> Self {
        Self {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            rule: None,
            message: message.into(),
        }
    }

    fn not_found(id: &str) -> Self {
        Self {
            status: StatusCode::NOT_FOUND,
            rule: None,
            message: format!("no game {id:?}"),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Self {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            rule: None,
            message: message.into(),
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::unprocessable(e.body_text())
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let status = match e {
            SessionError::Rule(_) | SessionError::NotYourTurn { .. } => StatusCode::CONFLICT,
            SessionError::BadOpponent(..) => StatusCode::UNPROCESSABLE_ENTITY,
            SessionError::Opponent(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        Self {
            status,
            rule: e.rule(),
            message: e.to_string(),
        }
    }
}

impl From<tokio::task::JoinError> for ApiError {
    fn from(e: tokio::task::JoinError) -> Self {
        ApiError::internal(format!("worker failed: {e}"))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = match self.rule {
            Some(rule) => json!({"error": self.message, "rule": rule}),
            None => json!({"error": self.message}),
        };
        (self.status, Json(body)).into_response()
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateGame {
    graph: Option<Graph>,
    /// `matching:3`, `cycle:5`, ...
    family: Option<String>,
    /// Equal budgets for both players.
    troops: Option<u32>,
    budgets: Option<Budgets>,
    rules: Option<RuleConfig>,
    #[serde(default = "default_human")]
    human: Player,
    #[serde(default)]
    opponent: Opponent,
}

fn default_human() -> Player {
    Player::Lata
}

impl CreateGame {
    fn initial(&self) -> Result<GameState, ApiError> {
        let graph = match (&self.graph, &self.family) {
            (Some(g), None) => g.clone(),
            (None, Some(f)) => f
                .parse::<GraphFamily>()
                .and_then(GraphFamily::generate)
                .map_err(|e| ApiError::unprocessable(e.to_string()))?,
            _ => return Err(ApiError::unprocessable("give exactly one of `graph`, `family`")),
        };
        let (lata, raj) = match (&self.budgets, self.troops) {
            (Some(b), None) => (b.lata, b.raj),
            (None, Some(t)) => (t, t),
            _ => return Err(ApiError::unprocessable("give exactly one of `troops`, `budgets`")),
        };
        let rules = match (self.rules, self.opponent) {
            (Some(r), _) => r,
            (None, Opponent::Strategy(id)) => id.rule_config(),
            (None, _) => RuleConfig::standard(),
        };
        GameState::new(graph, lata, raj, rules).map_err(|e| ApiError::unprocessable(e.to_string()))
    }
}

async fn create_game(
    State(app): State<AppState>,
    body: Result<Json<CreateGame>, JsonRejection>,
) -> Result<(StatusCode, Json<SessionSnapshot>), ApiError> {
    let Json(req) = body?;
    let initial = req.initial()?;
    let id = format!("g{}", app.inner.next_id.fetch_add(1, Ordering::Relaxed));
    let limits = app.inner.limits;
    let (human, opponent) = (req.human, req.opponent);
    let sid = id.clone();
    let session = tokio::task::spawn_blocking(move || {
        Session::new(sid, initial, human, opponent, limits)
    })
    .await??;
    let snapshot = session.snapshot();
    app.append_log(json!({"session": id, "event": "create", "record": session.record()}));
    app.inner
        .sessions
        .write()
        .await
        .insert(id, Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(snapshot)))
}

async fn get_game(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<SessionSnapshot>, ApiError> {
    let session = app.session(&id).await?;
    let snapshot = session.lock().await.snapshot();
    Ok(Json(snapshot))
}

async fn delete_game(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> Result<StatusCode, ApiError> {
    match app.inner.sessions.write().await.remove(&id) {
        Some(_) => Ok(StatusCode::NO_CONTENT),
        None => Err(ApiError::not_found(&id)),
    }
}

async fn post_move(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<Move>, JsonRejection>,
) -> Result<Json<SessionSnapshot>, ApiError> {
    let Json(mv) = body?;
    let session = app.session(&id).await?;
    let mut guard = session.lock_owned().await;
    let before = guard.log().len();
    let (snapshot, played) = tokio::task::spawn_blocking(move || {
        guard.play(mv)?;
        let played = guard.log()[before..].to_vec();
        Ok::<_, SessionError>((guard.snapshot(), played))
    })
    .await??;
    app.append_log(json!({"session": id, "event": "moves", "moves": played}));
    Ok(Json(snapshot))
}

async fn get_hint(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<Hint>, ApiError> {
    let session = app.session(&id).await?;
    let _permit = app
        .inner
        .hint_permits
        .acquire()
        .await
        .map_err(|_| ApiError::internal("hint pool closed"))?;
    let (initial, log, state) = {
        let s = session.lock().await;
        (s.initial().clone(), s.log().to_vec(), s.state().clone())
    };
    let limits = app.inner.limits;
    let hint = tokio::task::spawn_blocking(move || {
        crate::session::hint(&initial, &log, &state, limits)
    })
    .await??;
    Ok(Json(hint))
}
