//! HTTP/JSON session API.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as JsonValue};
use tokio::sync::{Mutex, RwLock};
use vpc_core::engine::{to_script, DerivOption, EngineError, Target};
use vpc_core::exec::exec_program;
use vpc_core::formats::{parse_statement, parse_statements, render_header, render_proof, ParseError, ScriptKind, SourceSpan};
use vpc_core::model::{validate_program, Statement};
use vpc_core::registry::{Entry, EntryKind};

use crate::app::Store;
use crate::cli::bindings;
use crate::session::Session;
use crate::view::{derivation_view, entry_matches, entry_view, kind_from_word, option_hash, option_view, DerivationView, OptionView};

struct Live {
    session: Session,
    named: Option<(String, ScriptKind)>,
}

#[derive(Clone)]
pub struct AppState {
    store: Arc<RwLock<Store>>,
    sessions: Arc<RwLock<HashMap<String, Arc<Mutex<Live>>>>>,
    next: Arc<AtomicU64>,
}

impl AppState {
    pub fn new(store: Store) -> Self {
        AppState { store: Arc::new(RwLock::new(store)), sessions: Arc::default(), next: Arc::new(AtomicU64::new(1)) }
    }
}

#[derive(Debug, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    status: StatusCode,
    code: &'static str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    span: Option<SourceSpan>,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError { status, code, message: message.into(), span: None }
    }
    fn not_found(message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not-found", message)
    }
    fn invalid(message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid", message)
    }
}

impl From<ParseError> for ApiError {
    fn from(e: ParseError) -> Self {
        ApiError { status: StatusCode::UNPROCESSABLE_ENTITY, code: "parse", message: e.message, span: Some(e.span) }
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> Self {
        let (status, code) = match &e {
            EngineError::StaleOption => (StatusCode::CONFLICT, "stale-option"),
            EngineError::Concluded | EngineError::Extracted | EngineError::SplitActive | EngineError::NoSplit => {
                (StatusCode::CONFLICT, "state")
            }
            EngineError::UnknownBranch(_) | EngineError::UnknownLabel(_) | EngineError::UnknownSource(_) => {
                (StatusCode::NOT_FOUND, "not-found")
            }
            _ => (StatusCode::UNPROCESSABLE_ENTITY, "rejected"),
        };
        ApiError::new(status, code, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

pub fn router(store: Store) -> Router {
    router_with(AppState::new(store))
}

pub fn router_with(state: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/options", get(get_options))
        .route("/sessions/{id}/apply", post(apply))
        .route("/sessions/{id}/split", post(split))
        .route("/sessions/{id}/contract", post(contract))
        .route("/sessions/{id}/extract", post(extract))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/listing", get(listing))
        .route("/axioms", get(list_entries))
        .route("/axioms/{id}", get(get_entry))
        .route("/exec", post(exec))
        .with_state(state)
}

async fn live(state: &AppState, id: &str) -> Result<Arc<Mutex<Live>>, ApiError> {
    state.sessions.read().await.get(id).cloned().ok_or_else(|| ApiError::not_found(format!("no session `{id}`")))
}

fn parse_premises(v: &JsonValue) -> Result<Vec<Statement>, ApiError> {
    match v {
        JsonValue::String(s) => Ok(parse_statements(s)?),
        JsonValue::Array(items) => items
            .iter()
            .map(|i| match i {
                JsonValue::String(s) => Ok(parse_statement(s)?),
                _ => Err(ApiError::invalid("premises must be strings")),
            })
            .collect(),
        _ => Err(ApiError::invalid("premises must be program text or a list of statements")),
    }
}

fn target_of(branch: Option<usize>) -> Result<Target, ApiError> {
    match branch {
        None => Ok(Target::Main),
        Some(0) => Err(ApiError::invalid("branches are numbered from 1")),
        Some(j) => Ok(Target::Branch(j - 1)),
    }
}

#[derive(Deserialize)]
struct CreateBody {
    premises: JsonValue,
}

#[derive(Serialize)]
struct Created {
    id: String,
    #[serde(flatten)]
    derivation: DerivationView,
}

async fn create_session(State(state): State<AppState>, Json(body): Json<CreateBody>) -> Result<(StatusCode, Json<Created>), ApiError> {
    let premises = parse_premises(&body.premises)?;
    let params = state.store.read().await.params;
    let session = Session::new(premises, &params)?;
    let id = format!("s{}", state.next.fetch_add(1, Ordering::Relaxed));
    let derivation = derivation_view(&session.derivation);
    state.sessions.write().await.insert(id.clone(), Arc::new(Mutex::new(Live { session, named: None })));
    Ok((StatusCode::CREATED, Json(Created { id, derivation })))
}

async fn get_session(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<DerivationView> {
    let s = live(&state, &id).await?;
    let s = s.lock().await;
    Ok(Json(derivation_view(&s.session.derivation)))
}

#[derive(Deserialize)]
struct BranchQuery {
    branch: Option<usize>,
}

async fn options_for(state: &AppState, s: &Live, branch: Option<usize>) -> Result<Vec<DerivOption>, ApiError> {
    let store = state.store.read().await;
    Ok(s.session.options(target_of(branch)?, &store.registry, &store.params)?)
}

async fn get_options(State(state): State<AppState>, Path(id): Path<String>, Query(q): Query<BranchQuery>) -> ApiResult<Vec<OptionView>> {
    let s = live(&state, &id).await?;
    let s = s.lock().await;
    let opts = options_for(&state, &s, q.branch).await?;
    Ok(Json(opts.iter().enumerate().map(|(i, o)| option_view(i + 1, o)).collect()))
}

#[derive(Deserialize)]
struct ApplyBody {
    /// 1-based number in the current option list.
    option: usize,
    branch: Option<usize>,
    /// 1-based connection list; default the first.
    source: Option<usize>,
    /// Hash from the option list the client saw.
    hash: Option<String>,
}

async fn apply(State(state): State<AppState>, Path(id): Path<String>, Json(body): Json<ApplyBody>) -> ApiResult<DerivationView> {
    let s = live(&state, &id).await?;
    let mut s = s.lock().await;
    let opts = options_for(&state, &s, body.branch).await?;
    let stale = || ApiError::new(StatusCode::CONFLICT, "stale-option", "the option list has changed");
    let opt = match body.option.checked_sub(1).and_then(|i| opts.get(i)) {
        Some(o) => o,
        None if body.hash.is_some() => return Err(stale()),
        None => return Err(ApiError::not_found(format!("no option {}", body.option))),
    };
    if body.hash.as_ref().is_some_and(|h| *h != option_hash(opt)) {
        return Err(stale());
    }
    let source = body.source.unwrap_or(1).checked_sub(1).ok_or_else(|| ApiError::invalid("sources are numbered from 1"))?;
    let params = state.store.read().await.params;
    s.session.apply(opt, source, &params)?;
    Ok(Json(derivation_view(&s.session.derivation)))
}

#[derive(Deserialize)]
struct SplitBody {
    label: usize,
}

async fn split(State(state): State<AppState>, Path(id): Path<String>, Json(body): Json<SplitBody>) -> ApiResult<DerivationView> {
    let s = live(&state, &id).await?;
    let mut s = s.lock().await;
    let params = state.store.read().await.params;
    s.session.split(body.label, &params)?;
    Ok(Json(derivation_view(&s.session.derivation)))
}

#[derive(Deserialize, Default)]
struct ContractBody {
    statement: Option<String>,
}

async fn contract(State(state): State<AppState>, Path(id): Path<String>, body: Option<Json<ContractBody>>) -> ApiResult<DerivationView> {
    let body = body.map(|Json(b)| b).unwrap_or_default();
    let goal = body.statement.as_deref().map(parse_statement).transpose()?;
    let s = live(&state, &id).await?;
    let mut s = s.lock().await;
    let params = state.store.read().await.params;
    s.session.contract(goal.as_ref(), &params)?;
    Ok(Json(derivation_view(&s.session.derivation)))
}

#[derive(Deserialize)]
struct ExtractBody {
    id: String,
    #[serde(default = "theorem")]
    kind: String,
}

fn theorem() -> String {
    "theorem".into()
}

async fn extract(State(state): State<AppState>, Path(id): Path<String>, Json(body): Json<ExtractBody>) -> Result<Json<JsonValue>, ApiError> {
    let (kind, script_kind) = match kind_from_word(&body.kind) {
        Some(EntryKind::Theorem) => (EntryKind::Theorem, ScriptKind::Theorem),
        Some(EntryKind::Lemma) => (EntryKind::Lemma, ScriptKind::Lemma),
        _ => return Err(ApiError::invalid("kind must be theorem or lemma")),
    };
    let s = live(&state, &id).await?;
    let mut s = s.lock().await;
    let mut store = state.store.write().await;
    let params = store.params;
    let x = s.session.extract(kind, &body.id, &store.registry, &params)?;
    let header = match &x.entry {
        Entry::Cpe(c) => c.header(),
        Entry::False(f) => f.header(),
        Entry::Schema(_) => unreachable!("extraction never yields a schema"),
    };
    if let Err(e) = store.registry.add_entry(x.entry.clone(), &params) {
        s.session.undo();
        return Err(ApiError::new(StatusCode::CONFLICT, "registry", e.to_string()));
    }
    store.save().map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "io", e.to_string()))?;
    s.named = Some((body.id.clone(), script_kind));
    Ok(Json(json!({
        "entry": entry_view(&x.entry),
        "header": render_header(&header),
        "usedPremises": x.used_premises,
        "warnings": x.warnings,
    })))
}

async fn undo(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<DerivationView> {
    let s = live(&state, &id).await?;
    let mut s = s.lock().await;
    if !s.session.undo() {
        return Err(ApiError::new(StatusCode::CONFLICT, "state", "nothing to undo"));
    }
    Ok(Json(derivation_view(&s.session.derivation)))
}

async fn listing(State(state): State<AppState>, Path(id): Path<String>) -> Result<String, ApiError> {
    let s = live(&state, &id).await?;
    let s = s.lock().await;
    let (name, kind) = s.named.clone().unwrap_or(("T".into(), ScriptKind::Theorem));
    let store = state.store.read().await;
    let script = to_script(&s.session.derivation, kind, &name, &store.registry, &store.params)?;
    Ok(render_proof(&script))
}

#[derive(Deserialize)]
struct FilterQuery {
    filter: Option<String>,
}

async fn list_entries(State(state): State<AppState>, Query(q): Query<FilterQuery>) -> Json<Vec<crate::view::EntryView>> {
    let store = state.store.read().await;
    let needle = q.filter.unwrap_or_default();
    Json(store.registry.iter().filter(|e| entry_matches(e, &needle)).map(entry_view).collect())
}

async fn get_entry(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<crate::view::EntryView> {
    let store = state.store.read().await;
    store.registry.get(&id).map(|e| Json(entry_view(e))).ok_or_else(|| ApiError::not_found(format!("no entry `{id}`")))
}

#[derive(Deserialize)]
struct ExecBody {
    program: String,
    #[serde(default)]
    bindings: HashMap<String, JsonValue>,
}

async fn exec(State(state): State<AppState>, Json(body): Json<ExecBody>) -> Result<Json<JsonValue>, ApiError> {
    let params = state.store.read().await.params;
    let stmts = parse_statements(&body.program)?;
    let p = validate_program(stmts, &params).map_err(|e| ApiError::invalid(e.to_string()))?;
    let binds: Vec<String> = body
        .bindings
        .iter()
        .map(|(k, v)| match v {
            JsonValue::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        })
        .collect();
    let env = bindings(&binds).map_err(|e| ApiError::invalid(e.to_string()))?;
    let outcome = exec_program(&p, &env, &params).map_err(|e| ApiError::invalid(e.to_string()))?;
    Ok(Json(serde_json::to_value(outcome).map_err(|e| ApiError::invalid(e.to_string()))?))
}
