//! Local HTTP service around one interactive [`Session`].

use std::net::{Ipv4Addr, SocketAddr};
use std::sync::{Arc, Mutex, MutexGuard};

use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use intree::graph::GraphJson;
use intree::pipeline::ForestJson;
use intree::{
    ClusterAssignment, Dataset, DecisionPoint, Error, PipelineConfig, Rect, Session, Step,
};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Building,
    Ready,
    Failed,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepInfo {
    pub number: u8,
    pub name: &'static str,
}

impl From<Step> for StepInfo {
    fn from(step: Step) -> Self {
        StepInfo {
            number: step.number(),
            name: step.name(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Status {
    pub phase: Phase,
    /// Step currently running, or the one that failed.
    pub step: Option<StepInfo>,
    pub error: Option<String>,
}

struct Inner {
    session: Option<Session>,
    status: Status,
    failed_step: Option<Step>,
}

/// Shared service state. Requests are handled one at a time.
pub struct AppState {
    inner: Mutex<Inner>,
}

pub type Shared = Arc<AppState>;

impl AppState {
    pub fn new() -> Shared {
        Arc::new(AppState {
            inner: Mutex::new(Inner {
                session: None,
                status: Status {
                    phase: Phase::Building,
                    step: None,
                    error: None,
                },
                failed_step: None,
            }),
        })
    }

    fn lock(&self) -> MutexGuard<'_, Inner> {
        self.inner.lock().unwrap_or_else(|e| e.into_inner())
    }

    /// Builds the session, publishing progress through `/status`.
    pub fn load(&self, dataset: Dataset, config: PipelineConfig) -> Result<(), Error> {
        let built = Session::with_progress(dataset, config, |step| {
            self.lock().status.step = Some(step.into());
        });
        let mut inner = self.lock();
        match built {
            Ok(session) => {
                inner.session = Some(session);
                inner.status = Status {
                    phase: Phase::Ready,
                    step: None,
                    error: None,
                };
                Ok(())
            }
            Err(e) => {
                inner.status.phase = Phase::Failed;
                inner.failed_step = e.step();
                if let Some(step) = e.step() {
                    inner.status.step = Some(step.into());
                }
                inner.status.error = Some(e.to_string());
                Err(e)
            }
        }
    }

    pub fn status(&self) -> Status {
        self.lock().status.clone()
    }
}

/// JSON error body. Stage failures carry the step they came from.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
    step: Option<Step>,
}

#[derive(Serialize)]
struct ErrorBody {
    error: String,
    step: Option<StepInfo>,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorBody {
            error: self.message,
            step: self.step.map(Into::into),
        };
        (self.status, Json(body)).into_response()
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match e.root_cause() {
            Error::InvalidParameter(_)
            | Error::CannotMergeComponents { .. }
            | Error::LengthMismatch { .. }
            | Error::UnsupportedDimension { .. } => StatusCode::BAD_REQUEST,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError {
            status,
            step: e.step(),
            message: e.to_string(),
        }
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

fn with_session<T>(
    state: &AppState,
    f: impl FnOnce(&mut Session) -> Result<T, Error>,
) -> ApiResult<T> {
    let mut inner = state.lock();
    match inner.session.as_mut() {
        Some(session) => f(session).map(Json).map_err(Into::into),
        None => {
            let (message, step) = match inner.status.phase {
                Phase::Failed => (
                    inner.status.error.clone().unwrap_or_default(),
                    inner.failed_step,
                ),
                _ => ("session is still being built".into(), None),
            };
            Err(ApiError {
                status: StatusCode::SERVICE_UNAVAILABLE,
                message,
                step,
            })
        }
    }
}

#[derive(Serialize)]
pub struct DatasetJson {
    pub name: String,
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    pub labels: Option<Vec<i64>>,
}

/// An assignment plus the current cut history depth.
#[derive(Serialize)]
pub struct ClustersJson {
    #[serde(flatten)]
    pub assignment: ClusterAssignment,
    pub history_depth: usize,
}

fn clusters(session: &Session) -> ClustersJson {
    ClustersJson {
        assignment: session.assignment().clone(),
        history_depth: session.history().len(),
    }
}

#[derive(Deserialize)]
pub struct CutNodes {
    pub nodes: Vec<usize>,
}

async fn get_dataset(State(state): State<Shared>) -> ApiResult<DatasetJson> {
    with_session(&state, |s| {
        let ds = s.dataset();
        Ok(DatasetJson {
            name: ds.name().to_owned(),
            dim: ds.dim(),
            points: ds.points().map(<[f64]>::to_vec).collect(),
            labels: ds.labels().map(<[i64]>::to_vec),
        })
    })
}

async fn get_graph(State(state): State<Shared>) -> ApiResult<GraphJson> {
    with_session(&state, |s| Ok(s.graph().to_json()))
}

async fn get_decision_graph(State(state): State<Shared>) -> ApiResult<Vec<DecisionPoint>> {
    with_session(&state, |s| Ok(s.decision_graph().to_vec()))
}

async fn get_clusters(State(state): State<Shared>) -> ApiResult<ClustersJson> {
    with_session(&state, |s| Ok(clusters(s)))
}

async fn get_status(State(state): State<Shared>) -> Json<Status> {
    Json(state.status())
}

async fn post_cut(State(state): State<Shared>, Json(rect): Json<Rect>) -> ApiResult<ClustersJson> {
    with_session(&state, |s| {
        s.cut_rect(rect)?;
        Ok(clusters(s))
    })
}

async fn post_cut_nodes(
    State(state): State<Shared>,
    Json(body): Json<CutNodes>,
) -> ApiResult<ClustersJson> {
    with_session(&state, |s| {
        s.cut_nodes_op(body.nodes)?;
        Ok(clusters(s))
    })
}

async fn post_undo(State(state): State<Shared>) -> ApiResult<ClustersJson> {
    with_session(&state, |s| {
        s.undo()?;
        Ok(clusters(s))
    })
}

async fn post_reset(State(state): State<Shared>) -> ApiResult<ForestJson> {
    with_session(&state, |s| {
        s.reset()?;
        Ok(s.forest_json())
    })
}

pub fn router(state: Shared) -> Router {
    Router::new()
        .route("/dataset", get(get_dataset))
        .route("/graph", get(get_graph))
        .route("/decision-graph", get(get_decision_graph))
        .route("/clusters", get(get_clusters))
        .route("/status", get(get_status))
        .route("/cut", post(post_cut))
        .route("/cut-nodes", post(post_cut_nodes))
        .route("/undo", post(post_undo))
        .route("/reset", post(post_reset))
        .with_state(state)
}

/// Listens on `127.0.0.1:port` and builds the session in the background.
pub async fn serve(port: u16, dataset: Dataset, config: PipelineConfig) -> anyhow::Result<()> {
    let state = AppState::new();
    let addr = SocketAddr::from((Ipv4Addr::LOCALHOST, port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);

    let loader = state.clone();
    tokio::task::spawn_blocking(move || {
        if let Err(e) = loader.load(dataset, config) {
            eprintln!("error: {e}");
        }
    });
    axum::serve(listener, router(state)).await?;
    Ok(())
}
