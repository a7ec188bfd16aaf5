//! Axum service exposing the distance pipeline over HTTP/JSON.
//!
//! Distance and oracle runs are jobs: submit with POST /api/v1/jobs, poll
//! GET /api/v1/jobs/{id} for state and the enumeration progress pair, and
//! fetch the final RunReport from GET /api/v1/jobs/{id}/report. Reduction
//! and the scaling bounds are synchronous endpoints. Jobs live in memory;
//! a restart forgets them.

mod runner;

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};

use latdist_api as api;
use latdist_core::distance::Progress;

pub use runner::{error_info, run_job};

pub fn version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

/// Per-job progress shared between the worker and status queries.
#[derive(Default)]
pub struct ProgressCell {
    stage: Mutex<String>,
    searched: AtomicU64,
    total: AtomicU64,
}

impl ProgressCell {
    fn snapshot(&self) -> (String, api::ProgressInfo) {
        let stage = self.stage.lock().expect("progress lock").clone();
        (
            stage,
            api::ProgressInfo {
                searched: self.searched.load(Ordering::Relaxed),
                total: self.total.load(Ordering::Relaxed),
            },
        )
    }
}

impl Progress for ProgressCell {
    fn stage(&self, name: &str) {
        *self.stage.lock().expect("progress lock") = name.to_string();
    }

    fn enumeration(&self, searched: u64, total: u64) {
        self.searched.store(searched, Ordering::Relaxed);
        self.total.store(total, Ordering::Relaxed);
    }
}

enum JobState {
    Queued,
    Running,
    Done(Box<api::RunReport>),
    Failed(api::ErrorInfo),
}

struct Job {
    state: JobState,
    progress: Arc<ProgressCell>,
}

#[derive(Clone, Default)]
pub struct AppState {
    jobs: Arc<RwLock<HashMap<u64, Job>>>,
    next_id: Arc<AtomicU64>,
}

pub fn router() -> Router {
    Router::new()
        .route("/api/v1/health", get(health))
        .route("/api/v1/bound", post(bound))
        .route("/api/v1/reduce", post(reduce))
        .route("/api/v1/jobs", post(submit_job))
        .route("/api/v1/jobs/{id}", get(job_status))
        .route("/api/v1/jobs/{id}/report", get(job_report))
        .with_state(AppState::default())
}

/// Binds the service and runs it until shutdown; prints nothing itself.
pub async fn serve(listener: tokio::net::TcpListener) -> std::io::Result<()> {
    axum::serve(listener, router()).await
}

struct Failure(StatusCode, api::ErrorInfo);

impl IntoResponse for Failure {
    fn into_response(self) -> Response {
        (self.0, Json(api::ApiError { error: self.1 })).into_response()
    }
}

fn bad_request(err: latdist_core::Error) -> Failure {
    Failure(StatusCode::BAD_REQUEST, error_info(&err))
}

async fn health() -> Json<api::HealthInfo> {
    Json(api::HealthInfo { status: "ok".into(), version: version() })
}

async fn bound(Json(req): Json<api::BoundRequest>) -> Result<Json<api::BoundResponse>, Failure> {
    let inputs = latdist_core::embed::ScalingInputs {
        m: req.m,
        n: req.n,
        max_col_norm: req.max_col_norm,
        r_max: req.r_max,
        delta: req.delta,
        beta: req.beta,
    };
    let t1 = latdist_core::embed::scaling_bound_lll(&inputs).map_err(bad_request)?;
    let t2 = latdist_core::embed::scaling_bound_bkz(&inputs).map_err(bad_request)?;
    let hermite = latdist_core::embed::hermite_upper(req.beta).map_err(bad_request)?;
    Ok(Json(api::BoundResponse {
        lll_bound: t1.to_string(),
        bkz_bound: t2.to_string(),
        hermite_upper: hermite,
    }))
}

async fn reduce(Json(req): Json<api::ReduceRequest>) -> Result<Json<api::ReduceResponse>, Failure> {
    let result = tokio::task::spawn_blocking(move || runner::run_reduce(&req)).await.map_err(|e| {
        Failure(
            StatusCode::INTERNAL_SERVER_ERROR,
            api::ErrorInfo {
                kind: "internal".into(),
                message: format!("reduction worker panicked: {e}"),
                exit_code: api::EXIT_INTERNAL,
            },
        )
    })?;
    match result {
        Ok(resp) => Ok(Json(resp)),
        Err(err) => Err(bad_request(err)),
    }
}

async fn submit_job(
    State(state): State<AppState>,
    Json(req): Json<api::JobRequest>,
) -> Result<(StatusCode, Json<api::JobCreated>), Failure> {
    if req.kind != "distance" && req.kind != "oracle" {
        return Err(Failure(
            StatusCode::BAD_REQUEST,
            api::ErrorInfo {
                kind: "validation".into(),
                message: format!("unknown job kind {:?}", req.kind),
                exit_code: api::EXIT_VALIDATION,
            },
        ));
    }
    let id = state.next_id.fetch_add(1, Ordering::Relaxed) + 1;
    let progress = Arc::new(ProgressCell::default());
    state
        .jobs
        .write()
        .expect("jobs lock")
        .insert(id, Job { state: JobState::Queued, progress: progress.clone() });
    let jobs = state.jobs.clone();
    tokio::task::spawn_blocking(move || {
        if let Some(job) = jobs.write().expect("jobs lock").get_mut(&id) {
            job.state = JobState::Running;
        }
        let outcome = run_job(&req, progress.as_ref());
        let mut guard = jobs.write().expect("jobs lock");
        if let Some(job) = guard.get_mut(&id) {
            job.state = match outcome {
                Ok(report) => JobState::Done(Box::new(report)),
                Err(err) => JobState::Failed(err),
            };
        }
    });
    Ok((StatusCode::ACCEPTED, Json(api::JobCreated { id })))
}

fn not_found(id: u64) -> Failure {
    Failure(
        StatusCode::NOT_FOUND,
        api::ErrorInfo {
            kind: "validation".into(),
            message: format!("no job {}", id),
            exit_code: api::EXIT_VALIDATION,
        },
    )
}

async fn job_status(
    State(state): State<AppState>,
    Path(id): Path<u64>,
) -> Result<Json<api::JobStatus>, Failure> {
    let jobs = state.jobs.read().expect("jobs lock");
    let job = jobs.get(&id).ok_or_else(|| not_found(id))?;
    let (stage, progress) = job.progress.snapshot();
    let (state_str, error) = match &job.state {
        JobState::Queued => ("queued", None),
        JobState::Running => ("running", None),
        JobState::Done(_) => ("done", None),
        JobState::Failed(e) => ("failed", Some(e.clone())),
    };
    Ok(Json(api::JobStatus { id, state: state_str.into(), stage, progress, error }))
}

async fn job_report(
    State(state): State<AppState>,
    Path(id): Path<u64>,
) -> Result<Json<api::RunReport>, Failure> {
    let jobs = state.jobs.read().expect("jobs lock");
    let job = jobs.get(&id).ok_or_else(|| not_found(id))?;
    match &job.state {
        JobState::Done(report) => Ok(Json((**report).clone())),
        JobState::Failed(err) => Err(Failure(StatusCode::CONFLICT, err.clone())),
        _ => Err(Failure(
            StatusCode::NOT_FOUND,
            api::ErrorInfo {
                kind: "validation".into(),
                message: format!("job {} has not finished", id),
                exit_code: api::EXIT_VALIDATION,
            },
        )),
    }
}
