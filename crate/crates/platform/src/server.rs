//! HTTP/JSON front end for a [`Platform`].
//!
//! | method | path | body | success |
//! |---|---|---|---|
//! | POST | `/audiences` | `[UploadRow]` | 201 `AudienceCreated` |
//! | POST | `/campaigns` | `CampaignSpec` | 201 `CampaignCreated` |
//! | POST | `/runs` | `RunRequest` | 201 `RunCreated` |
//! | GET | `/reports/{campaign_id}` | | 200 `DeliveryReport` |
//!
//! Failures carry an `ErrorBody` (`{code, message}`) and the status of its code.

use std::net::SocketAddr;
use std::sync::Arc;

use adaudit_wire::{ApiError, ErrorBody, ErrorCode, MarketingApi};
use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Serialize;
use tokio::net::TcpListener;
use tokio::sync::oneshot;

use crate::Platform;

struct Failure(ApiError);

impl IntoResponse for Failure {
    fn into_response(self) -> Response {
        let (status, body) = match self.0 {
            ApiError::Status { status, body } => (status, body),
            other => (500, ErrorBody { code: ErrorCode::InvalidRun, message: other.to_string() }),
        };
        (StatusCode::from_u16(status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR), Json(body)).into_response()
    }
}

fn parse<T: DeserializeOwned>(body: &[u8]) -> Result<T, Failure> {
    serde_json::from_slice(body).map_err(|e| Failure(ApiError::new(ErrorCode::MalformedBody, e.to_string())))
}

async fn call<T, F>(platform: Arc<Platform>, f: F) -> Result<T, Failure>
where
    T: Send + 'static,
    F: FnOnce(&Platform) -> Result<T, ApiError> + Send + 'static,
{
    tokio::task::spawn_blocking(move || f(&platform))
        .await
        .map_err(|e| Failure(ApiError::new(ErrorCode::InvalidRun, format!("worker failed: {e}"))))?
        .map_err(Failure)
}

fn created<T: Serialize>(v: T) -> Response {
    (StatusCode::CREATED, Json(v)).into_response()
}

async fn audiences(State(p): State<Arc<Platform>>, body: Bytes) -> Result<Response, Failure> {
    let rows: Vec<adaudit_wire::UploadRow> = parse(&body)?;
    Ok(created(call(p, move |p| p.upload_audience(&rows)).await?))
}

async fn campaigns(State(p): State<Arc<Platform>>, body: Bytes) -> Result<Response, Failure> {
    let spec: adaudit_wire::CampaignSpec = parse(&body)?;
    Ok(created(call(p, move |p| p.create_campaign(&spec)).await?))
}

async fn runs(State(p): State<Arc<Platform>>, body: Bytes) -> Result<Response, Failure> {
    let req: adaudit_wire::RunRequest = parse(&body)?;
    Ok(created(call(p, move |p| p.start_run(&req)).await?))
}

async fn reports(State(p): State<Arc<Platform>>, Path(id): Path<String>) -> Result<Response, Failure> {
    Ok(Json(call(p, move |p| p.fetch_report(&id)).await?).into_response())
}

async fn fallback() -> Failure {
    Failure(ApiError::new(ErrorCode::NotFound, "no such endpoint"))
}

/// Audience uploads of a few hundred thousand contacts run to tens of MB.
pub const MAX_BODY_BYTES: usize = 512 * 1024 * 1024;

pub fn router(platform: Arc<Platform>) -> Router {
    Router::new()
        .route("/audiences", post(audiences))
        .route("/campaigns", post(campaigns))
        .route("/runs", post(runs))
        .route("/reports/{campaign_id}", get(reports))
        .fallback(fallback)
        .layer(DefaultBodyLimit::max(MAX_BODY_BYTES))
        .with_state(platform)
}

/// Serves until the listener fails.
pub async fn serve(listener: TcpListener, platform: Arc<Platform>) -> std::io::Result<()> {
    axum::serve(listener, router(platform)).await
}

/// A server on its own runtime thread, shut down on drop.
pub struct BackgroundServer {
    addr: SocketAddr,
    shutdown: Option<oneshot::Sender<()>>,
    thread: Option<std::thread::JoinHandle<std::io::Result<()>>>,
}

impl BackgroundServer {
    pub fn start(platform: Arc<Platform>, addr: &str) -> std::io::Result<Self> {
        let std_listener = std::net::TcpListener::bind(addr)?;
        std_listener.set_nonblocking(true)?;
        let addr = std_listener.local_addr()?;
        let (tx, rx) = oneshot::channel::<()>();
        let thread = std::thread::spawn(move || {
            let rt = tokio::runtime::Builder::new_multi_thread().worker_threads(2).enable_all().build()?;
            rt.block_on(async move {
                let listener = TcpListener::from_std(std_listener)?;
                axum::serve(listener, router(platform))
                    .with_graceful_shutdown(async {
                        let _ = rx.await;
                    })
                    .await
            })
        });
        Ok(Self { addr, shutdown: Some(tx), thread: Some(thread) })
    }

    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn url(&self) -> String {
        format!("http://{}", self.addr)
    }
}

impl Drop for BackgroundServer {
    fn drop(&mut self) {
        if let Some(tx) = self.shutdown.take() {
            let _ = tx.send(());
        }
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }
}
