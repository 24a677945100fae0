use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};

use crate::error::ApiError;
use crate::model::{ContractRequest, ContractResponse, CreateRequest, ExportBundle, SessionSummary, WinnowView};
use crate::service::Service;

type Reply<T> = Result<Json<T>, ApiError>;

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError::internal(e.to_string()))?
}

fn body<T>(b: Result<Json<T>, JsonRejection>) -> Result<T, ApiError> {
    b.map(|Json(v)| v).map_err(|e| ApiError::bad_request("BAD_REQUEST", e.body_text()))
}

async fn create(
    State(svc): State<Arc<Service>>,
    req: Result<Json<CreateRequest>, JsonRejection>,
) -> Result<(StatusCode, Json<SessionSummary>), ApiError> {
    let req = body(req)?;
    let s = blocking(move || svc.create(req)).await?;
    Ok((StatusCode::CREATED, Json(s)))
}

async fn show(State(svc): State<Arc<Service>>, Path(id): Path<String>) -> Reply<SessionSummary> {
    svc.get(&id).map(Json)
}

async fn contract(
    State(svc): State<Arc<Service>>,
    Path(id): Path<String>,
    req: Result<Json<ContractRequest>, JsonRejection>,
) -> Reply<ContractResponse> {
    let req = body(req)?;
    blocking(move || svc.contract(&id, req)).await.map(Json)
}

async fn undo(State(svc): State<Arc<Service>>, Path(id): Path<String>) -> Reply<SessionSummary> {
    blocking(move || svc.undo(&id)).await.map(Json)
}

async fn winnow(State(svc): State<Arc<Service>>, Path(id): Path<String>) -> Reply<WinnowView> {
    svc.winnow(&id).map(Json)
}

async fn export(State(svc): State<Arc<Service>>, Path(id): Path<String>) -> Reply<ExportBundle> {
    svc.export(&id).map(Json)
}

async fn list(State(svc): State<Arc<Service>>) -> Json<Vec<String>> {
    Json(svc.ids())
}

pub fn router(svc: Arc<Service>) -> Router {
    Router::new()
        .route("/sessions", post(create).get(list))
        .route("/sessions/{id}", get(show))
        .route("/sessions/{id}/contract", post(contract))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/winnow", get(winnow))
        .route("/sessions/{id}/export", get(export))
        .with_state(svc)
}

/// Serves until ctrl-c.
pub async fn serve(addr: SocketAddr, svc: Arc<Service>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(%addr, "listening");
    axum::serve(listener, router(svc))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
