use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use prefcon_core::{ContractError, DataError, Edge, FormulaError};
use serde_json::{json, Value};

/// Error body returned by every endpoint: `{code, message, detail}`.
#[derive(Debug, Clone)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: String,
    pub message: String,
    pub detail: Value,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>) -> ApiError {
        ApiError { status, code: code.into(), message: message.into(), detail: Value::Null }
    }

    pub fn bad_request(code: &str, message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::BAD_REQUEST, code, message)
    }

    pub fn conflict(code: &str, message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::CONFLICT, code, message)
    }

    pub fn not_found(id: &str) -> ApiError {
        ApiError::new(StatusCode::NOT_FOUND, "NOT_FOUND", format!("no session {id:?}"))
    }

    pub fn internal(message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "INTERNAL", message)
    }

    fn with_detail(mut self, detail: Value) -> ApiError {
        self.detail = detail;
        self
    }
}

fn edges(es: &[Edge]) -> Value {
    json!(es.iter().map(|e| [e.from.to_string(), e.to.to_string()]).collect::<Vec<_>>())
}

impl From<ContractError> for ApiError {
    fn from(e: ContractError) -> ApiError {
        let message = e.to_string();
        match &e {
            ContractError::ProtectionConflict { edges: es } => {
                ApiError::conflict(e.code(), message).with_detail(json!({ "edges": edges(es) }))
            }
            ContractError::ProtectionConflictAt { left, right } => {
                ApiError::conflict(e.code(), message).with_detail(json!({ "left": left, "right": right }))
            }
            ContractError::NotFinitelyStratifiable(report) => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.code(), message)
                    .with_detail(json!({ "report": report }))
            }
            ContractError::NotSpo { witness } => {
                ApiError::bad_request(e.code(), message).with_detail(json!({ "witness": edges(witness) }))
            }
            ContractError::ConNotSubset { outside } | ContractError::ProtectNotSubset { outside } => {
                ApiError::bad_request(e.code(), message).with_detail(json!({ "outside": edges(outside) }))
            }
            _ => ApiError::bad_request(e.code(), message),
        }
    }
}

impl From<FormulaError> for ApiError {
    fn from(e: FormulaError) -> ApiError {
        ApiError::bad_request(e.code(), e.to_string())
    }
}

impl From<DataError> for ApiError {
    fn from(e: DataError) -> ApiError {
        match e {
            DataError::Contract(c) => c.into(),
            DataError::Formula(f) => f.into(),
            DataError::Parse { row, column, .. } => {
                let message = e.to_string();
                ApiError::bad_request(e.code(), message).with_detail(json!({ "row": row, "column": column }))
            }
            DataError::Io(_) => ApiError::internal(e.to_string()),
            _ => ApiError::bad_request(e.code(), e.to_string()),
        }
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl std::error::Error for ApiError {}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "code": self.code, "message": self.message, "detail": self.detail });
        (self.status, Json(body)).into_response()
    }
}
