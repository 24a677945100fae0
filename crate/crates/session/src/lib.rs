//! Interactive contraction sessions over HTTP, persisted as append-only logs.

pub mod error;
pub mod http;
pub mod model;
pub mod service;
pub mod store;

pub use error::ApiError;
pub use http::{router, serve};
pub use model::{ContractRequest, CreateRequest, RelationSpec, Session, SourceSpec};
pub use service::Service;

/// Environment variable that overrides the data directory.
pub const DATA_ENV: &str = "PREFCON_DATA";
