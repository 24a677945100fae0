//! Contraction of strict-partial-order preference relations, finite and
//! formula-defined, with the winnow operator on top.

pub mod error;
pub mod contract;
pub mod dataset;
pub mod formula;
pub mod relation;
pub mod symbolic;
pub mod winnow;

pub use error::{ContractError, DataError, FormulaError, StratifiabilityReport};
pub use formula::{DnfFormula, Domain, Schema, TupleValue, Value};
pub use relation::{Edge, FiniteRelation, NodeId};
pub use dataset::{Dataset, Row};
pub use winnow::PreferenceSource;
