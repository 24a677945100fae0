//! Contraction of finite preference relations.

mod finite;
mod meet;
mod oracle;
mod restricted;

use serde::{Deserialize, Serialize};

use crate::error::ContractError;
use crate::relation::{Edge, FiniteRelation};

pub use finite::{
    check_full_contractor, check_minimal_contractor, is_prefix_contractor, layer_indices, min_contr_finite,
    min_contr_protecting, naive_contractor, q_set, FullCheck, MinimalCheck,
};
pub use meet::{forced_set, meet_contr, meet_contr_protecting};
pub use oracle::{enumerate_minimal_contractors, DEFAULT_ORACLE_BOUND};
pub use restricted::{restricted_change, ChangeOp, ChangeOutcome, Statement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Mode {
    Prefix,
    Protecting,
    Meet,
    ProtectingMeet,
}

impl Mode {
    pub fn parse(s: &str) -> Option<Mode> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "prefix" => Some(Mode::Prefix),
            "protecting" => Some(Mode::Protecting),
            "meet" => Some(Mode::Meet),
            "protecting-meet" => Some(Mode::ProtectingMeet),
            _ => None,
        }
    }

    pub fn is_protecting(self) -> bool {
        matches!(self, Mode::Protecting | Mode::ProtectingMeet)
    }
}

/// Edges added while contracting by one stratum of the base contractor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub index: usize,
    pub edges: FiniteRelation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionResult {
    pub contractor: FiniteRelation,
    pub contracted: FiniteRelation,
    pub mode: Mode,
    pub strata_trace: Vec<Stratum>,
    /// Transitive closure of the protected input.
    pub protected: Option<FiniteRelation>,
    /// Edges every admissible contractor must contain besides the base
    /// contractor (`Q` for protecting prefix, `C_P+` for protecting meet).
    pub forced: Option<FiniteRelation>,
}

/// Checks the shared preconditions: `pref` is an SPO and `con` is inside it.
pub(crate) fn check_inputs(pref: &FiniteRelation, con: &FiniteRelation) -> Result<(), ContractError> {
    pref.require_spo()?;
    let outside: Vec<Edge> = con.difference(pref).edges().cloned().collect();
    if !outside.is_empty() {
        return Err(ContractError::ConNotSubset { outside });
    }
    Ok(())
}

/// Closes `protect` and rejects it if the closure meets `con`.
pub(crate) fn close_protection(
    pref: &FiniteRelation,
    con: &FiniteRelation,
    protect: &FiniteRelation,
) -> Result<FiniteRelation, ContractError> {
    let outside: Vec<Edge> = protect.difference(pref).edges().cloned().collect();
    if !outside.is_empty() {
        return Err(ContractError::ProtectNotSubset { outside });
    }
    let closed = protect.transitive_closure();
    let clash: Vec<Edge> = closed.intersection(con).edges().cloned().collect();
    if !clash.is_empty() {
        return Err(ContractError::ProtectionConflict { edges: clash });
    }
    Ok(closed)
}
