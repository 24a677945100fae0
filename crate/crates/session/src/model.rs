//! Session state and the operations the API exposes, independent of HTTP.

use std::collections::HashSet;
use std::sync::Arc;

use prefcon_core::contract::{self, Mode};
use prefcon_core::symbolic::{self, SymbolicResult};
use prefcon_core::winnow::{parse_skyline_spec, skyline_relation, winnow, winnow_after_contraction, StrategyReport};
use prefcon_core::{ContractError, DataError, Dataset, DnfFormula, Edge, FiniteRelation, FormulaError, PreferenceSource, Schema};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};
use sha2::{Digest, Sha256};

use crate::error::ApiError;

/// How the initial preference relation is given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SourceSpec {
    Finite { edges: Vec<(String, String)> },
    Formula { formula: String },
    /// Pareto dominance over the dataset, e.g. `price=min,year=max`.
    Skyline { spec: String },
}

/// A base contractor or protected set: edges for finite sessions, a
/// formula string for formula sessions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RelationSpec {
    Edges(Vec<(String, String)>),
    Formula(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CreateRequest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub schema: Schema,
    pub dataset_csv: String,
    pub source: SourceSpec,
}

fn default_mode() -> String {
    "prefix".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractRequest {
    pub con: RelationSpec,
    #[serde(default = "default_mode")]
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub protect: Option<RelationSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StepKind {
    Contract,
    Undo,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChangeStep {
    pub index: usize,
    pub kind: StepKind,
    pub at: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub con: Option<RelationSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub protect: Option<RelationSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contractor_digest: Option<String>,
    pub winnow_digest: String,
    pub winnow: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResultSummary {
    pub mode: Mode,
    pub contractor: Json,
    pub contracted: Json,
    pub contractor_size: usize,
    pub strata: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forced: Option<Json>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub protected: Option<Json>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractResponse {
    pub step: usize,
    pub result: ResultSummary,
    pub winnow_before: Vec<String>,
    pub winnow_after: Vec<String>,
    pub strategy: StrategyReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct SessionSummary {
    pub id: String,
    pub created: u64,
    pub updated: u64,
    pub source_kind: &'static str,
    pub current: Json,
    /// Contractions currently in effect (undo pops one).
    pub depth: usize,
    pub winnow: Vec<String>,
    pub steps: Vec<ChangeStep>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WinnowView {
    pub keys: Vec<String>,
    pub rows: Vec<prefcon_core::Row>,
}

/// Everything needed to inspect or rebuild a session.
#[derive(Clone, Debug, Serialize)]
pub struct ExportBundle {
    pub format: &'static str,
    pub id: String,
    pub created: u64,
    pub schema: Schema,
    pub dataset_csv: String,
    pub initial: Json,
    pub current: Json,
    pub steps: Vec<ChangeStep>,
    pub winnow: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Session {
    pub id: String,
    pub created: u64,
    pub updated: u64,
    schema: Arc<Schema>,
    data: Dataset,
    initial: PreferenceSource,
    current: PreferenceSource,
    winnow: Dataset,
    /// Source and winnow before each contraction still in effect.
    undo_stack: Vec<(PreferenceSource, Dataset)>,
    steps: Vec<ChangeStep>,
}

fn relation_from_pairs(pairs: &[(String, String)]) -> FiniteRelation {
    pairs.iter().map(|(a, b)| Edge::new(a.as_str(), b.as_str())).collect()
}

pub fn source_json(src: &PreferenceSource) -> Json {
    match src {
        PreferenceSource::Finite(r) => json!(r.to_pairs()),
        PreferenceSource::Formula(f) => json!(f.to_string()),
    }
}

fn digest(v: &Json) -> String {
    let mut h = Sha256::new();
    h.update(v.to_string().as_bytes());
    format!("{:x}", h.finalize())
}

fn keys(d: &Dataset) -> Vec<String> {
    d.rows.iter().map(|r| r.key.to_string()).collect()
}

fn formula_err(e: FormulaError) -> ApiError {
    ApiError::from(e)
}

impl Session {
    pub fn create(id: String, req: &CreateRequest, at: u64) -> Result<Session, ApiError> {
        let schema = Arc::new(req.schema.clone());
        let data = Dataset::from_csv(req.dataset_csv.as_bytes(), &schema)?;
        let source = match &req.source {
            SourceSpec::Finite { edges } => {
                let r = relation_from_pairs(edges);
                let known: HashSet<_> = data.keys().into_iter().collect();
                if let Some(n) = r.nodes().into_iter().find(|n| !known.contains(n)) {
                    return Err(ApiError::bad_request("UNKNOWN_KEY", format!("edge endpoint {n} is not a row key")));
                }
                r.require_spo()?;
                PreferenceSource::Finite(r)
            }
            SourceSpec::Formula { formula } => {
                let f = DnfFormula::parse(formula, &schema).map_err(formula_err)?;
                let (irreflexive, transitive) = symbolic::check_spo_symbolic(&f).map_err(formula_err)?;
                if !(irreflexive && transitive) {
                    return Err(ApiError::from(ContractError::NotSpo { witness: Vec::new() }));
                }
                PreferenceSource::Formula(f)
            }
            SourceSpec::Skyline { spec } => {
                PreferenceSource::Finite(skyline_relation(&data, &parse_skyline_spec(spec)?)?)
            }
        };
        let w = winnow(&source, &data)?;
        Ok(Session {
            id,
            created: at,
            updated: at,
            schema,
            data,
            initial: source.clone(),
            current: source,
            winnow: w,
            undo_stack: Vec::new(),
            steps: Vec::new(),
        })
    }

    pub fn contract(&mut self, req: &ContractRequest, at: u64) -> Result<ContractResponse, ApiError> {
        let mode = Mode::parse(&req.mode)
            .ok_or_else(|| ApiError::bad_request("BAD_MODE", format!("unknown mode {:?}", req.mode)))?;
        if req.protect.is_some() && !mode.is_protecting() {
            return Err(ApiError::bad_request("BAD_REQUEST", "protect needs a protecting mode"));
        }
        let (summary, contractor, con) = match &self.current {
            PreferenceSource::Finite(pref) => {
                let con = match &req.con {
                    RelationSpec::Edges(e) => relation_from_pairs(e),
                    RelationSpec::Formula(_) => return Err(DataError::MixedRepresentation.into()),
                };
                let protect = match &req.protect {
                    None => FiniteRelation::new(),
                    Some(RelationSpec::Edges(e)) => relation_from_pairs(e),
                    Some(RelationSpec::Formula(_)) => return Err(DataError::MixedRepresentation.into()),
                };
                let res = match mode {
                    Mode::Prefix => contract::min_contr_finite(pref, &con)?,
                    Mode::Protecting => contract::min_contr_protecting(pref, &con, &protect)?,
                    Mode::Meet => contract::meet_contr(pref, &con)?,
                    Mode::ProtectingMeet => contract::meet_contr_protecting(pref, &con, &protect)?,
                };
                let summary = ResultSummary {
                    mode,
                    contractor: json!(res.contractor.to_pairs()),
                    contracted: json!(res.contracted.to_pairs()),
                    contractor_size: res.contractor.len(),
                    strata: res.strata_trace.len(),
                    forced: res.forced.as_ref().map(|r| json!(r.to_pairs())),
                    protected: res.protected.as_ref().map(|r| json!(r.to_pairs())),
                };
                (summary, PreferenceSource::Finite(res.contractor), PreferenceSource::Finite(con))
            }
            PreferenceSource::Formula(pref) => {
                let parse = |s: &RelationSpec| match s {
                    RelationSpec::Formula(t) => DnfFormula::parse(t, &self.schema).map_err(formula_err),
                    RelationSpec::Edges(_) => Err(DataError::MixedRepresentation.into()),
                };
                let con = parse(&req.con)?;
                let protect = match &req.protect {
                    None => DnfFormula::falsity(&self.schema),
                    Some(p) => parse(p)?,
                };
                let res: SymbolicResult = match mode {
                    Mode::Prefix => symbolic::min_contr_symbolic(pref, &con)?,
                    Mode::Protecting => symbolic::min_contr_protecting_symbolic(pref, &con, &protect)?,
                    Mode::Meet => symbolic::meet_contr_symbolic(pref, &con, None)?,
                    Mode::ProtectingMeet => symbolic::meet_contr_symbolic(pref, &con, Some(&protect))?,
                };
                let summary = ResultSummary {
                    mode,
                    contractor: json!(res.contractor.to_string()),
                    contracted: json!(res.contracted.to_string()),
                    contractor_size: res.contractor.dnf().disjuncts().len(),
                    strata: res.strata_trace.len(),
                    forced: res.forced.as_ref().map(|f| json!(f.to_string())),
                    protected: res.protected.as_ref().map(|f| json!(f.to_string())),
                };
                (summary, PreferenceSource::Formula(res.contractor), PreferenceSource::Formula(con))
            }
        };
        let (after, strategy) = winnow_after_contraction(
            &self.current,
            &contractor,
            &con,
            mode == Mode::Prefix,
            &self.data,
            Some(&self.winnow),
        )?;
        let contracted = self.current.minus(&contractor)?;
        let step = ChangeStep {
            index: self.steps.len(),
            kind: StepKind::Contract,
            at,
            mode: Some(mode),
            con: Some(req.con.clone()),
            protect: req.protect.clone(),
            contractor_digest: Some(digest(&summary.contractor)),
            winnow_digest: digest(&json!(keys(&after))),
            winnow: keys(&after),
        };
        let response = ContractResponse {
            step: step.index,
            result: summary,
            winnow_before: keys(&self.winnow),
            winnow_after: keys(&after),
            strategy,
        };
        let before = std::mem::replace(&mut self.current, contracted);
        let old_winnow = std::mem::replace(&mut self.winnow, after);
        self.undo_stack.push((before, old_winnow));
        self.steps.push(step);
        self.updated = at;
        Ok(response)
    }

    pub fn undo(&mut self, at: u64) -> Result<(), ApiError> {
        let (source, w) = self
            .undo_stack
            .pop()
            .ok_or_else(|| ApiError::conflict("NOTHING_TO_UNDO", "no contraction to undo"))?;
        self.current = source;
        self.winnow = w;
        self.steps.push(ChangeStep {
            index: self.steps.len(),
            kind: StepKind::Undo,
            at,
            mode: None,
            con: None,
            protect: None,
            contractor_digest: None,
            winnow_digest: digest(&json!(keys(&self.winnow))),
            winnow: keys(&self.winnow),
        });
        self.updated = at;
        Ok(())
    }

    pub fn current(&self) -> &PreferenceSource {
        &self.current
    }

    pub fn dataset(&self) -> &Dataset {
        &self.data
    }

    pub fn summary(&self) -> SessionSummary {
        SessionSummary {
            id: self.id.clone(),
            created: self.created,
            updated: self.updated,
            source_kind: match self.current {
                PreferenceSource::Finite(_) => "FINITE",
                PreferenceSource::Formula(_) => "FORMULA",
            },
            current: source_json(&self.current),
            depth: self.undo_stack.len(),
            winnow: keys(&self.winnow),
            steps: self.steps.clone(),
        }
    }

    pub fn winnow_view(&self) -> WinnowView {
        WinnowView { keys: keys(&self.winnow), rows: self.winnow.rows.clone() }
    }

    pub fn export(&self) -> ExportBundle {
        ExportBundle {
            format: "prefcon-export/1",
            id: self.id.clone(),
            created: self.created,
            schema: (*self.schema).clone(),
            dataset_csv: self.data.to_csv(None),
            initial: source_json(&self.initial),
            current: source_json(&self.current),
            steps: self.steps.clone(),
            winnow: keys(&self.winnow),
        }
    }
}
