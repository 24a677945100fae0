//! Belief-change style revision and contraction of a single SPO model by a
//! set of signed edge statements.

use serde::{Deserialize, Serialize};

use super::meet::meet_contr;
use crate::error::ContractError;
use crate::relation::{Edge, FiniteRelation, NodeId};

/// `+xy` says x is preferred to y, `-xy` says it is not.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Statement {
    pub positive: bool,
    pub edge: Edge,
}

impl Statement {
    pub fn pos(from: &str, to: &str) -> Statement {
        Statement { positive: true, edge: Edge::new(from, to) }
    }

    pub fn neg(from: &str, to: &str) -> Statement {
        Statement { positive: false, edge: Edge::new(from, to) }
    }

    pub fn complement(&self) -> Statement {
        Statement { positive: !self.positive, edge: self.edge.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ChangeOp {
    Revise,
    Contract,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ChangeOutcome {
    Model { relation: FiniteRelation },
    /// No SPO satisfies the statements; `looping` lists the alternatives
    /// that would end up preferred to themselves.
    Failure { looping: Vec<NodeId> },
}

impl ChangeOutcome {
    pub fn model(&self) -> Option<&FiniteRelation> {
        match self {
            ChangeOutcome::Model { relation } => Some(relation),
            ChangeOutcome::Failure { .. } => None,
        }
    }
}

/// Revises (or contracts) `model` by a set of same-sign statements.
/// Contraction by `S` is revision by the complemented set.
pub fn restricted_change(
    model: &FiniteRelation,
    statements: &[Statement],
    op: ChangeOp,
) -> Result<ChangeOutcome, ContractError> {
    model.require_spo()?;
    let sign = match statements.first() {
        None => return Ok(ChangeOutcome::Model { relation: model.clone() }),
        Some(s) => s.positive,
    };
    if statements.iter().any(|s| s.positive != sign) {
        return Err(ContractError::MixedSignSet);
    }
    let edges: FiniteRelation = statements.iter().map(|s| s.edge.clone()).collect();
    let positive = match op {
        ChangeOp::Revise => sign,
        ChangeOp::Contract => !sign,
    };
    if positive {
        let closed = model.union(&edges).transitive_closure();
        let looping: Vec<NodeId> =
            closed.edges().filter(|e| e.from == e.to).map(|e| e.from.clone()).collect();
        if !looping.is_empty() {
            return Ok(ChangeOutcome::Failure { looping });
        }
        Ok(ChangeOutcome::Model { relation: closed })
    } else {
        let con = edges.intersection(model);
        let pm = meet_contr(model, &con)?;
        Ok(ChangeOutcome::Model { relation: pm.contracted })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(pairs: &[(&str, &str)]) -> FiniteRelation {
        FiniteRelation::from_pairs(pairs)
    }

    #[test]
    fn cycle_fails() {
        let out = restricted_change(&rel(&[("a", "b")]), &[Statement::pos("b", "a")], ChangeOp::Revise).unwrap();
        assert!(matches!(out, ChangeOutcome::Failure { .. }));
    }

    #[test]
    fn positive_revision_closes() {
        let r = rel(&[("a", "b"), ("b", "c"), ("a", "c")]);
        let out = restricted_change(&r, &[Statement::pos("c", "d")], ChangeOp::Revise).unwrap();
        assert_eq!(out.model().unwrap(), &r.union(&rel(&[("a", "d"), ("b", "d"), ("c", "d")])));
    }

    #[test]
    fn negative_revision_removes_meet() {
        let r = FiniteRelation::total_order(&["x1", "x2", "x3", "x4", "x5"]);
        let s = [Statement::neg("x1", "x3"), Statement::neg("x2", "x3"), Statement::neg("x2", "x5")];
        let out = restricted_change(&r, &s, ChangeOp::Revise).unwrap();
        let pm = rel(&[("x1", "x3"), ("x2", "x3"), ("x2", "x5"), ("x2", "x4"), ("x4", "x5")]);
        assert_eq!(out.model().unwrap(), &r.difference(&pm));
        // contracting the positive statements is the same change
        let pos: Vec<Statement> = s.iter().map(Statement::complement).collect();
        assert_eq!(restricted_change(&r, &pos, ChangeOp::Contract).unwrap(), out);
    }

    #[test]
    fn vacuous_and_mixed() {
        let r = FiniteRelation::total_order(&["a", "b", "c"]);
        let out = restricted_change(&r, &[Statement::neg("c", "a")], ChangeOp::Revise).unwrap();
        assert_eq!(out.model().unwrap(), &r);
        let out = restricted_change(&r, &[Statement::pos("a", "c")], ChangeOp::Revise).unwrap();
        assert_eq!(out.model().unwrap(), &r);
        let err = restricted_change(&r, &[Statement::pos("a", "b"), Statement::neg("a", "c")], ChangeOp::Revise);
        assert_eq!(err.unwrap_err().code(), "MIXED_SIGN_SET");
    }
}
