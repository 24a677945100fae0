use super::finite::result;
use super::{check_inputs, close_protection, ContractionResult, Mode};
use crate::error::ContractError;
use crate::relation::{Edge, FiniteRelation};

/// `{xy | uv in con, (u = x or ux in side), x > y, (y = v or yv in side)}`.
fn detour_middles(pref: &FiniteRelation, con: &FiniteRelation, side: &FiniteRelation) -> FiniteRelation {
    let mut out = FiniteRelation::new();
    for uv in con.edges() {
        let starts = std::iter::once(&uv.from).chain(side.successors(&uv.from));
        for x in starts {
            for y in pref.successors(x) {
                if *y == uv.to || side.contains(&Edge::new(y.clone(), uv.to.clone())) {
                    out.insert(Edge::new(x.clone(), y.clone()));
                }
            }
        }
    }
    out
}

/// Union of all minimal full contractors.
pub fn meet_contr(pref: &FiniteRelation, con: &FiniteRelation) -> Result<ContractionResult, ContractError> {
    check_inputs(pref, con)?;
    let pm = detour_middles(pref, con, &pref.difference(con));
    Ok(result(pref, pm, Mode::Meet, Vec::new(), None, None))
}

/// Edges every contractor avoiding `protected` (already closed) must hold.
pub fn forced_set(pref: &FiniteRelation, con: &FiniteRelation, protected: &FiniteRelation) -> FiniteRelation {
    detour_middles(pref, con, protected)
}

/// Union of the minimal full contractors disjoint from the closure of
/// `protect`.
pub fn meet_contr_protecting(
    pref: &FiniteRelation,
    con: &FiniteRelation,
    protect: &FiniteRelation,
) -> Result<ContractionResult, ContractError> {
    check_inputs(pref, con)?;
    let closed = close_protection(pref, con, protect)?;
    let forced = forced_set(pref, con, &closed);
    let pm = detour_middles(pref, con, &pref.difference(&forced)).difference(&closed);
    Ok(result(pref, pm, Mode::ProtectingMeet, Vec::new(), Some(closed), Some(forced)))
}
