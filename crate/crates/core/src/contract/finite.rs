use std::collections::BTreeMap;

use super::{check_inputs, close_protection, ContractionResult, Mode, Stratum};
use crate::error::ContractError;
use crate::relation::{Dense, Edge, FiniteRelation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Contractor edge whose endpoints stay connected.
    pub edge: Edge,
    /// A path between them avoiding the contractor.
    pub path: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullCheck {
    pub is_full: bool,
    pub missing_con: Vec<Edge>,
    pub outside_pref: Vec<Edge>,
    pub violation: Option<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalCheck {
    pub is_minimal: bool,
    /// Contractor edges lying on no short detour as the only contractor edge.
    pub removable: FiniteRelation,
}

pub fn check_full_contractor(
    pref: &FiniteRelation,
    con: &FiniteRelation,
    p: &FiniteRelation,
) -> Result<FullCheck, ContractError> {
    check_inputs(pref, con)?;
    let missing_con: Vec<Edge> = con.difference(p).edges().cloned().collect();
    let outside_pref: Vec<Edge> = p.difference(pref).edges().cloned().collect();
    let violation = p.edges().filter(|e| pref.contains(e)).find_map(|e| {
        pref.path_avoiding(p, &e.from, &e.to).map(|path| Violation { edge: e.clone(), path })
    });
    Ok(FullCheck {
        is_full: missing_con.is_empty() && outside_pref.is_empty() && violation.is_none(),
        missing_con,
        outside_pref,
        violation,
    })
}

/// `D = P - [detours u>=x>y>=v with uv in C, ux and yv kept, xy the only
/// P-edge]`, evaluated as the union of the three join shapes plus `C`.
pub fn check_minimal_contractor(
    pref: &FiniteRelation,
    con: &FiniteRelation,
    p: &FiniteRelation,
) -> Result<MinimalCheck, ContractError> {
    if !check_full_contractor(pref, con, p)?.is_full {
        return Err(ContractError::NotFullContractor);
    }
    let inv = pref.inverse();
    let kept = |a: &crate::relation::NodeId, b: &crate::relation::NodeId| {
        let e = Edge::new(a.clone(), b.clone());
        pref.contains(&e) && !p.contains(&e)
    };
    let mut removable = FiniteRelation::new();
    for e in p.edges() {
        if con.contains(e) {
            continue;
        }
        let (x, y) = (&e.from, &e.to);
        let kept_after: Vec<_> = pref.successors(y).filter(|v| kept(y, v)).collect();
        let kept_before: Vec<_> = inv.successors(x).filter(|u| kept(u, x)).collect();
        let detour = kept_after.iter().any(|v| con.contains(&Edge::new(x.clone(), (*v).clone())))
            || kept_before.iter().any(|u| con.contains(&Edge::new((*u).clone(), y.clone())))
            || kept_before
                .iter()
                .any(|u| kept_after.iter().any(|v| con.contains(&Edge::new((*u).clone(), (*v).clone()))));
        if !detour {
            removable.insert(e.clone());
        }
    }
    Ok(MinimalCheck { is_minimal: removable.is_empty(), removable })
}

/// Every edge `xy` of `p` starts a `con`-detour in which it is the only
/// `p`-edge: some `xv` in `con` with `y = v` or `yv` kept.
pub fn is_prefix_contractor(pref: &FiniteRelation, con: &FiniteRelation, p: &FiniteRelation) -> bool {
    p.edges().all(|e| {
        con.successors(&e.from).any(|v| {
            *v == e.to || {
                let yv = Edge::new(e.to.clone(), v.clone());
                pref.contains(&yv) && !p.contains(&yv)
            }
        })
    })
}

/// All edges starting a `con`-detour: `{xy | xv in con, x > y, y >= v}`.
pub fn naive_contractor(pref: &FiniteRelation, con: &FiniteRelation) -> Result<FiniteRelation, ContractError> {
    check_inputs(pref, con)?;
    let mut out = FiniteRelation::new();
    for c in con.edges() {
        for y in pref.successors(&c.from) {
            if *y == c.to || pref.contains(&Edge::new(y.clone(), c.to.clone())) {
                out.insert(Edge::new(c.from.clone(), y.clone()));
            }
        }
    }
    Ok(out)
}

/// Peels end nodes of `con`-edges in order of the longest path they start
/// inside the preference relation restricted to those end nodes.
struct Peeler {
    ec: Vec<u32>,
    rc: Vec<(u32, u32)>,
}

impl Peeler {
    fn new(r: &[(u32, u32)], c: &[(u32, u32)]) -> Peeler {
        let mut ec: Vec<u32> = c.iter().map(|e| e.1).collect();
        ec.sort_unstable();
        ec.dedup();
        let rc = r
            .iter()
            .copied()
            .filter(|(x, y)| ec.binary_search(x).is_ok() && ec.binary_search(y).is_ok())
            .collect();
        Peeler { ec, rc }
    }

    /// End nodes of the next stratum, or `None` when exhausted.
    fn next(&mut self) -> Option<Vec<u32>> {
        if self.ec.is_empty() {
            return None;
        }
        let mut starts: Vec<u32> = self.rc.iter().map(|e| e.0).collect();
        starts.dedup();
        let layer: Vec<u32> = self.ec.iter().copied().filter(|n| starts.binary_search(n).is_err()).collect();
        assert!(!layer.is_empty(), "preference relation restricted to end nodes has a cycle");
        self.ec.retain(|n| layer.binary_search(n).is_err());
        self.rc.retain(|(_, y)| layer.binary_search(y).is_err());
        Some(layer)
    }
}

fn encode(d: &Dense, r: &FiniteRelation) -> Vec<(u32, u32)> {
    // node order matches NodeId order, so the edge order is preserved
    r.edges().map(|e| (d.index[&e.from] as u32, d.index[&e.to] as u32)).collect()
}

pub fn layer_indices(pref: &FiniteRelation, con: &FiniteRelation) -> Result<BTreeMap<Edge, usize>, ContractError> {
    check_inputs(pref, con)?;
    let d = Dense::new(pref);
    let r = encode(&d, pref);
    let c = encode(&d, con);
    let mut peeler = Peeler::new(&r, &c);
    let mut out = BTreeMap::new();
    let mut i = 0;
    while let Some(layer) = peeler.next() {
        for &(x, v) in &c {
            if layer.binary_search(&v).is_ok() {
                out.insert(Edge::new(d.nodes[x as usize].clone(), d.nodes[v as usize].clone()), i);
            }
        }
        i += 1;
    }
    Ok(out)
}

/// The prefix full contractor, stratum by stratum. `R` is kept sorted and
/// contractor membership is a mark on it, so every lookup is a binary
/// search.
pub(crate) fn prefix_core(pref: &FiniteRelation, con: &FiniteRelation) -> (FiniteRelation, Vec<Stratum>) {
    let d = Dense::new(pref);
    let r = encode(&d, pref);
    let c = encode(&d, con);
    let mut marks = vec![false; r.len()];
    for e in &c {
        marks[r.binary_search(e).expect("con is inside pref")] = true;
    }
    let edge = |(x, y): (u32, u32)| Edge::new(d.nodes[x as usize].clone(), d.nodes[y as usize].clone());
    let mut peeler = Peeler::new(&r, &c);
    let mut trace = Vec::new();
    while let Some(layer) = peeler.next() {
        let mut hits = Vec::new();
        let mut stratum = FiniteRelation::new();
        for &(x, v) in c.iter().filter(|(_, v)| layer.binary_search(v).is_ok()) {
            stratum.insert(edge((x, v)));
            let lo = r.partition_point(|e| e.0 < x);
            let hi = r.partition_point(|e| e.0 <= x);
            for (idx, &(_, y)) in r[lo..hi].iter().enumerate() {
                if let Ok(j) = r.binary_search(&(y, v)) {
                    if !marks[j] {
                        hits.push(lo + idx);
                    }
                }
            }
        }
        for idx in hits {
            marks[idx] = true;
            stratum.insert(edge(r[idx]));
        }
        trace.push(Stratum { index: trace.len(), edges: stratum });
    }
    let contractor = r.iter().zip(&marks).filter(|(_, m)| **m).map(|(e, _)| edge(*e)).collect();
    (contractor, trace)
}

pub(crate) fn result(
    pref: &FiniteRelation,
    contractor: FiniteRelation,
    mode: Mode,
    strata_trace: Vec<Stratum>,
    protected: Option<FiniteRelation>,
    forced: Option<FiniteRelation>,
) -> ContractionResult {
    ContractionResult { contracted: pref.difference(&contractor), contractor, mode, strata_trace, protected, forced }
}

pub fn min_contr_finite(pref: &FiniteRelation, con: &FiniteRelation) -> Result<ContractionResult, ContractError> {
    check_inputs(pref, con)?;
    let (contractor, trace) = prefix_core(pref, con);
    Ok(result(pref, contractor, Mode::Prefix, trace, None, None))
}

/// `{xy | u > x > y, uy in con, ux in protected}`.
pub fn q_set(pref: &FiniteRelation, con: &FiniteRelation, protected: &FiniteRelation) -> FiniteRelation {
    let mut q = FiniteRelation::new();
    for ux in protected.edges().filter(|e| pref.contains(e)) {
        for y in pref.successors(&ux.to) {
            if con.contains(&Edge::new(ux.from.clone(), y.clone())) {
                q.insert(Edge::new(ux.to.clone(), y.clone()));
            }
        }
    }
    q
}

/// Prefix contractor by `con ∪ Q`, which avoids the closure of `protect`.
pub fn min_contr_protecting(
    pref: &FiniteRelation,
    con: &FiniteRelation,
    protect: &FiniteRelation,
) -> Result<ContractionResult, ContractError> {
    check_inputs(pref, con)?;
    let closed = close_protection(pref, con, protect)?;
    let q = q_set(pref, con, &closed);
    let (contractor, trace) = prefix_core(pref, &con.union(&q));
    Ok(result(pref, contractor, Mode::Protecting, trace, Some(closed), Some(q)))
}
