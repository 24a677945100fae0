//! Contraction of preference relations given by ERO formulas.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::contract::Mode;
use crate::error::{ContractError, FormulaError, StratifiabilityReport};
use crate::formula::{Atom, Cmp, Conjunct, Domain, DnfFormula, Schema, Term, Var, LEFT, RIGHT};
use crate::relation::{Edge, FiniteRelation, NodeId};
use crate::Value;

pub const DEFAULT_TC_ITERATIONS: usize = 1000;

/// Strata are counted up to this before a run is declared runaway. A
/// finitely stratifiable input never gets near it.
const STRATA_CAP: usize = 100_000;

const V2: Var = 2;
const V3: Var = 3;

#[derive(Clone, Debug, Serialize)]
pub struct SymbolicStratum {
    pub index: usize,
    /// End nodes of the base contractor edges in this stratum.
    pub layer: DnfFormula,
    pub edges: DnfFormula,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolicResult {
    pub contractor: DnfFormula,
    pub contracted: DnfFormula,
    pub mode: Mode,
    pub strata_trace: Vec<SymbolicStratum>,
    pub protected: Option<DnfFormula>,
    pub forced: Option<DnfFormula>,
}

/// `K` (end nodes of `con`) and the preference restricted to `K x K`.
pub fn restricted_preference(
    pref: &DnfFormula,
    con: &DnfFormula,
) -> Result<(DnfFormula, DnfFormula), FormulaError> {
    let k = con.project_side(crate::formula::Side::Right);
    let pc = pref.and(&k)?.and(&k.instantiate(RIGHT, RIGHT))?;
    Ok((k, pc))
}

pub fn check_finitely_stratifiable(
    pref: &DnfFormula,
    con: &DnfFormula,
) -> Result<StratifiabilityReport, FormulaError> {
    let (_, pc) = restricted_preference(pref, con)?;
    Ok(path_bound_report(&pc))
}

/// Bounded path length of a transitive relation, decided per disjunct and
/// attribute group.
pub fn path_bound_report(r: &DnfFormula) -> StratifiabilityReport {
    let schema = r.schema();
    let mut failing_disjunct = None;
    let mut failing_reason = Vec::new();
    for (i, conj) in r.dnf().disjuncts().iter().enumerate() {
        let attrs: BTreeSet<usize> = conj.atoms().iter().map(|a| a.attr).collect();
        let verdicts: Vec<(String, bool)> = attrs
            .into_iter()
            .map(|a| {
                let group: Vec<Atom> = conj.atoms().iter().filter(|x| x.attr == a).cloned().collect();
                (schema.name(a).to_string(), group_bounded(&group))
            })
            .collect();
        if failing_disjunct.is_none() && !verdicts.iter().any(|(_, b)| *b) {
            failing_disjunct = Some(i);
        }
        failing_reason.push(verdicts);
    }
    StratifiabilityReport { stratifiable: failing_disjunct.is_none(), failing_disjunct, failing_reason }
}

/// True iff no path of three edges exists for the relation given by one
/// attribute's atoms over `L`, `R`.
pub fn group_bounded(atoms: &[Atom]) -> bool {
    let mut path = Vec::new();
    for step in 0..3 {
        path.extend(atoms.iter().map(|a| a.rename(&|v| v + step)));
    }
    Conjunct::from_built(path).is_none()
}

/// The same verdict as [`group_bounded`], read off the shape of the
/// constraints: left range, right range and the left/right comparison.
pub fn group_bounded_structural(atoms: &[Atom], domain: Domain) -> bool {
    if Conjunct::new(atoms.to_vec()).is_none() {
        return true;
    }
    let attr = match atoms.first() {
        Some(a) => a.attr,
        None => return false,
    };
    let (middle, ends): (Vec<&Atom>, Vec<&Atom>) = atoms.iter().partition(|a| matches!(a.rhs, Term::Var(_)));
    // both ranges on a single variable
    let both: Vec<_> = ends.iter().map(|a| a.rename(&|_| LEFT)).collect();
    let common = match Conjunct::from_built(both) {
        None => return true,
        Some(c) => c,
    };
    if middle.is_empty() || middle.iter().any(|a| a.cmp == Cmp::Eq) {
        return false;
    }
    let w = common.witness(&|_| domain == Domain::Q);
    // bounded only when the common range is a single value
    match w.get(&(LEFT, attr)) {
        None => false,
        Some(v) => {
            let other = Atom::build(attr, Term::Var(LEFT), Cmp::Ne, Term::Const(v.clone()));
            common.and(&Conjunct::from_built([other]).expect("single atom")).is_none()
        }
    }
}

fn step_back(pc: &DnfFormula, reach: &DnfFormula) -> Result<DnfFormula, FormulaError> {
    Ok(pc.and(&reach.instantiate(RIGHT, RIGHT))?.exists(&[RIGHT]))
}

/// End nodes of stratum `i`: nodes of `K` whose longest restricted path has
/// exactly `i` edges. `None` when the stratum is empty.
pub fn get_stratum_symbolic(
    pref_con: &DnfFormula,
    k_con: &DnfFormula,
    i: usize,
) -> Result<Option<DnfFormula>, FormulaError> {
    let mut reach = k_con.clone();
    for _ in 0..i {
        reach = step_back(pref_con, &reach)?;
    }
    let layer = reach.and_not(&step_back(pref_con, &reach)?)?;
    Ok(if layer.satisfiable() { Some(layer) } else { None })
}

fn require_implies(a: &DnfFormula, b: &DnfFormula, err: ContractError) -> Result<(), ContractError> {
    if a.implies(b)? {
        Ok(())
    } else {
        Err(err)
    }
}

fn prefix_core(pref: &DnfFormula, con: &DnfFormula) -> Result<(DnfFormula, Vec<SymbolicStratum>), ContractError> {
    let (k, pc) = restricted_preference(pref, con)?;
    let report = path_bound_report(&pc);
    if !report.stratifiable {
        return Err(ContractError::NotFinitelyStratifiable(report));
    }
    let mut p = DnfFormula::falsity(pref.schema());
    let mut trace = Vec::new();
    let mut reach = k;
    let mut next = step_back(&pc, &reach)?;
    for i in 0.. {
        if i >= STRATA_CAP {
            return Err(ContractError::IterationCap(STRATA_CAP));
        }
        let layer = reach.and_not(&next)?;
        if !layer.satisfiable() {
            break;
        }
        let blocked = p.or(con).instantiate(RIGHT, V2);
        let direct = layer.instantiate(RIGHT, RIGHT).and(con)?;
        let detour = layer
            .instantiate(V2, V2)
            .and(&con.instantiate(LEFT, V2))?
            .and(&pref.instantiate(RIGHT, V2))?
            .and(pref)?
            .and_not(&blocked)?
            .exists(&[V2]);
        let edges = direct.or(&detour);
        p = p.or(&edges);
        trace.push(SymbolicStratum { index: i, layer, edges });
        reach = next;
        next = step_back(&pc, &reach)?;
    }
    Ok((p, trace))
}

/// Prefix full contractor of `pref` by `con`, one stratum at a time.
pub fn min_contr_symbolic(pref: &DnfFormula, con: &DnfFormula) -> Result<SymbolicResult, ContractError> {
    require_implies(con, pref, ContractError::ConNotImplied)?;
    let (p, trace) = prefix_core(pref, con)?;
    Ok(SymbolicResult {
        contracted: pref.and_not(&p)?,
        contractor: p,
        mode: Mode::Prefix,
        strata_trace: trace,
        protected: None,
        forced: None,
    })
}

/// Satisfiable iff `pref - p` has a transitivity gap.
fn transitivity_gap(pref: &DnfFormula, p: &DnfFormula) -> Result<DnfFormula, FormulaError> {
    let rest = pref.and_not(p)?;
    rest.instantiate(LEFT, V2).and(&rest.instantiate(V2, RIGHT))?.and_not(&rest)
}

/// `CON` detours of at most three edges around `xy`, whose outer edges lie in
/// `side`: `{xy | uv in con, (u = x or side(u, x)), pref(x, y), (y = v or side(y, v))}`.
fn detour_middles(pref: &DnfFormula, con: &DnfFormula, side: &DnfFormula) -> Result<DnfFormula, FormulaError> {
    let both = con.and(pref)?;
    let from_x = con.instantiate(LEFT, V2).and(&side.instantiate(RIGHT, V2))?.and(pref)?.exists(&[V2]);
    let into_y = con.instantiate(V2, RIGHT).and(&side.instantiate(V2, LEFT))?.and(pref)?.exists(&[V2]);
    let around = con
        .instantiate(V2, V3)
        .and(&side.instantiate(V2, LEFT))?
        .and(&side.instantiate(RIGHT, V3))?
        .and(pref)?
        .exists(&[V2, V3]);
    Ok(both.or(&from_x).or(&into_y).or(&around))
}

/// Edges of `p` that lie on no short `con` detour where they are the only
/// `p` edge. Empty iff the full contractor `p` is minimal.
pub fn non_minimal_edges(pref: &DnfFormula, con: &DnfFormula, p: &DnfFormula) -> Result<DnfFormula, FormulaError> {
    let kept = pref.and_not(p)?;
    p.and_not(&detour_middles(pref, con, &kept)?)
}

/// Whether `p` is a full contractor of `pref` by `con` and a minimal one.
pub fn check_minimal_symbolic(pref: &DnfFormula, con: &DnfFormula, p: &DnfFormula) -> Result<bool, ContractError> {
    if !con.implies(p)? || !p.implies(pref)? || transitivity_gap(pref, p)?.satisfiable() {
        return Ok(false);
    }
    Ok(!non_minimal_edges(pref, con, p)?.satisfiable())
}

/// Irreflexivity and transitivity of a formula relation, decided exactly.
pub fn check_spo_symbolic(r: &DnfFormula) -> Result<(bool, bool), FormulaError> {
    let irreflexive = !r.instantiate(LEFT, LEFT).satisfiable();
    let gap = r.instantiate(LEFT, V2).and(&r.instantiate(V2, RIGHT))?.and_not(r)?;
    Ok((irreflexive, !gap.satisfiable()))
}

/// Least fixpoint of `T = r or (T ; r)`.
pub fn tc_symbolic(r: &DnfFormula, max_iter: usize) -> Result<DnfFormula, ContractError> {
    let step = r.instantiate(V2, RIGHT);
    let mut t = r.clone();
    for _ in 0..max_iter {
        let next = t.or(&t.instantiate(LEFT, V2).and(&step)?.exists(&[V2]));
        if next.implies(&t)? {
            return Ok(t);
        }
        t = next;
    }
    Err(ContractError::IterationCap(max_iter))
}

fn close_protection(pref: &DnfFormula, con: &DnfFormula, protect: &DnfFormula) -> Result<DnfFormula, ContractError> {
    require_implies(protect, pref, ContractError::ProtectNotImplied)?;
    let closed = tc_symbolic(protect, DEFAULT_TC_ITERATIONS)?;
    if let Some((l, r)) = closed.and(con)?.witness() {
        return Err(ContractError::ProtectionConflictAt { left: l.to_string(), right: r.to_string() });
    }
    Ok(closed)
}

/// `{xy | u > x > y, con(u, y), protected(u, x)}`.
pub fn q_set_symbolic(
    pref: &DnfFormula,
    con: &DnfFormula,
    protected: &DnfFormula,
) -> Result<DnfFormula, FormulaError> {
    Ok(con
        .instantiate(V2, RIGHT)
        .and(&protected.instantiate(V2, LEFT))?
        .and(&pref.instantiate(V2, LEFT))?
        .and(pref)?
        .exists(&[V2]))
}

/// Prefix contractor that keeps every edge of the closure of `protect`.
pub fn min_contr_protecting_symbolic(
    pref: &DnfFormula,
    con: &DnfFormula,
    protect: &DnfFormula,
) -> Result<SymbolicResult, ContractError> {
    require_implies(con, pref, ContractError::ConNotImplied)?;
    let closed = close_protection(pref, con, protect)?;
    let q = q_set_symbolic(pref, con, &closed)?;
    let (p, trace) = prefix_core(pref, &con.or(&q))?;
    debug_assert!(!p.and(&closed).map(|f| f.satisfiable()).unwrap_or(false));
    Ok(SymbolicResult {
        contracted: pref.and_not(&p)?,
        contractor: p,
        mode: Mode::Protecting,
        strata_trace: trace,
        protected: Some(closed),
        forced: Some(q),
    })
}

/// Union of the minimal full contractors, optionally restricted to those
/// disjoint from the closure of `protect`.
pub fn meet_contr_symbolic(
    pref: &DnfFormula,
    con: &DnfFormula,
    protect: Option<&DnfFormula>,
) -> Result<SymbolicResult, ContractError> {
    require_implies(con, pref, ContractError::ConNotImplied)?;
    let (p, mode, protected, forced) = match protect {
        None => (detour_middles(pref, con, &pref.and_not(con)?)?, Mode::Meet, None, None),
        Some(protect) => {
            let closed = close_protection(pref, con, protect)?;
            let forced = detour_middles(pref, con, &closed)?;
            let p = detour_middles(pref, con, &pref.and_not(&forced)?)?.and_not(&closed)?;
            (p, Mode::ProtectingMeet, Some(closed), Some(forced))
        }
    };
    Ok(SymbolicResult { contracted: pref.and_not(&p)?, contractor: p, mode, strata_trace: Vec::new(), protected, forced })
}

/// Schema with one uninterpreted attribute `id`, used to write finite
/// relations as formulas.
pub fn point_schema() -> Arc<Schema> {
    Arc::new(Schema::of(&[("id", Domain::C)]))
}

/// `L.id = x and R.id = y` for every edge `xy`.
pub fn encode_relation(schema: &Arc<Schema>, r: &FiniteRelation) -> DnfFormula {
    r.edges().fold(DnfFormula::falsity(schema), |acc, e| {
        let a = crate::TupleValue(vec![Value::sym(e.from.as_str())]);
        let b = crate::TupleValue(vec![Value::sym(e.to.as_str())]);
        acc.or(&DnfFormula::point_pair(schema, &a, &b))
    })
}

/// The pairs of `nodes` satisfying a formula over a point schema.
pub fn decode_relation(f: &DnfFormula, nodes: &BTreeSet<NodeId>) -> FiniteRelation {
    let tuple = |n: &NodeId| crate::TupleValue(vec![Value::sym(n.as_str())]);
    let mut out = FiniteRelation::new();
    for x in nodes {
        for y in nodes {
            if f.eval_pair(&tuple(x), &tuple(y)) {
                out.insert(Edge::new(x.clone(), y.clone()));
            }
        }
    }
    out
}
