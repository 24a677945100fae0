//! The winnow operator, its contraction-aware shortcuts, and skyline
//! relations.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::{Dataset, Row};
use crate::error::DataError;
use crate::formula::{Domain, DnfFormula, Side};
use crate::relation::{Edge, FiniteRelation, NodeId};

/// A preference relation over dataset rows: edges between row keys, or a
/// formula over row values.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PreferenceSource {
    Finite(FiniteRelation),
    Formula(DnfFormula),
}

impl PreferenceSource {
    /// `self - other`; both must use the same representation.
    pub fn minus(&self, other: &PreferenceSource) -> Result<PreferenceSource, DataError> {
        match (self, other) {
            (PreferenceSource::Finite(a), PreferenceSource::Finite(b)) => Ok(PreferenceSource::Finite(a.difference(b))),
            (PreferenceSource::Formula(a), PreferenceSource::Formula(b)) => Ok(PreferenceSource::Formula(a.and_not(b)?)),
            _ => Err(mixed()),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            PreferenceSource::Finite(r) => r.is_empty(),
            PreferenceSource::Formula(f) => !f.satisfiable(),
        }
    }

    /// Rows that start (`Side::Left`) or end (`Side::Right`) an edge.
    fn side_filter(&self, side: Side) -> Box<dyn Fn(&Row) -> bool + Sync + '_> {
        match self {
            PreferenceSource::Finite(r) => {
                let nodes: HashSet<NodeId> =
                    r.edges().map(|e| if side == Side::Left { e.from.clone() } else { e.to.clone() }).collect();
                Box::new(move |row| nodes.contains(&row.key))
            }
            PreferenceSource::Formula(f) => {
                let set = f.project_side(side);
                Box::new(move |row| set.eval_single(&row.values))
            }
        }
    }
}

fn mixed() -> DataError {
    DataError::MixedRepresentation
}

/// Rows of `data` that no other row dominates, in input order.
pub fn winnow(source: &PreferenceSource, data: &Dataset) -> Result<Dataset, DataError> {
    let dominated = dominated_keys(source, data)?;
    Ok(data.select(|r| !dominated.contains(&r.key)))
}

fn dominated_keys(source: &PreferenceSource, data: &Dataset) -> Result<HashSet<NodeId>, DataError> {
    match source {
        PreferenceSource::Finite(r) => {
            r.require_spo()?;
            let present: HashSet<&NodeId> = data.rows.iter().map(|r| &r.key).collect();
            Ok(r.edges()
                .filter(|e| present.contains(&e.from) && present.contains(&e.to))
                .map(|e| e.to.clone())
                .collect())
        }
        PreferenceSource::Formula(f) => Ok(data
            .rows
            .par_iter()
            .filter(|t| data.rows.iter().any(|u| u.key != t.key && f.eval_pair(&u.values, &t.values)))
            .map(|t| t.key.clone())
            .collect()),
    }
}

/// Rank of every row under iterated winnow: 0 for the best rows, 1 for the
/// best of the rest, and so on.
pub fn winnow_ranks(source: &PreferenceSource, data: &Dataset) -> Result<Vec<usize>, DataError> {
    let mut rank: BTreeMap<NodeId, usize> = BTreeMap::new();
    let mut rest = data.clone();
    let mut level = 0;
    while !rest.is_empty() {
        let top = winnow(source, &rest)?;
        let keys: HashSet<NodeId> = top.keys().into_iter().collect();
        for k in &keys {
            rank.insert(k.clone(), level);
        }
        rest = rest.select(|r| !keys.contains(&r.key));
        level += 1;
    }
    Ok(data.rows.iter().map(|r| rank[&r.key]).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Strategy {
    /// No winnow row starts a contracted edge, so the old result stands.
    Unchanged,
    /// Re-run over the old result plus the rows that end a contracted edge.
    Reduced,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrategyReport {
    pub strategy: Strategy,
    /// Which start set was tested: `S(CON)` for prefix contractors, else `S(P-)`.
    pub start_set: String,
    /// Rows the contracted winnow was evaluated over (0 when unchanged).
    pub candidates: usize,
}

/// Winnow under `pref - contractor`, reusing `cached = winnow(pref, data)`
/// when given. `prefix` says the contractor is a prefix one, which allows
/// testing the starts of `con` instead of the contractor's.
pub fn winnow_after_contraction(
    pref: &PreferenceSource,
    contractor: &PreferenceSource,
    con: &PreferenceSource,
    prefix: bool,
    data: &Dataset,
    cached: Option<&Dataset>,
) -> Result<(Dataset, StrategyReport), DataError> {
    let owned;
    let before = match cached {
        Some(c) => c,
        None => {
            owned = winnow(pref, data)?;
            &owned
        }
    };
    let (probe, start_set) = if prefix { (con, "S(CON)") } else { (contractor, "S(P-)") };
    let starts = probe.side_filter(Side::Left);
    if !before.rows.iter().any(starts) {
        let report = StrategyReport { strategy: Strategy::Unchanged, start_set: start_set.into(), candidates: 0 };
        return Ok((before.clone(), report));
    }
    let ends = contractor.side_filter(Side::Right);
    let in_before: HashSet<&NodeId> = before.rows.iter().map(|r| &r.key).collect();
    let pool = data.select(|r| in_before.contains(&r.key) || ends(r));
    let contracted = pref.minus(contractor)?;
    let after = winnow(&contracted, &pool)?;
    let report = StrategyReport { strategy: Strategy::Reduced, start_set: start_set.into(), candidates: pool.len() };
    Ok((after, report))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Direction {
    Min,
    Max,
    Ignore,
}

/// Parses `price=min,year=max`.
pub fn parse_skyline_spec(text: &str) -> Result<Vec<(String, Direction)>, DataError> {
    text.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|part| {
            let (name, dir) = part
                .split_once('=')
                .ok_or_else(|| DataError::Parse { row: 0, column: 0, msg: format!("expected attr=min|max|ignore, got {part:?}") })?;
            let dir = match dir.trim().to_ascii_lowercase().as_str() {
                "min" => Direction::Min,
                "max" => Direction::Max,
                "ignore" => Direction::Ignore,
                other => {
                    return Err(DataError::Parse { row: 0, column: 0, msg: format!("unknown direction {other:?}") })
                }
            };
            Ok((name.trim().to_string(), dir))
        })
        .collect()
}

/// Pareto dominance over the directed attributes: `t -> u` iff `t` is at
/// least as good everywhere and strictly better somewhere.
pub fn skyline_relation(data: &Dataset, spec: &[(String, Direction)]) -> Result<FiniteRelation, DataError> {
    let mut dirs = Vec::new();
    for (name, dir) in spec {
        let a = data.schema.index_of(name).ok_or_else(|| DataError::UnknownAttribute(name.clone()))?;
        if *dir == Direction::Ignore {
            continue;
        }
        if data.schema.domain(a) == Domain::C {
            return Err(DataError::SpecOnCAttribute(name.clone()));
        }
        dirs.push((a, *dir));
    }
    let dominates = |t: &Row, u: &Row| {
        let mut strict = false;
        for &(a, dir) in &dirs {
            let (x, y) = (t.values.get(a).as_rat().expect("Q value"), u.values.get(a).as_rat().expect("Q value"));
            let (better, worse) = match dir {
                Direction::Min => (x < y, x > y),
                _ => (x > y, x < y),
            };
            if worse {
                return false;
            }
            strict |= better;
        }
        strict
    };
    let edges: BTreeSet<Edge> = data
        .rows
        .par_iter()
        .flat_map_iter(|t| {
            data.rows
                .iter()
                .filter(move |u| dominates(t, u))
                .map(move |u| Edge::new(t.key.clone(), u.key.clone()))
        })
        .collect();
    Ok(edges.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::formula::Schema;

    fn cars() -> Dataset {
        let s = Arc::new(Schema::of(&[("make", Domain::C), ("year", Domain::Q), ("price", Domain::Q)]));
        let t = "id,make,year,price\nt1,VW,2007,15000\nt2,VW,2007,20000\nt3,Kia,2006,15000\nt4,Kia,2007,12000\n";
        Dataset::from_csv(t.as_bytes(), &s).unwrap()
    }

    fn formula(d: &Dataset, text: &str) -> PreferenceSource {
        PreferenceSource::Formula(DnfFormula::parse(text, &d.schema).unwrap())
    }

    fn keys(d: &Dataset) -> Vec<String> {
        d.rows.iter().map(|r| r.key.to_string()).collect()
    }

    const MARY: &str = "L.year > R.year or L.year = R.year and L.price < R.price";

    #[test]
    fn mary_winnow() {
        let d = cars();
        assert_eq!(keys(&winnow(&formula(&d, MARY), &d).unwrap()), ["t4"]);
        let contracted = formula(
            &d,
            "(L.year > R.year or L.year = R.year and L.price < R.price) and \
             not (L.year = 2007 and R.year = 2007 and L.price = 12000 and R.price > 12000 and R.price <= 15000)",
        );
        assert_eq!(keys(&winnow(&contracted, &d).unwrap()), ["t1", "t4"]);
    }

    fn points() -> Dataset {
        let s = Arc::new(Schema::of(&[("p", Domain::Q)]));
        Dataset::from_csv("id,p\n1,1\n2,2\n3,3\n4,4\n".as_bytes(), &s).unwrap()
    }

    #[test]
    fn shortcut_strategies() {
        let d = points();
        let pref = formula(&d, "L.p < R.p");
        let con = formula(&d, "L.p = 0 and R.p = 3");
        assert_eq!(keys(&winnow(&pref, &d).unwrap()), ["1"]);
        let p1 = formula(&d, "L.p = 0 and R.p > 0 and R.p <= 3");
        let (w, rep) = winnow_after_contraction(&pref, &p1, &con, true, &d, None).unwrap();
        assert_eq!((keys(&w), rep.strategy), (vec!["1".to_string()], Strategy::Unchanged));
        let p2 = formula(&d, "L.p >= 0 and L.p < 3 and R.p = 3");
        let (w, rep) = winnow_after_contraction(&pref, &p2, &con, false, &d, None).unwrap();
        assert_eq!((keys(&w), rep.strategy), (vec!["1".to_string(), "3".to_string()], Strategy::Reduced));
        assert_eq!(rep.candidates, 2);
        assert_eq!(w, winnow(&pref.minus(&p2).unwrap(), &d).unwrap());
    }

    #[test]
    fn empty_contractor_keeps_cache() {
        let d = points();
        let pref = PreferenceSource::Finite(FiniteRelation::total_order(&["1", "2", "3", "4"]));
        let none = PreferenceSource::Finite(FiniteRelation::new());
        let cached = winnow(&pref, &d).unwrap();
        let (w, rep) = winnow_after_contraction(&pref, &none, &none, true, &d, Some(&cached)).unwrap();
        assert_eq!(w, cached);
        assert_eq!(rep.strategy, Strategy::Unchanged);
    }

    #[test]
    fn finite_source_must_be_spo() {
        let d = points();
        let bad = PreferenceSource::Finite(FiniteRelation::from_pairs(&[("1", "2"), ("2", "3")]));
        assert_eq!(winnow(&bad, &d).unwrap_err().code(), "NOT_SPO");
    }

    #[test]
    fn skyline() {
        let s = Arc::new(Schema::of(&[("a", Domain::Q), ("b", Domain::Q), ("c", Domain::C)]));
        let d = Dataset::from_csv("a,b,c\n1,1,x\n2,2,y\n".as_bytes(), &s).unwrap();
        let spec = parse_skyline_spec("a=min,b=min").unwrap();
        assert_eq!(skyline_relation(&d, &spec).unwrap(), FiniteRelation::from_pairs(&[("r1", "r2")]));
        let d2 = Dataset::from_csv("a,b,c\n1,2,x\n2,1,y\n".as_bytes(), &s).unwrap();
        assert!(skyline_relation(&d2, &spec).unwrap().is_empty());
        let err = skyline_relation(&d, &parse_skyline_spec("c=max").unwrap()).unwrap_err();
        assert_eq!(err.code(), "SPEC_ON_C_ATTRIBUTE");
        assert!(skyline_relation(&d, &parse_skyline_spec("c=ignore,a=max").unwrap())
            .unwrap()
            .contains_pair("r2", "r1"));
    }

    #[test]
    fn ranks() {
        let d = points();
        let pref = formula(&d, "L.p < R.p");
        assert_eq!(winnow_ranks(&pref, &d).unwrap(), [0, 1, 2, 3]);
    }
}
