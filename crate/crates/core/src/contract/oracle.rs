//! Exhaustive search for minimal full contractors on small relations.

use rayon::prelude::*;

use super::check_inputs;
use crate::error::ContractError;
use crate::relation::{Dense, Edge, FiniteRelation};

pub const DEFAULT_ORACLE_BOUND: usize = 18;

/// Every inclusion-minimal `P` with `con ⊆ P ⊆ pref` such that `pref - P`
/// is transitive, in canonical order. `bound` caps `|pref|`.
pub fn enumerate_minimal_contractors(
    pref: &FiniteRelation,
    con: &FiniteRelation,
    bound: usize,
) -> Result<Vec<FiniteRelation>, ContractError> {
    check_inputs(pref, con)?;
    let d = Dense::new(pref);
    if pref.len() > bound || pref.len() > 30 || d.len() > 64 {
        return Err(ContractError::OracleTooLarge { edges: pref.len(), bound: bound.min(30) });
    }
    let n = d.len();
    let edges: Vec<(usize, usize)> = pref.edges().map(|e| (d.index[&e.from], d.index[&e.to])).collect();
    let mut base = vec![0u64; n];
    for &(x, y) in &edges {
        base[x] |= 1 << y;
    }
    for e in con.edges() {
        base[d.index[&e.from]] &= !(1u64 << d.index[&e.to]);
    }
    let free: Vec<(usize, usize)> =
        pref.edges().filter(|e| !con.contains(e)).map(|e| (d.index[&e.from], d.index[&e.to])).collect();
    let m = free.len();

    let is_full = |mask: u32| {
        let mut adj = base.clone();
        for (i, &(x, y)) in free.iter().enumerate() {
            if mask >> i & 1 == 1 {
                adj[x] &= !(1u64 << y);
            }
        }
        (0..n).all(|x| {
            let mut rest = adj[x];
            while rest != 0 {
                let z = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if adj[z] & !adj[x] != 0 {
                    return false;
                }
            }
            true
        })
    };
    let mut full: Vec<u32> = (0..1u32 << m).into_par_iter().filter(|&mask| is_full(mask)).collect();
    full.sort_by_key(|mask| (mask.count_ones(), *mask));
    let mut minimal: Vec<u32> = Vec::new();
    for f in full {
        if !minimal.iter().any(|&mm| f | mm == f) {
            minimal.push(f);
        }
    }
    let mut out: Vec<FiniteRelation> = minimal
        .into_iter()
        .map(|mask| {
            let mut p = con.clone();
            for (i, &(x, y)) in free.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    p.insert(Edge::new(d.nodes[x].clone(), d.nodes[y].clone()));
                }
            }
            p
        })
        .collect();
    out.sort();
    Ok(out)
}
