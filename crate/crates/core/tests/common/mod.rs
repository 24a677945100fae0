#![allow(dead_code)]

use std::sync::Arc;

use prefcon_core::formula::Domain;
use prefcon_core::{DnfFormula, Edge, FiniteRelation, Schema};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn rel(pairs: &[(&str, &str)]) -> FiniteRelation {
    FiniteRelation::from_pairs(pairs)
}

pub fn node(i: usize) -> String {
    format!("n{i}")
}

/// Random SPO on at most `max_nodes` nodes with at most `max_edges` edges:
/// a random DAG under a shuffled topological order, transitively closed.
pub fn random_spo(rng: &mut impl Rng, max_nodes: usize, max_edges: usize) -> FiniteRelation {
    loop {
        let n = rng.gen_range(3.min(max_nodes)..=max_nodes);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let p: f64 = rng.gen_range(0.2..0.8);
        let mut r = FiniteRelation::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(p) {
                    r.insert(Edge::new(node(order[i]).as_str(), node(order[j]).as_str()));
                }
            }
        }
        let r = r.transitive_closure();
        if !r.is_empty() && r.len() <= max_edges {
            return r;
        }
    }
}

/// Each edge kept with probability `p`; never empty when `r` is not.
pub fn random_subset(rng: &mut impl Rng, r: &FiniteRelation, p: f64) -> FiniteRelation {
    let edges: Vec<&Edge> = r.edges().collect();
    let mut s: FiniteRelation = edges.iter().filter(|_| rng.gen_bool(p)).map(|e| (*e).clone()).collect();
    if s.is_empty() && !edges.is_empty() {
        s.insert(edges[rng.gen_range(0..edges.len())].clone());
    }
    s
}

pub fn schema(attrs: &[(&str, Domain)]) -> Arc<Schema> {
    Arc::new(Schema::of(attrs))
}

pub fn formula(text: &str, s: &Arc<Schema>) -> DnfFormula {
    DnfFormula::parse(text, s).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn equiv(a: &DnfFormula, b: &DnfFormula) -> bool {
    a.equivalent(b).unwrap()
}
