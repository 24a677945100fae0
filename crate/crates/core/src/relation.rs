//! Finite binary relations over opaque node ids.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::ContractError;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(Arc<str>);

impl NodeId {
    pub fn new(s: &str) -> NodeId {
        NodeId(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId::new(s)
    }
}

/// Serialized as a `[from, to]` pair.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(NodeId, NodeId)", into = "(NodeId, NodeId)")]
pub struct Edge {
    pub from: NodeId,
    pub to: NodeId,
}

impl Edge {
    pub fn new(from: impl Into<NodeId>, to: impl Into<NodeId>) -> Edge {
        Edge { from: from.into(), to: to.into() }
    }
}

impl From<(NodeId, NodeId)> for Edge {
    fn from((from, to): (NodeId, NodeId)) -> Self {
        Edge { from, to }
    }
}

impl From<Edge> for (NodeId, NodeId) {
    fn from(e: Edge) -> Self {
        (e.from, e.to)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.from, self.to)
    }
}

/// Serialized as `{"edges": [[from, to], ...]}` in canonical order.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiniteRelation {
    edges: BTreeSet<Edge>,
}

impl fmt::Debug for FiniteRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.edges.iter()).finish()
    }
}

impl FromIterator<Edge> for FiniteRelation {
    fn from_iter<T: IntoIterator<Item = Edge>>(iter: T) -> Self {
        FiniteRelation { edges: iter.into_iter().collect() }
    }
}

impl<'a> FromIterator<&'a Edge> for FiniteRelation {
    fn from_iter<T: IntoIterator<Item = &'a Edge>>(iter: T) -> Self {
        FiniteRelation { edges: iter.into_iter().cloned().collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpoWitness {
    Loop(NodeId),
    /// `x -> z -> y` present, `x -> y` missing.
    Gap(NodeId, NodeId, NodeId),
}

impl SpoWitness {
    pub fn edges(&self) -> Vec<Edge> {
        match self {
            SpoWitness::Loop(x) => vec![Edge::new(x.clone(), x.clone())],
            SpoWitness::Gap(x, z, y) => vec![Edge::new(x.clone(), z.clone()), Edge::new(z.clone(), y.clone())],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpoReport {
    pub is_irreflexive: bool,
    pub is_transitive: bool,
    pub witness: Option<SpoWitness>,
}

impl SpoReport {
    pub fn is_spo(&self) -> bool {
        self.is_irreflexive && self.is_transitive
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BoundarySets {
    pub starts: BTreeSet<NodeId>,
    pub ends: BTreeSet<NodeId>,
    pub middles: BTreeSet<NodeId>,
}

impl FiniteRelation {
    pub fn new() -> FiniteRelation {
        FiniteRelation::default()
    }

    pub fn from_pairs(pairs: &[(&str, &str)]) -> FiniteRelation {
        pairs.iter().map(|(a, b)| Edge::new(*a, *b)).collect()
    }

    /// Strict total order `nodes[0] > nodes[1] > ...` (all forward pairs).
    pub fn total_order(nodes: &[&str]) -> FiniteRelation {
        let mut r = FiniteRelation::new();
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                r.insert(Edge::new(nodes[i], nodes[j]));
            }
        }
        r
    }

    pub fn insert(&mut self, e: Edge) -> bool {
        self.edges.insert(e)
    }

    pub fn remove(&mut self, e: &Edge) -> bool {
        self.edges.remove(e)
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    pub fn contains_pair(&self, from: &str, to: &str) -> bool {
        self.edges.contains(&Edge::new(from, to))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edges in canonical (from, to) order.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter()
    }

    pub fn edge_set(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn nodes(&self) -> BTreeSet<NodeId> {
        self.edges.iter().flat_map(|e| [e.from.clone(), e.to.clone()]).collect()
    }

    pub fn union(&self, other: &FiniteRelation) -> FiniteRelation {
        self.edges.union(&other.edges).collect()
    }

    pub fn difference(&self, other: &FiniteRelation) -> FiniteRelation {
        self.edges.difference(&other.edges).collect()
    }

    pub fn intersection(&self, other: &FiniteRelation) -> FiniteRelation {
        self.edges.intersection(&other.edges).collect()
    }

    pub fn is_subset(&self, other: &FiniteRelation) -> bool {
        self.edges.is_subset(&other.edges)
    }

    pub fn successors<'a>(&'a self, x: &'a NodeId) -> impl Iterator<Item = &'a NodeId> + 'a {
        let lo = Edge { from: x.clone(), to: NodeId::new("") };
        self.edges.range(lo..).take_while(move |e| &e.from == x).map(|e| &e.to)
    }

    pub fn spo_check(&self) -> SpoReport {
        if let Some(e) = self.edges.iter().find(|e| e.from == e.to) {
            return SpoReport {
                is_irreflexive: false,
                is_transitive: self.find_gap().is_none(),
                witness: Some(SpoWitness::Loop(e.from.clone())),
            };
        }
        let gap = self.find_gap();
        SpoReport { is_irreflexive: true, is_transitive: gap.is_none(), witness: gap }
    }

    fn find_gap(&self) -> Option<SpoWitness> {
        for e in &self.edges {
            for y in self.successors(&e.to) {
                if !self.edges.contains(&Edge { from: e.from.clone(), to: y.clone() }) {
                    return Some(SpoWitness::Gap(e.from.clone(), e.to.clone(), y.clone()));
                }
            }
        }
        None
    }

    /// Fails with `NotSpo` unless the relation is a strict partial order.
    pub fn require_spo(&self) -> Result<(), ContractError> {
        let rep = self.spo_check();
        match rep.witness {
            Some(w) => Err(ContractError::NotSpo { witness: w.edges() }),
            None => Ok(()),
        }
    }

    pub fn transitive_closure(&self) -> FiniteRelation {
        let d = Dense::new(self);
        let mut m = d.matrix(self);
        m.close();
        d.relation(&m)
    }

    /// True iff `self - removed` has a path of length >= 1 from `from` to `to`.
    pub fn has_path_avoiding(&self, removed: &FiniteRelation, from: &NodeId, to: &NodeId) -> bool {
        self.path_avoiding(removed, from, to).is_some()
    }

    /// A shortest path in `self - removed` from `from` to `to`, as edges.
    pub fn path_avoiding(&self, removed: &FiniteRelation, from: &NodeId, to: &NodeId) -> Option<Vec<Edge>> {
        let mut parent: HashMap<&NodeId, &NodeId> = HashMap::new();
        let mut queue: VecDeque<&NodeId> = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for y in self.successors(x) {
                if removed.contains(&Edge { from: x.clone(), to: y.clone() }) {
                    continue;
                }
                if y == to {
                    let mut path = vec![Edge::new(x.clone(), y.clone())];
                    let mut cur = x;
                    while cur != from {
                        let p = parent[cur];
                        path.push(Edge::new(p.clone(), cur.clone()));
                        cur = p;
                    }
                    path.reverse();
                    return Some(path);
                }
                if y != from && !parent.contains_key(y) {
                    parent.insert(y, x);
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// The outer edge set of `seed` in `contractor`: the least set
    /// containing `seed` and closed under "shares one endpoint with a
    /// member and is completed into a two-edge path by a kept edge".
    pub fn outer_edge_set(&self, contractor: &FiniteRelation, seed: &Edge) -> Result<FiniteRelation, ContractError> {
        if !contractor.contains(seed) {
            return Err(ContractError::SeedNotInContractor);
        }
        let kept = self.difference(contractor);
        let mut phi = FiniteRelation::new();
        phi.insert(seed.clone());
        let mut layer = vec![seed.clone()];
        while !layer.is_empty() {
            let mut next = Vec::new();
            for e in &layer {
                for c in contractor.edges() {
                    if phi.contains(c) {
                        continue;
                    }
                    let same_start = c.from == e.from && kept.contains(&Edge::new(e.to.clone(), c.to.clone()));
                    let same_end = c.to == e.to && kept.contains(&Edge::new(c.from.clone(), e.from.clone()));
                    if same_start || same_end {
                        next.push(c.clone());
                    }
                }
            }
            layer = next.into_iter().filter(|c| phi.insert(c.clone())).collect();
        }
        Ok(phi)
    }

    /// Start and end nodes of `self`, and the nodes strictly inside a
    /// `self`-detour in `pref` (`x > y > z` with `xz` in `self`).
    pub fn boundary_sets(&self, pref: &FiniteRelation) -> BoundarySets {
        let mut b = BoundarySets::default();
        for e in &self.edges {
            b.starts.insert(e.from.clone());
            b.ends.insert(e.to.clone());
            for y in pref.successors(&e.from) {
                if pref.contains(&Edge::new(y.clone(), e.to.clone())) {
                    b.middles.insert(y.clone());
                }
            }
        }
        b
    }

    /// `{from, to}` pairs in canonical order.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        self.edges.iter().map(|e| (e.from.to_string(), e.to.to_string())).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("edges serialize")
    }

    /// Reversed relation, for predecessor lookups.
    pub fn inverse(&self) -> FiniteRelation {
        self.edges.iter().map(|e| Edge::new(e.to.clone(), e.from.clone())).collect()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            out.push_str(e.from.as_str());
            out.push('\t');
            out.push_str(e.to.as_str());
            out.push('\n');
        }
        out
    }

    /// Parses the tab-separated edge list or the JSON `{"edges": [...]}`
    /// form. Duplicate edges are dropped with a single warning.
    pub fn parse(text: &str) -> Result<FiniteRelation, String> {
        let trimmed = text.trim_start();
        let pairs: Vec<(String, String)> = if trimmed.starts_with('{') {
            #[derive(Deserialize)]
            struct EdgeFile {
                edges: Vec<(String, String)>,
            }
            serde_json::from_str::<EdgeFile>(trimmed).map_err(|e| e.to_string())?.edges
        } else {
            let mut out = Vec::new();
            for (no, line) in text.lines().enumerate() {
                let line = line.trim_end_matches('\r');
                if line.trim().is_empty() || line.starts_with('#') {
                    continue;
                }
                match line.split_once('\t') {
                    Some((a, b)) if !a.is_empty() && !b.is_empty() && !b.contains('\t') => {
                        out.push((a.to_string(), b.to_string()))
                    }
                    _ => return Err(format!("line {}: expected `from<TAB>to`", no + 1)),
                }
            }
            out
        };
        let mut rel = FiniteRelation::new();
        let mut dups = 0usize;
        for (a, b) in &pairs {
            if a.is_empty() || b.is_empty() {
                return Err("node ids must be non-empty".into());
            }
            if !rel.insert(Edge::new(a.as_str(), b.as_str())) {
                dups += 1;
            }
        }
        if dups > 0 {
            tracing::warn!(duplicates = dups, "duplicate edges ignored");
        }
        Ok(rel)
    }
}

/// Dense integer indexing of a relation's nodes for bit-matrix algorithms.
pub(crate) struct Dense {
    pub nodes: Vec<NodeId>,
    pub index: HashMap<NodeId, usize>,
}

impl Dense {
    pub fn new(r: &FiniteRelation) -> Dense {
        Dense::over(r.nodes())
    }

    pub fn over(nodes: impl IntoIterator<Item = NodeId>) -> Dense {
        let nodes: Vec<NodeId> = nodes.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let index = nodes.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        Dense { nodes, index }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn matrix(&self, r: &FiniteRelation) -> BitMatrix {
        let mut m = BitMatrix::new(self.len());
        for e in r.edges() {
            m.set(self.index[&e.from], self.index[&e.to]);
        }
        m
    }

    pub fn relation(&self, m: &BitMatrix) -> FiniteRelation {
        let mut r = FiniteRelation::new();
        for i in 0..self.len() {
            for j in m.row_iter(i) {
                r.insert(Edge::new(self.nodes[i].clone(), self.nodes[j].clone()));
            }
        }
        r
    }
}

#[derive(Clone, PartialEq, Eq)]
pub(crate) struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> BitMatrix {
        let words = n.div_ceil(64).max(1);
        BitMatrix { n, words, bits: vec![0; n * words] }
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    pub fn row_iter(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.get(i, j))
    }

    /// Warshall's algorithm on bit rows.
    pub fn close(&mut self) {
        let w = self.words;
        for k in 0..self.n {
            let row_k: Vec<u64> = self.bits[k * w..(k + 1) * w].to_vec();
            for i in 0..self.n {
                if self.get(i, k) {
                    for (dst, src) in self.bits[i * w..(i + 1) * w].iter_mut().zip(&row_k) {
                        *dst |= src;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> NodeId {
        NodeId::new(s)
    }

    #[test]
    fn spo_examples() {
        let r = FiniteRelation::total_order(&["x1", "x2", "x3", "x4"]);
        assert_eq!(r.len(), 6);
        assert!(r.spo_check().is_spo());
        let r = FiniteRelation::from_pairs(&[("t5", "t6"), ("t6", "t7")]);
        let rep = r.spo_check();
        assert!(!rep.is_transitive);
        assert_eq!(rep.witness, Some(SpoWitness::Gap(n("t5"), n("t6"), n("t7"))));
        assert!(FiniteRelation::new().spo_check().is_spo());
        let r = FiniteRelation::from_pairs(&[("a", "a")]);
        assert!(!r.spo_check().is_irreflexive);
    }

    #[test]
    fn closure_examples() {
        let r = FiniteRelation::from_pairs(&[("x1", "x2"), ("x2", "x3")]);
        assert_eq!(r.transitive_closure(), FiniteRelation::from_pairs(&[("x1", "x2"), ("x2", "x3"), ("x1", "x3")]));
        let p = FiniteRelation::from_pairs(&[("x1", "x3"), ("x2", "x3"), ("x4", "x5")]);
        assert_eq!(p.transitive_closure(), p);
        let chain = FiniteRelation::from_pairs(&[("x1", "x2"), ("x2", "x3"), ("x3", "x4")]);
        assert_eq!(chain.transitive_closure(), FiniteRelation::total_order(&["x1", "x2", "x3", "x4"]));
    }

    #[test]
    fn paths_avoiding() {
        let r = FiniteRelation::total_order(&["x1", "x2", "x3", "x4"]);
        let removed = FiniteRelation::from_pairs(&[("x1", "x4")]);
        assert!(r.has_path_avoiding(&removed, &n("x1"), &n("x4")));
        let removed = FiniteRelation::from_pairs(&[("x1", "x2"), ("x1", "x3"), ("x1", "x4")]);
        assert!(!r.has_path_avoiding(&removed, &n("x1"), &n("x4")));
        assert!(!r.has_path_avoiding(&FiniteRelation::new(), &n("x1"), &n("x1")));
    }

    #[test]
    fn outer_edge_set_of_chain() {
        // solid: ux, uy, yv, yz; dashed (contractor): xy, xz, xv, uv, uz, vz
        let pref = FiniteRelation::from_pairs(&[
            ("u", "x"),
            ("u", "y"),
            ("y", "v"),
            ("y", "z"),
            ("x", "y"),
            ("x", "z"),
            ("x", "v"),
            ("u", "v"),
            ("u", "z"),
            ("v", "z"),
        ]);
        let contractor =
            FiniteRelation::from_pairs(&[("x", "y"), ("x", "z"), ("x", "v"), ("u", "v"), ("u", "z"), ("v", "z")]);
        let phi = pref.outer_edge_set(&contractor, &Edge::new("x", "y")).unwrap();
        assert_eq!(phi, FiniteRelation::from_pairs(&[("x", "y"), ("x", "v"), ("x", "z"), ("u", "v"), ("u", "z")]));
        assert!(pref.outer_edge_set(&contractor, &Edge::new("u", "x")).is_err());
        let two = FiniteRelation::from_pairs(&[("a", "b")]);
        assert_eq!(two.outer_edge_set(&two, &Edge::new("a", "b")).unwrap(), two);
    }

    #[test]
    fn boundary_examples() {
        let pref = FiniteRelation::total_order(&["x1", "x2", "x3", "x4", "x5"]);
        let con = FiniteRelation::from_pairs(&[("x1", "x4"), ("x2", "x5")]);
        let b = con.boundary_sets(&pref);
        let set = |xs: &[&str]| xs.iter().map(|s| n(s)).collect::<BTreeSet<_>>();
        assert_eq!(b.starts, set(&["x1", "x2"]));
        assert_eq!(b.ends, set(&["x4", "x5"]));
        assert_eq!(b.middles, set(&["x2", "x3", "x4"]));
        let ab = FiniteRelation::from_pairs(&[("a", "b")]);
        let b = ab.boundary_sets(&ab);
        assert!(b.middles.is_empty());
        assert_eq!(FiniteRelation::new().boundary_sets(&pref), BoundarySets::default());
    }

    #[test]
    fn edge_list_io() {
        let r = FiniteRelation::parse("# c\na\tb\nb\tc\na\tb\n").unwrap();
        assert_eq!(r.len(), 2);
        let j = FiniteRelation::parse(&r.to_json().to_string()).unwrap();
        assert_eq!(j, r);
        assert_eq!(FiniteRelation::parse(&r.to_tsv()).unwrap(), r);
        assert!(FiniteRelation::parse("a b\n").is_err());
    }
}
