//! Conjunctions of atoms over dense-order and equality constraints.
//!
//! Every attribute is an independent constraint system (atoms never mix
//! attributes), so normalization, satisfiability and elimination all work
//! one attribute group at a time.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::BigRational;

use super::atom::{Atom, Built, Cmp, Term, Var};
use super::value::{rational_between, Value};

/// A satisfiable, normalized conjunction. The empty conjunction is TRUE.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Conjunct {
    atoms: Vec<Atom>,
}

impl Conjunct {
    pub fn truth() -> Conjunct {
        Conjunct { atoms: Vec::new() }
    }

    /// Normalizes `atoms`; `None` when the conjunction is unsatisfiable.
    pub fn new(atoms: Vec<Atom>) -> Option<Conjunct> {
        let mut groups: BTreeMap<usize, Vec<Atom>> = BTreeMap::new();
        for a in atoms {
            groups.entry(a.attr).or_default().push(a);
        }
        let mut out = Vec::new();
        for (attr, group) in groups {
            out.extend(AttrSystem::build(attr, &group)?.canonical_atoms());
        }
        out.sort();
        out.dedup();
        Some(Conjunct { atoms: out })
    }

    /// Builds from terms that may fold to booleans.
    pub fn from_built(items: impl IntoIterator<Item = Built>) -> Option<Conjunct> {
        let mut atoms = Vec::new();
        for b in items {
            match b {
                Built::Bool(true) => {}
                Built::Bool(false) => return None,
                Built::Atom(a) => atoms.push(a),
            }
        }
        Conjunct::new(atoms)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_true(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn and(&self, other: &Conjunct) -> Option<Conjunct> {
        if other.atoms.iter().all(|a| self.atoms.binary_search(a).is_ok()) {
            return Some(self.clone());
        }
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        Conjunct::new(atoms)
    }

    pub fn and_atoms(&self, extra: &[Atom]) -> Option<Conjunct> {
        let mut atoms = self.atoms.clone();
        atoms.extend(extra.iter().cloned());
        Conjunct::new(atoms)
    }

    /// Syntactic subsumption: every atom of `self` occurs in `other`, so
    /// `other` implies `self`.
    pub fn subsumes(&self, other: &Conjunct) -> bool {
        self.atoms.len() <= other.atoms.len()
            && self.atoms.iter().all(|a| other.atoms.binary_search(a).is_ok())
    }

    /// Semantic implication `self => other`.
    pub fn implies(&self, other: &Conjunct) -> bool {
        if other.subsumes(self) {
            return true;
        }
        other
            .atoms
            .iter()
            .all(|a| a.negate().iter().all(|n| self.and_atoms(std::slice::from_ref(n)).is_none()))
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for a in &self.atoms {
            out.insert(a.lhs);
            if let Term::Var(v) = a.rhs {
                out.insert(v);
            }
        }
        out
    }

    pub fn constants(&self) -> BTreeSet<(usize, Value)> {
        self.atoms
            .iter()
            .filter_map(|a| match &a.rhs {
                Term::Const(c) => Some((a.attr, c.clone())),
                Term::Var(_) => None,
            })
            .collect()
    }

    pub fn rename(&self, map: &dyn Fn(Var) -> Var) -> Option<Conjunct> {
        Conjunct::from_built(self.atoms.iter().map(|a| a.rename(map)))
    }

    /// Eliminates `∃var` from this conjunction. The result is again a single
    /// conjunction: an equality partner is substituted, otherwise every
    /// lower bound is paired with every upper bound (density), and
    /// disequalities are dropped (an open interval, or an infinite domain,
    /// always has room for one more value).
    pub fn eliminate(&self, var: Var) -> Option<Conjunct> {
        let mut groups: BTreeMap<usize, Vec<&Atom>> = BTreeMap::new();
        let mut result: Vec<Built> = Vec::new();
        for a in &self.atoms {
            if a.mentions(var) {
                groups.entry(a.attr).or_default().push(a);
            } else {
                result.push(Built::Atom(a.clone()));
            }
        }
        for (attr, group) in groups {
            let partner = group.iter().find_map(|a| {
                if a.cmp != Cmp::Eq {
                    return None;
                }
                if a.lhs == var {
                    Some(a.rhs.clone())
                } else {
                    Some(Term::Var(a.lhs))
                }
            });
            if let Some(by) = partner {
                for a in &group {
                    result.push(a.substitute(var, &by));
                }
                continue;
            }
            let mut lower = Vec::new();
            let mut upper = Vec::new();
            for a in &group {
                // normalize to "var cmp other"
                let (other, cmp) = if a.lhs == var {
                    (a.rhs.clone(), a.cmp)
                } else {
                    (Term::Var(a.lhs), a.cmp.flip())
                };
                match cmp {
                    Cmp::Lt => upper.push(other),
                    Cmp::Gt => lower.push(other),
                    Cmp::Ne => {}
                    Cmp::Eq => unreachable!("equality handled above"),
                }
            }
            for l in &lower {
                for u in &upper {
                    result.push(Atom::build(attr, l.clone(), Cmp::Lt, u.clone()));
                }
            }
        }
        Conjunct::from_built(result)
    }

    /// Truth under an assignment of values to (variable, attribute) slots.
    pub fn eval(&self, env: &dyn Fn(Var, usize) -> Value) -> bool {
        self.atoms.iter().all(|a| {
            let l = env(a.lhs, a.attr);
            let r = match &a.rhs {
                Term::Var(v) => env(*v, a.attr),
                Term::Const(c) => c.clone(),
            };
            a.eval(&l, &r)
        })
    }

    /// A satisfying assignment: `var -> attr -> value` for every variable
    /// mentioned. Unmentioned attributes are left to the caller.
    pub fn witness(&self, ordered_attr: &dyn Fn(usize) -> bool) -> HashMap<(Var, usize), Value> {
        let mut groups: BTreeMap<usize, Vec<Atom>> = BTreeMap::new();
        for a in &self.atoms {
            groups.entry(a.attr).or_default().push(a.clone());
        }
        let mut out = HashMap::new();
        for (attr, group) in groups {
            let sys = AttrSystem::build(attr, &group).expect("conjunct is satisfiable");
            for (var, value) in sys.witness(ordered_attr(attr)) {
                out.insert((var, attr), value);
            }
        }
        out
    }
}

/// The constraint system of one attribute inside one conjunction, after
/// merging equalities into classes and closing the strict order.
struct AttrSystem {
    attr: usize,
    /// Sorted members of each class; constants (if any) sort last.
    classes: Vec<Vec<Term>>,
    /// `less[i][j]`: class i is strictly below class j (transitively closed).
    less: Vec<Vec<bool>>,
    /// Disequalities between classes not already implied by the order.
    ne: BTreeSet<(usize, usize)>,
}

impl AttrSystem {
    fn build(attr: usize, atoms: &[Atom]) -> Option<AttrSystem> {
        let mut terms: Vec<Term> = Vec::new();
        let mut index: HashMap<Term, usize> = HashMap::new();
        let mut intern = |t: Term, terms: &mut Vec<Term>| -> usize {
            *index.entry(t.clone()).or_insert_with(|| {
                terms.push(t);
                terms.len() - 1
            })
        };
        let mut pairs = Vec::with_capacity(atoms.len());
        for a in atoms {
            let l = intern(Term::Var(a.lhs), &mut terms);
            let r = intern(a.rhs.clone(), &mut terms);
            pairs.push((l, a.cmp, r));
        }
        let n = terms.len();
        let mut uf = UnionFind::new(n);
        for &(l, cmp, r) in &pairs {
            if cmp == Cmp::Eq {
                uf.union(l, r);
            }
        }
        let mut class_of_root: BTreeMap<usize, Vec<Term>> = BTreeMap::new();
        for (i, t) in terms.iter().enumerate() {
            class_of_root.entry(uf.find(i)).or_default().push(t.clone());
        }
        let mut classes: Vec<Vec<Term>> = class_of_root.into_values().collect();
        for c in &mut classes {
            c.sort();
            if c.iter().filter(|t| matches!(t, Term::Const(_))).count() > 1 {
                return None;
            }
        }
        classes.sort();
        let class_index: HashMap<&Term, usize> = classes
            .iter()
            .enumerate()
            .flat_map(|(ci, c)| c.iter().map(move |t| (t, ci)))
            .collect();
        let k = classes.len();
        let mut less = vec![vec![false; k]; k];
        let mut ne_raw = Vec::new();
        for &(l, cmp, r) in &pairs {
            let (cl, cr) = (class_index[&terms[l]], class_index[&terms[r]]);
            match cmp {
                Cmp::Eq => {}
                Cmp::Lt => less[cl][cr] = true,
                Cmp::Gt => less[cr][cl] = true,
                Cmp::Ne => {
                    if cl == cr {
                        return None;
                    }
                    ne_raw.push((cl.min(cr), cl.max(cr)));
                }
            }
        }
        // rational constants are ordered among themselves
        let consts: Vec<(usize, BigRational)> = classes
            .iter()
            .enumerate()
            .filter_map(|(ci, c)| match c.last() {
                Some(Term::Const(Value::Rat(r))) => Some((ci, r.clone())),
                _ => None,
            })
            .collect();
        for (i, a) in &consts {
            for (j, b) in &consts {
                if a < b {
                    less[*i][*j] = true;
                }
            }
        }
        for m in 0..k {
            let via = less[m].clone();
            for row in less.iter_mut() {
                if row[m] {
                    for (cell, &b) in row.iter_mut().zip(&via) {
                        *cell |= b;
                    }
                }
            }
        }
        if (0..k).any(|i| less[i][i]) {
            return None;
        }
        let is_const = |ci: usize| matches!(classes[ci].last(), Some(Term::Const(_)));
        let ne = ne_raw
            .into_iter()
            .filter(|&(a, b)| !(less[a][b] || less[b][a] || (is_const(a) && is_const(b))))
            .collect();
        Some(AttrSystem { attr, classes, less, ne })
    }

    fn is_const(&self, ci: usize) -> bool {
        matches!(self.classes[ci].last(), Some(Term::Const(_)))
    }

    /// Constant if the class has one, else its smallest variable.
    fn rep(&self, ci: usize) -> Term {
        let c = &self.classes[ci];
        if self.is_const(ci) {
            c.last().cloned().expect("non-empty class")
        } else {
            c[0].clone()
        }
    }

    fn canonical_atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        let push = |out: &mut Vec<Atom>, b: Built| {
            if let Built::Atom(a) = b {
                out.push(a)
            }
        };
        for ci in 0..self.classes.len() {
            let rep = self.rep(ci);
            for t in &self.classes[ci] {
                if *t != rep {
                    push(&mut out, Atom::build(self.attr, rep.clone(), Cmp::Eq, t.clone()));
                }
            }
        }
        let k = self.classes.len();
        for i in 0..k {
            for j in 0..k {
                if !self.less[i][j] || (self.is_const(i) && self.is_const(j)) {
                    continue;
                }
                let implied = (0..k).any(|m| self.less[i][m] && self.less[m][j]);
                if !implied {
                    push(&mut out, Atom::build(self.attr, self.rep(i), Cmp::Lt, self.rep(j)));
                }
            }
        }
        for &(a, b) in &self.ne {
            push(&mut out, Atom::build(self.attr, self.rep(a), Cmp::Ne, self.rep(b)));
        }
        out
    }

    fn witness(&self, ordered: bool) -> Vec<(Var, Value)> {
        let k = self.classes.len();
        let mut value: Vec<Option<Value>> = (0..k)
            .map(|ci| match self.classes[ci].last() {
                Some(Term::Const(c)) => Some(c.clone()),
                _ => None,
            })
            .collect();
        if ordered {
            let mut order: Vec<usize> = (0..k).collect();
            order.sort_by_key(|&ci| (0..k).filter(|&u| self.less[u][ci]).count());
            let mut used: Vec<BigRational> =
                value.iter().flatten().filter_map(|v| v.as_rat().cloned()).collect();
            for ci in order {
                if value[ci].is_some() {
                    continue;
                }
                let lo = (0..k)
                    .filter(|&u| self.less[u][ci])
                    .filter_map(|u| value[u].as_ref().and_then(|v| v.as_rat().cloned()))
                    .max();
                let hi = (0..k)
                    .filter(|&w| self.less[ci][w] && self.is_const(w))
                    .filter_map(|w| value[w].as_ref().and_then(|v| v.as_rat().cloned()))
                    .min();
                let mut cand = rational_between(lo.as_ref(), hi.as_ref());
                while used.contains(&cand) {
                    cand = rational_between(lo.as_ref(), Some(&cand));
                }
                used.push(cand.clone());
                value[ci] = Some(Value::Rat(cand));
            }
        } else {
            let taken: BTreeSet<String> = value
                .iter()
                .flatten()
                .filter_map(|v| match v {
                    Value::Sym(s) => Some(s.to_string()),
                    _ => None,
                })
                .collect();
            let mut counter = 0usize;
            for slot in value.iter_mut() {
                if slot.is_none() {
                    let fresh = loop {
                        counter += 1;
                        let name = format!("_fresh{counter}");
                        if !taken.contains(&name) {
                            break name;
                        }
                    };
                    *slot = Some(Value::sym(&fresh));
                }
            }
        }
        let mut out = Vec::new();
        for (ci, class) in self.classes.iter().enumerate() {
            for t in class {
                if let Term::Var(v) = t {
                    out.push((*v, value[ci].clone().expect("assigned")));
                }
            }
        }
        out
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
