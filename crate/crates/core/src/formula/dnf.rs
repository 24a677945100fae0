//! Disjunctions of normalized conjunctions.

use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering};

use super::atom::{Atom, Var};
use super::conjunct::Conjunct;
use super::value::Value;
use crate::error::FormulaError;

pub const DEFAULT_SIZE_CAP: usize = 1_000_000;

static SIZE_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_SIZE_CAP);

/// Sets the process-wide atom budget for negation and conjunction.
pub fn set_size_cap(atoms: usize) {
    SIZE_CAP.store(atoms, Ordering::Relaxed);
}

pub fn size_cap() -> usize {
    SIZE_CAP.load(Ordering::Relaxed)
}

/// Canonical DNF: satisfiable disjuncts, sorted, without duplicates and
/// without disjuncts syntactically subsumed by another one. The empty
/// disjunction is FALSE.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dnf {
    disjuncts: Vec<Conjunct>,
}

impl Dnf {
    pub fn falsity() -> Dnf {
        Dnf { disjuncts: Vec::new() }
    }

    pub fn truth() -> Dnf {
        Dnf { disjuncts: vec![Conjunct::truth()] }
    }

    pub fn from_conjuncts(items: impl IntoIterator<Item = Conjunct>) -> Dnf {
        let mut disjuncts: Vec<Conjunct> = items.into_iter().collect();
        disjuncts.sort();
        disjuncts.dedup();
        if disjuncts.iter().any(Conjunct::is_true) {
            return Dnf::truth();
        }
        // drop disjuncts implied syntactically by a shorter one
        disjuncts.sort_by_key(|c| c.atoms().len());
        let mut kept: Vec<Conjunct> = Vec::with_capacity(disjuncts.len());
        for d in disjuncts {
            if !kept.iter().any(|k| k.subsumes(&d)) {
                kept.push(d);
            }
        }
        kept.sort();
        Dnf { disjuncts: kept }
    }

    pub fn atom(a: Atom) -> Dnf {
        match Conjunct::new(vec![a]) {
            Some(c) => Dnf::from_conjuncts([c]),
            None => Dnf::falsity(),
        }
    }

    pub fn disjuncts(&self) -> &[Conjunct] {
        &self.disjuncts
    }

    pub fn is_false(&self) -> bool {
        self.disjuncts.is_empty()
    }

    pub fn is_true(&self) -> bool {
        self.disjuncts.len() == 1 && self.disjuncts[0].is_true()
    }

    /// Total number of atoms.
    pub fn size(&self) -> usize {
        self.disjuncts.iter().map(|c| c.atoms().len().max(1)).sum()
    }

    pub fn or(&self, other: &Dnf) -> Dnf {
        Dnf::from_conjuncts(self.disjuncts.iter().chain(other.disjuncts.iter()).cloned())
    }

    pub fn and(&self, other: &Dnf) -> Result<Dnf, FormulaError> {
        let cap = size_cap();
        let mut out = Vec::new();
        let mut size = 0usize;
        for a in &self.disjuncts {
            for b in &other.disjuncts {
                if let Some(c) = a.and(b) {
                    size += c.atoms().len();
                    if size > cap {
                        return Err(FormulaError::SizeLimit { limit: cap });
                    }
                    out.push(c);
                }
            }
        }
        Ok(Dnf::from_conjuncts(out))
    }

    pub fn and_conjunct(&self, c: &Conjunct) -> Dnf {
        Dnf::from_conjuncts(self.disjuncts.iter().filter_map(|d| d.and(c)))
    }

    /// `self ∧ ¬other`, computed disjunct by disjunct: each disjunct of
    /// `self` is split against each disjunct of `other` it intersects.
    pub fn and_not(&self, other: &Dnf) -> Result<Dnf, FormulaError> {
        self.and_not_capped(other, size_cap())
    }

    pub fn and_not_capped(&self, other: &Dnf, cap: usize) -> Result<Dnf, FormulaError> {
        let mut out = Vec::new();
        for s in &self.disjuncts {
            let mut frontier = vec![s.clone()];
            for d in &other.disjuncts {
                let mut next = Vec::new();
                for t in frontier {
                    if t.and(d).is_none() {
                        next.push(t);
                        continue;
                    }
                    if t.implies(d) {
                        continue;
                    }
                    for a in d.atoms() {
                        for n in a.negate() {
                            if let Some(b) = t.and_atoms(std::slice::from_ref(&n)) {
                                next.push(b);
                            }
                        }
                    }
                }
                frontier = Dnf::from_conjuncts(next).disjuncts;
                let size: usize = frontier.iter().map(|c| c.atoms().len()).sum();
                if size > cap {
                    return Err(FormulaError::SizeLimit { limit: cap });
                }
                if frontier.is_empty() {
                    break;
                }
            }
            out.extend(frontier);
        }
        Ok(Dnf::from_conjuncts(out))
    }

    pub fn not(&self) -> Result<Dnf, FormulaError> {
        Dnf::truth().and_not(self)
    }

    pub fn exists(&self, var: Var) -> Dnf {
        Dnf::from_conjuncts(self.disjuncts.iter().filter_map(|c| c.eliminate(var)))
    }

    pub fn exists_all(&self, vars: &[Var]) -> Dnf {
        vars.iter().fold(self.clone(), |f, v| f.exists(*v))
    }

    pub fn forall(&self, var: Var) -> Result<Dnf, FormulaError> {
        self.not()?.exists(var).not()
    }

    pub fn rename(&self, map: &dyn Fn(Var) -> Var) -> Dnf {
        Dnf::from_conjuncts(self.disjuncts.iter().filter_map(|c| c.rename(map)))
    }

    pub fn eval(&self, env: &dyn Fn(Var, usize) -> Value) -> bool {
        self.disjuncts.iter().any(|c| c.eval(env))
    }

    pub fn satisfiable(&self) -> bool {
        !self.is_false()
    }

    pub fn witness(&self, ordered_attr: &dyn Fn(usize) -> bool) -> Option<HashMap<(Var, usize), Value>> {
        self.disjuncts.first().map(|c| c.witness(ordered_attr))
    }

    pub fn implies(&self, other: &Dnf) -> Result<bool, FormulaError> {
        if other.is_true() || self.is_false() {
            return Ok(true);
        }
        // cheap pass: every disjunct implied by one disjunct of `other`
        if self.disjuncts.iter().all(|s| other.disjuncts.iter().any(|o| s.implies(o))) {
            return Ok(true);
        }
        Ok(self.and_not(other)?.is_false())
    }

    pub fn equivalent(&self, other: &Dnf) -> Result<bool, FormulaError> {
        if self == other {
            return Ok(true);
        }
        Ok(self.implies(other)? && other.implies(self)?)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.disjuncts.iter().flat_map(|c| c.vars()).collect()
    }

    pub fn constants(&self) -> BTreeSet<(usize, Value)> {
        self.disjuncts.iter().flat_map(|c| c.constants()).collect()
    }
}
