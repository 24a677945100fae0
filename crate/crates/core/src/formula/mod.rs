//! ERO formulas: equality constraints over uninterpreted constants and
//! order constraints over the rationals, kept in canonical DNF.

mod atom;
mod conjunct;
mod dnf;
mod parse;
mod schema;
mod value;

use std::fmt;
use std::sync::Arc;

pub use atom::{Atom, Built, Cmp, Term, Var, LEFT, RIGHT};
pub use conjunct::Conjunct;
pub use dnf::{set_size_cap, size_cap, Dnf, DEFAULT_SIZE_CAP};
pub use parse::var_name;
pub use schema::{Attribute, Domain, Schema, TupleValue};
pub use value::{format_rational, parse_rational, rational_between, Value};

use crate::error::FormulaError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantifier {
    Exists,
    Forall,
}

/// A formula over the schema's attributes with tuple variables `L` (0),
/// `R` (1) and, inside intermediate computations, `V2`, `V3`, ...
/// Single-variable formulas (sets of tuples) use `L` only.
#[derive(Clone, Debug)]
pub struct DnfFormula {
    schema: Arc<Schema>,
    dnf: Dnf,
}

impl PartialEq for DnfFormula {
    fn eq(&self, other: &Self) -> bool {
        self.dnf == other.dnf && self.schema == other.schema
    }
}

impl DnfFormula {
    pub fn parse(text: &str, schema: &Arc<Schema>) -> Result<DnfFormula, FormulaError> {
        Ok(DnfFormula { schema: schema.clone(), dnf: parse::parse(text, schema)? })
    }

    pub fn new(schema: &Arc<Schema>, dnf: Dnf) -> DnfFormula {
        DnfFormula { schema: schema.clone(), dnf }
    }

    pub fn falsity(schema: &Arc<Schema>) -> DnfFormula {
        DnfFormula::new(schema, Dnf::falsity())
    }

    pub fn truth(schema: &Arc<Schema>) -> DnfFormula {
        DnfFormula::new(schema, Dnf::truth())
    }

    /// `L = t` (or `var = t`) on every attribute.
    pub fn point(schema: &Arc<Schema>, var: Var, t: &TupleValue) -> DnfFormula {
        let atoms = (0..schema.len())
            .map(|a| Atom::build(a, Term::Var(var), Cmp::Eq, Term::Const(t.get(a).clone())))
            .collect::<Vec<_>>();
        let dnf = Conjunct::from_built(atoms).map(|c| Dnf::from_conjuncts([c])).unwrap_or_else(Dnf::falsity);
        DnfFormula::new(schema, dnf)
    }

    /// `L = a and R = b`.
    pub fn point_pair(schema: &Arc<Schema>, a: &TupleValue, b: &TupleValue) -> DnfFormula {
        DnfFormula::point(schema, LEFT, a)
            .and(&DnfFormula::point(schema, RIGHT, b))
            .expect("single conjunct")
    }

    pub fn schema(&self) -> &Arc<Schema> {
        &self.schema
    }

    pub fn dnf(&self) -> &Dnf {
        &self.dnf
    }

    fn wrap(&self, dnf: Dnf) -> DnfFormula {
        DnfFormula { schema: self.schema.clone(), dnf }
    }

    pub fn is_false(&self) -> bool {
        self.dnf.is_false()
    }

    pub fn size(&self) -> usize {
        self.dnf.size()
    }

    pub fn or(&self, other: &DnfFormula) -> DnfFormula {
        self.wrap(self.dnf.or(&other.dnf))
    }

    pub fn and(&self, other: &DnfFormula) -> Result<DnfFormula, FormulaError> {
        Ok(self.wrap(self.dnf.and(&other.dnf)?))
    }

    pub fn and_not(&self, other: &DnfFormula) -> Result<DnfFormula, FormulaError> {
        Ok(self.wrap(self.dnf.and_not(&other.dnf)?))
    }

    pub fn not(&self) -> Result<DnfFormula, FormulaError> {
        Ok(self.wrap(self.dnf.not()?))
    }

    /// Renames tuple variables, e.g. to instantiate `F(x, y)` as `F(u, x)`.
    pub fn rename(&self, map: &dyn Fn(Var) -> Var) -> DnfFormula {
        self.wrap(self.dnf.rename(map))
    }

    /// `F(a, b)` from a formula written over `L`, `R`.
    pub fn instantiate(&self, a: Var, b: Var) -> DnfFormula {
        self.rename(&|v| match v {
            LEFT => a,
            RIGHT => b,
            other => other,
        })
    }

    pub fn qe_eliminate(&self, var: Var, q: Quantifier) -> Result<DnfFormula, FormulaError> {
        match q {
            Quantifier::Exists => Ok(self.wrap(self.dnf.exists(var))),
            Quantifier::Forall => Ok(self.wrap(self.dnf.forall(var)?)),
        }
    }

    pub fn exists(&self, vars: &[Var]) -> DnfFormula {
        self.wrap(self.dnf.exists_all(vars))
    }

    /// `S(R)` for `Side::Left`, `E(R)` for `Side::Right`, as a formula over `L`.
    pub fn project_side(&self, side: Side) -> DnfFormula {
        match side {
            Side::Left => self.exists(&[RIGHT]),
            Side::Right => self.exists(&[LEFT]).rename(&|v| if v == RIGHT { LEFT } else { v }),
        }
    }

    pub fn eval_pair(&self, left: &TupleValue, right: &TupleValue) -> bool {
        self.dnf.eval(&|v, a| match v {
            LEFT => left.get(a).clone(),
            RIGHT => right.get(a).clone(),
            other => panic!("free variable {} in evaluated formula", var_name(other)),
        })
    }

    pub fn eval_single(&self, t: &TupleValue) -> bool {
        self.eval_pair(t, t)
    }

    pub fn eval_with(&self, env: &dyn Fn(Var, usize) -> Value) -> bool {
        self.dnf.eval(env)
    }

    pub fn satisfiable(&self) -> bool {
        self.dnf.satisfiable()
    }

    /// A satisfying `(L, R)` pair, if any. Attributes a variable does not
    /// constrain get an arbitrary value of the right domain.
    pub fn witness(&self) -> Option<(TupleValue, TupleValue)> {
        let schema = &self.schema;
        let w = self.dnf.witness(&|a| schema.domain(a) == Domain::Q)?;
        let tuple = |var: Var| {
            let values = (0..schema.len())
                .map(|a| match w.get(&(var, a)) {
                    Some(v) => v.clone(),
                    None => match schema.domain(a) {
                        Domain::Q => Value::int(0),
                        Domain::C => Value::sym("_any"),
                    },
                })
                .collect();
            TupleValue(values)
        };
        Some((tuple(LEFT), tuple(RIGHT)))
    }

    pub fn implies(&self, other: &DnfFormula) -> Result<bool, FormulaError> {
        self.dnf.implies(&other.dnf)
    }

    pub fn equivalent(&self, other: &DnfFormula) -> Result<bool, FormulaError> {
        self.dnf.equivalent(&other.dnf)
    }

    pub fn vars(&self) -> Vec<Var> {
        self.dnf.vars().into_iter().collect()
    }

    pub fn constants(&self) -> Vec<(usize, Value)> {
        self.dnf.constants().into_iter().collect()
    }
}

impl serde::Serialize for DnfFormula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for DnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&parse::print(&self.dnf, &self.schema))
    }
}
