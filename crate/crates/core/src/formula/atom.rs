use std::cmp::Ordering;

use super::value::Value;

/// Tuple variable index. `LEFT`/`RIGHT` are the two free variables of a
/// binary relation formula; higher indices are used for bound variables.
pub type Var = u32;

pub const LEFT: Var = 0;
pub const RIGHT: Var = 1;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    Const(Value),
}

impl Term {
    pub fn as_var(&self) -> Option<Var> {
        match self {
            Term::Var(v) => Some(*v),
            Term::Const(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cmp {
    Eq,
    Ne,
    Lt,
    Gt,
}

impl Cmp {
    pub fn flip(self) -> Cmp {
        match self {
            Cmp::Lt => Cmp::Gt,
            Cmp::Gt => Cmp::Lt,
            c => c,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Eq => "=",
            Cmp::Ne => "!=",
            Cmp::Lt => "<",
            Cmp::Gt => ">",
        }
    }

    pub fn holds(self, ord: Ordering) -> bool {
        match self {
            Cmp::Eq => ord == Ordering::Equal,
            Cmp::Ne => ord != Ordering::Equal,
            Cmp::Lt => ord == Ordering::Less,
            Cmp::Gt => ord == Ordering::Greater,
        }
    }
}

/// `lhs.attr cmp rhs`, where `rhs` is either the same attribute of another
/// tuple variable or a constant. Atoms never mix attributes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub attr: usize,
    pub lhs: Var,
    pub rhs: Term,
    pub cmp: Cmp,
}

/// Result of building an atom from two arbitrary terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Built {
    Atom(Atom),
    Bool(bool),
}

impl Atom {
    /// Orients the comparison so that the left side is a variable and, for
    /// variable pairs, the smaller variable. Constant/constant comparisons
    /// and trivial self-comparisons are folded to booleans.
    pub fn build(attr: usize, lhs: Term, cmp: Cmp, rhs: Term) -> Built {
        match (lhs, rhs) {
            (Term::Const(a), Term::Const(b)) => {
                let truth = match a.order(&b) {
                    Some(ord) => cmp.holds(ord),
                    None => match cmp {
                        Cmp::Eq => a == b,
                        Cmp::Ne => a != b,
                        // order on non-rationals never holds
                        _ => false,
                    },
                };
                Built::Bool(truth)
            }
            (Term::Const(c), Term::Var(v)) => {
                Built::Atom(Atom { attr, lhs: v, rhs: Term::Const(c), cmp: cmp.flip() })
            }
            (Term::Var(a), Term::Var(b)) => {
                if a == b {
                    return Built::Bool(matches!(cmp, Cmp::Eq));
                }
                if a < b {
                    Built::Atom(Atom { attr, lhs: a, rhs: Term::Var(b), cmp })
                } else {
                    Built::Atom(Atom { attr, lhs: b, rhs: Term::Var(a), cmp: cmp.flip() })
                }
            }
            (Term::Var(v), c @ Term::Const(_)) => Built::Atom(Atom { attr, lhs: v, rhs: c, cmp }),
        }
    }

    pub fn lhs_term(&self) -> Term {
        Term::Var(self.lhs)
    }

    pub fn mentions(&self, var: Var) -> bool {
        self.lhs == var || self.rhs == Term::Var(var)
    }

    /// Negation as a disjunction of atoms: `!(a<b)` is `a>b or a=b`.
    pub fn negate(&self) -> Vec<Atom> {
        let with = |cmp: Cmp| Atom { cmp, ..self.clone() };
        match self.cmp {
            Cmp::Eq => vec![with(Cmp::Ne)],
            Cmp::Ne => vec![with(Cmp::Eq)],
            Cmp::Lt => vec![with(Cmp::Gt), with(Cmp::Eq)],
            Cmp::Gt => vec![with(Cmp::Lt), with(Cmp::Eq)],
        }
    }

    /// Renames variables; may fold to a boolean when both sides coincide.
    pub fn rename(&self, map: &dyn Fn(Var) -> Var) -> Built {
        let rhs = match &self.rhs {
            Term::Var(v) => Term::Var(map(*v)),
            c => c.clone(),
        };
        Atom::build(self.attr, Term::Var(map(self.lhs)), self.cmp, rhs)
    }

    pub fn substitute(&self, var: Var, by: &Term) -> Built {
        let sub = |t: Term| if t == Term::Var(var) { by.clone() } else { t };
        Atom::build(self.attr, sub(Term::Var(self.lhs)), self.cmp, sub(self.rhs.clone()))
    }

    pub fn eval(&self, lhs: &Value, rhs: &Value) -> bool {
        match lhs.order(rhs) {
            Some(ord) => self.cmp.holds(ord),
            None => match self.cmp {
                Cmp::Eq => lhs == rhs,
                Cmp::Ne => lhs != rhs,
                _ => false,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_orients_and_folds() {
        let a = Atom::build(0, Term::Const(Value::int(3)), Cmp::Lt, Term::Var(1));
        assert_eq!(a, Built::Atom(Atom { attr: 0, lhs: 1, rhs: Term::Const(Value::int(3)), cmp: Cmp::Gt }));
        let b = Atom::build(0, Term::Var(1), Cmp::Lt, Term::Var(0));
        assert_eq!(b, Built::Atom(Atom { attr: 0, lhs: 0, rhs: Term::Var(1), cmp: Cmp::Gt }));
        assert_eq!(Atom::build(0, Term::Var(2), Cmp::Lt, Term::Var(2)), Built::Bool(false));
        assert_eq!(
            Atom::build(0, Term::Const(Value::int(1)), Cmp::Lt, Term::Const(Value::int(2))),
            Built::Bool(true)
        );
        assert_eq!(
            Atom::build(0, Term::Const(Value::sym("a")), Cmp::Ne, Term::Const(Value::sym("b"))),
            Built::Bool(true)
        );
    }

    #[test]
    fn negation_of_order_splits() {
        let a = Atom { attr: 0, lhs: 0, rhs: Term::Var(1), cmp: Cmp::Lt };
        let n = a.negate();
        assert_eq!(n.len(), 2);
        assert!(n.iter().any(|x| x.cmp == Cmp::Gt));
        assert!(n.iter().any(|x| x.cmp == Cmp::Eq));
    }
}
