//! Concrete syntax for preference formulas.
//!
//! ```text
//! formula := and_expr ("or" and_expr)*
//! and_expr := unary ("and" unary)*
//! unary := "not" unary | "(" formula ")" | "true" | "false" | atom
//! atom := ref cmp (ref | literal)
//! ref := ("L" | "R" | "V" digits) "." ident
//! cmp := "=" | "!=" | "<" | ">" | "<=" | ">="
//! literal := rational | quoted string
//! ```

use std::fmt::Write as _;

use super::atom::{Atom, Built, Cmp, Term, Var, LEFT, RIGHT};
use super::conjunct::Conjunct;
use super::dnf::Dnf;
use super::schema::{Domain, Schema};
use super::value::{parse_rational, Value};
use crate::error::FormulaError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Str(String),
    Dot,
    LParen,
    RParen,
    Cmp(&'static str),
}

fn syntax(pos: usize, msg: impl Into<String>) -> FormulaError {
    FormulaError::Syntax { pos, msg: msg.into() }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, FormulaError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let peek = chars.get(i + 1).map(|&(_, c)| c);
        match c {
            '(' => {
                out.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::RParen));
                i += 1;
            }
            '.' if !peek.is_some_and(|d| d.is_ascii_digit()) => {
                out.push((pos, Tok::Dot));
                i += 1;
            }
            '=' => {
                out.push((pos, Tok::Cmp("=")));
                i += 1;
            }
            '!' if peek == Some('=') => {
                out.push((pos, Tok::Cmp("!=")));
                i += 2;
            }
            '<' | '>' => {
                let op = match (c, peek) {
                    ('<', Some('=')) => "<=",
                    ('>', Some('=')) => ">=",
                    ('<', _) => "<",
                    _ => ">",
                };
                i += op.len();
                out.push((pos, Tok::Cmp(op)));
            }
            '"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err(syntax(pos, "unterminated string")),
                        Some((_, '"')) => {
                            i += 1;
                            break;
                        }
                        Some((_, '\\')) => match chars.get(i + 1) {
                            Some((_, e)) => {
                                s.push(*e);
                                i += 2;
                            }
                            None => return Err(syntax(pos, "unterminated string")),
                        },
                        Some((_, ch)) => {
                            s.push(*ch);
                            i += 1;
                        }
                    }
                }
                out.push((pos, Tok::Str(s)));
            }
            c if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => {
                let start = i;
                i += 1;
                while let Some(&(_, d)) = chars.get(i) {
                    if d.is_ascii_digit() || d == '.' || d == '/' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                out.push((pos, Tok::Number(s)));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while let Some(&(_, d)) = chars.get(i) {
                    if d.is_alphanumeric() || d == '_' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                out.push((pos, Tok::Ident(s)));
            }
            other => return Err(syntax(pos, format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

enum Ast {
    Bool(bool),
    Atom { attr: usize, lhs: Var, cmp: &'static str, rhs: Term },
    Not(Box<Ast>),
    And(Vec<Ast>),
    Or(Vec<Ast>),
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    schema: &'a Schema,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn formula(&mut self) -> Result<Ast, FormulaError> {
        let mut items = vec![self.and_expr()?];
        while self.keyword("or") {
            self.at += 1;
            items.push(self.and_expr()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Ast::Or(items) })
    }

    fn and_expr(&mut self) -> Result<Ast, FormulaError> {
        let mut items = vec![self.unary()?];
        while self.keyword("and") {
            self.at += 1;
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Ast::And(items) })
    }

    fn unary(&mut self) -> Result<Ast, FormulaError> {
        if self.keyword("not") {
            self.at += 1;
            return Ok(Ast::Not(Box::new(self.unary()?)));
        }
        if self.keyword("true") {
            self.at += 1;
            return Ok(Ast::Bool(true));
        }
        if self.keyword("false") {
            self.at += 1;
            return Ok(Ast::Bool(false));
        }
        if self.peek() == Some(&Tok::LParen) {
            self.at += 1;
            let f = self.formula()?;
            if self.peek() != Some(&Tok::RParen) {
                return Err(syntax(self.pos(), "expected ')'"));
            }
            self.at += 1;
            return Ok(f);
        }
        self.atom()
    }

    fn reference(&mut self) -> Result<(Var, usize), FormulaError> {
        let pos = self.pos();
        let var = match self.next() {
            Some(Tok::Ident(s)) => match s.as_str() {
                "L" => LEFT,
                "R" => RIGHT,
                v if v.len() > 1 && v.starts_with('V') && v[1..].chars().all(|c| c.is_ascii_digit()) => {
                    v[1..].parse::<Var>().map_err(|_| syntax(pos, "variable index out of range"))?
                }
                other => return Err(syntax(pos, format!("expected L, R or V<n>, found {other:?}"))),
            },
            _ => return Err(syntax(pos, "expected a tuple reference")),
        };
        if self.next() != Some(Tok::Dot) {
            return Err(syntax(self.pos().saturating_sub(1), "expected '.'"));
        }
        let pos = self.pos();
        match self.next() {
            Some(Tok::Ident(name)) => match self.schema.index_of(&name) {
                Some(idx) => Ok((var, idx)),
                None => Err(FormulaError::Type(format!("unknown attribute {name:?} at offset {pos}"))),
            },
            _ => Err(syntax(pos, "expected an attribute name")),
        }
    }

    fn atom(&mut self) -> Result<Ast, FormulaError> {
        let (lhs, attr) = self.reference()?;
        let pos = self.pos();
        let cmp = match self.next() {
            Some(Tok::Cmp(c)) => c,
            _ => return Err(syntax(pos, "expected a comparison operator")),
        };
        let domain = self.schema.domain(attr);
        if domain == Domain::C && !matches!(cmp, "=" | "!=") {
            return Err(FormulaError::Type(format!(
                "order comparison on unordered attribute {:?} at offset {pos}",
                self.schema.name(attr)
            )));
        }
        let rpos = self.pos();
        let rhs = match self.peek() {
            Some(Tok::Ident(_)) => {
                let (v, rattr) = self.reference()?;
                if rattr != attr {
                    return Err(FormulaError::Type(format!(
                        "cross-attribute comparison {} vs {} at offset {rpos}",
                        self.schema.name(attr),
                        self.schema.name(rattr)
                    )));
                }
                Term::Var(v)
            }
            Some(Tok::Number(n)) => {
                let n = n.clone();
                self.at += 1;
                if domain != Domain::Q {
                    return Err(FormulaError::Type(format!(
                        "number compared with unordered attribute {:?} at offset {rpos}",
                        self.schema.name(attr)
                    )));
                }
                Term::Const(Value::Rat(parse_rational(&n)?))
            }
            Some(Tok::Str(s)) => {
                let s = s.clone();
                self.at += 1;
                if domain != Domain::C {
                    return Err(FormulaError::Type(format!(
                        "string compared with rational attribute {:?} at offset {rpos}",
                        self.schema.name(attr)
                    )));
                }
                Term::Const(Value::sym(&s))
            }
            _ => return Err(syntax(rpos, "expected a tuple reference or literal")),
        };
        Ok(Ast::Atom { attr, lhs, cmp, rhs })
    }
}

fn atom_dnf(attr: usize, lhs: Var, cmp: &str, rhs: &Term, positive: bool) -> Dnf {
    let cmps: &[Cmp] = match (cmp, positive) {
        ("=", true) | ("!=", false) => &[Cmp::Eq],
        ("!=", true) | ("=", false) => &[Cmp::Ne],
        ("<", true) | (">=", false) => &[Cmp::Lt],
        (">", true) | ("<=", false) => &[Cmp::Gt],
        ("<=", true) | (">", false) => &[Cmp::Lt, Cmp::Eq],
        (">=", true) | ("<", false) => &[Cmp::Gt, Cmp::Eq],
        _ => unreachable!("tokenizer yields only known operators"),
    };
    let mut out = Dnf::falsity();
    for &c in cmps {
        match Atom::build(attr, Term::Var(lhs), c, rhs.clone()) {
            Built::Bool(true) => return Dnf::truth(),
            Built::Bool(false) => {}
            Built::Atom(a) => out = out.or(&Dnf::atom(a)),
        }
    }
    out
}

fn to_dnf(ast: &Ast, positive: bool) -> Result<Dnf, FormulaError> {
    match ast {
        Ast::Bool(b) => Ok(if *b == positive { Dnf::truth() } else { Dnf::falsity() }),
        Ast::Atom { attr, lhs, cmp, rhs } => Ok(atom_dnf(*attr, *lhs, cmp, rhs, positive)),
        Ast::Not(inner) => to_dnf(inner, !positive),
        Ast::And(items) | Ast::Or(items) => {
            let conj = matches!(ast, Ast::And(_)) == positive;
            let mut acc = if conj { Dnf::truth() } else { Dnf::falsity() };
            for it in items {
                let d = to_dnf(it, positive)?;
                acc = if conj { acc.and(&d)? } else { acc.or(&d) };
            }
            Ok(acc)
        }
    }
}

pub fn parse(text: &str, schema: &Schema) -> Result<Dnf, FormulaError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, at: 0, end: text.len(), schema };
    if p.peek().is_none() {
        return Err(syntax(0, "empty formula"));
    }
    let ast = p.formula()?;
    if p.at < p.toks.len() {
        return Err(syntax(p.pos(), "unexpected trailing input"));
    }
    to_dnf(&ast, true)
}

pub fn var_name(v: Var) -> String {
    match v {
        LEFT => "L".into(),
        RIGHT => "R".into(),
        n => format!("V{n}"),
    }
}

fn write_atom(out: &mut String, a: &Atom, schema: &Schema) {
    let name = schema.name(a.attr);
    let _ = write!(out, "{}.{} {} ", var_name(a.lhs), name, a.cmp.symbol());
    let _ = match &a.rhs {
        Term::Var(v) => write!(out, "{}.{}", var_name(*v), name),
        Term::Const(c) => write!(out, "{c}"),
    };
}

pub fn print_conjunct(c: &Conjunct, schema: &Schema) -> String {
    if c.is_true() {
        return "true".into();
    }
    let mut out = String::new();
    for (i, a) in c.atoms().iter().enumerate() {
        if i > 0 {
            out.push_str(" and ");
        }
        write_atom(&mut out, a, schema);
    }
    out
}

pub fn print(f: &Dnf, schema: &Schema) -> String {
    if f.is_false() {
        return "false".into();
    }
    let many = f.disjuncts().len() > 1;
    let mut out = String::new();
    for (i, c) in f.disjuncts().iter().enumerate() {
        if i > 0 {
            out.push_str(" or ");
        }
        if many && c.atoms().len() > 1 {
            let _ = write!(out, "({})", print_conjunct(c, schema));
        } else {
            out.push_str(&print_conjunct(c, schema));
        }
    }
    out
}
