//! Attribute values: exact rationals for `Q` attributes and uninterpreted
//! constants for `C` attributes.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::FormulaError;

/// A constant appearing in a formula or a tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Rat(BigRational),
    Sym(Arc<str>),
}

impl Value {
    pub fn int(v: i64) -> Value {
        Value::Rat(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn sym(s: &str) -> Value {
        Value::Sym(Arc::from(s))
    }

    pub fn as_rat(&self) -> Option<&BigRational> {
        match self {
            Value::Rat(r) => Some(r),
            Value::Sym(_) => None,
        }
    }

    pub fn is_rat(&self) -> bool {
        matches!(self, Value::Rat(_))
    }

    /// Order between two constants, if they are comparable (both rationals).
    pub fn order(&self, other: &Value) -> Option<Ordering> {
        match (self, other) {
            (Value::Rat(a), Value::Rat(b)) => Some(a.cmp(b)),
            _ => None,
        }
    }
}

// Total order used only for canonical sorting: rationals first, by value.
impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Rat(a), Value::Rat(b)) => a.cmp(b),
            (Value::Rat(_), Value::Sym(_)) => Ordering::Less,
            (Value::Sym(_), Value::Rat(_)) => Ordering::Greater,
            (Value::Sym(a), Value::Sym(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Rat(r) => write!(f, "{}", format_rational(r)),
            Value::Sym(s) => write!(f, "{}", quote_symbol(s)),
        }
    }
}

/// `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn quote_symbol(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Parses `12`, `-3.25`, `7/4`.
pub fn parse_rational(text: &str) -> Result<BigRational, FormulaError> {
    let t = text.trim();
    let bad = || FormulaError::BadNumber(t.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let mut r = BigRational::new(numer, denom);
    if neg {
        r = -r;
    }
    Ok(r)
}

/// A rational strictly between `lo` and `hi` (either may be unbounded).
pub fn rational_between(lo: Option<&BigRational>, hi: Option<&BigRational>) -> BigRational {
    let one = BigRational::one();
    match (lo, hi) {
        (None, None) => BigRational::zero(),
        (Some(l), None) => l + &one,
        (None, Some(h)) => h - &one,
        (Some(l), Some(h)) => (l + h) / BigRational::from_integer(BigInt::from(2)),
    }
}
