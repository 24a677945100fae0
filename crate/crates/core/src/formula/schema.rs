use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::value::{parse_rational, Value};
use crate::error::FormulaError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    /// Uninterpreted constants: only `=` and `!=` are meaningful.
    C,
    /// Rationals under their dense order.
    Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    pub domain: Domain,
}

/// Ordered attribute declarations shared by every formula and tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SchemaFile", into = "SchemaFile")]
pub struct Schema {
    attributes: Vec<Attribute>,
}

#[derive(Serialize, Deserialize)]
struct SchemaFile {
    attributes: Vec<Attribute>,
}

impl TryFrom<SchemaFile> for Schema {
    type Error = FormulaError;
    fn try_from(f: SchemaFile) -> Result<Self, Self::Error> {
        Schema::new(f.attributes)
    }
}

impl From<Schema> for SchemaFile {
    fn from(s: Schema) -> Self {
        SchemaFile { attributes: s.attributes }
    }
}

impl Schema {
    pub fn new(attributes: Vec<Attribute>) -> Result<Schema, FormulaError> {
        if attributes.is_empty() {
            return Err(FormulaError::Schema("schema needs at least one attribute".into()));
        }
        let mut seen = HashSet::new();
        for a in &attributes {
            if a.name.is_empty() || !a.name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(FormulaError::Schema(format!("invalid attribute name {:?}", a.name)));
            }
            if !seen.insert(a.name.as_str()) {
                return Err(FormulaError::Schema(format!("duplicate attribute {:?}", a.name)));
            }
        }
        Ok(Schema { attributes })
    }

    /// Shorthand for tests and examples: `Schema::of(&[("price", Domain::Q)])`.
    pub fn of(attrs: &[(&str, Domain)]) -> Schema {
        Schema::new(
            attrs
                .iter()
                .map(|(n, d)| Attribute { name: n.to_string(), domain: *d })
                .collect(),
        )
        .expect("valid schema")
    }

    pub fn from_json(text: &str) -> Result<Schema, FormulaError> {
        serde_json::from_str(text).map_err(|e| FormulaError::Schema(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("schema serializes")
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.attributes[idx].name
    }

    pub fn domain(&self, idx: usize) -> Domain {
        self.attributes[idx].domain
    }

    /// Parses a raw cell into a value of the attribute's domain.
    pub fn parse_value(&self, idx: usize, raw: &str) -> Result<Value, FormulaError> {
        match self.domain(idx) {
            Domain::Q => Ok(Value::Rat(parse_rational(raw)?)),
            Domain::C => Ok(Value::sym(raw)),
        }
    }
}

/// A total assignment of values to the attributes of a schema.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TupleValue(pub Vec<Value>);

impl TupleValue {
    pub fn new(schema: &Schema, values: Vec<Value>) -> Result<TupleValue, FormulaError> {
        if values.len() != schema.len() {
            return Err(FormulaError::Type(format!(
                "tuple has {} values, schema has {} attributes",
                values.len(),
                schema.len()
            )));
        }
        for (i, v) in values.iter().enumerate() {
            let ok = match schema.domain(i) {
                Domain::Q => v.is_rat(),
                Domain::C => !v.is_rat(),
            };
            if !ok {
                return Err(FormulaError::Type(format!(
                    "value {v} does not belong to the domain of {}",
                    schema.name(i)
                )));
            }
        }
        Ok(TupleValue(values))
    }

    pub fn get(&self, idx: usize) -> &Value {
        &self.0[idx]
    }
}

impl fmt::Display for TupleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_json_round_trip() {
        let s = Schema::from_json(r#"{"attributes":[{"name":"price","domain":"Q"},{"name":"make","domain":"C"}]}"#)
            .unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.domain(1), Domain::C);
        assert_eq!(Schema::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn rejects_duplicate_and_empty() {
        assert!(Schema::from_json(r#"{"attributes":[]}"#).is_err());
        assert!(Schema::from_json(
            r#"{"attributes":[{"name":"a","domain":"Q"},{"name":"a","domain":"C"}]}"#
        )
        .is_err());
    }

    #[test]
    fn tuple_domain_check() {
        let s = Schema::of(&[("p", Domain::Q), ("m", Domain::C)]);
        assert!(TupleValue::new(&s, vec![Value::int(1), Value::sym("x")]).is_ok());
        assert!(TupleValue::new(&s, vec![Value::sym("x"), Value::sym("x")]).is_err());
        assert!(TupleValue::new(&s, vec![Value::int(1)]).is_err());
    }
}
