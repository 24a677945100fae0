//! Keyed tuple sets read from CSV.

use std::collections::HashSet;
use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use crate::error::DataError;
use crate::formula::{format_rational, Schema, TupleValue, Value};
use crate::relation::NodeId;

/// Header name of the optional key column.
pub const KEY_COLUMN: &str = "id";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub key: NodeId,
    #[serde(serialize_with = "plain_values")]
    pub values: TupleValue,
}

fn plain_values<S: serde::Serializer>(t: &TupleValue, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(t.0.iter().map(cell))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub schema: Arc<Schema>,
    pub rows: Vec<Row>,
}

/// A value as written in a CSV cell: symbols unquoted.
pub fn cell(v: &Value) -> String {
    match v {
        Value::Rat(r) => format_rational(r),
        Value::Sym(s) => s.to_string(),
    }
}

impl Dataset {
    pub fn new(schema: &Arc<Schema>, rows: Vec<Row>) -> Result<Dataset, DataError> {
        let mut seen = HashSet::new();
        for r in &rows {
            if !seen.insert(r.key.clone()) {
                return Err(DataError::DuplicateKey(r.key.to_string()));
            }
        }
        Ok(Dataset { schema: schema.clone(), rows })
    }

    /// Parses CSV text. Keys come from an `id` column when the header has
    /// one that is not an attribute, otherwise rows are keyed `r1..rn`.
    /// Reported rows count file lines from 1 (the header); columns from 1.
    pub fn from_csv(input: impl Read, schema: &Arc<Schema>) -> Result<Dataset, DataError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let header = rdr
            .headers()
            .map_err(|e| DataError::Parse { row: 1, column: 0, msg: e.to_string() })?
            .clone();
        let mut key_col = None;
        let mut attr_col = vec![None; schema.len()];
        for (i, name) in header.iter().enumerate() {
            match schema.index_of(name) {
                Some(a) => attr_col[a] = Some(i),
                None if name == KEY_COLUMN => key_col = Some(i),
                None => return Err(DataError::UnknownAttribute(name.to_string())),
            }
        }
        if let Some(a) = attr_col.iter().position(Option::is_none) {
            return Err(DataError::Parse {
                row: 1,
                column: 0,
                msg: format!("missing column {:?}", schema.name(a)),
            });
        }
        let mut rows = Vec::new();
        for (n, rec) in rdr.records().enumerate() {
            let line = n + 2;
            let rec = rec.map_err(|e| DataError::Parse { row: line, column: 0, msg: e.to_string() })?;
            let values = attr_col
                .iter()
                .enumerate()
                .map(|(a, col)| {
                    let col = col.expect("checked above");
                    let raw = rec.get(col).unwrap_or("");
                    schema
                        .parse_value(a, raw)
                        .map_err(|e| DataError::Parse { row: line, column: col + 1, msg: e.to_string() })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let key = match key_col {
                Some(c) => NodeId::new(rec.get(c).unwrap_or("")),
                None => NodeId::new(&format!("r{}", n + 1)),
            };
            rows.push(Row { key, values: TupleValue(values) });
        }
        Dataset::new(schema, rows)
    }

    pub fn load(path: &Path, schema: &Arc<Schema>) -> Result<Dataset, DataError> {
        let file = std::fs::File::open(path).map_err(|e| DataError::Io(format!("{}: {e}", path.display())))?;
        Dataset::from_csv(file, schema)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn keys(&self) -> Vec<NodeId> {
        self.rows.iter().map(|r| r.key.clone()).collect()
    }

    pub fn get(&self, key: &NodeId) -> Option<&Row> {
        self.rows.iter().find(|r| &r.key == key)
    }

    /// Rows satisfying `keep`, in input order.
    pub fn select(&self, keep: impl Fn(&Row) -> bool) -> Dataset {
        Dataset { schema: self.schema.clone(), rows: self.rows.iter().filter(|r| keep(r)).cloned().collect() }
    }

    /// CSV with the key column first. `extra` appends one column.
    pub fn to_csv(&self, extra: Option<(&str, &[String])>) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec![KEY_COLUMN.to_string()];
        header.extend(self.schema.attributes().iter().map(|a| a.name.clone()));
        if let Some((name, _)) = extra {
            header.push(name.to_string());
        }
        w.write_record(&header).expect("in-memory write");
        for (i, r) in self.rows.iter().enumerate() {
            let mut rec = vec![r.key.to_string()];
            rec.extend(r.values.0.iter().map(cell));
            if let Some((_, col)) = extra {
                rec.push(col[i].clone());
            }
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 csv")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Domain;

    fn cars() -> Arc<Schema> {
        Arc::new(Schema::of(&[("make", Domain::C), ("year", Domain::Q), ("price", Domain::Q)]))
    }

    const TABLE: &str = "id,make,year,price\nt1,VW,2007,15000\nt2,VW,2007,20000\nt3,Kia,2006,15000\nt4,Kia,2007,12000\n";

    #[test]
    fn car_table() {
        let d = Dataset::from_csv(TABLE.as_bytes(), &cars()).unwrap();
        assert_eq!(d.len(), 4);
        assert_eq!(d.rows[0].key, NodeId::new("t1"));
        assert_eq!(d.rows[0].values.get(0), &Value::sym("VW"));
        assert_eq!(d.rows[3].values.get(2), &Value::int(12000));
        let again = Dataset::from_csv(d.to_csv(None).as_bytes(), &cars()).unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn header_only_and_default_keys() {
        assert!(Dataset::from_csv("make,year,price\n".as_bytes(), &cars()).unwrap().is_empty());
        let d = Dataset::from_csv("price,make,year\n1.5,VW,2000\n".as_bytes(), &cars()).unwrap();
        assert_eq!(d.rows[0].key, NodeId::new("r1"));
        assert_eq!(d.rows[0].values.get(2).to_string(), "3/2");
    }

    #[test]
    fn errors() {
        let e = Dataset::from_csv("id,make,year,price\nt1,VW,2007,cheap\n".as_bytes(), &cars()).unwrap_err();
        assert!(matches!(e, DataError::Parse { row: 2, column: 4, .. }), "{e:?}");
        assert_eq!(e.code(), "PARSE_ERROR");
        let e = Dataset::from_csv("id,make,year,price\nt1,VW,1,1\nt1,VW,2,2\n".as_bytes(), &cars()).unwrap_err();
        assert_eq!(e.code(), "DUPLICATE_KEY");
        let e = Dataset::from_csv("id,make,year\n".as_bytes(), &cars()).unwrap_err();
        assert_eq!(e.code(), "PARSE_ERROR");
    }
}
