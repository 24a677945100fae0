use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn prefcon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prefcon")).args(args).output().unwrap()
}

fn total_order(nodes: &[&str]) -> String {
    let mut out = String::from("# total order\n");
    for (i, a) in nodes.iter().enumerate() {
        for b in &nodes[i + 1..] {
            out.push_str(&format!("{a}\t{b}\n"));
        }
    }
    out
}

fn put(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SCHEMA: &str = r#"{"attributes":[{"name":"make","domain":"C"},{"name":"year","domain":"Q"},{"name":"price","domain":"Q"}]}"#;
const CARS: &str = "id,make,year,price\nt1,VW,2007,15000\nt2,VW,2007,20000\nt3,Kia,2006,15000\nt4,Kia,2007,12000\n";

#[test]
fn contract_writes_result() {
    let dir = tempfile::tempdir().unwrap();
    let pref = put(dir.path(), "pref.tsv", &total_order(&["x1", "x2", "x3", "x4", "x5"]));
    let con = put(dir.path(), "con.json", r#"{"edges":[["x1","x4"],["x2","x5"]]}"#);
    let out = dir.path().join("out.json");
    let o = prefcon(&["contract", "--pref", &pref, "--con", &con, "--mode", "prefix", "--trace", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["contractor"]["edges"].as_array().unwrap().len(), 5);
    assert_eq!(v["strata_trace"].as_array().unwrap().len(), 2);
    assert_eq!(v["mode"], "PREFIX");
}

#[test]
fn protection_conflict_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let pref = put(dir.path(), "pref.tsv", &total_order(&["x1", "x2", "x3", "x4"]));
    let con = put(dir.path(), "con.tsv", "x1\tx4\n");
    let protect = put(dir.path(), "protect.tsv", "x1\tx2\nx2\tx4\n");
    let o = prefcon(&["contract", "--pref", &pref, "--con", &con, "--protect", &protect, "--mode", "protecting"]);
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["code"], "PROTECTION_CONFLICT");
    assert_eq!(err["detail"]["edges"], serde_json::json!([["x1", "x4"]]));
}

#[test]
fn not_spo_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let pref = put(dir.path(), "pref.tsv", "a\tb\nb\tc\n");
    let con = put(dir.path(), "con.tsv", "a\tb\n");
    let o = prefcon(&["contract", "--pref", &pref, "--con", &con]);
    assert_eq!(o.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["code"], "NOT_SPO");
}

#[test]
fn contract_sym_and_check_only() {
    let dir = tempfile::tempdir().unwrap();
    let schema = put(dir.path(), "schema.json", SCHEMA);
    let pref = put(dir.path(), "pref.txt", "L.year > R.year or L.year = R.year and L.price < R.price");
    let con = put(dir.path(), "con.txt", "L.year = 2007 and R.year = 2007 and L.price = 12000 and R.price = 15000");
    let o = prefcon(&["contract-sym", "--schema", &schema, "--pref", &pref, "--con", &con, "--check-only"]);
    assert!(o.status.success());
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["stratifiable"], true);

    let o = prefcon(&["contract-sym", "--schema", &schema, "--pref", &pref, "--con", &con, "--mode", "prefix"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let res: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(res["contractor"].as_str().unwrap().contains("12000"));

    let unbounded = put(dir.path(), "con2.txt", "L.year = R.year and L.price < R.price");
    let o = prefcon(&["contract-sym", "--schema", &schema, "--pref", &pref, "--con", &unbounded, "--check-only"]);
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["stratifiable"], false);
}

#[test]
fn winnow_and_skyline() {
    let dir = tempfile::tempdir().unwrap();
    let schema = put(dir.path(), "schema.json", SCHEMA);
    let data = put(dir.path(), "cars.csv", CARS);
    let f = put(dir.path(), "mary.txt", "L.year > R.year or L.year = R.year and L.price < R.price");
    let o = prefcon(&["winnow", "--schema", &schema, "--data", &data, "--formula", &f]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "id,make,year,price\nt4,Kia,2007,12000\n");

    let o = prefcon(&["winnow", "--schema", &schema, "--data", &data, "--spec", "year=max,price=min", "--annotate"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("id,make,year,price,winnow_rank\n"));
    assert!(text.contains("t4,Kia,2007,12000,0\n"));

    let o = prefcon(&["skyline", "--schema", &schema, "--data", &data, "--spec", "price=min"]);
    let tsv = String::from_utf8(o.stdout).unwrap();
    assert!(tsv.contains("t4\tt1\n"));

    let o = prefcon(&["skyline", "--schema", &schema, "--data", &data, "--spec", "make=min"]);
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["code"], "SPEC_ON_C_ATTRIBUTE");
}
