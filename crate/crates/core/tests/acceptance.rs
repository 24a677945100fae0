//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria whose expected values contradict the definitions they quote are
//! listed in `KNOWN`; they are still evaluated and still print FAIL. The
//! process fails when any other criterion fails, or when a known one starts
//! passing (so the list cannot go stale).

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use prefcon_core::contract::{
    check_minimal_contractor, enumerate_minimal_contractors, is_prefix_contractor, meet_contr, meet_contr_protecting,
    min_contr_finite, min_contr_protecting, DEFAULT_ORACLE_BOUND,
};
use prefcon_core::formula::{Domain, Quantifier, Value};
use prefcon_core::symbolic::{
    check_finitely_stratifiable, check_minimal_symbolic, check_spo_symbolic, decode_relation, encode_relation,
    get_stratum_symbolic, meet_contr_symbolic, min_contr_protecting_symbolic, min_contr_symbolic, non_minimal_edges,
    point_schema, restricted_preference, tc_symbolic,
};
use prefcon_core::winnow::{skyline_relation, winnow, winnow_after_contraction, Direction, Strategy};
use prefcon_core::{Dataset, DnfFormula, FiniteRelation, PreferenceSource};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Failed sub-checks of one criterion.
#[derive(Default)]
struct Checks(Vec<String>);

impl Checks {
    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.0.push(what.into());
        }
    }

    fn finish(self, note: String) -> Result<String, String> {
        if self.0.is_empty() {
            Ok(note)
        } else {
            Err(self.0.join("; "))
        }
    }
}

const KNOWN: &[(&str, &str)] = &[
    (
        "meet-examples",
        "x3x4 is in no minimal full contractor of the x1..x5 order by {x1x3,x2x3,x2x5}: \
         the exhaustive oracle finds exactly two (CON+x2x4, CON+x4x5), and the meet formula \
         (side relation pref-CON) also excludes it, since the only candidate detour x2>x3>x4>x5 \
         needs x2x3 outside CON. The protecting-meet values and C_P+ do match.",
    ),
    (
        "symbolic-strata",
        "with strata by longest path in pref restricted to K x K, BMW@15000 sits above VW@14000 \
         (BMW beats VW at any price), so the run has four layers: 15000&!BMW, 14000&!BMW, BMW@15000, \
         BMW@14000. The printed L1/L2 merge layers 1-2 and omit that edge. L0 and the final \
         contractor formula do match.",
    ),
];

fn cars() -> (Dataset, DnfFormula) {
    let s = schema(&[("make", Domain::C), ("year", Domain::Q), ("price", Domain::Q)]);
    let t = "id,make,year,price\nt1,VW,2007,15000\nt2,VW,2007,20000\nt3,Kia,2006,15000\nt4,Kia,2007,12000\n";
    let d = Dataset::from_csv(t.as_bytes(), &s).unwrap();
    let pref = formula("L.year > R.year or L.year = R.year and L.price < R.price", &s);
    (d, pref)
}

fn keys(d: &Dataset) -> Vec<String> {
    d.rows.iter().map(|r| r.key.to_string()).collect()
}

fn car_winnow_flow() -> Result<String, String> {
    let mut c = Checks::default();
    let start = Instant::now();
    let (d, pref) = cars();
    let s = d.schema.clone();
    let w = winnow(&PreferenceSource::Formula(pref.clone()), &d).unwrap();
    c.expect(keys(&w) == ["t4"], format!("initial winnow {:?}", keys(&w)));
    let con = formula("L.year = 2007 and R.year = 2007 and L.price = 12000 and R.price = 15000", &s);
    let res = min_contr_symbolic(&pref, &con).unwrap();
    let after = winnow(&PreferenceSource::Formula(res.contracted.clone()), &d).unwrap();
    let elapsed = start.elapsed();
    let succ2 = formula(
        "(L.year > R.year or L.year = R.year and L.price < R.price) and \
         not (L.year = 2007 and R.year = 2007 and L.price = 12000 and R.price > 12000 and R.price <= 15000)",
        &s,
    );
    c.expect(equiv(&res.contracted, &succ2), format!("contracted formula {}", res.contracted));
    c.expect(keys(&after) == ["t1", "t4"], format!("winnow after {:?}", keys(&after)));
    c.expect(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"));
    c.finish(format!("winnow {{t4}} -> {:?} in {elapsed:.1?}", keys(&after)))
}

fn x5() -> FiniteRelation {
    FiniteRelation::total_order(&["x1", "x2", "x3", "x4", "x5"])
}

fn prefix_strata() -> Result<String, String> {
    let mut c = Checks::default();
    let start = Instant::now();
    let res = min_contr_finite(&x5(), &rel(&[("x1", "x4"), ("x2", "x5")])).unwrap();
    let elapsed = start.elapsed();
    let expected = rel(&[("x2", "x3"), ("x2", "x4"), ("x2", "x5"), ("x1", "x3"), ("x1", "x4")]);
    c.expect(res.contractor == expected, format!("contractor {:?}", res.contractor));
    let trace: Vec<&FiniteRelation> = res.strata_trace.iter().map(|s| &s.edges).collect();
    let e0 = rel(&[("x2", "x3"), ("x2", "x4"), ("x2", "x5")]);
    let e1 = rel(&[("x1", "x3"), ("x1", "x4")]);
    c.expect(trace == [&e0, &e1], format!("strata {trace:?}"));
    c.expect(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"));
    c.finish(format!("5 edges, strata E0/E1 in {elapsed:.1?}"))
}

fn protection_example() -> Result<String, String> {
    let mut c = Checks::default();
    let plus = rel(&[("x1", "x3"), ("x2", "x3"), ("x4", "x5")]);
    let res = min_contr_protecting(&x5(), &rel(&[("x1", "x4"), ("x2", "x5")]), &plus).unwrap();
    let q = res.forced.clone().unwrap_or_default();
    c.expect(q == rel(&[("x3", "x4"), ("x3", "x5")]), format!("Q = {q:?}"));
    let expected = rel(&[("x2", "x4"), ("x2", "x5"), ("x3", "x4"), ("x3", "x5"), ("x1", "x4")]);
    c.expect(res.contractor == expected, format!("contractor {:?}", res.contractor));
    c.expect(res.contractor.intersection(&plus).is_empty(), "contractor meets P+");
    c.finish("Q = {x3x4, x3x5}, contractor disjoint from P+".into())
}

fn meet_examples() -> Result<String, String> {
    let mut c = Checks::default();
    let con = rel(&[("x1", "x3"), ("x2", "x3"), ("x2", "x5")]);
    let pm = meet_contr(&x5(), &con).unwrap().contractor;
    let printed = rel(&[("x1", "x3"), ("x2", "x3"), ("x2", "x5"), ("x2", "x4"), ("x3", "x4"), ("x4", "x5")]);
    c.expect(pm == printed, format!("P^m = {pm:?}, missing {:?}", printed.difference(&pm)));
    let prot = meet_contr_protecting(&x5(), &con, &rel(&[("x2", "x4")])).unwrap();
    let expected = rel(&[("x1", "x3"), ("x2", "x3"), ("x2", "x5"), ("x4", "x5")]);
    c.expect(prot.contractor == expected, format!("P^m_P+ = {:?}", prot.contractor));
    let cp = prot.forced.unwrap_or_default();
    c.expect(cp == con.union(&rel(&[("x4", "x5")])), format!("C_P+ = {cp:?}"));
    c.finish("P^m, P^m_P+ and C_P+ as printed".into())
}

fn symbolic_strata() -> Result<String, String> {
    let mut c = Checks::default();
    let s = schema(&[("m", Domain::C), ("price", Domain::Q)]);
    let pref = formula(r#"L.m = "BMW" and R.m = "VW" or L.m = R.m and L.price < R.price"#, &s);
    let con = formula(
        "L.m = R.m and (L.price >= 11000 and L.price <= 13000 and R.price = 15000 \
         or L.price >= 10000 and L.price <= 12000 and R.price = 14000)",
        &s,
    );
    let printed = [
        r#"L.price = 15000 and L.m != "BMW""#,
        r#"L.price = 15000 and L.m = "BMW" or L.price = 14000 and L.m != "BMW""#,
        r#"L.price = 14000 and L.m = "BMW""#,
    ];
    let (k, pc) = restricted_preference(&pref, &con).unwrap();
    let mut layers = Vec::new();
    while let Some(l) = get_stratum_symbolic(&pc, &k, layers.len()).unwrap() {
        layers.push(l);
    }
    for (i, text) in printed.iter().enumerate() {
        let ok = layers.get(i).is_some_and(|l| equiv(l, &formula(text, &s)));
        c.expect(ok, format!("L{i} = {}", layers.get(i).map_or("none".into(), |l| l.to_string())));
    }
    c.expect(layers.len() == printed.len(), format!("{} layers", layers.len()));
    let res = min_contr_symbolic(&pref, &con).unwrap();
    let fp = formula(
        "L.m = R.m and (L.price >= 11000 and L.price <= 13000 and R.price > 13000 and R.price <= 15000 \
         or L.price >= 10000 and L.price < 11000 and R.price > 13000 and R.price <= 14000)",
        &s,
    );
    c.expect(equiv(&res.contractor, &fp), format!("F_P- = {}", res.contractor));
    c.finish("L0-L2 and F_P- equivalent to the printed formulas".into())
}

fn stratifiability_and_minimality() -> Result<String, String> {
    let mut c = Checks::default();
    let s = schema(&[("price", Domain::Q), ("year", Domain::Q)]);
    let pref = formula("L.price < R.price", &s);
    let con1 = formula("L.price < 1 and (R.price = 2 or R.price = 3)", &s);
    let con2 = formula("L.price < 1 and R.price >= 2", &s);
    c.expect(check_finitely_stratifiable(&pref, &con1).unwrap().stratifiable, "CON1 reported unbounded");
    c.expect(!check_finitely_stratifiable(&pref, &con2).unwrap().stratifiable, "CON2 reported bounded");

    let s = schema(&[("d", Domain::Q)]);
    let pref = formula("L.d < R.d", &s);
    let con = formula("L.d >= 1 and L.d <= 2 and R.d = 4 or L.d = 0 and R.d = 3", &s);
    let p = formula("L.d >= 1 and L.d <= 2 and R.d > 2 and R.d <= 4 or L.d = 0 and R.d > 0 and R.d <= 3", &s);
    let star = formula(
        "L.d >= 1 and L.d <= 2 and R.d > 2 and R.d <= 4 or L.d = 0 and (R.d > 0 and R.d < 1 or R.d > 2 and R.d <= 3)",
        &s,
    );
    c.expect(!check_minimal_symbolic(&pref, &con, &p).unwrap(), "P- reported minimal");
    c.expect(check_minimal_symbolic(&pref, &con, &star).unwrap(), "P* reported non-minimal");
    let extra = non_minimal_edges(&pref, &con, &p).unwrap();
    c.expect(equiv(&extra, &formula("L.d = 0 and R.d >= 1 and R.d <= 2", &s)), format!("removable {extra}"));

    let order = FiniteRelation::total_order(&["u", "x", "y", "v"]);
    let m = check_minimal_contractor(&order, &rel(&[("u", "v")]), &rel(&[("u", "x"), ("y", "v"), ("x", "v"), ("u", "v")]))
        .unwrap();
    c.expect(!m.is_minimal && m.removable == rel(&[("u", "x"), ("x", "v")]), format!("D = {:?}", m.removable));
    c.finish("CON1 bounded, CON2 unbounded; P- not minimal, P* minimal; D = {ux, xv}".into())
}

fn winnow_shortcut() -> Result<String, String> {
    let mut c = Checks::default();
    let s = schema(&[("p", Domain::Q)]);
    let d = Dataset::from_csv("id,p\n1,1\n2,2\n3,3\n4,4\n".as_bytes(), &s).unwrap();
    let f = |t: &str| PreferenceSource::Formula(formula(t, &s));
    let pref = f("L.p < R.p");
    let con = f("L.p = 0 and R.p = 3");
    let p1 = f("L.p = 0 and R.p > 0 and R.p <= 3");
    let (w, rep) = winnow_after_contraction(&pref, &p1, &con, true, &d, None).unwrap();
    c.expect(keys(&w) == ["1"], format!("P1 winnow {:?}", keys(&w)));
    c.expect(rep.strategy == Strategy::Unchanged && rep.start_set == "S(CON)", format!("P1 report {rep:?}"));
    let p2 = f("L.p >= 0 and L.p < 3 and R.p = 3");
    let (w, rep) = winnow_after_contraction(&pref, &p2, &con, false, &d, None).unwrap();
    c.expect(keys(&w) == ["1", "3"], format!("P2 winnow {:?}", keys(&w)));
    c.expect(rep.strategy == Strategy::Reduced && rep.start_set == "S(P-)", format!("P2 report {rep:?}"));
    c.expect(w == winnow(&pref.minus(&p2).unwrap(), &d).unwrap(), "P2 differs from plain winnow");
    c.finish("{1} unchanged; {1,3} via reduced rerun".into())
}

const ORACLE_CASES: usize = 500;

fn oracle_suite() -> Result<String, String> {
    let mut c = Checks::default();
    let start = Instant::now();
    let mut g = ChaCha8Rng::seed_from_u64(0x5eed);
    let ps = point_schema();
    let (mut conflicts, mut edges) = (0usize, 0usize);
    for case in 0..ORACLE_CASES {
        let pref = random_spo(&mut g, 8, DEFAULT_ORACLE_BOUND);
        let con = random_subset(&mut g, &pref, 0.2);
        let protect = random_subset(&mut g, &pref.difference(&con), 0.15);
        edges += pref.len();
        let tag = |what: &str| format!("case {case} {what} (pref {pref:?}, con {con:?}, P+ {protect:?})");

        let minimal = enumerate_minimal_contractors(&pref, &con, DEFAULT_ORACLE_BOUND).unwrap();
        let prefix = min_contr_finite(&pref, &con).unwrap().contractor;
        let prefixes: Vec<&FiniteRelation> = minimal.iter().filter(|m| is_prefix_contractor(&pref, &con, m)).collect();
        c.expect(prefixes == [&prefix], tag("prefix differs from the oracle's unique prefix contractor"));

        for m in &minimal {
            c.expect(check_minimal_contractor(&pref, &con, m).unwrap().is_minimal, tag("oracle contractor judged non-minimal"));
        }
        // pref itself is always a full contractor; minimal only if listed
        let whole = check_minimal_contractor(&pref, &con, &pref).unwrap().is_minimal;
        c.expect(whole == minimal.contains(&pref), tag("minimality verdict on pref"));
        let padded = prefix.union(&random_subset(&mut g, &pref, 0.3));
        if let Ok(chk) = check_minimal_contractor(&pref, &con, &padded) {
            let full = prefcon_core::contract::check_full_contractor(&pref, &con, &padded).unwrap().is_full;
            c.expect(chk.is_minimal == (full && minimal.contains(&padded)), tag("minimality verdict on padded set"));
        }

        let union: FiniteRelation = minimal.iter().flat_map(|m| m.edges().cloned()).collect();
        let meet = meet_contr(&pref, &con).unwrap().contractor;
        c.expect(meet == union, tag("meet differs from union of minimal contractors"));

        let closed = protect.transitive_closure();
        let admissible: Vec<&FiniteRelation> = minimal.iter().filter(|m| m.intersection(&closed).is_empty()).collect();
        let prot = min_contr_protecting(&pref, &con, &protect);
        let prot_meet = meet_contr_protecting(&pref, &con, &protect);
        match (&prot, &prot_meet) {
            (Ok(p), Ok(pm)) => {
                c.expect(p.contractor.intersection(&closed).is_empty(), tag("protecting output meets TC(P+)"));
                c.expect(admissible.contains(&&p.contractor), tag("protecting output is not a P+-disjoint minimal contractor"));
                let u: FiniteRelation = admissible.iter().flat_map(|m| m.edges().cloned()).collect();
                c.expect(pm.contractor == u, tag("protecting meet differs from union of P+-disjoint minimal contractors"));
            }
            (Err(_), Err(_)) => {
                conflicts += 1;
                c.expect(con.edges().any(|e| closed.contains(e)) || admissible.is_empty(), tag("conflict without cause"));
            }
            _ => c.expect(false, tag("protecting variants disagree on conflict")),
        }

        let nodes: BTreeSet<_> = pref.nodes();
        let (fp, fc, fpr) = (encode_relation(&ps, &pref), encode_relation(&ps, &con), encode_relation(&ps, &protect));
        let sym = min_contr_symbolic(&fp, &fc).unwrap();
        c.expect(decode_relation(&sym.contractor, &nodes) == prefix, tag("symbolic prefix differs"));
        let sm = meet_contr_symbolic(&fp, &fc, None).unwrap();
        c.expect(decode_relation(&sm.contractor, &nodes) == meet, tag("symbolic meet differs"));
        match (&prot, min_contr_protecting_symbolic(&fp, &fc, &fpr)) {
            (Ok(p), Ok(s)) => c.expect(decode_relation(&s.contractor, &nodes) == p.contractor, tag("symbolic protecting differs")),
            (Err(_), Err(_)) => {}
            _ => c.expect(false, tag("symbolic protecting disagrees on conflict")),
        }
        match (&prot_meet, meet_contr_symbolic(&fp, &fc, Some(&fpr))) {
            (Ok(p), Ok(s)) => c.expect(decode_relation(&s.contractor, &nodes) == p.contractor, tag("symbolic protecting meet differs")),
            (Err(_), Err(_)) => {}
            _ => c.expect(false, tag("symbolic protecting meet disagrees on conflict")),
        }
    }
    let elapsed = start.elapsed();
    c.expect(elapsed < Duration::from_secs(300), format!("took {elapsed:?}"));
    if c.0.len() > 5 {
        let n = c.0.len();
        c.0.truncate(5);
        c.0.push(format!("... {n} failures in total"));
    }
    c.finish(format!(
        "{ORACLE_CASES} SPOs ({edges} edges, {conflicts} protection conflicts), zero mismatches, {elapsed:.1?}"
    ))
}

const QE_CASES: usize = 1000;

fn random_atom(g: &mut impl Rng) -> String {
    let vars = ["L", "R", "V2"];
    let v = vars[g.gen_range(0..3)];
    if g.gen_bool(0.7) {
        let op = ["<", "<=", "=", "!=", ">", ">="][g.gen_range(0..6)];
        if g.gen_bool(0.5) {
            let w = vars[g.gen_range(0..3)];
            if w != v {
                return format!("{v}.a {op} {w}.a");
            }
        }
        format!("{v}.a {op} {}", g.gen_range(0..4))
    } else {
        let op = ["=", "!="][g.gen_range(0..2)];
        if g.gen_bool(0.5) {
            let w = vars[g.gen_range(0..3)];
            if w != v {
                return format!("{v}.c {op} {w}.c");
            }
        }
        format!("{v}.c {op} \"{}\"", ["p", "q"][g.gen_range(0..2)])
    }
}

fn random_formula(g: &mut impl Rng) -> String {
    let disjuncts: Vec<String> = (0..g.gen_range(1..=3))
        .map(|_| (0..g.gen_range(1..=3)).map(|_| random_atom(g)).collect::<Vec<_>>().join(" and "))
        .collect();
    disjuncts.join(" or ")
}

fn half(n: i64) -> Value {
    Value::Rat(prefcon_core::formula::parse_rational(&format!("{n}/2")).unwrap())
}

fn quarter(n: i64) -> Value {
    Value::Rat(prefcon_core::formula::parse_rational(&format!("{n}/4")).unwrap())
}

/// Quantifier elimination of the third tuple variable checked against
/// grounding it over a grid that covers every order cell: constants 0..3,
/// free values on the half-integer grid, bound values on the quarter grid
/// (which has a point strictly between any two half-integers and beyond
/// both ends), plus a symbol no formula mentions.
fn qe_soundness() -> Result<String, String> {
    let mut c = Checks::default();
    let start = Instant::now();
    let s = schema(&[("a", Domain::Q), ("c", Domain::C)]);
    let mut g = ChaCha8Rng::seed_from_u64(0xc0de);
    let free_a: Vec<Value> = (-1..=8).map(half).collect();
    let bound_a: Vec<Value> = (-4..=18).map(quarter).collect();
    let syms: Vec<Value> = ["p", "q", "w"].iter().map(|x| Value::sym(x)).collect();
    let mut bound_c = syms.clone();
    bound_c.push(Value::sym("fresh"));
    let (mut points, mut tc_iters) = (0usize, 0usize);
    for case in 0..QE_CASES {
        let text = random_formula(&mut g);
        let phi = formula(&text, &s);
        let q = if case % 2 == 0 { Quantifier::Exists } else { Quantifier::Forall };
        let psi = match phi.qe_eliminate(2, q) {
            Ok(p) => p,
            Err(e) => {
                c.expect(false, format!("{text}: {e}"));
                continue;
            }
        };
        c.expect(!psi.vars().contains(&2), format!("{text}: V2 survives elimination"));
        for _ in 0..60 {
            let env = [
                (free_a[g.gen_range(0..free_a.len())].clone(), syms[g.gen_range(0..3)].clone()),
                (free_a[g.gen_range(0..free_a.len())].clone(), syms[g.gen_range(0..3)].clone()),
            ];
            let at = |z: &(Value, Value)| {
                phi.eval_with(&|v, attr| {
                    let t = if v == 2 { z } else { &env[v as usize] };
                    if attr == 0 { t.0.clone() } else { t.1.clone() }
                })
            };
            let mut grid = bound_a.iter().flat_map(|a| bound_c.iter().map(move |b| (a.clone(), b.clone())));
            let grounded = match q {
                Quantifier::Exists => grid.any(|z| at(&z)),
                Quantifier::Forall => grid.all(|z| at(&z)),
            };
            let eliminated = psi.eval_with(&|v, attr| {
                let t = &env[v as usize];
                if attr == 0 { t.0.clone() } else { t.1.clone() }
            });
            points += 1;
            if grounded != eliminated {
                c.expect(false, format!("{text}: {q:?} disagrees at {env:?}"));
                break;
            }
        }

        // closure of the eliminated binary relation
        let consts = psi.constants();
        let k_a = consts.iter().filter(|(a, _)| *a == 0).count();
        let k_c = consts.iter().filter(|(a, _)| *a == 1).count();
        let bound = (2 * k_a + 1) * (k_c + 1) + 1;
        match tc_symbolic(&psi, bound) {
            Ok(t) => {
                tc_iters += 1;
                c.expect(psi.implies(&t).unwrap(), format!("{text}: closure misses the relation"));
                c.expect(check_spo_symbolic(&t).unwrap().1, format!("{text}: closure not transitive"));
            }
            Err(e) => c.expect(false, format!("{text}: closure of {psi} failed within {bound}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    if c.0.len() > 5 {
        let n = c.0.len();
        c.0.truncate(5);
        c.0.push(format!("... {n} failures in total"));
    }
    c.finish(format!(
        "{QE_CASES} formulas, {points} grounded points agree, {tc_iters} closures at fixpoint, {elapsed:.1?}"
    ))
}

fn benchmark_shape() -> Result<String, String> {
    let mut c = Checks::default();
    let s = schema(&[("a", Domain::Q), ("b", Domain::Q)]);
    let spec = [("a".to_string(), Direction::Min), ("b".to_string(), Direction::Min)];
    let mut g = ChaCha8Rng::seed_from_u64(0xbe4c);
    let mut worst = Duration::ZERO;
    let mut sizes = Vec::new();
    for trial in 0..10 {
        let mut csv = String::from("a,b\n");
        let mut rel = FiniteRelation::new();
        let mut n = 0;
        while rel.len() < 2000 {
            csv.push_str(&format!("{},{}\n", g.gen_range(0..10_000), g.gen_range(0..10_000)));
            n += 1;
            if n >= 80 {
                rel = skyline_relation(&Dataset::from_csv(csv.as_bytes(), &s).unwrap(), &spec).unwrap();
            }
        }
        let con = random_subset(&mut g, &rel, 35.0 / rel.len() as f64);
        let con: FiniteRelation = con.edges().take(35).cloned().collect();
        let t = Instant::now();
        let prefix = min_contr_finite(&rel, &con).unwrap().contractor;
        let took = t.elapsed();
        worst = worst.max(took);
        let meet = meet_contr(&rel, &con).unwrap().contractor;
        c.expect(took < Duration::from_secs(1), format!("trial {trial}: prefix took {took:?}"));
        c.expect(prefix.len() <= meet.len(), format!("trial {trial}: |prefix| {} > |meet| {}", prefix.len(), meet.len()));
        sizes.push(format!("{}e/{}c: {}<={}", rel.len(), con.len(), prefix.len(), meet.len()));
    }
    c.finish(format!("10 trials, worst prefix {worst:.1?}; {}", sizes.join(", ")))
}

type Criterion = fn() -> Result<String, String>;

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("car-winnow-flow", car_winnow_flow),
        ("prefix-strata", prefix_strata),
        ("protection-example", protection_example),
        ("meet-examples", meet_examples),
        ("symbolic-strata", symbolic_strata),
        ("stratifiability-and-minimality", stratifiability_and_minimality),
        ("winnow-shortcut", winnow_shortcut),
        ("oracle-suite", oracle_suite),
        ("qe-soundness", qe_soundness),
        ("benchmark-shape", benchmark_shape),
    ];
    let mut unexpected = Vec::new();
    for (name, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let known = KNOWN.iter().find(|(k, _)| *k == name).map(|(_, why)| *why);
        match (&outcome, known) {
            (Ok(note), None) => println!("PASS {name}: {note}"),
            (Ok(note), Some(_)) => {
                println!("PASS {name}: {note} (listed as a known failure; update the list)");
                unexpected.push(name);
            }
            (Err(why), Some(analysis)) => println!("FAIL {name}: {why}\n     known: {analysis}"),
            (Err(why), None) => {
                println!("FAIL {name}: {why}");
                unexpected.push(name);
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcomes: {unexpected:?}");
        std::process::exit(1);
    }
}
