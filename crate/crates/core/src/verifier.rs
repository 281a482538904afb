//! Per-word certificates for the distinct-square bounds.
//!
//! Every comparison is exact: counts are integers, loads and harmonic sums
//! are `BigRational`, and `√n` only ever appears squared.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rank::independence_rank;
use crate::rauzy::{build_union, cs_set_in, cycle_vector, max_conj_power, Circuit, RauzyUnion};
use crate::squares::SquareInventory;
use crate::word::Word;
use crate::words::{conj_powers_are_factors, lyndon_factors, FactorIndex, LyndonRoot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = "=")]
    Equal,
    #[serde(rename = ">=")]
    AtLeast,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::AtMost => "<=",
            Relation::Equal => "=",
            Relation::AtLeast => ">=",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub relation: Relation,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl CheckRecord {
    fn new(name: impl Into<String>, relation: Relation, lhs: impl ToString, rhs: impl ToString, pass: bool) -> Self {
        CheckRecord {
            name: name.into(),
            relation,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            pass,
            witness: None,
        }
    }
}

impl fmt::Display for CheckRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} {} {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.lhs,
            self.relation,
            self.rhs
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub word: Word,
    pub n: usize,
    pub sigma: usize,
    pub sq_total: usize,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

/// Everything the checks need about one word, computed once.
pub struct Analysis<'a> {
    word: &'a [u8],
    factors: FactorIndex<'a>,
    inventory: SquareInventory,
    roots: Vec<LyndonRoot>,
    cs_counts: BTreeMap<LyndonRoot, usize>,
}

impl<'a> Analysis<'a> {
    pub fn new(word: &'a [u8]) -> Self {
        let factors = FactorIndex::new(word);
        let inventory = SquareInventory::new(word);
        let roots = lyndon_factors(word);
        let cs_counts = roots
            .iter()
            .map(|z| {
                let c = (max_conj_power(z, &factors) + 1).saturating_sub(z.len());
                (z.clone(), c)
            })
            .collect();
        Analysis {
            word,
            factors,
            inventory,
            roots,
            cs_counts,
        }
    }

    pub fn word(&self) -> &'a [u8] {
        self.word
    }

    pub fn inventory(&self) -> &SquareInventory {
        &self.inventory
    }

    pub fn lyndon_roots(&self) -> &[LyndonRoot] {
        &self.roots
    }

    /// `|CS_w(z)|`, zero for words that are not Lyndon factors.
    pub fn cs_count(&self, z: &LyndonRoot) -> usize {
        self.cs_counts.get(z).copied().unwrap_or(0)
    }

    pub fn cs_total(&self) -> usize {
        self.cs_counts.values().sum()
    }

    pub fn circuits(&self, z: &LyndonRoot) -> Vec<Circuit> {
        cs_set_in(z, &self.factors)
    }

    pub fn all_circuits(&self) -> Vec<Circuit> {
        self.roots.iter().flat_map(|z| self.circuits(z)).collect()
    }

    fn witness(&self, root: Option<&LyndonRoot>) -> Value {
        let union = build_union(self.word);
        let circuits = match root {
            Some(z) => self.circuits(z),
            None => self.all_circuits(),
        };
        let vectors: Vec<Value> = circuits
            .iter()
            .map(|c| {
                let v = cycle_vector(c, union.arc_index()).expect("CS arcs are factors");
                Value::Array(
                    v.entries()
                        .map(|(i, e)| json!([union.arc_index().arc(i).to_string(), e]))
                        .collect(),
                )
            })
            .collect();
        json!({
            "word": Word::from(self.word).to_string(),
            "root": root.map(|z| z.to_string()),
            "circuits": circuits.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "vectors": vectors,
        })
    }
}

fn ratio(p: usize, q: usize) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn int(v: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `H_k = 1 + 1/2 + ... + 1/k`.
pub fn harmonic(k: usize) -> BigRational {
    (1..=k).fold(BigRational::zero(), |acc, i| acc + ratio(1, i))
}

/// `|SQ(w)| <= n - σ`.
pub fn check_sigma_bound(a: &Analysis<'_>) -> CheckRecord {
    let n = a.word.len();
    let sigma = Word::from(a.word).alphabet_size();
    let lhs = a.inventory.total();
    CheckRecord::new("sigma_bound", Relation::AtMost, lhs, n - sigma, lhs + sigma <= n)
}

/// `|SQ_w(z)| = |z|(r-1) + s` and `|CS_w(z)| >= 2|z|(r-1) + s + 1`.
pub fn check_sqs_cs(a: &Analysis<'_>, z: &LyndonRoot) -> Result<[CheckRecord; 2]> {
    let stats = a.inventory.root_stats(z)?;
    let sq = a.inventory.count_of(z);
    let cs = a.cs_count(z);
    let count = CheckRecord::new(
        format!("root_square_count[{z}]"),
        Relation::Equal,
        sq,
        stats.square_count(),
        sq == stats.square_count(),
    );
    let circuits = CheckRecord::new(
        format!("root_circuit_count[{z}]"),
        Relation::AtLeast,
        cs,
        stats.circuit_lower_bound(),
        cs >= stats.circuit_lower_bound(),
    );
    Ok([count, circuits])
}

/// `AVG_w(z) = |SQ_w(z)| / |CS_w(z)| <= |z| / (|z| + 1)`.
pub fn check_avg_bound(a: &Analysis<'_>, z: &LyndonRoot) -> Result<CheckRecord> {
    let cs = a.cs_count(z);
    if cs == 0 {
        return Err(Error::EmptyCircuitSet {
            word: Word::from(a.word).to_string(),
            root: z.to_string(),
        });
    }
    let sq = a.inventory.count_of(z);
    Ok(CheckRecord::new(
        format!("avg_load[{z}]"),
        Relation::AtMost,
        ratio(sq, cs),
        ratio(z.len(), z.len() + 1),
        sq * (z.len() + 1) <= z.len() * cs,
    ))
}

/// Every CS circuit at order `ℓ` carries a load of at most `(ℓ+1)/(ℓ+2)`.
///
/// The record shows the circuit whose load comes closest to (or exceeds)
/// its bound.
pub fn check_sqload(a: &Analysis<'_>) -> CheckRecord {
    let mut worst: Option<(BigRational, BigRational, BigRational, String)> = None;
    let mut pass = true;
    for z in &a.roots {
        let cs = a.cs_count(z);
        if cs == 0 {
            continue;
        }
        let sq = a.inventory.count_of(z);
        let load = ratio(sq, cs);
        for m in z.len()..z.len() + cs {
            let order = m - 1;
            let bound = ratio(order + 1, order + 2);
            pass &= sq * (order + 2) <= (order + 1) * cs;
            let slack = &load - &bound;
            if worst.as_ref().is_none_or(|(s, ..)| slack > *s) {
                worst = Some((slack, load.clone(), bound, format!("{z}@{order}")));
            }
        }
    }
    match worst {
        Some((_, load, bound, at)) => {
            CheckRecord::new(format!("circuit_load[{at}]"), Relation::AtMost, load, bound, pass)
        }
        None => CheckRecord::new("circuit_load", Relation::AtMost, 0, 0, true),
    }
}

/// With `L` the longest square half length:
/// if `L² < n`, `|SQ(w)| <= n - √n`;
/// otherwise `|SQ(w)| <= n - (H_{L+1} - 1)`.
pub fn check_counting_bound(a: &Analysis<'_>) -> CheckRecord {
    let n = a.word.len();
    let sq = a.inventory.total();
    let l = a.inventory.max_half_length();
    if l * l < n {
        // sq <= n - √n  <=>  n - sq >= 0 and (n - sq)² >= n
        let pass = sq <= n && (n - sq) * (n - sq) >= n;
        CheckRecord::new("short_square_bound", Relation::AtMost, sq, format!("{n}-sqrt({n})"), pass)
    } else {
        let rhs = int(n) - (harmonic(l + 1) - BigRational::one());
        let pass = int(sq) <= rhs;
        CheckRecord::new(format!("long_square_bound[L={l}]"), Relation::AtMost, sq, rhs, pass)
    }
}

fn structural_checks(a: &Analysis<'_>, union: &RauzyUnion) -> Vec<CheckRecord> {
    let n = a.word.len();
    let mut out = Vec::new();

    let cyc = union.cyclomatic_number();
    out.push(CheckRecord::new("cyclomatic_number", Relation::Equal, cyc, n, cyc == n));

    let circuits = a.all_circuits();
    let total = circuits.len();
    out.push(CheckRecord::new("cs_total", Relation::AtMost, total, n, total <= n));

    let smallest: HashSet<&Word> = circuits.iter().map(Circuit::smallest_arc).collect();
    out.push(CheckRecord::new(
        "cs_smallest_arcs_distinct",
        Relation::Equal,
        smallest.len(),
        total,
        smallest.len() == total,
    ));

    let vectors: Vec<_> = circuits
        .iter()
        .map(|c| cycle_vector(c, union.arc_index()).expect("CS arcs are factors"))
        .collect();
    let rank = independence_rank(&vectors).expect("vectors share one arc index");
    out.push(CheckRecord::new("cs_rank", Relation::Equal, rank, total, rank == total));

    // [z]_{M_max} ⊆ F(w) must imply [z]_{M_max - 1} ⊆ F(w).
    let tops: Vec<(&LyndonRoot, usize)> = a
        .roots
        .iter()
        .map(|z| (z, max_conj_power(z, &a.factors)))
        .filter(|&(_, top)| top >= 1)
        .collect();
    let ok = tops
        .iter()
        .filter(|(z, top)| conj_powers_are_factors(z, top - 1, &a.factors))
        .count();
    out.push(CheckRecord::new(
        "conj_power_downward_closed",
        Relation::Equal,
        ok,
        tops.len(),
        ok == tops.len(),
    ));
    out
}

/// Runs every check on `w`.
pub fn verify_all(w: &[u8]) -> VerificationReport {
    let a = Analysis::new(w);
    let union = build_union(w);
    let mut checks = Vec::new();

    if !w.is_empty() {
        checks.push(check_sigma_bound(&a));
    }
    for z in a.inventory.roots() {
        let records = check_sqs_cs(&a, z).expect("root has squares");
        checks.extend(records.into_iter().map(|mut r| {
            if !r.pass {
                r.witness = Some(a.witness(Some(z)));
            }
            r
        }));
    }
    for z in &a.roots {
        if a.cs_count(z) > 0 {
            let mut r = check_avg_bound(&a, z).expect("nonempty CS");
            if !r.pass {
                r.witness = Some(a.witness(Some(z)));
            }
            checks.push(r);
        }
    }
    checks.push(check_sqload(&a));
    if !w.is_empty() {
        checks.push(check_counting_bound(&a));
    }
    checks.extend(structural_checks(&a, &union));

    for r in checks.iter_mut() {
        if !r.pass && r.witness.is_none() {
            r.witness = Some(a.witness(None));
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    VerificationReport {
        word: Word::from(w),
        n: w.len(),
        sigma: Word::from(w).alphabet_size(),
        sq_total: a.inventory.total(),
        checks,
        pass,
    }
}

/// Verifies many words in parallel; reports come back in input order.
pub fn verify_many(words: &[Word]) -> Vec<VerificationReport> {
    words.par_iter().map(|w| verify_all(w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn root(s: &str) -> LyndonRoot {
        LyndonRoot::new(Word::parse_ascii(s).unwrap()).unwrap()
    }

    fn brief(r: &CheckRecord) -> (String, String, bool) {
        (r.lhs.clone(), r.rhs.clone(), r.pass)
    }

    #[test]
    fn sigma_bound() {
        let a = Analysis::new(b"aabaabaa");
        assert_eq!(brief(&check_sigma_bound(&a)), ("4".into(), "6".into(), true));
        let a = Analysis::new(b"a");
        assert_eq!(brief(&check_sigma_bound(&a)), ("0".into(), "0".into(), true));
        let a = Analysis::new(b"aaaa");
        assert_eq!(brief(&check_sigma_bound(&a)), ("2".into(), "3".into(), true));
    }

    #[test]
    fn sqs_cs_records() {
        let a = Analysis::new(b"aabaabaa");
        let [c, k] = check_sqs_cs(&a, &root("aab")).unwrap();
        assert_eq!(brief(&c), ("3".into(), "3".into(), true));
        assert_eq!(brief(&k), ("4".into(), "4".into(), true));
        let [c, k] = check_sqs_cs(&a, &root("a")).unwrap();
        assert_eq!(brief(&c), ("1".into(), "1".into(), true));
        assert_eq!(brief(&k), ("2".into(), "2".into(), true));
        assert!(matches!(check_sqs_cs(&a, &root("b")), Err(Error::NoSquares { .. })));

        let a = Analysis::new(b"aaaa");
        let [c, k] = check_sqs_cs(&a, &root("a")).unwrap();
        assert_eq!(brief(&c), ("2".into(), "2".into(), true));
        assert_eq!(brief(&k), ("4".into(), "4".into(), true));
    }

    #[test]
    fn avg_records() {
        let a = Analysis::new(b"aabaabaa");
        assert_eq!(brief(&check_avg_bound(&a, &root("aab")).unwrap()), ("3/4".into(), "3/4".into(), true));
        assert_eq!(brief(&check_avg_bound(&a, &root("b")).unwrap()), ("0".into(), "1/2".into(), true));
        assert!(matches!(
            check_avg_bound(&a, &root("abb")),
            Err(Error::EmptyCircuitSet { .. })
        ));
        let a = Analysis::new(b"aaaa");
        assert_eq!(brief(&check_avg_bound(&a, &root("a")).unwrap()), ("1/2".into(), "1/2".into(), true));
    }

    #[test]
    fn sqload_records() {
        let a = Analysis::new(b"aabaabaa");
        let r = check_sqload(&a);
        assert!(r.pass);
        // a at order 0 and aab at order 2 both sit exactly on the bound;
        // the first one found is reported.
        assert_eq!(brief(&r), ("1/2".into(), "1/2".into(), true));
        assert_eq!(r.name, "circuit_load[a@0]");
        let a = Analysis::new(b"abcd");
        assert!(check_sqload(&a).pass);
        let a = Analysis::new(b"aaaa");
        let r = check_sqload(&a);
        assert_eq!(brief(&r), ("1/2".into(), "1/2".into(), true));
    }

    #[test]
    fn counting_records() {
        let a = Analysis::new(b"aabaabaa");
        let r = check_counting_bound(&a);
        assert_eq!(brief(&r), ("4".into(), "83/12".into(), true));
        assert_eq!(int(8) - (harmonic(4) - BigRational::one()), ratio(83, 12));
        let a = Analysis::new(b"abc");
        assert_eq!(brief(&check_counting_bound(&a)), ("0".into(), "3-sqrt(3)".into(), true));
        let a = Analysis::new(b"aaaa");
        assert_eq!(brief(&check_counting_bound(&a)), ("2".into(), "19/6".into(), true));
    }

    /// A single letter squared has no square of length >= 2√2, yet one square
    /// exceeds 2 - √2. The literal short-square bound is reported as failing.
    #[test]
    fn short_bound_fails_on_a_letter_squared() {
        let r = verify_all(b"aa");
        let failed: Vec<&str> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["short_square_bound"]);
        assert!(r.checks.iter().find(|c| !c.pass).unwrap().witness.is_some());
        for w in [&b"aab"[..], b"aaa", b"abb", b"a"] {
            assert!(check_counting_bound(&Analysis::new(w)).pass);
        }
    }

    #[test]
    fn full_reports() {
        let r = verify_all(b"aabaabaa");
        assert!(r.pass, "{:#?}", r.checks);
        assert_eq!((r.n, r.sigma, r.sq_total), (8, 2, 4));
        assert!(r.checks.iter().any(|c| c.name == "cs_rank" && c.lhs == "8"));
        let r = verify_all(b"");
        assert!(r.pass);
        let json = serde_json::to_value(verify_all(b"abab")).unwrap();
        assert_eq!(json["word"], "abab");
        assert_eq!(json["sq_total"], 1);
        assert!(json["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
        assert!(json["checks"][0].get("witness").is_none());
    }

    #[test]
    fn witness_shape() {
        let a = Analysis::new(b"aabaabaa");
        let w = a.witness(Some(&root("ab")));
        assert_eq!(w["circuits"], json!(["(ab, ba)"]));
        assert_eq!(w["vectors"], json!([[["ab", 1], ["ba", 1]]]));
    }
}
