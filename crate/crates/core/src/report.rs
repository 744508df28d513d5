//! Serializable results for the command-line tool. Every JSON document carries
//! `"schema": "arcring/1"` and the name of the command that produced it.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::coeff::{F2, Q};
use crate::complex::{build_cube, ComplexSummary, HomologyTable};
use crate::corpus::{in_context, move_pair, Move};
use crate::error::Result;
use crate::invariants::{bracket, equivalent, jones_report, kauffman, JonesReport, Verdict};
use crate::laurent::LaurentPoly;
use crate::planar::{catalan, matchings, Matching, TLMorphism};
use crate::ring::{cartan_report, ArcRing, CartanReport, RingBasis};
use crate::word::TangleWord;

pub const SCHEMA: &str = "arcring/1";

/// A report wrapped with the schema tag.
#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema: &'static str,
    pub command: &'a str,
    #[serde(flatten)]
    pub body: &'a T,
}

pub fn envelope<'a, T: Serialize>(command: &'a str, body: &'a T) -> Envelope<'a, T> {
    Envelope { schema: SCHEMA, command, body }
}

/// Reads back a JSON document written by `envelope`, checking the schema and command.
pub fn read_report<T: DeserializeOwned>(json: &str, command: &str) -> std::result::Result<T, String> {
    let v: serde_json::Value = serde_json::from_str(json).map_err(|e| e.to_string())?;
    if v.get("schema").and_then(|s| s.as_str()) != Some(SCHEMA) {
        return Err(format!("expected schema {SCHEMA}"));
    }
    if v.get("command").and_then(|s| s.as_str()) != Some(command) {
        return Err(format!("expected a `{command}` report"));
    }
    serde_json::from_value(v).map_err(|e| e.to_string())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComponentRanks {
    pub left: Matching,
    pub right: Matching,
    pub circles: usize,
    pub ranks: BTreeMap<i32, u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RingReport {
    pub n: usize,
    pub matchings: usize,
    pub catalan: u64,
    pub basis: Vec<Matching>,
    pub rank: u64,
    pub graded_ranks: BTreeMap<i32, u64>,
    pub components: Vec<ComponentRanks>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<ProductEntry>>,
}

/// A nonzero product of two standard basis elements.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProductEntry {
    pub x: RingBasis,
    pub y: RingBasis,
    pub product: Vec<(RingBasis, i64)>,
}

/// All nonzero products of standard basis elements, computed by surgery.
pub fn multiplication_table(ring: &ArcRing) -> Result<Vec<ProductEntry>> {
    let basis = ring.standard_basis();
    let mut out = Vec::new();
    for &x in &basis {
        for &y in basis.iter().filter(|y| y.left == x.right) {
            let p = ring.multiply(&ring.element(x), &ring.element(y))?;
            let mut product = Vec::new();
            for (&(c, a), v) in &p {
                let ids = ring.circle_ids(c, a);
                for (bits, coeff) in v.terms() {
                    let mut b = 0u64;
                    for (k, &id) in ids.iter().enumerate() {
                        if v.label(bits, id) == Some(true) {
                            b |= 1 << k;
                        }
                    }
                    product.push((RingBasis { left: c, right: a, bits: b }, coeff));
                }
            }
            if !product.is_empty() {
                product.sort();
                out.push(ProductEntry { x, y, product });
            }
        }
    }
    Ok(out)
}

pub fn ring_report(n: usize, with_table: bool) -> Result<RingReport> {
    let ring = ArcRing::new(n);
    let basis = matchings(n);
    let mut components = Vec::new();
    for b in 0..basis.len() {
        for a in 0..basis.len() {
            components.push(ComponentRanks {
                left: basis[b].clone(),
                right: basis[a].clone(),
                circles: ring.circle_count(b, a),
                ranks: ring.component_ranks(b, a),
            });
        }
    }
    Ok(RingReport {
        n,
        matchings: basis.len(),
        catalan: catalan(n),
        basis: basis.to_vec(),
        rank: ring.rank(),
        graded_ranks: ring.graded_ranks(),
        components,
        table: if with_table { Some(multiplication_table(&ring)?) } else { None },
    })
}

fn ranks_text(r: &BTreeMap<i32, u64>) -> String {
    let parts: Vec<String> = r.iter().map(|(d, k)| format!("{d}:{k}")).collect();
    format!("{{{}}}", parts.join(", "))
}

impl fmt::Display for RingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "H^{}: {} matchings, rank {}", self.n, self.matchings, self.rank)?;
        writeln!(f, "graded ranks {}", ranks_text(&self.graded_ranks))?;
        for c in &self.components {
            writeln!(f, "  {} x {}: {} circle(s) {}", c.left, c.right, c.circles, ranks_text(&c.ranks))?;
        }
        if let Some(t) = &self.table {
            writeln!(f, "{} nonzero products of basis elements", t.len())?;
        }
        Ok(())
    }
}

pub fn cartan(n: usize) -> CartanReport {
    cartan_report(n)
}

pub fn cartan_text(r: &CartanReport) -> String {
    let mut s = String::new();
    for row in &r.matrix {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "{}", cells.join(" "));
    }
    let _ = writeln!(s, "det = {}", r.determinant);
    let _ = writeln!(s, "product formula = {} ({})", r.meander_prediction, if r.agrees { "agrees" } else { "DIFFERS" });
    s
}

fn tl_text(m: &TLMorphism) -> String {
    let parts: Vec<String> = m.terms().map(|(t, c)| format!("({c}) {t}")).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BracketReport {
    pub word: String,
    pub crossings: usize,
    pub x: usize,
    pub y: usize,
    pub components: usize,
    pub bracket: TLMorphism,
    pub kauffman: TLMorphism,
    pub jones: Option<LaurentPoly>,
}

pub fn bracket_report(word: &TangleWord) -> Result<BracketReport> {
    let o = word.orientation()?;
    let k = kauffman(word)?;
    let closed = word.bottom_points() == 0 && word.top_points() == 0;
    Ok(BracketReport {
        word: word.to_string(),
        crossings: word.crossings(),
        x: o.x,
        y: o.y,
        components: o.components,
        bracket: bracket(word)?,
        jones: closed.then(|| k.coeff(&crate::planar::FlatTangle::vert(0))),
        kauffman: k,
    })
}

impl fmt::Display for BracketReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "word: {}", self.word)?;
        writeln!(f, "crossings {} (x = {}, y = {}), components {}", self.crossings, self.x, self.y, self.components)?;
        writeln!(f, "bracket  = {}", tl_text(&self.bracket))?;
        writeln!(f, "kauffman = {}", tl_text(&self.kauffman))?;
        if let Some(j) = &self.jones {
            writeln!(f, "jones    = {j}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coefficients {
    Z,
    Q,
    F2,
}

impl Coefficients {
    fn symbol(self) -> &'static str {
        match self {
            Coefficients::Z => "Z",
            Coefficients::Q => "Q",
            Coefficients::F2 => "F2",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KhReport {
    pub word: String,
    pub coefficients: Coefficients,
    pub homology: HomologyTable,
    pub total_rank: u64,
    pub torsion_summands: usize,
    pub jones: JonesReport,
}

pub fn kh_report(word: &TangleWord, coefficients: Coefficients, simplify: bool) -> Result<KhReport> {
    let mut c = build_cube(word)?;
    if simplify {
        c = c.simplify();
    }
    let homology = match coefficients {
        Coefficients::Z => c.homology()?,
        Coefficients::Q => c.homology_with::<Q>()?,
        Coefficients::F2 => c.homology_with::<F2>()?,
    };
    Ok(KhReport {
        word: word.to_string(),
        coefficients,
        total_rank: homology.total_rank(),
        torsion_summands: homology.torsion_count(),
        jones: jones_report(word)?,
        homology,
    })
}

fn table_text(h: &HomologyTable, ring: &str) -> String {
    h.to_string().replace('Z', ring).replace(&format!("{ring}/"), "Z/")
}

impl fmt::Display for KhReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "word: {}", self.word)?;
        write!(f, "{}", table_text(&self.homology, self.coefficients.symbol()))?;
        writeln!(f, "total rank {}, torsion summands {}", self.total_rank, self.torsion_summands)?;
        writeln!(
            f,
            "jones: state sum {} / homology {} ({})",
            self.jones.state_sum,
            self.jones.from_homology,
            if self.jones.agree { "agree" } else { "DISAGREE" }
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClosureEntry {
    pub top: Matching,
    pub bottom: Matching,
    pub homology: HomologyTable,
}

fn closure_entries(c: &crate::complex::BoundedComplex<i64>) -> Vec<ClosureEntry> {
    let (top, bottom) = (matchings(c.n_top()), matchings(c.n_bottom()));
    c.closures()
        .into_iter()
        .map(|((t, b), homology)| ClosureEntry { top: top[t].clone(), bottom: bottom[b].clone(), homology })
        .collect()
}

fn closures_text(f: &mut fmt::Formatter<'_>, entries: &[ClosureEntry]) -> fmt::Result {
    for e in entries {
        writeln!(f, "closure top {} bottom {}:", e.top, e.bottom)?;
        for line in e.homology.to_string().lines() {
            writeln!(f, "  {line}")?;
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TangleReport {
    pub word: String,
    pub simplified: bool,
    pub is_complex: bool,
    pub complex: ComplexSummary,
    pub euler_class: TLMorphism,
    pub kauffman: TLMorphism,
    pub euler_matches_kauffman: bool,
    pub closures: Vec<ClosureEntry>,
}

pub fn tangle_report(word: &TangleWord, simplify: bool) -> Result<TangleReport> {
    let mut c = build_cube(word)?;
    if simplify {
        c = c.simplify();
    }
    let euler_class = c.euler_class();
    let k = kauffman(word)?;
    Ok(TangleReport {
        word: word.to_string(),
        simplified: simplify,
        is_complex: c.is_complex(),
        complex: c.summary(),
        euler_matches_kauffman: euler_class == k,
        euler_class,
        kauffman: k,
        closures: closure_entries(&c),
    })
}

impl fmt::Display for TangleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "word: {}", self.word)?;
        writeln!(f, "complex ({}), d^2 = 0: {}", if self.simplified { "simplified" } else { "cube" }, self.is_complex)?;
        for d in &self.complex.degrees {
            let s: Vec<String> = d.summands.iter().map(|s| s.to_string()).collect();
            writeln!(f, "  degree {:>3}: {}", d.degree, if s.is_empty() { "0".into() } else { s.join(" + ") })?;
        }
        writeln!(f, "euler class = {}", tl_text(&self.euler_class))?;
        writeln!(f, "matches kauffman: {}", self.euler_matches_kauffman)?;
        closures_text(f, &self.closures)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClosuresReport {
    pub word: String,
    pub closures: Vec<ClosureEntry>,
}

pub fn closures_report(word: &TangleWord) -> Result<ClosuresReport> {
    let c = build_cube(word)?.simplify();
    Ok(ClosuresReport { word: word.to_string(), closures: closure_entries(&c) })
}

impl fmt::Display for ClosuresReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "word: {}", self.word)?;
        closures_text(f, &self.closures)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyEntry {
    #[serde(rename = "move")]
    pub mv: Move,
    pub strands: usize,
    pub before: String,
    pub after: String,
    pub verdict: Verdict,
    pub euler_classes_agree: bool,
    pub cores_agree: bool,
    pub closures_agree: bool,
    pub closures_compared: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub entries: Vec<VerifyEntry>,
    pub all_equivalent: bool,
}

/// Runs each move on 2, 4, ... `max_strands` strands inside the fixed outer context.
pub fn verify_report(moves: &[Move], max_strands: usize) -> Result<VerifyReport> {
    let mut entries = Vec::new();
    for &mv in moves {
        for k in (2..=max_strands).step_by(2) {
            let (l, r) = move_pair(mv, k)?;
            let (l, r) = (in_context(&l)?, in_context(&r)?);
            let e = equivalent(&l, &r)?;
            entries.push(VerifyEntry {
                mv,
                strands: k,
                before: l.to_string(),
                after: r.to_string(),
                verdict: e.verdict,
                euler_classes_agree: e.euler_classes_agree,
                cores_agree: e.cores_agree,
                closures_agree: e.closures_agree,
                closures_compared: e.closures_compared,
            });
        }
    }
    let all_equivalent = entries.iter().all(|e| e.verdict == Verdict::EquivalentEvidence);
    Ok(VerifyReport { entries, all_equivalent })
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(
                f,
                "{:<4} {} strands: {:?} (euler {}, cores {}, closures {}/{})",
                e.mv.code(),
                e.strands,
                e.verdict,
                e.euler_classes_agree,
                e.cores_agree,
                e.closures_agree,
                e.closures_compared
            )?;
        }
        writeln!(f, "all equivalent: {}", self.all_equivalent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_tangle;

    #[test]
    fn envelopes_carry_schema() {
        let r = ring_report(1, true).unwrap();
        let v = serde_json::to_value(envelope("ring", &r)).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["command"], "ring");
        assert_eq!(v["rank"], 2);
        // 1·1 = 1, 1·X = X, X·1 = X.
        assert_eq!(r.table.unwrap().len(), 3);
    }

    fn round_trip<T: Serialize + DeserializeOwned>(command: &str, r: &T) {
        let json = serde_json::to_string(&envelope(command, r)).unwrap();
        let back: T = read_report(&json, command).unwrap();
        assert_eq!(serde_json::to_string(&envelope(command, &back)).unwrap(), json);
        assert!(read_report::<T>(&json, "other").is_err());
    }

    #[test]
    fn reports_round_trip() {
        let t = parse_tangle("bottom 2; cup 3; x 2; xbar 1; cap 2").unwrap();
        let link = parse_tangle("cup 1; cup 2; x 3; x 3; cap 2; cap 1").unwrap();
        round_trip("ring", &ring_report(2, true).unwrap());
        round_trip("cartan", &cartan(3));
        round_trip("bracket", &bracket_report(&t).unwrap());
        round_trip("kh", &kh_report(&link, Coefficients::Z, true).unwrap());
        round_trip("tangle", &tangle_report(&t, true).unwrap());
        round_trip("closures", &closures_report(&t).unwrap());
        round_trip("verify", &verify_report(&[Move::Tangency], 2).unwrap());
    }

    #[test]
    fn bracket_of_curl() {
        let r = bracket_report(&parse_tangle("bottom 2; xbar 1; cap 1").unwrap()).unwrap();
        assert_eq!((r.x, r.y), (0, 1));
        assert!(r.jones.is_none());
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["kauffman"]["terms"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn kh_over_fields() {
        let t = parse_tangle("cup 1; cup 2; x 3; x 3; x 3; cap 2; cap 1").unwrap();
        let z = kh_report(&t, Coefficients::Z, true).unwrap();
        let q = kh_report(&t, Coefficients::Q, false).unwrap();
        let f2 = kh_report(&t, Coefficients::F2, false).unwrap();
        assert_eq!(z.torsion_summands, 1);
        assert_eq!(q.total_rank, 4);
        assert_eq!(f2.total_rank, 6);
        assert!(z.to_string().contains("Z/2"));
        assert!(f2.to_string().contains("F2"));
    }
}
