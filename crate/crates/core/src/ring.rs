//! The graded rings `H^n`.
//!
//! The summand `_b(H^n)_a` is `F(W(b)a){n}`: labelings of the circles formed by the arcs of
//! `a` and of `b` drawn on the same `2n` points. Multiplication glues two such pictures and
//! contracts the middle `b W(b)` by `n` saddles.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frobenius::{comult_label, mult_label, TensorVector};
use crate::matrix::{binomial, det_bareiss};
use crate::planar::{matchings, Matching};
use crate::surgery::{closed_ranks, Diagram};

/// Element of `H^n`: a labeling vector for each idempotent pair `(b, a)` (indices into `B^n`).
pub type RingElement = BTreeMap<(usize, usize), TensorVector>;

/// `W(b)a` drawn on nodes `offset..offset+2n`; returns the diagram and the edge ids of `b`'s arcs.
fn config_into(d: &mut Diagram, offset: usize, b: &Matching, a: &Matching) -> Vec<usize> {
    for (p, q) in a.arcs() {
        d.add_edge(offset + p, offset + q);
    }
    b.arcs()
        .into_iter()
        .map(|(p, q)| d.add_edge(offset + p, offset + q))
        .collect()
}

/// Circle ids of `W(b)a` on the points `0..2n`.
pub fn config_circles(b: &Matching, a: &Matching) -> Vec<usize> {
    let mut d = Diagram::with_nodes(0, 0, 2 * b.n());
    config_into(&mut d, 0, b, a);
    d.circles()
}

#[derive(Debug)]
pub struct ArcRing {
    n: usize,
    basis: Arc<Vec<Matching>>,
    circles: Vec<Vec<Vec<usize>>>,
    table: OnceLock<Option<MultTable>>,
}

/// Structure constants on pairs of basis elements, keyed by `(c, b, a, x_bits, y_bits)`.
#[derive(Debug)]
pub struct MultTable {
    entries: BTreeMap<(usize, usize, usize, u64, u64), TensorVector>,
}

impl MultTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One basis element of `H^n`: component `(b, a)` and a labeling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RingBasis {
    pub left: usize,
    pub right: usize,
    pub bits: u64,
}

impl ArcRing {
    pub fn new(n: usize) -> Self {
        let basis = matchings(n);
        let circles = basis
            .iter()
            .map(|b| basis.iter().map(|a| config_circles(b, a)).collect())
            .collect();
        Self {
            n,
            basis,
            circles,
            table: OnceLock::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matchings(&self) -> &[Matching] {
        &self.basis
    }

    /// Number of circles of `W(b)a`.
    pub fn circle_count(&self, b: usize, a: usize) -> usize {
        self.circles[b][a].len()
    }

    pub fn circle_ids(&self, b: usize, a: usize) -> &[usize] {
        &self.circles[b][a]
    }

    /// Graded ranks of `_b(H^n)_a`.
    pub fn component_ranks(&self, b: usize, a: usize) -> BTreeMap<i32, u64> {
        closed_ranks(self.circle_count(b, a), self.n as i32)
    }

    /// Graded ranks of the whole ring.
    pub fn graded_ranks(&self) -> BTreeMap<i32, u64> {
        let mut out = BTreeMap::new();
        for b in 0..self.basis.len() {
            for a in 0..self.basis.len() {
                for (d, r) in self.component_ranks(b, a) {
                    *out.entry(d).or_insert(0) += r;
                }
            }
        }
        out
    }

    pub fn rank(&self) -> u64 {
        self.graded_ranks().values().sum()
    }

    /// The standard basis in order: components `(b, a)` lexicographically, then labelings.
    pub fn standard_basis(&self) -> Vec<RingBasis> {
        let mut out = Vec::new();
        for b in 0..self.basis.len() {
            for a in 0..self.basis.len() {
                for bits in 0..1u64 << self.circle_count(b, a) {
                    out.push(RingBasis { left: b, right: a, bits });
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, x: RingBasis) -> TensorVector {
        let ids = &self.circles[x.left][x.right];
        let labels: Vec<(usize, bool)> = ids
            .iter()
            .enumerate()
            .map(|(k, &id)| (id, x.bits >> k & 1 == 1))
            .collect();
        TensorVector::basis(&labels, self.n as i32)
    }

    pub fn element(&self, x: RingBasis) -> RingElement {
        [((x.left, x.right), self.basis_vector(x))].into_iter().collect()
    }

    /// The idempotent `1_a`: every circle of `W(a)a` labeled `1`.
    pub fn idempotent(&self, a: usize) -> RingElement {
        self.element(RingBasis { left: a, right: a, bits: 0 })
    }

    /// `1 = Σ_a 1_a`.
    pub fn unit(&self) -> RingElement {
        (0..self.basis.len()).flat_map(|a| self.idempotent(a)).collect()
    }

    fn check(&self, x: &RingElement) -> Result<()> {
        for (&(b, a), v) in x {
            if b >= self.basis.len() || a >= self.basis.len() || v.circles() != self.circles[b][a] {
                return Err(Error::Incompatible(format!(
                    "element component ({b},{a}) does not belong to H^{}",
                    self.n
                )));
            }
        }
        Ok(())
    }

    /// Product of single components `x ∈ _c H _b` and `y ∈ _b H _a`, contracting the
    /// arcs of `b` in the given order.
    pub fn multiply_components(
        &self,
        (c, b): (usize, usize),
        x: &TensorVector,
        a: usize,
        y: &TensorVector,
        order: &[usize],
    ) -> Result<TensorVector> {
        let n2 = 2 * self.n;
        let (bm, am, cm) = (&self.basis[b], &self.basis[a], &self.basis[c]);
        let mut d = Diagram::with_nodes(0, 0, 2 * n2);
        // Lower picture W(b)a on nodes 0..2n, upper picture W(c)b on nodes 2n..4n.
        let lower_caps = config_into(&mut d, 0, bm, am);
        let mut upper_cups = Vec::new();
        for (p, q) in bm.arcs() {
            upper_cups.push(d.add_edge(n2 + p, n2 + q));
        }
        for (p, q) in cm.arcs() {
            d.add_edge(n2 + p, n2 + q);
        }
        let shift: BTreeMap<usize, usize> = x.circles().iter().map(|&i| (i, i + n2)).collect();
        let mut v = y.tensor(&x.renamed(&shift))?;
        for &k in order {
            v = d.saddle_map(lower_caps[k], upper_cups[k], &v)?;
        }
        debug_assert_eq!(v.circles(), self.circles[c][a].as_slice());
        Ok(v.with_shift(self.n as i32))
    }

    /// `x · y` computed by surgery, saddles in arc-index order.
    pub fn multiply(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        let order: Vec<usize> = (0..self.n).collect();
        self.multiply_with_order(x, y, &order)
    }

    pub fn multiply_with_order(
        &self,
        x: &RingElement,
        y: &RingElement,
        order: &[usize],
    ) -> Result<RingElement> {
        self.check(x)?;
        self.check(y)?;
        let mut out: RingElement = BTreeMap::new();
        for (&(c, b), xv) in x {
            for (&(b2, a), yv) in y {
                if b != b2 {
                    continue;
                }
                let p = self.multiply_components((c, b), xv, a, yv, order)?;
                accumulate(&mut out, (c, a), p);
            }
        }
        Ok(out)
    }

    /// Memoized structure constants, available for `n <= 3`.
    pub fn table(&self) -> Option<&MultTable> {
        self.table
            .get_or_init(|| {
                if self.n > 3 {
                    return None;
                }
                let order: Vec<usize> = (0..self.n).collect();
                let k = self.basis.len();
                let mut entries = BTreeMap::new();
                for c in 0..k {
                    for b in 0..k {
                        for a in 0..k {
                            for xb in 0..1u64 << self.circle_count(c, b) {
                                for yb in 0..1u64 << self.circle_count(b, a) {
                                    let x = self.basis_vector(RingBasis { left: c, right: b, bits: xb });
                                    let y = self.basis_vector(RingBasis { left: b, right: a, bits: yb });
                                    let p = self
                                        .multiply_components((c, b), &x, a, &y, &order)
                                        .expect("well-formed basis product");
                                    entries.insert((c, b, a, xb, yb), p);
                                }
                            }
                        }
                    }
                }
                Some(MultTable { entries })
            })
            .as_ref()
    }

    /// `x · y` through the memoized table when it exists, by surgery otherwise.
    pub fn multiply_cached(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        let Some(t) = self.table() else {
            return self.multiply(x, y);
        };
        self.check(x)?;
        self.check(y)?;
        let mut out: RingElement = BTreeMap::new();
        for (&(c, b), xv) in x {
            for (&(b2, a), yv) in y {
                if b != b2 {
                    continue;
                }
                for (xb, xc) in xv.terms() {
                    for (yb, yc) in yv.terms() {
                        let p = t.entries[&(c, b, a, xb, yb)].scaled(xc * yc);
                        accumulate(&mut out, (c, a), p);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `ε^{⊗n}` on diagonal components, zero elsewhere.
    pub fn trace(&self, x: &RingElement) -> i64 {
        x.iter()
            .filter(|((b, a), _)| b == a)
            .map(|(_, v)| {
                let all_x = (1u64 << v.circles().len()) - 1;
                v.coeff(all_x)
            })
            .sum()
    }

    /// The involution: transpose the idempotent pair and swap `1 ↔ X` on every circle.
    pub fn star(&self, x: RingBasis) -> RingBasis {
        let k = self.circle_count(x.left, x.right);
        RingBasis {
            left: x.right,
            right: x.left,
            bits: !x.bits & ((1u64 << k) - 1),
        }
    }

    /// Gram matrix `Tr(x·y)` on the standard basis.
    pub fn gram(&self) -> Result<GramReport> {
        let basis = self.standard_basis();
        let index: BTreeMap<RingBasis, usize> = basis.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut nonzero = Vec::new();
        for (i, &x) in basis.iter().enumerate() {
            let xe = self.element(x);
            for (j, &y) in basis.iter().enumerate() {
                // Tr vanishes off the diagonal, so only y ∈ _a H _b can pair with x ∈ _b H _a.
                if y.left != x.right || y.right != x.left {
                    continue;
                }
                let t = self.trace(&self.multiply_cached(&xe, &self.element(y))?);
                if t != 0 {
                    nonzero.push((i, j, t));
                }
            }
        }
        let size = basis.len();
        let mut row_hits = vec![0usize; size];
        let mut col_hits = vec![0usize; size];
        let mut all_one = true;
        let mut matches_star = true;
        for &(i, j, t) in &nonzero {
            row_hits[i] += 1;
            col_hits[j] += 1;
            all_one &= t == 1;
            matches_star &= index[&self.star(basis[i])] == j;
        }
        let is_permutation =
            all_one && row_hits.iter().all(|&h| h == 1) && col_hits.iter().all(|&h| h == 1);
        Ok(GramReport {
            n: self.n,
            size,
            nonzero,
            is_permutation,
            pairs_with_star: matches_star && is_permutation,
        })
    }

    /// Graded ranks of `P_a = ⊕_b _b(H^n)_a`.
    pub fn projective_column(&self, a: usize) -> BTreeMap<i32, u64> {
        let mut out = BTreeMap::new();
        for b in 0..self.basis.len() {
            for (d, r) in self.component_ranks(b, a) {
                *out.entry(d).or_insert(0) += r;
            }
        }
        out
    }
}

fn accumulate(out: &mut RingElement, key: (usize, usize), v: TensorVector) {
    if v.is_zero() {
        return;
    }
    match out.get_mut(&key) {
        Some(w) => {
            w.add_assign(&v);
            if w.is_zero() {
                out.remove(&key);
            }
        }
        None => {
            out.insert(key, v);
        }
    }
}

/// One product `x · y` with `x ∈ _a(H^2)_b`, `y ∈ _b(H^2)_a` labeled `u`, `v`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeltaMEntry {
    pub x_label: char,
    pub y_label: char,
    /// Surgery result as `(labeling bits, coefficient)` on the two circles of `W(a)a`.
    pub surgery: Vec<(u64, i64)>,
    pub expected: Vec<(u64, i64)>,
    pub agrees: bool,
}

fn label_char(x: bool) -> char {
    if x {
        'X'
    } else {
        '1'
    }
}

/// Compares the product `_a(H^2)_b ⊗ _b(H^2)_a → _a(H^2)_a` with `Δ ∘ m` on the four
/// labelings, for both choices of `a ≠ b`.
pub fn delta_m_check() -> Result<Vec<DeltaMEntry>> {
    let ring = ArcRing::new(2);
    let mut out = Vec::new();
    for (a, b) in [(0, 1), (1, 0)] {
        for (u, v) in [(false, false), (false, true), (true, false), (true, true)] {
            let x = ring.element(RingBasis { left: a, right: b, bits: u as u64 });
            let y = ring.element(RingBasis { left: b, right: a, bits: v as u64 });
            let p = ring.multiply(&x, &y)?;
            let surgery: Vec<(u64, i64)> = p.get(&(a, a)).map_or(Vec::new(), |t| t.terms().collect());
            let mut expected: BTreeMap<u64, i64> = BTreeMap::new();
            if let Some(w) = mult_label(u, v) {
                for &(l, r) in comult_label(w) {
                    *expected.entry(l as u64 | (r as u64) << 1).or_insert(0) += 1;
                }
            }
            let expected: Vec<(u64, i64)> = expected.into_iter().collect();
            let only_aa = p.keys().all(|&k| k == (a, a));
            out.push(DeltaMEntry {
                x_label: label_char(u),
                y_label: label_char(v),
                agrees: only_aa && surgery == expected,
                surgery,
                expected,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GramReport {
    pub n: usize,
    pub size: usize,
    /// Nonzero entries `(row, column, value)`.
    pub nonzero: Vec<(usize, usize, i64)>,
    pub is_permutation: bool,
    /// Whether the permutation is `x ↦ x*`.
    pub pairs_with_star: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CartanReport {
    pub n: usize,
    pub matrix: Vec<Vec<u64>>,
    pub determinant: String,
    pub meander_prediction: String,
    pub agrees: bool,
}

/// `c_ab = 2^{k(a,b)}` over `B^n × B^n`.
pub fn cartan_matrix(n: usize) -> Vec<Vec<u64>> {
    let basis = matchings(n);
    basis
        .iter()
        .map(|a| {
            basis
                .iter()
                .map(|b| 1u64 << config_circles(a, b).len())
                .collect()
        })
        .collect()
}

/// `∏_{i=1}^n (i+1)^{c_{n,i}}` with `c_{n,i} = C(2n,n-i) - 2C(2n,n-i-1) + C(2n,n-i-2)`.
pub fn meander_determinant(n: usize) -> BigInt {
    let n = n as i64;
    let mut acc = BigInt::one();
    for i in 1..=n {
        let e = binomial(2 * n, n - i) - BigInt::from(2) * binomial(2 * n, n - i - 1)
            + binomial(2 * n, n - i - 2);
        let e: u32 = e.try_into().expect("exponent fits in u32");
        acc *= BigInt::from(i + 1).pow(e);
    }
    acc
}

pub fn cartan_report(n: usize) -> CartanReport {
    let m = cartan_matrix(n);
    let big: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let det = det_bareiss(&big);
    let pred = meander_determinant(n);
    CartanReport {
        n,
        matrix: m,
        agrees: det == pred && !det.is_zero(),
        determinant: det.to_string(),
        meander_prediction: pred.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rings() {
        assert_eq!(ArcRing::new(0).graded_ranks(), [(0, 1)].into_iter().collect());
        assert_eq!(ArcRing::new(1).graded_ranks(), [(0, 1), (2, 1)].into_iter().collect());
        let r = ArcRing::new(2);
        // B^2 = {[2,1,4,3], [4,3,2,1]}: adjacent pairs first.
        assert_eq!(r.component_ranks(0, 0), [(0, 1), (2, 2), (4, 1)].into_iter().collect());
        assert_eq!(r.component_ranks(1, 0), [(1, 1), (3, 1)].into_iter().collect());
        assert_eq!(r.rank(), 12);
    }

    #[test]
    fn product_through_other_idempotent_is_delta_m() {
        let entries = delta_m_check().unwrap();
        assert_eq!(entries.len(), 8);
        assert!(entries.iter().all(|e| e.agrees), "{entries:?}");
    }

    #[test]
    fn idempotents_act_as_unit() {
        for n in 0..=2 {
            let r = ArcRing::new(n);
            let one = r.unit();
            for x in r.standard_basis() {
                let xe = r.element(x);
                assert_eq!(r.multiply(&one, &xe).unwrap(), xe);
                assert_eq!(r.multiply(&xe, &one).unwrap(), xe);
                for c in 0..r.matchings().len() {
                    let p = r.multiply(&r.idempotent(c), &xe).unwrap();
                    assert_eq!(p.is_empty(), c != x.left);
                }
            }
        }
    }

    #[test]
    fn trace_values() {
        let r = ArcRing::new(2);
        for a in 0..2 {
            assert_eq!(r.trace(&r.idempotent(a)), 0);
            assert_eq!(r.trace(&r.element(RingBasis { left: a, right: a, bits: 3 })), 1);
        }
    }

    #[test]
    fn cartan_small() {
        assert_eq!(cartan_matrix(1), vec![vec![2]]);
        assert_eq!(cartan_matrix(2), vec![vec![4, 2], vec![2, 4]]);
        let rep = cartan_report(2);
        assert_eq!(rep.determinant, "12");
        assert!(rep.agrees);
        assert_eq!(meander_determinant(1), BigInt::from(2));
    }

    #[test]
    fn gram_n1_is_antidiagonal() {
        let g = ArcRing::new(1).gram().unwrap();
        assert!(g.is_permutation);
        assert_eq!(g.nonzero, vec![(0, 1, 1), (1, 0, 1)]);
        let g0 = ArcRing::new(0).gram().unwrap();
        assert_eq!(g0.nonzero, vec![(0, 0, 1)]);
    }

    #[test]
    fn table_matches_surgery() {
        let r = ArcRing::new(2);
        let basis = r.standard_basis();
        for &x in &basis {
            for &y in &basis {
                let (xe, ye) = (r.element(x), r.element(y));
                assert_eq!(r.multiply(&xe, &ye).unwrap(), r.multiply_cached(&xe, &ye).unwrap());
            }
        }
    }
}
