//! The rank-two Frobenius algebra `A = Z{1, X}` and elements of its tensor powers.
//!
//! A basis labeling of `k` circles is a bitmask; a set bit means the circle carries `X`
//! (degree `+1`), a clear bit means `1` (degree `-1`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multiplication on labels: `1·1 = 1`, `1·X = X·1 = X`, `X·X = 0`.
pub fn mult_label(a: bool, b: bool) -> Option<bool> {
    if a && b {
        None
    } else {
        Some(a || b)
    }
}

/// Comultiplication on labels: `Δ(1) = 1⊗X + X⊗1`, `Δ(X) = X⊗X`.
pub fn comult_label(a: bool) -> &'static [(bool, bool)] {
    if a {
        &[(true, true)]
    } else {
        &[(false, true), (true, false)]
    }
}

/// Counit: `ε(1) = 0`, `ε(X) = 1`.
pub fn counit_label(a: bool) -> i64 {
    a as i64
}

/// Sparse integer combination of `{1, X}`-labelings of named circles, with a grading shift.
///
/// Circle identifiers are kept sorted; bit `k` of a labeling refers to `circles[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorVector {
    circles: Vec<usize>,
    terms: BTreeMap<u64, i64>,
    shift: i32,
}

fn remap_bits(bits: u64, map: &[Option<usize>]) -> u64 {
    let mut out = 0;
    for (p, np) in map.iter().enumerate() {
        if let Some(np) = np {
            if bits >> p & 1 == 1 {
                out |= 1 << np;
            }
        }
    }
    out
}

impl TensorVector {
    pub fn zero(mut circles: Vec<usize>, shift: i32) -> Self {
        circles.sort_unstable();
        circles.dedup();
        assert!(circles.len() < 64, "at most 63 circles supported");
        Self {
            circles,
            terms: BTreeMap::new(),
            shift,
        }
    }

    /// A single basis labeling given as `(circle id, is_X)` pairs covering every circle.
    pub fn basis(labels: &[(usize, bool)], shift: i32) -> Self {
        let mut v = Self::zero(labels.iter().map(|l| l.0).collect(), shift);
        let mut bits = 0;
        for &(id, x) in labels {
            if x {
                bits |= 1 << v.position(id).expect("circle present");
            }
        }
        v.add_term(bits, 1);
        v
    }

    /// The scalar `c` in `A^{⊗0}`.
    pub fn scalar(c: i64, shift: i32) -> Self {
        let mut v = Self::zero(Vec::new(), shift);
        v.add_term(0, c);
        v
    }

    pub fn circles(&self) -> &[usize] {
        &self.circles
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn with_shift(mut self, shift: i32) -> Self {
        self.shift = shift;
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.terms.iter().map(|(&b, &c)| (b, c))
    }

    pub fn coeff(&self, bits: u64) -> i64 {
        self.terms.get(&bits).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn position(&self, id: usize) -> Option<usize> {
        self.circles.binary_search(&id).ok()
    }

    pub fn add_term(&mut self, bits: u64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let e = self.terms.entry(bits).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.terms.remove(&bits);
        }
    }

    pub fn add_assign(&mut self, other: &TensorVector) {
        assert_eq!(self.circles, other.circles, "adding vectors over different circles");
        for (b, c) in other.terms() {
            self.add_term(b, c);
        }
    }

    /// Degree of a basis labeling: `#X - #1 + shift`.
    pub fn degree_of(&self, bits: u64) -> i32 {
        2 * bits.count_ones() as i32 - self.circles.len() as i32 + self.shift
    }

    /// Whether every term has the same degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|&b| self.degree_of(b));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn label(&self, bits: u64, id: usize) -> Option<bool> {
        self.position(id).map(|p| bits >> p & 1 == 1)
    }

    /// Renames circles according to `rename` (old id -> new id); ids not listed are kept.
    pub fn renamed(&self, rename: &BTreeMap<usize, usize>) -> TensorVector {
        let new_ids: Vec<usize> = self
            .circles
            .iter()
            .map(|id| *rename.get(id).unwrap_or(id))
            .collect();
        let out = TensorVector::zero(new_ids.clone(), self.shift);
        assert_eq!(out.circles.len(), self.circles.len(), "renaming collapsed circles");
        let map: Vec<Option<usize>> = new_ids.iter().map(|id| out.position(*id)).collect();
        let mut out = out;
        for (b, c) in self.terms() {
            out.add_term(remap_bits(b, &map), c);
        }
        out
    }

    /// Tensor product of labelings on disjoint circle sets; shifts add.
    pub fn tensor(&self, other: &TensorVector) -> Result<TensorVector> {
        for c in &other.circles {
            if self.position(*c).is_some() {
                return Err(Error::DuplicateCircle(*c));
            }
        }
        let mut ids = self.circles.clone();
        ids.extend_from_slice(&other.circles);
        let mut out = TensorVector::zero(ids, self.shift + other.shift);
        let lmap: Vec<Option<usize>> = self.circles.iter().map(|&c| out.position(c)).collect();
        let rmap: Vec<Option<usize>> = other.circles.iter().map(|&c| out.position(c)).collect();
        for (b1, c1) in self.terms() {
            let l = remap_bits(b1, &lmap);
            for (b2, c2) in other.terms() {
                out.add_term(l | remap_bits(b2, &rmap), c1 * c2);
            }
        }
        Ok(out)
    }

    /// Multiplies every coefficient by `k`.
    pub fn scaled(&self, k: i64) -> TensorVector {
        let mut out = TensorVector::zero(self.circles.clone(), self.shift);
        for (b, c) in self.terms() {
            out.add_term(b, c * k);
        }
        out
    }

    fn require(&self, id: usize) -> Result<usize> {
        self.position(id).ok_or(Error::UnknownCircle(id))
    }

    /// Applies `m` to the factors on circles `i` and `j`, naming the product circle `merged`.
    pub fn alg_multiply(&self, i: usize, j: usize, merged: usize) -> Result<TensorVector> {
        let (pi, pj) = (self.require(i)?, self.require(j)?);
        if i == j {
            return Err(Error::DuplicateCircle(i));
        }
        let mut ids: Vec<usize> = self
            .circles
            .iter()
            .copied()
            .filter(|&c| c != i && c != j)
            .collect();
        if ids.contains(&merged) {
            return Err(Error::DuplicateCircle(merged));
        }
        ids.push(merged);
        let mut out = TensorVector::zero(ids, self.shift);
        let map: Vec<Option<usize>> = self
            .circles
            .iter()
            .map(|&c| {
                if c == i || c == j {
                    None
                } else {
                    out.position(c)
                }
            })
            .collect();
        let pm = out.position(merged).unwrap();
        for (b, c) in self.terms() {
            let (li, lj) = (b >> pi & 1 == 1, b >> pj & 1 == 1);
            if let Some(l) = mult_label(li, lj) {
                out.add_term(remap_bits(b, &map) | (l as u64) << pm, c);
            }
        }
        Ok(out)
    }

    /// Applies `Δ` to the factor on circle `i`, producing circles `out1` and `out2`.
    pub fn alg_comultiply(&self, i: usize, out1: usize, out2: usize) -> Result<TensorVector> {
        let pi = self.require(i)?;
        if out1 == out2 {
            return Err(Error::DuplicateCircle(out1));
        }
        let mut ids: Vec<usize> = self.circles.iter().copied().filter(|&c| c != i).collect();
        for o in [out1, out2] {
            if ids.contains(&o) {
                return Err(Error::DuplicateCircle(o));
            }
        }
        ids.push(out1);
        ids.push(out2);
        let mut out = TensorVector::zero(ids, self.shift);
        let map: Vec<Option<usize>> = self
            .circles
            .iter()
            .map(|&c| if c == i { None } else { out.position(c) })
            .collect();
        let (p1, p2) = (out.position(out1).unwrap(), out.position(out2).unwrap());
        for (b, c) in self.terms() {
            let base = remap_bits(b, &map);
            for &(l1, l2) in comult_label(b >> pi & 1 == 1) {
                out.add_term(base | (l1 as u64) << p1 | (l2 as u64) << p2, c);
            }
        }
        Ok(out)
    }

    /// Applies the unit `ι`, inserting a factor `1` on a new circle.
    pub fn alg_birth(&self, new: usize) -> Result<TensorVector> {
        if self.position(new).is_some() {
            return Err(Error::DuplicateCircle(new));
        }
        let mut ids = self.circles.clone();
        ids.push(new);
        let mut out = TensorVector::zero(ids, self.shift);
        let map: Vec<Option<usize>> = self.circles.iter().map(|&c| out.position(c)).collect();
        for (b, c) in self.terms() {
            out.add_term(remap_bits(b, &map), c);
        }
        Ok(out)
    }

    /// Applies the counit `ε` to the factor on circle `i` and removes it.
    pub fn alg_death(&self, i: usize) -> Result<TensorVector> {
        let pi = self.require(i)?;
        let ids: Vec<usize> = self.circles.iter().copied().filter(|&c| c != i).collect();
        let mut out = TensorVector::zero(ids, self.shift);
        let map: Vec<Option<usize>> = self
            .circles
            .iter()
            .map(|&c| if c == i { None } else { out.position(c) })
            .collect();
        for (b, c) in self.terms() {
            let e = counit_label(b >> pi & 1 == 1);
            out.add_term(remap_bits(b, &map), c * e);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(labels: &[(usize, bool)]) -> TensorVector {
        TensorVector::basis(labels, 0)
    }

    #[test]
    fn x_times_x_vanishes() {
        let t = v(&[(1, true), (2, true)]);
        assert!(t.alg_multiply(1, 2, 1).unwrap().is_zero());
    }

    #[test]
    fn x_times_one_is_x() {
        let t = v(&[(1, true), (2, false)]);
        assert_eq!(t.alg_multiply(1, 2, 7).unwrap(), v(&[(7, true)]));
    }

    #[test]
    fn unit_multiplication_relabels() {
        let mut t = v(&[(1, false), (2, true)]);
        t.add_assign(&v(&[(1, false), (2, false)]).scaled(3));
        let r = t.alg_multiply(1, 2, 5).unwrap();
        let mut expect = v(&[(5, true)]);
        expect.add_assign(&v(&[(5, false)]).scaled(3));
        assert_eq!(r, expect);
    }

    #[test]
    fn comultiplication_formulas() {
        let d1 = v(&[(0, false)]).alg_comultiply(0, 3, 4).unwrap();
        let mut e = v(&[(3, false), (4, true)]);
        e.add_assign(&v(&[(3, true), (4, false)]));
        assert_eq!(d1, e);
        let dx = v(&[(0, true)]).alg_comultiply(0, 3, 4).unwrap();
        assert_eq!(dx, v(&[(3, true), (4, true)]));
    }

    #[test]
    fn comultiplication_is_coassociative_on_one() {
        let one = v(&[(0, false)]);
        let left = one
            .alg_comultiply(0, 1, 2)
            .unwrap()
            .alg_comultiply(1, 3, 4)
            .unwrap()
            .renamed(&[(3, 10), (4, 11), (2, 12)].into_iter().collect());
        let right = one
            .alg_comultiply(0, 1, 2)
            .unwrap()
            .alg_comultiply(2, 3, 4)
            .unwrap()
            .renamed(&[(1, 10), (3, 11), (4, 12)].into_iter().collect());
        assert_eq!(left, right);
        // 1⊗X⊗X + X⊗1⊗X + X⊗X⊗1
        assert_eq!(left.terms().count(), 3);
    }

    #[test]
    fn death_rules() {
        assert_eq!(v(&[(4, true)]).alg_death(4).unwrap(), TensorVector::scalar(1, 0));
        assert!(v(&[(4, false)]).alg_death(4).unwrap().is_zero());
        let t = v(&[(1, true), (2, false)]);
        assert!(t.alg_birth(9).unwrap().alg_death(9).unwrap().is_zero());
    }

    #[test]
    fn errors() {
        let t = v(&[(1, true)]);
        assert_eq!(t.alg_death(2), Err(Error::UnknownCircle(2)));
        assert_eq!(t.alg_birth(1), Err(Error::DuplicateCircle(1)));
    }

    /// Exhaustive check of the Frobenius relation `(m ⊗ id)(id ⊗ Δ) = Δ m` on `A ⊗ A`.
    #[test]
    fn frobenius_identity() {
        for a in [false, true] {
            for b in [false, true] {
                let x = v(&[(0, a), (1, b)]);
                let lhs = x
                    .alg_comultiply(1, 2, 3)
                    .unwrap()
                    .alg_multiply(0, 2, 4)
                    .unwrap()
                    .renamed(&[(4, 10), (3, 11)].into_iter().collect());
                let rhs = x
                    .alg_multiply(0, 1, 5)
                    .unwrap()
                    .alg_comultiply(5, 10, 11)
                    .unwrap();
                assert_eq!(lhs, rhs, "labels {a} {b}");
            }
        }
    }

    #[test]
    fn multiplication_commutative_associative() {
        for a in [false, true] {
            for b in [false, true] {
                let x = v(&[(0, a), (1, b)]);
                assert_eq!(x.alg_multiply(0, 1, 7).unwrap(), x.alg_multiply(1, 0, 7).unwrap());
                for c in [false, true] {
                    let y = v(&[(0, a), (1, b), (2, c)]);
                    let l = y.alg_multiply(0, 1, 5).unwrap().alg_multiply(5, 2, 9).unwrap();
                    let r = y.alg_multiply(1, 2, 6).unwrap().alg_multiply(0, 6, 9).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }
}
