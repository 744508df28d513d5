//! Sparse matrices over a [`Coeff`] domain, with Smith forms and exact determinants.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::coeff::Coeff;

/// Column-major sparse matrix; absent entries are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMat<R> {
    rows: usize,
    cols: Vec<BTreeMap<usize, R>>,
}

impl<R: Coeff> SparseMat<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols: vec![BTreeMap::new(); cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, r: usize, c: usize) -> R {
        self.cols[c].get(&r).cloned().unwrap_or_else(R::zero)
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &R) {
        assert!(r < self.rows, "row {r} out of range {}", self.rows);
        if v.is_zero() {
            return;
        }
        let col = &mut self.cols[c];
        let e = col.entry(r).or_insert_with(R::zero);
        *e = e.add(v);
        if e.is_zero() {
            col.remove(&r);
        }
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = (usize, &R)> {
        self.cols[c].iter().map(|(&r, v)| (r, v))
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &R)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(&r, v)| (r, c, v)))
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn scaled(&self, k: &R) -> Self {
        let mut out = Self::zeros(self.rows, self.cols());
        for (r, c, v) in self.entries() {
            out.add_to(r, c, &v.mul(k));
        }
        out
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseMat<R>) -> SparseMat<R> {
        assert_eq!(self.cols(), rhs.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols());
        for (c, col) in rhs.cols.iter().enumerate() {
            for (&k, v) in col {
                for (&r, w) in &self.cols[k] {
                    out.add_to(r, c, &w.mul(v));
                }
            }
        }
        out
    }

    pub fn map<S: Coeff>(&self, f: impl Fn(&R) -> S) -> SparseMat<S> {
        let mut out = SparseMat::zeros(self.rows, self.cols());
        for (r, c, v) in self.entries() {
            out.add_to(r, c, &f(v));
        }
        out
    }

    /// The submatrix on the given rows and columns, in the given orders.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseMat<R> {
        let row_pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut out = SparseMat::zeros(rows.len(), cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for (r, v) in self.column(c) {
                if let Some(&i) = row_pos.get(&r) {
                    out.add_to(i, j, v);
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<R>> {
        let mut d = vec![vec![R::zero(); self.cols()]; self.rows];
        for (r, c, v) in self.entries() {
            d[r][c] = v.clone();
        }
        d
    }
}

/// Rank over a field by Gaussian elimination.
pub fn rank_field<R: Coeff>(m: &SparseMat<R>) -> usize {
    assert!(R::FIELD, "rank_field needs a field");
    let mut a = m.to_dense();
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let inv = a[rank][c].unit_inverse().expect("field element is a unit");
        for r in rank + 1..rows {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].mul(&inv);
            for k in c..cols {
                let t = a[rank][k].mul(&f);
                a[r][k] = a[r][k].sub(&t);
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Nonzero invariant factors of an integer matrix (positive, each dividing the next).
///
/// Diagonalizes by repeatedly pivoting on the entry of least absolute value, then turns the
/// diagonal into a divisibility chain with gcd/lcm exchanges.
pub fn smith_invariants(m: &SparseMat<i64>) -> Vec<i128> {
    let mut a: Vec<Vec<i128>> = m
        .to_dense()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x as i128).collect())
        .collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for (r, row) in a.iter().enumerate().skip(t) {
            for (c, &x) in row.iter().enumerate().skip(t) {
                if x != 0 && best.is_none_or(|(br, bc)| x.abs() < a[br][bc].abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let p = a[t][t];
            let mut clean = true;
            for r in t + 1..rows {
                if a[r][t] != 0 {
                    let q = a[r][t].div_euclid(p);
                    for c in t..cols {
                        let s = a[t][c];
                        a[r][c] -= q * s;
                    }
                    if a[r][t] != 0 {
                        clean = false;
                    }
                }
            }
            for c in t + 1..cols {
                if a[t][c] != 0 {
                    let q = a[t][c].div_euclid(p);
                    for row in a.iter_mut().skip(t) {
                        let s = row[t];
                        row[c] -= q * s;
                    }
                    if a[t][c] != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
            // Move a smaller remainder into the pivot position and retry.
            let mut best = (t, t);
            for r in t..rows {
                if a[r][t] != 0 && a[r][t].abs() < a[best.0][best.1].abs() {
                    best = (r, t);
                }
            }
            for c in t..cols {
                if a[t][c] != 0 && a[t][c].abs() < a[best.0][best.1].abs() {
                    best = (t, c);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = gcd(diag[i], diag[j]);
            let l = diag[i] / g * diag[j];
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

/// Determinant by fraction-free Bareiss elimination.
pub fn det_bareiss(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Exact binomial coefficient, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Q, F2};

    fn from_rows(rows: &[&[i64]]) -> SparseMat<i64> {
        let mut m = SparseMat::zeros(rows.len(), rows.first().map_or(0, |r| r.len()));
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m.add_to(r, c, &v);
            }
        }
        m
    }

    #[test]
    fn snf_examples() {
        assert_eq!(smith_invariants(&from_rows(&[&[2, 4], &[6, 8]])), vec![2, 4]);
        assert_eq!(smith_invariants(&from_rows(&[&[2, 0], &[0, 3]])), vec![1, 6]);
        assert_eq!(smith_invariants(&from_rows(&[&[0, 0], &[0, 0]])), Vec::<i128>::new());
        assert_eq!(smith_invariants(&from_rows(&[&[1, 1, 1], &[1, -1, 0]])), vec![1, 1]);
    }

    #[test]
    fn field_ranks() {
        let m = from_rows(&[&[2, 4], &[1, 2]]);
        assert_eq!(rank_field(&m.map(|&x| Q::from_i64(x))), 1);
        let m = from_rows(&[&[2, 0], &[0, 1]]);
        assert_eq!(rank_field(&m.map(|&x| F2::from_i64(x))), 1);
        assert_eq!(rank_field(&m.map(|&x| Q::from_i64(x))), 2);
    }

    #[test]
    fn bareiss() {
        let m: Vec<Vec<BigInt>> = [[4, 2], [2, 4]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(det_bareiss(&m), BigInt::from(12));
        let m: Vec<Vec<BigInt>> = [[0, 1, 2], [1, 0, 3], [4, -3, 8]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(det_bareiss(&m), BigInt::from(-2));
    }

    #[test]
    fn product_and_binomial() {
        let a = from_rows(&[&[1, 1], &[0, 1]]);
        let b = from_rows(&[&[1, -1], &[0, 1]]);
        assert_eq!(a.mul(&b), from_rows(&[&[1, 0], &[0, 1]]));
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(6, -1), BigInt::zero());
    }
}
