//! Crossingless matchings, flat tangles up to isotopy, and the linear Temperley-Lieb category.
//!
//! Boundary points of a flat `(m, n)`-tangle are numbered `0..2n` along the bottom (left to
//! right) followed by `2n..2n+2m` along the top (left to right). Serialized forms are 1-based.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

/// A crossingless matching of `2n` points, stored as a fixed-point-free involution.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    pairs: Vec<usize>,
}

impl Matching {
    pub fn new(pairs: Vec<usize>) -> Result<Self> {
        let t = FlatTangle::new(0, pairs.len() / 2, pairs.clone(), 0)?;
        if pairs.len() % 2 != 0 {
            return Err(Error::InvalidTangle("odd number of points".into()));
        }
        Ok(Self { pairs: t.pairs })
    }

    /// Half the number of points.
    pub fn n(&self) -> usize {
        self.pairs.len() / 2
    }

    pub fn pairs(&self) -> &[usize] {
        &self.pairs
    }

    pub fn partner(&self, p: usize) -> usize {
        self.pairs[p]
    }

    /// Arcs `(i, j)` with `i < j`, sorted by left endpoint.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.pairs.len())
            .filter(|&i| i < self.pairs[i])
            .map(|i| (i, self.pairs[i]))
            .collect()
    }

    /// The matching as a flat `(n, 0)`-tangle (all points on top).
    pub fn as_tangle(&self) -> FlatTangle {
        FlatTangle {
            n_bottom: 0,
            n_top: self.n(),
            pairs: self.pairs.clone(),
            circles: 0,
        }
    }

    /// Interprets a circle-free flat `(n, 0)`-tangle as a matching.
    pub fn from_tangle(t: &FlatTangle) -> Result<Self> {
        if t.n_bottom != 0 || t.circles != 0 {
            return Err(Error::InvalidTangle(
                "a matching is a circle-free tangle with no bottom points".into(),
            ));
        }
        Ok(Self {
            pairs: t.pairs.clone(),
        })
    }
}

impl Serialize for Matching {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let one_based: Vec<usize> = self.pairs.iter().map(|p| p + 1).collect();
        one_based.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matching {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<usize> = Vec::deserialize(d)?;
        if raw.contains(&0) {
            return Err(serde::de::Error::custom("pairing arrays are 1-based"));
        }
        Matching::new(raw.into_iter().map(|p| p - 1).collect()).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.pairs.iter().map(|p| (p + 1).to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

fn gen_matchings(points: &[usize], out: &mut Vec<Vec<(usize, usize)>>) {
    if points.is_empty() {
        out.push(Vec::new());
        return;
    }
    let first = points[0];
    for k in (1..points.len()).step_by(2) {
        let inner = &points[1..k];
        let outer = &points[k + 1..];
        let mut ins = Vec::new();
        gen_matchings(inner, &mut ins);
        let mut outs = Vec::new();
        gen_matchings(outer, &mut outs);
        for i in &ins {
            for o in &outs {
                let mut v = Vec::with_capacity(points.len() / 2);
                v.push((first, points[k]));
                v.extend_from_slice(i);
                v.extend_from_slice(o);
                out.push(v);
            }
        }
    }
}

/// All crossingless matchings of `2n` points in lexicographic order of their pairing arrays.
pub fn enumerate_matchings(n: usize) -> Vec<Matching> {
    let points: Vec<usize> = (0..2 * n).collect();
    let mut raw = Vec::new();
    gen_matchings(&points, &mut raw);
    let mut out: Vec<Matching> = raw
        .into_iter()
        .map(|arcs| {
            let mut pairs = vec![0; 2 * n];
            for (i, j) in arcs {
                pairs[i] = j;
                pairs[j] = i;
            }
            Matching { pairs }
        })
        .collect();
    out.sort();
    out
}

/// Cached [`enumerate_matchings`].
pub fn matchings(n: usize) -> Arc<Vec<Matching>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<Matching>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().expect("matching cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(enumerate_matchings(n)))
        .clone()
}

/// Position of a matching inside [`matchings`].
pub fn matching_index(m: &Matching) -> usize {
    matchings(m.n())
        .binary_search(m)
        .expect("matching enumeration is complete")
}

/// Catalan number `C_n`.
pub fn catalan(n: usize) -> u64 {
    let mut c: u64 = 1;
    for k in 0..n as u64 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

/// Isotopy class of a flat `(m, n)`-tangle: `2n` bottom points, `2m` top points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlatTangle {
    n_bottom: usize,
    n_top: usize,
    pairs: Vec<usize>,
    circles: usize,
}

impl FlatTangle {
    /// Validates that `pairs` is a non-crossing fixed-point-free involution.
    pub fn new(n_bottom: usize, n_top: usize, pairs: Vec<usize>, circles: usize) -> Result<Self> {
        let total = 2 * n_bottom + 2 * n_top;
        if pairs.len() != total {
            return Err(Error::InvalidTangle(format!(
                "expected {total} paired points, got {}",
                pairs.len()
            )));
        }
        for (i, &j) in pairs.iter().enumerate() {
            if j >= total || j == i || pairs[j] != i {
                return Err(Error::InvalidTangle(format!(
                    "point {} is not part of an involutive pair",
                    i + 1
                )));
            }
        }
        let t = Self {
            n_bottom,
            n_top,
            pairs,
            circles,
        };
        if !t.is_noncrossing() {
            return Err(Error::InvalidTangle("pairing crosses itself".into()));
        }
        Ok(t)
    }

    pub(crate) fn new_unchecked(n_bottom: usize, n_top: usize, pairs: Vec<usize>, circles: usize) -> Self {
        Self {
            n_bottom,
            n_top,
            pairs,
            circles,
        }
    }

    pub fn n_bottom(&self) -> usize {
        self.n_bottom
    }

    pub fn n_top(&self) -> usize {
        self.n_top
    }

    pub fn pairs(&self) -> &[usize] {
        &self.pairs
    }

    pub fn circles(&self) -> usize {
        self.circles
    }

    pub fn num_points(&self) -> usize {
        self.pairs.len()
    }

    fn cyclic_position(&self, p: usize) -> usize {
        let b = 2 * self.n_bottom;
        if p < b {
            p
        } else {
            b + (2 * self.n_top - 1 - (p - b))
        }
    }

    fn is_noncrossing(&self) -> bool {
        let arcs: Vec<(usize, usize)> = (0..self.pairs.len())
            .filter(|&i| i < self.pairs[i])
            .map(|i| {
                let (x, y) = (self.cyclic_position(i), self.cyclic_position(self.pairs[i]));
                (x.min(y), x.max(y))
            })
            .collect();
        for (k, &(a, b)) in arcs.iter().enumerate() {
            for &(c, d) in &arcs[k + 1..] {
                let c_in = a < c && c < b;
                let d_in = a < d && d < b;
                if c_in != d_in {
                    return false;
                }
            }
        }
        true
    }

    /// `Vert_{2n}`, the identity `(n, n)`-tangle.
    pub fn vert(n: usize) -> Self {
        let mut pairs = vec![0; 4 * n];
        for i in 0..2 * n {
            pairs[i] = 2 * n + i;
            pairs[2 * n + i] = i;
        }
        Self::new_unchecked(n, n, pairs, 0)
    }

    /// The elementary cap joining bottom points `i, i+1` of `points` (even) bottom points.
    pub fn cap(points: usize, i: usize) -> Result<Self> {
        if points < 2 || points % 2 != 0 || i + 1 >= points {
            return Err(Error::Arity(format!("cap at {} on {points} points", i + 1)));
        }
        let (nb, nt) = (points / 2, points / 2 - 1);
        let mut pairs = vec![0; points + points - 2];
        let mut t = 0;
        for p in 0..points {
            if p == i {
                pairs[p] = p + 1;
                pairs[p + 1] = p;
            } else if p == i + 1 {
                continue;
            } else {
                pairs[p] = 2 * nb + t;
                pairs[2 * nb + t] = p;
                t += 1;
            }
        }
        Ok(Self::new_unchecked(nb, nt, pairs, 0))
    }

    /// The elementary cup creating top points `i, i+1` over `points` bottom points.
    pub fn cup(points: usize, i: usize) -> Result<Self> {
        if points % 2 != 0 || i > points {
            return Err(Error::Arity(format!("cup at {} on {points} points", i + 1)));
        }
        Ok(Self::cap(points + 2, i)?.reflect())
    }

    /// Disjoint union with `k` extra circles.
    pub fn with_circles(&self, k: usize) -> Self {
        let mut t = self.clone();
        t.circles += k;
        t
    }

    /// The reflection `W` about the horizontal midline.
    pub fn reflect(&self) -> Self {
        let (b, t) = (2 * self.n_bottom, 2 * self.n_top);
        let map = |p: usize| if p < b { t + p } else { p - b };
        let mut pairs = vec![0; b + t];
        for p in 0..b + t {
            pairs[map(p)] = map(self.pairs[p]);
        }
        Self::new_unchecked(self.n_top, self.n_bottom, pairs, self.circles)
    }

    /// Drops all circles, returning the circle-free representative and the count removed.
    pub fn remove_circles(&self) -> (FlatTangle, usize) {
        let mut t = self.clone();
        t.circles = 0;
        (t, self.circles)
    }

    pub fn is_circle_free(&self) -> bool {
        self.circles == 0
    }
}

/// Concatenation `b ∘ a`: `a` below, `b` on top.
pub fn compose(b: &FlatTangle, a: &FlatTangle) -> Result<FlatTangle> {
    if b.n_bottom != a.n_top {
        return Err(Error::Arity(format!(
            "cannot stack a tangle with {} bottom points on one with {} top points",
            2 * b.n_bottom,
            2 * a.n_top
        )));
    }
    let (na, m2, kb) = (2 * a.n_bottom, 2 * a.n_top, 2 * b.n_top);
    // Outer points: a-bottom 0..na, b-top na..na+kb.
    let total = na + kb;
    let mut pairs = vec![usize::MAX; total];
    let mut seen_mid = vec![false; m2];
    // Follow a path starting from an outer point; returns the outer endpoint reached.
    let walk = |start_outer: usize, seen_mid: &mut Vec<bool>| -> usize {
        // state: (in_a, point index in that tangle)
        let (mut in_a, mut p) = if start_outer < na {
            (true, start_outer)
        } else {
            (false, 2 * b.n_bottom + (start_outer - na))
        };
        loop {
            if in_a {
                let q = a.pairs[p];
                if q < na {
                    return q;
                }
                let mid = q - na;
                seen_mid[mid] = true;
                in_a = false;
                p = mid;
            } else {
                let q = b.pairs[p];
                if q >= m2 {
                    return na + (q - m2);
                }
                seen_mid[q] = true;
                in_a = true;
                p = na + q;
            }
        }
    };
    for s in 0..total {
        if pairs[s] == usize::MAX {
            let e = walk(s, &mut seen_mid);
            pairs[s] = e;
            pairs[e] = s;
        }
    }
    // Remaining interface points lie on closed loops.
    let mut new_circles = 0;
    for start in 0..m2 {
        if seen_mid[start] {
            continue;
        }
        new_circles += 1;
        let mut p = start;
        loop {
            seen_mid[p] = true;
            let q = b.pairs[p];
            seen_mid[q] = true;
            let r = a.pairs[na + q] - na;
            if r == start {
                break;
            }
            p = r;
        }
    }
    Ok(FlatTangle::new_unchecked(
        a.n_bottom,
        b.n_top,
        pairs,
        a.circles + b.circles + new_circles,
    ))
}

#[derive(Serialize, Deserialize)]
struct FlatTangleRepr {
    bottom: usize,
    top: usize,
    pairs: Vec<usize>,
    circles: usize,
}

impl Serialize for FlatTangle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FlatTangleRepr {
            bottom: 2 * self.n_bottom,
            top: 2 * self.n_top,
            pairs: self.pairs.iter().map(|p| p + 1).collect(),
            circles: self.circles,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FlatTangle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = FlatTangleRepr::deserialize(d)?;
        if r.bottom % 2 != 0 || r.top % 2 != 0 || r.pairs.contains(&0) {
            return Err(serde::de::Error::custom("malformed flat tangle"));
        }
        FlatTangle::new(
            r.bottom / 2,
            r.top / 2,
            r.pairs.into_iter().map(|p| p - 1).collect(),
            r.circles,
        )
        .map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for FlatTangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.pairs.iter().map(|p| (p + 1).to_string()).collect();
        write!(f, "({}->{})[{}]", 2 * self.n_bottom, 2 * self.n_top, s.join(","))?;
        if self.circles > 0 {
            write!(f, "+{}o", self.circles)?;
        }
        Ok(())
    }
}

/// A morphism of the linear Temperley-Lieb category: a `Z[q, q^-1]`-combination of
/// circle-free flat tangles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TLMorphism {
    n_bottom: usize,
    n_top: usize,
    terms: BTreeMap<FlatTangle, LaurentPoly>,
}

impl TLMorphism {
    pub fn zero(n_bottom: usize, n_top: usize) -> Self {
        Self {
            n_bottom,
            n_top,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::lin(&FlatTangle::vert(n))
    }

    /// `lin(a) = (q + q^-1)^i rm(a)`.
    pub fn lin(a: &FlatTangle) -> Self {
        let (rm, k) = a.remove_circles();
        let mut m = Self::zero(a.n_bottom, a.n_top);
        m.add(rm, &LaurentPoly::circle().pow(k as u32));
        m
    }

    pub fn n_bottom(&self) -> usize {
        self.n_bottom
    }

    pub fn n_top(&self) -> usize {
        self.n_top
    }

    /// Adds `coeff * a`; `a` must be circle-free.
    pub fn add(&mut self, a: FlatTangle, coeff: &LaurentPoly) {
        debug_assert!(a.is_circle_free());
        debug_assert_eq!((a.n_bottom, a.n_top), (self.n_bottom, self.n_top));
        let e = self.terms.entry(a).or_default();
        *e += coeff;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn coeff(&self, a: &FlatTangle) -> LaurentPoly {
        self.terms.get(a).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FlatTangle, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn scaled(&self, p: &LaurentPoly) -> Self {
        let mut out = Self::zero(self.n_bottom, self.n_top);
        for (a, c) in &self.terms {
            out.add(a.clone(), &(c * p));
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add(a.clone(), c);
        }
        out
    }
}

#[derive(Serialize)]
struct TLTerm<'a> {
    tangle: &'a FlatTangle,
    coeff: &'a LaurentPoly,
    text: String,
}

#[derive(Deserialize)]
struct TLTermOwned {
    tangle: FlatTangle,
    coeff: LaurentPoly,
}

#[derive(Deserialize)]
struct TLMorphismRepr {
    bottom: usize,
    top: usize,
    terms: Vec<TLTermOwned>,
}

impl<'de> Deserialize<'de> for TLMorphism {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = TLMorphismRepr::deserialize(d)?;
        if r.bottom % 2 != 0 || r.top % 2 != 0 {
            return Err(serde::de::Error::custom("odd boundary in a Temperley-Lieb morphism"));
        }
        let mut m = TLMorphism::zero(r.bottom / 2, r.top / 2);
        for t in r.terms {
            if !t.tangle.is_circle_free() || (t.tangle.n_bottom, t.tangle.n_top) != (m.n_bottom, m.n_top) {
                return Err(serde::de::Error::custom("term does not fit the morphism"));
            }
            m.add(t.tangle, &t.coeff);
        }
        Ok(m)
    }
}

impl Serialize for TLMorphism {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let terms: Vec<TLTerm<'_>> = self
            .terms
            .iter()
            .map(|(tangle, coeff)| TLTerm { tangle, coeff, text: coeff.to_string() })
            .collect();
        let mut st = s.serialize_struct("TLMorphism", 3)?;
        st.serialize_field("bottom", &(2 * self.n_bottom))?;
        st.serialize_field("top", &(2 * self.n_top))?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// Composition `g ∘ f` in the linear Temperley-Lieb category.
pub fn tl_compose(g: &TLMorphism, f: &TLMorphism) -> Result<TLMorphism> {
    if g.n_bottom != f.n_top {
        return Err(Error::Arity(format!(
            "cannot compose TL morphisms {}->{} after {}->{}",
            2 * g.n_bottom,
            2 * g.n_top,
            2 * f.n_bottom,
            2 * f.n_top
        )));
    }
    let mut out = TLMorphism::zero(f.n_bottom, g.n_top);
    for (b, p) in &g.terms {
        for (a, r) in &f.terms {
            let ba = compose(b, a)?;
            let (rm, k) = ba.remove_circles();
            out.add(rm, &(&(p * r) * &LaurentPoly::circle().pow(k as u32)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b1() -> Matching {
        enumerate_matchings(1)[0].clone()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_matchings(0).len(), 1);
        let b2 = enumerate_matchings(2);
        assert_eq!(b2.len(), 2);
        assert_eq!(b2[0].pairs(), &[1, 0, 3, 2]);
        assert_eq!(b2[1].pairs(), &[3, 2, 1, 0]);
        assert_eq!(enumerate_matchings(3).len(), 5);
    }

    #[test]
    fn catalan_counts_up_to_eight() {
        for n in 0..=8 {
            assert_eq!(enumerate_matchings(n).len() as u64, catalan(n));
        }
    }

    #[test]
    fn vert_is_identity() {
        for m in enumerate_matchings(2) {
            let a = m.as_tangle();
            assert_eq!(compose(&FlatTangle::vert(2), &a).unwrap(), a);
        }
    }

    #[test]
    fn reflection_of_b1_closes_to_circle() {
        let a = b1().as_tangle();
        let c = compose(&a.reflect(), &a).unwrap();
        assert_eq!((c.n_bottom(), c.n_top(), c.circles()), (0, 0, 1));
        let (rm, k) = c.remove_circles();
        assert_eq!(k, 1);
        assert_eq!(rm.num_points(), 0);
    }

    #[test]
    fn distinct_b2_pairs_close_to_one_circle() {
        let b2 = enumerate_matchings(2);
        let (a, b) = (b2[0].as_tangle(), b2[1].as_tangle());
        assert_eq!(compose(&a.reflect(), &b).unwrap().circles(), 1);
        assert_eq!(compose(&b.reflect(), &a).unwrap().circles(), 1);
        assert_eq!(compose(&a.reflect(), &a).unwrap().circles(), 2);
    }

    #[test]
    fn cap_reflects_to_cup() {
        let cap = FlatTangle::cap(4, 1).unwrap();
        assert_eq!(cap.reflect(), FlatTangle::cup(2, 1).unwrap());
        assert_eq!(FlatTangle::vert(3).reflect(), FlatTangle::vert(3));
    }

    #[test]
    fn crossing_pairing_rejected() {
        assert!(FlatTangle::new(0, 2, vec![2, 3, 0, 1], 0).is_err());
        assert!(Matching::new(vec![1, 0, 3, 2]).is_ok());
    }

    #[test]
    fn serde_is_one_based() {
        let m = enumerate_matchings(2)[0].clone();
        assert_eq!(serde_json::to_string(&m).unwrap(), "[2,1,4,3]");
        let t = FlatTangle::cap(2, 0).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"bottom":2,"top":0,"pairs":[2,1],"circles":0}"#);
        assert_eq!(serde_json::from_str::<FlatTangle>(&s).unwrap(), t);
    }

    #[test]
    fn lin_of_circle() {
        let a = b1().as_tangle();
        let f = TLMorphism::lin(&a);
        let g = TLMorphism::lin(&a.reflect());
        let gf = tl_compose(&g, &f).unwrap();
        let empty = FlatTangle::vert(0);
        assert_eq!(gf.coeff(&empty), LaurentPoly::circle());
        assert_eq!(tl_compose(&TLMorphism::identity(1), &f).unwrap(), f);
    }
}
