//! Bounded complexes of geometric bimodules: the cube of resolutions, shifts, cones, tensor
//! products, Gaussian elimination on matching summands, and homology.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bimodule::{
    build_bimodule, cobordism_map, tensor_over, transport, CobordismStep, Factor, GeometricBimodule,
    Summand,
};
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::matrix::{rank_field, smith_invariants, SparseMat};
use crate::planar::{matchings, FlatTangle, TLMorphism};
use crate::word::{Orientation, TangleWord};

/// A bounded complex `C^lo → ... → C^hi` of geometric bimodules with coefficient matrices in
/// `R`. `diffs[k]` maps `objects[k]` to `objects[k + 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundedComplex<R = i64> {
    n_top: usize,
    n_bottom: usize,
    lo: i32,
    objects: Vec<GeometricBimodule>,
    diffs: Vec<SparseMat<R>>,
}

impl<R: Coeff> BoundedComplex<R> {
    pub fn new(lo: i32, objects: Vec<GeometricBimodule>, diffs: Vec<SparseMat<R>>) -> Result<Self> {
        let Some(first) = objects.first() else {
            return Err(Error::Incompatible("a complex needs at least one object".into()));
        };
        let (n_top, n_bottom) = (first.n_top(), first.n_bottom());
        if diffs.len() + 1 != objects.len() {
            return Err(Error::Incompatible(format!(
                "{} objects need {} differentials, got {}",
                objects.len(),
                objects.len() - 1,
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.cols() != objects[k].dim() || d.rows() != objects[k + 1].dim() {
                return Err(Error::Incompatible(format!("differential {k} has the wrong shape")));
            }
        }
        if objects.iter().any(|o| o.n_top() != n_top || o.n_bottom() != n_bottom) {
            return Err(Error::Arity("objects of a complex must share their arity".into()));
        }
        Ok(Self { n_top, n_bottom, lo, objects, diffs })
    }

    pub fn zero(n_top: usize, n_bottom: usize) -> Self {
        Self {
            n_top,
            n_bottom,
            lo: 0,
            objects: vec![GeometricBimodule::zero(n_top, n_bottom)],
            diffs: Vec::new(),
        }
    }

    /// `m` placed in homological degree `i`.
    pub fn concentrated(m: GeometricBimodule, i: i32) -> Self {
        Self {
            n_top: m.n_top(),
            n_bottom: m.n_bottom(),
            lo: i,
            objects: vec![m],
            diffs: Vec::new(),
        }
    }

    pub fn n_top(&self) -> usize {
        self.n_top
    }

    pub fn n_bottom(&self) -> usize {
        self.n_bottom
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.objects.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi()
    }

    pub fn object(&self, i: i32) -> Option<&GeometricBimodule> {
        usize::try_from(i - self.lo).ok().and_then(|k| self.objects.get(k))
    }

    /// `d^i : C^i → C^{i+1}`, if both ends lie in the stored range.
    pub fn differential(&self, i: i32) -> Option<&SparseMat<R>> {
        usize::try_from(i - self.lo).ok().and_then(|k| self.diffs.get(k))
    }

    pub fn objects(&self) -> &[GeometricBimodule] {
        &self.objects
    }

    pub fn total_dim(&self) -> usize {
        self.objects.iter().map(|o| o.dim()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.objects.iter().all(|o| o.summands().is_empty())
    }

    fn obj_or_zero(&self, i: i32) -> GeometricBimodule {
        self.object(i)
            .cloned()
            .unwrap_or_else(|| GeometricBimodule::zero(self.n_top, self.n_bottom))
    }

    fn diff_or_zero(&self, i: i32) -> SparseMat<R> {
        self.differential(i).cloned().unwrap_or_else(|| {
            SparseMat::zeros(self.obj_or_zero(i + 1).dim(), self.obj_or_zero(i).dim())
        })
    }

    /// Drops zero objects at both ends.
    pub fn trimmed(&self) -> Self {
        let nz: Vec<usize> = (0..self.objects.len())
            .filter(|&k| !self.objects[k].summands().is_empty())
            .collect();
        let (Some(&a), Some(&b)) = (nz.first(), nz.last()) else {
            return Self::zero(self.n_top, self.n_bottom);
        };
        Self {
            n_top: self.n_top,
            n_bottom: self.n_bottom,
            lo: self.lo + a as i32,
            objects: self.objects[a..=b].to_vec(),
            diffs: self.diffs[a..b].to_vec(),
        }
    }

    /// `d ∘ d = 0`.
    pub fn is_complex(&self) -> bool {
        self.diffs.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    /// Every differential preserves the internal grading.
    pub fn is_graded(&self) -> bool {
        self.diffs.iter().enumerate().all(|(k, d)| {
            d.entries()
                .all(|(r, c, _)| self.objects[k + 1].degree(r) == self.objects[k].degree(c))
        })
    }

    /// `C[k]{j}`: `C[k]^i = C^{i+k}` with differential `(-1)^k d`, and internal shift `j`.
    pub fn shift(&self, k: i32, j: i32) -> Self {
        let sign = if k.rem_euclid(2) == 1 { R::one().neg() } else { R::one() };
        Self {
            n_top: self.n_top,
            n_bottom: self.n_bottom,
            lo: self.lo - k,
            objects: self.objects.iter().map(|o| o.shifted(j)).collect(),
            diffs: self.diffs.iter().map(|d| d.scaled(&sign)).collect(),
        }
    }

    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S) -> BoundedComplex<S> {
        BoundedComplex {
            n_top: self.n_top,
            n_bottom: self.n_bottom,
            lo: self.lo,
            objects: self.objects.clone(),
            diffs: self.diffs.iter().map(|d| d.map(&f)).collect(),
        }
    }

    /// Alternating sum `Σ (-1)^i q^j [F(a)]` over summands `F(a){j}` in degree `i`.
    pub fn euler_class(&self) -> TLMorphism {
        let mut out = TLMorphism::zero(self.n_bottom, self.n_top);
        for i in self.degrees() {
            let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            for s in self.object(i).into_iter().flat_map(|o| o.summands()) {
                out.add(s.tangle.clone(), &LaurentPoly::monomial(sign, s.shift));
            }
        }
        out
    }

    /// Sorted multiset of `(homological degree, tangle, internal shift)` over all summands.
    pub fn fingerprint(&self) -> Vec<FingerprintEntry> {
        let mut counts: BTreeMap<(i32, FlatTangle, i32), usize> = BTreeMap::new();
        for i in self.degrees() {
            for s in self.object(i).into_iter().flat_map(|o| o.summands()) {
                *counts.entry((i, s.tangle.clone(), s.shift)).or_insert(0) += 1;
            }
        }
        counts
            .into_iter()
            .map(|((degree, tangle, shift), count)| FingerprintEntry { degree, tangle, shift, count })
            .collect()
    }

    /// Gaussian elimination on pairs of equal summands `F(a){j}` in adjacent degrees whose
    /// connecting block is an invertible scalar. Over a field the result has no such pair
    /// left; over the integers only `±1` blocks are cancelled.
    pub fn simplify(&self) -> Self {
        simplify(self)
    }

    pub fn summary(&self) -> ComplexSummary {
        ComplexSummary {
            top: 2 * self.n_top,
            bottom: 2 * self.n_bottom,
            degrees: self
                .degrees()
                .map(|i| DegreeSummary {
                    degree: i,
                    dim: self.object(i).map_or(0, |o| o.dim()),
                    summands: self.object(i).map(|o| o.summands().to_vec()).unwrap_or_default(),
                })
                .collect(),
        }
    }

    /// Homology over a field, for complexes of graded vector spaces or per closure.
    pub fn homology_over_field(&self) -> Result<HomologyTable> {
        assert!(R::FIELD, "homology_over_field needs a field");
        self.require_closed()?;
        Ok(graded_homology(self, None, |m| (rank_field(m), Vec::new())))
    }

    fn require_closed(&self) -> Result<()> {
        if self.n_top != 0 || self.n_bottom != 0 {
            return Err(Error::BoundaryPresent);
        }
        Ok(())
    }
}

impl BoundedComplex<i64> {
    /// Integral homology of a complex of graded abelian groups (no boundary points).
    pub fn homology(&self) -> Result<HomologyTable> {
        self.require_closed()?;
        Ok(graded_homology(self, None, snf_rank))
    }

    /// Integral homology of the `(c, b)` closure component.
    pub fn closure_homology(&self, c: usize, b: usize) -> HomologyTable {
        graded_homology(self, Some((c, b)), snf_rank)
    }

    /// Homology of every closure component, keyed by `(top matching, bottom matching)`.
    pub fn closures(&self) -> BTreeMap<(usize, usize), HomologyTable> {
        let (nt, nb) = (matchings(self.n_top).len(), matchings(self.n_bottom).len());
        let pairs: Vec<(usize, usize)> = (0..nt).flat_map(|c| (0..nb).map(move |b| (c, b))).collect();
        pairs
            .into_par_iter()
            .map(|(c, b)| ((c, b), self.closure_homology(c, b)))
            .collect()
    }

    /// Homology with coefficients in a field, computed from the integral complex.
    pub fn homology_with<S: Coeff>(&self) -> Result<HomologyTable> {
        if S::FIELD {
            self.map_coeffs(|&v| S::from_i64(v)).homology_over_field()
        } else {
            self.homology()
        }
    }
}

fn snf_rank(m: &SparseMat<i64>) -> (usize, Vec<u64>) {
    let inv = smith_invariants(m);
    let torsion = inv.iter().filter(|&&f| f > 1).map(|&f| f as u64).collect();
    (inv.len(), torsion)
}

/// Per internal degree, `H^i = ker d^i / im d^{i-1}`, with `rank_fn` giving the rank and
/// torsion factors of each block.
fn graded_homology<R: Coeff>(
    c: &BoundedComplex<R>,
    component: Option<(usize, usize)>,
    rank_fn: impl Fn(&SparseMat<R>) -> (usize, Vec<u64>) + Sync,
) -> HomologyTable {
    // Basis indices per degree, bucketed by internal degree.
    let buckets: Vec<BTreeMap<i32, Vec<usize>>> = c
        .objects
        .iter()
        .map(|o| {
            let idx: Vec<usize> = match component {
                Some((t, b)) => o.comp_indices(t, b),
                None => (0..o.dim()).collect(),
            };
            let mut m: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
            for i in idx {
                m.entry(o.degree(i)).or_default().push(i);
            }
            m
        })
        .collect();
    // (rank, torsion) of d^k restricted to internal degree j.
    let blocks: Vec<BTreeMap<i32, (usize, Vec<u64>)>> = c
        .diffs
        .par_iter()
        .enumerate()
        .map(|(k, d)| {
            let mut out = BTreeMap::new();
            for (j, cols) in &buckets[k] {
                if let Some(rows) = buckets[k + 1].get(j) {
                    out.insert(*j, rank_fn(&d.submatrix(rows, cols)));
                }
            }
            out
        })
        .collect();
    let mut table = HomologyTable::default();
    for (k, b) in buckets.iter().enumerate() {
        for (j, idx) in b {
            let out_rank = blocks.get(k).and_then(|m| m.get(j)).map_or(0, |x| x.0);
            let (in_rank, torsion) = match k.checked_sub(1).and_then(|p| blocks[p].get(j)) {
                Some((r, t)) => (*r, t.clone()),
                None => (0, Vec::new()),
            };
            let rank = (idx.len() - out_rank - in_rank) as u64;
            table.insert(c.lo + k as i32, *j, HomologyGroup { rank, torsion });
        }
    }
    table
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FingerprintEntry {
    pub degree: i32,
    pub tangle: FlatTangle,
    pub shift: i32,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegreeSummary {
    pub degree: i32,
    pub dim: usize,
    pub summands: Vec<Summand>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexSummary {
    pub top: usize,
    pub bottom: usize,
    pub degrees: Vec<DegreeSummary>,
}

/// One homology group: free rank and invariant factors `> 1`, each dividing the next.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub rank: u64,
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

/// Bigraded homology `H^{i,j}`; only nonzero groups are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomologyTable {
    groups: BTreeMap<(i32, i32), HomologyGroup>,
}

#[derive(Serialize, Deserialize)]
struct HomologyEntry {
    i: i32,
    j: i32,
    rank: u64,
    torsion: Vec<u64>,
}

impl Serialize for HomologyTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<HomologyEntry> = self
            .groups
            .iter()
            .map(|(&(i, j), g)| HomologyEntry { i, j, rank: g.rank, torsion: g.torsion.clone() })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomologyTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<HomologyEntry>::deserialize(d)?;
        let mut t = HomologyTable::default();
        for e in v {
            t.insert(e.i, e.j, HomologyGroup { rank: e.rank, torsion: e.torsion });
        }
        Ok(t)
    }
}

impl HomologyTable {
    pub fn insert(&mut self, i: i32, j: i32, g: HomologyGroup) {
        if g.is_zero() {
            self.groups.remove(&(i, j));
        } else {
            self.groups.insert((i, j), g);
        }
    }

    pub fn get(&self, i: i32, j: i32) -> HomologyGroup {
        self.groups.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn groups(&self) -> impl Iterator<Item = ((i32, i32), &HomologyGroup)> {
        self.groups.iter().map(|(&k, g)| (k, g))
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn total_rank(&self) -> u64 {
        self.groups.values().map(|g| g.rank).sum()
    }

    pub fn torsion_count(&self) -> usize {
        self.groups.values().map(|g| g.torsion.len()).sum()
    }

    /// `Σ (-1)^i q^j rank H^{i,j}`.
    pub fn euler(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (&(i, j), g) in &self.groups {
            let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            p.add_term(sign * g.rank as i64, j);
        }
        p
    }

    pub fn shifted(&self, di: i32, dj: i32) -> HomologyTable {
        HomologyTable {
            groups: self.groups.iter().map(|(&(i, j), g)| ((i + di, j + dj), g.clone())).collect(),
        }
    }
}

impl fmt::Display for HomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.groups.is_empty() {
            return writeln!(f, "(zero)");
        }
        for (&(i, j), g) in &self.groups {
            let mut parts = Vec::new();
            if g.rank > 0 {
                parts.push(if g.rank == 1 { "Z".to_string() } else { format!("Z^{}", g.rank) });
            }
            parts.extend(g.torsion.iter().map(|t| format!("Z/{t}")));
            writeln!(f, "H^{{{i},{j}}} = {}", parts.join(" + "))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------------------
// The cube of resolutions.

/// All resolutions of a word and the saddle maps between them, before collation.
#[derive(Clone, Debug)]
pub struct Cube {
    pub crossings: usize,
    pub orientation: Orientation,
    /// `F(D(T))` without the `{-|T|}` shift, indexed by the state bitmask `T`.
    pub vertices: Vec<GeometricBimodule>,
    /// Unsigned saddle maps `F(D(T)) → F(D(T ∪ {a}))`, keyed by `(T, a)`.
    pub edges: HashMap<(u64, usize), SparseMat<i64>>,
}

/// The sign `(-1)^{#{t ∈ T : t < a}}` of the edge `T → T ∪ {a}`.
pub fn edge_sign(t: u64, a: usize) -> i64 {
    if (t & ((1u64 << a) - 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

impl Cube {
    pub fn build(word: &TangleWord) -> Result<Cube> {
        let orientation = word.orientation()?;
        let k = word.crossings();
        if k > 20 {
            return Err(Error::Incompatible(format!("{k} crossings is too many for the cube")));
        }
        let states: Vec<u64> = (0..1u64 << k).collect();
        let vertices: Vec<GeometricBimodule> = states
            .par_iter()
            .map(|&t| build_bimodule(&word.resolution(t)))
            .collect();
        let jobs: Vec<(u64, usize)> = states
            .iter()
            .flat_map(|&t| (0..k).filter(move |&a| t >> a & 1 == 0).map(move |a| (t, a)))
            .collect();
        let edges = jobs
            .par_iter()
            .map(|&(t, a)| {
                let (d, sites) = word.resolve_with_sites(t);
                let (e1, e2) = sites[a];
                let m = cobordism_map(&d, &[CobordismStep::Saddle(e1, e2)])?;
                debug_assert_eq!(m.source, vertices[t as usize]);
                debug_assert_eq!(m.target, vertices[(t | 1 << a) as usize]);
                Ok(((t, a), m.matrix))
            })
            .collect::<Result<HashMap<_, _>>>()?;
        Ok(Cube { crossings: k, orientation, vertices, edges })
    }

    /// Every square face anticommutes once signs are applied.
    pub fn squares_anticommute(&self) -> bool {
        let k = self.crossings;
        (0..1u64 << k).into_par_iter().all(|t| {
            for a in 0..k {
                for b in a + 1..k {
                    if t >> a & 1 == 1 || t >> b & 1 == 1 {
                        continue;
                    }
                    let (ta, tb) = (t | 1 << a, t | 1 << b);
                    let p1 = self.edges[&(ta, b)]
                        .mul(&self.edges[&(t, a)])
                        .scaled(&(edge_sign(t, a) * edge_sign(ta, b)));
                    let p2 = self.edges[&(tb, a)]
                        .mul(&self.edges[&(t, b)])
                        .scaled(&(edge_sign(t, b) * edge_sign(tb, a)));
                    let mut sum = p1;
                    for (r, c, v) in p2.entries() {
                        sum.add_to(r, c, v);
                    }
                    if !sum.is_zero() {
                        return false;
                    }
                }
            }
            true
        })
    }

    /// The collated complex with vertex `T` in degree `|T|`, before normalization.
    pub fn unnormalized(&self) -> BoundedComplex<i64> {
        let k = self.crossings;
        let first = &self.vertices[0];
        let (nt, nb) = (first.n_top(), first.n_bottom());
        let mut by_level: Vec<Vec<u64>> = vec![Vec::new(); k + 1];
        for t in 0..1u64 << k {
            by_level[t.count_ones() as usize].push(t);
        }
        let mut offset: HashMap<u64, usize> = HashMap::new();
        let mut objects = Vec::new();
        for (r, level) in by_level.iter().enumerate() {
            let mut summands = Vec::new();
            let mut off = 0;
            for &t in level {
                let v = self.vertices[t as usize].shifted(-(r as i32));
                offset.insert(t, off);
                off += v.dim();
                summands.extend(v.summands().iter().cloned());
            }
            objects.push(GeometricBimodule::new(nt, nb, summands).expect("vertex summands agree"));
        }
        let mut diffs = Vec::new();
        for r in 0..k {
            let mut d = SparseMat::zeros(objects[r + 1].dim(), objects[r].dim());
            for &t in &by_level[r] {
                for a in (0..k).filter(|&a| t >> a & 1 == 0) {
                    let s = edge_sign(t, a);
                    let (co, ro) = (offset[&t], offset[&(t | 1 << a)]);
                    for (row, col, v) in self.edges[&(t, a)].entries() {
                        d.add_to(ro + row, co + col, &(s * v));
                    }
                }
            }
            diffs.push(d);
        }
        BoundedComplex::new(0, objects, diffs).expect("cube shapes are consistent")
    }

    /// `F(D) = F̄(D)[x]{2x - y}`.
    pub fn complex(&self) -> BoundedComplex<i64> {
        let (x, y) = (self.orientation.x as i32, self.orientation.y as i32);
        self.unnormalized().shift(x, 2 * x - y)
    }
}

/// The normalized complex of an oriented tangle word.
pub fn build_cube(word: &TangleWord) -> Result<BoundedComplex<i64>> {
    Ok(Cube::build(word)?.complex())
}

// ---------------------------------------------------------------------------------------
// Chain maps and cones.

/// A degree-0 chain map; `maps[i]` sends `C^i` to `D^i` and missing degrees are zero.
#[derive(Clone, Debug)]
pub struct ChainMap<R = i64> {
    pub source: BoundedComplex<R>,
    pub target: BoundedComplex<R>,
    pub maps: BTreeMap<i32, SparseMat<R>>,
}

impl<R: Coeff> ChainMap<R> {
    pub fn new(
        source: BoundedComplex<R>,
        target: BoundedComplex<R>,
        maps: BTreeMap<i32, SparseMat<R>>,
    ) -> Result<Self> {
        if source.n_top != target.n_top || source.n_bottom != target.n_bottom {
            return Err(Error::Arity("chain map between complexes of different arity".into()));
        }
        for (&i, m) in &maps {
            if m.cols() != source.obj_or_zero(i).dim() || m.rows() != target.obj_or_zero(i).dim() {
                return Err(Error::NotAChainMap(format!("component {i} has the wrong shape")));
            }
        }
        Ok(Self { source, target, maps })
    }

    pub fn identity(c: &BoundedComplex<R>) -> Self {
        let maps = c
            .degrees()
            .map(|i| {
                let n = c.obj_or_zero(i).dim();
                let mut m = SparseMat::zeros(n, n);
                for k in 0..n {
                    m.add_to(k, k, &R::one());
                }
                (i, m)
            })
            .collect();
        Self { source: c.clone(), target: c.clone(), maps }
    }

    pub fn zero(source: &BoundedComplex<R>, target: &BoundedComplex<R>) -> Self {
        Self { source: source.clone(), target: target.clone(), maps: BTreeMap::new() }
    }

    pub fn component(&self, i: i32) -> SparseMat<R> {
        self.maps.get(&i).cloned().unwrap_or_else(|| {
            SparseMat::zeros(self.target.obj_or_zero(i).dim(), self.source.obj_or_zero(i).dim())
        })
    }

    /// `d_D f = f d_C` in every degree.
    pub fn is_chain_map(&self) -> bool {
        let lo = self.source.lo.min(self.target.lo) - 1;
        let hi = self.source.hi().max(self.target.hi()) + 1;
        (lo..=hi).all(|i| {
            let lhs = self.target.diff_or_zero(i).mul(&self.component(i));
            let rhs = self.component(i + 1).mul(&self.source.diff_or_zero(i));
            lhs == rhs
        })
    }
}

/// Places `m` as a block at `(r0, c0)` inside `out`, scaled by `k`.
fn put_block<R: Coeff>(out: &mut SparseMat<R>, m: &SparseMat<R>, r0: usize, c0: usize, k: &R) {
    for (r, c, v) in m.entries() {
        out.add_to(r0 + r, c0 + c, &v.mul(k));
    }
}

/// `C(f)^i = M^{i+1} ⊕ N^i` with `d(m, n) = (-d_M m, f(m) + d_N n)`.
pub fn cone<R: Coeff>(f: &ChainMap<R>) -> Result<BoundedComplex<R>> {
    if !f.is_chain_map() {
        return Err(Error::NotAChainMap("map does not commute with the differentials".into()));
    }
    let (m, n) = (&f.source, &f.target);
    let lo = (m.lo - 1).min(n.lo);
    let hi = (m.hi() - 1).max(n.hi());
    let mut objects = Vec::new();
    for i in lo..=hi {
        objects.push(m.obj_or_zero(i + 1).direct_sum(&n.obj_or_zero(i))?);
    }
    let mut diffs = Vec::new();
    for i in lo..hi {
        let (mi1, ni) = (m.obj_or_zero(i + 1).dim(), n.obj_or_zero(i).dim());
        let (mi2, ni1) = (m.obj_or_zero(i + 2).dim(), n.obj_or_zero(i + 1).dim());
        let mut d = SparseMat::zeros(mi2 + ni1, mi1 + ni);
        put_block(&mut d, &m.diff_or_zero(i + 1), 0, 0, &R::one().neg());
        put_block(&mut d, &f.component(i + 1), mi2, 0, &R::one());
        put_block(&mut d, &n.diff_or_zero(i), mi2, mi1, &R::one());
        diffs.push(d);
    }
    BoundedComplex::new(lo, objects, diffs)
}

/// Total complex of `C2 ⊗_{H^m} C1` (upper factor first), with differential
/// `d(u ⊗ v) = du ⊗ v + (-1)^p u ⊗ dv` for `u` in degree `p`, each term identified with a
/// geometric bimodule.
pub fn tensor_complexes(c2: &BoundedComplex<i64>, c1: &BoundedComplex<i64>) -> Result<BoundedComplex<i64>> {
    if c2.n_bottom != c1.n_top {
        return Err(Error::Arity(format!(
            "tensoring complexes over H^{} and H^{}",
            c2.n_bottom, c1.n_top
        )));
    }
    let lo = c2.lo + c1.lo;
    let hi = c2.hi() + c1.hi();
    let mut products = HashMap::new();
    for p in c2.degrees() {
        for q in c1.degrees() {
            let (y, x) = (c2.object(p).unwrap(), c1.object(q).unwrap());
            products.insert((p, q), tensor_over(y, x)?);
        }
    }
    // Offsets of each (p, q) block inside total degree p + q.
    let mut offsets = HashMap::new();
    let mut objects = Vec::new();
    for t in lo..=hi {
        let mut summands = Vec::new();
        let mut off = 0;
        for p in c2.degrees() {
            let q = t - p;
            if let Some(pr) = products.get(&(p, q)) {
                offsets.insert((p, q), off);
                off += pr.result.dim();
                summands.extend(pr.result.summands().iter().cloned());
            }
        }
        objects.push(GeometricBimodule::new(c2.n_top, c1.n_bottom, summands)?);
    }
    let mut diffs = Vec::new();
    for t in lo..hi {
        let k = (t - lo) as usize;
        let mut d = SparseMat::zeros(objects[k + 1].dim(), objects[k].dim());
        for p in c2.degrees() {
            let q = t - p;
            let Some(src) = products.get(&(p, q)) else { continue };
            let (y, x) = (c2.object(p).unwrap(), c1.object(q).unwrap());
            let c0 = offsets[&(p, q)];
            if let (Some(dy), Some(tgt)) = (c2.differential(p), products.get(&(p + 1, q))) {
                let y2 = c2.object(p + 1).unwrap();
                let m = transport((y, x, src), Factor::Upper(dy, y2), tgt)?;
                put_block(&mut d, &m, offsets[&(p + 1, q)], c0, &1);
            }
            if let (Some(dx), Some(tgt)) = (c1.differential(q), products.get(&(p, q + 1))) {
                let x2 = c1.object(q + 1).unwrap();
                let m = transport((y, x, src), Factor::Lower(dx, x2), tgt)?;
                let sign = if p.rem_euclid(2) == 0 { 1 } else { -1 };
                put_block(&mut d, &m, offsets[&(p, q + 1)], c0, &sign);
            }
        }
        diffs.push(d);
    }
    BoundedComplex::new(lo, objects, diffs)
}

// ---------------------------------------------------------------------------------------
// Simplification.

/// A matrix kept both by columns and by rows, for cheap elimination updates.
struct Dual<R> {
    cols: Vec<BTreeMap<usize, R>>,
    rows: Vec<BTreeMap<usize, R>>,
}

impl<R: Coeff> Dual<R> {
    fn from(m: &SparseMat<R>) -> Self {
        let mut cols = vec![BTreeMap::new(); m.cols()];
        let mut rows = vec![BTreeMap::new(); m.rows()];
        for (r, c, v) in m.entries() {
            cols[c].insert(r, v.clone());
            rows[r].insert(c, v.clone());
        }
        Self { cols, rows }
    }

    fn add(&mut self, r: usize, c: usize, v: &R) {
        let e = self.cols[c].entry(r).or_insert_with(R::zero);
        *e = e.add(v);
        if e.is_zero() {
            self.cols[c].remove(&r);
            self.rows[r].remove(&c);
        } else {
            self.rows[r].insert(c, e.clone());
        }
    }

    fn drop_col(&mut self, c: usize) {
        for r in std::mem::take(&mut self.cols[c]).into_keys() {
            self.rows[r].remove(&c);
        }
    }

    fn drop_row(&mut self, r: usize) {
        for c in std::mem::take(&mut self.rows[r]).into_keys() {
            self.cols[c].remove(&r);
        }
    }
}

fn simplify<R: Coeff>(cx: &BoundedComplex<R>) -> BoundedComplex<R> {
    let objs = &cx.objects;
    let mut alive: Vec<Vec<bool>> = objs.iter().map(|o| vec![true; o.summands().len()]).collect();
    let mut diffs: Vec<Dual<R>> = cx.diffs.iter().map(Dual::from).collect();
    loop {
        let mut changed = false;
        for k in 0..diffs.len() {
            // Candidate targets in degree k+1, grouped by summand data.
            let mut by_key: HashMap<&Summand, Vec<usize>> = HashMap::new();
            for (t, s) in objs[k + 1].summands().iter().enumerate() {
                by_key.entry(s).or_default().push(t);
            }
            let mut order: Vec<usize> = (0..objs[k].summands().len()).collect();
            order.sort_by_key(|&s| objs[k].summands()[s].shift);
            for strict in [true, false] {
                for &s in &order {
                    if !alive[k][s] {
                        continue;
                    }
                    let Some(cands) = by_key.get(&objs[k].summands()[s]) else { continue };
                    for &t in cands {
                        if !alive[k + 1][t] {
                            continue;
                        }
                        let Some(lam) = scalar_block(&diffs[k], objs, k, s, t) else { continue };
                        if strict && !lam.is_plus_minus_one() {
                            continue;
                        }
                        let Some(inv) = lam.unit_inverse() else { continue };
                        cancel_summands(&mut diffs, objs, k, s, t, &inv);
                        alive[k][s] = false;
                        alive[k + 1][t] = false;
                        changed = true;
                        break;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    // Rebuild with the surviving summands.
    let mut remap: Vec<Vec<Option<usize>>> = Vec::new();
    let mut objects = Vec::new();
    for (k, o) in objs.iter().enumerate() {
        let mut map = vec![None; o.dim()];
        let mut summands = Vec::new();
        let mut next = 0;
        for (s, sm) in o.summands().iter().enumerate() {
            if alive[k][s] {
                for i in o.summand_range(s) {
                    map[i] = Some(next);
                    next += 1;
                }
                summands.push(sm.clone());
            }
        }
        objects.push(GeometricBimodule::new(cx.n_top, cx.n_bottom, summands).expect("surviving summands"));
        remap.push(map);
    }
    let new_diffs = diffs
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let mut m = SparseMat::zeros(objects[k + 1].dim(), objects[k].dim());
            for (c, col) in d.cols.iter().enumerate() {
                for (&r, v) in col {
                    let (Some(nr), Some(nc)) = (remap[k + 1][r], remap[k][c]) else {
                        unreachable!("entry on a cancelled summand")
                    };
                    m.add_to(nr, nc, v);
                }
            }
            m
        })
        .collect();
    BoundedComplex {
        n_top: cx.n_top,
        n_bottom: cx.n_bottom,
        lo: cx.lo,
        objects,
        diffs: new_diffs,
    }
    .trimmed()
}

/// The scalar `λ` when the block of `d^k` from summand `s` to summand `t` is `λ·I`.
fn scalar_block<R: Coeff>(d: &Dual<R>, objs: &[GeometricBimodule], k: usize, s: usize, t: usize) -> Option<R> {
    let (sr, tr) = (objs[k].summand_range(s), objs[k + 1].summand_range(t));
    let mut lam: Option<R> = None;
    for (o, c) in sr.enumerate() {
        let mut it = d.cols[c].range(tr.clone());
        let (&r, v) = it.next()?;
        if it.next().is_some() || r != tr.start + o {
            return None;
        }
        match &lam {
            None => lam = Some(v.clone()),
            Some(l) if l == v => {}
            Some(_) => return None,
        }
    }
    lam
}

/// Cancels summand `s` of degree `k` against summand `t` of degree `k + 1`, one basis pair
/// at a time: `d[z][y] -= d[z][c] d[r][y] / λ`.
fn cancel_summands<R: Coeff>(diffs: &mut [Dual<R>], objs: &[GeometricBimodule], k: usize, s: usize, t: usize, inv: &R) {
    let (sr, tr) = (objs[k].summand_range(s), objs[k + 1].summand_range(t));
    for (c, r) in sr.zip(tr) {
        let d = &mut diffs[k];
        let col: Vec<(usize, R)> = d.cols[c].iter().filter(|(&z, _)| z != r).map(|(&z, v)| (z, v.clone())).collect();
        let row: Vec<(usize, R)> = d.rows[r].iter().filter(|(&y, _)| y != c).map(|(&y, v)| (y, v.clone())).collect();
        for (z, dzc) in &col {
            let f = dzc.mul(inv);
            for (y, dry) in &row {
                d.add(*z, *y, &f.mul(dry).neg());
            }
        }
        d.drop_col(c);
        d.drop_row(r);
        if k > 0 {
            diffs[k - 1].drop_row(c);
        }
        if k + 1 < diffs.len() {
            diffs[k + 1].drop_col(r);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Q;
    use crate::word::SliceKind::*;

    fn word(points: usize, s: &[(crate::word::SliceKind, usize)]) -> TangleWord {
        TangleWord::from_slices(points, s).unwrap()
    }

    #[test]
    fn crossingless_word_is_its_bimodule() {
        let w = word(2, &[(Cap, 0), (Cup, 0)]);
        let c = build_cube(&w).unwrap();
        assert_eq!((c.lo(), c.hi()), (0, 0));
        assert_eq!(c.object(0).unwrap(), &build_bimodule(&w.resolution(0)));
    }

    #[test]
    fn unknot_homology() {
        let c = build_cube(&word(0, &[(Cup, 0), (Cap, 0)])).unwrap();
        let h = c.homology().unwrap();
        assert_eq!(h.get(0, 1).rank, 1);
        assert_eq!(h.get(0, -1).rank, 1);
        assert_eq!(h.total_rank(), 2);
    }

    #[test]
    fn kinked_unknots_agree() {
        let plain = build_cube(&word(0, &[(Cup, 0), (Cap, 0)])).unwrap().homology().unwrap();
        for kink in [X, XBar] {
            let c = build_cube(&word(0, &[(Cup, 0), (kink, 0), (Cap, 0)])).unwrap();
            assert!(c.is_complex() && c.is_graded());
            assert_eq!(c.homology().unwrap(), plain, "{kink:?}");
            assert_eq!(c.simplify().homology().unwrap(), plain);
        }
    }

    #[test]
    fn trefoil_has_torsion() {
        let t = word(0, &[(Cup, 0), (Cup, 1), (X, 2), (X, 2), (X, 2), (Cap, 1), (Cap, 0)]);
        let cube = Cube::build(&t).unwrap();
        assert!(cube.squares_anticommute());
        let c = cube.complex();
        assert!(c.is_complex());
        let h = c.homology().unwrap();
        assert_eq!(h.total_rank(), 4);
        assert_eq!(h.torsion_count(), 1);
        assert_eq!(c.simplify().homology().unwrap(), h);
        assert_eq!(h.euler(), c.euler_class().coeff(&FlatTangle::vert(0)));
    }

    #[test]
    fn shifts_and_cones() {
        let c = build_cube(&word(2, &[(X, 0)])).unwrap();
        assert_eq!(c.shift(0, 0), c);
        assert_eq!(c.shift(1, 0).shift(1, 0), c.shift(2, 0));
        let neg = c.euler_class().scaled(&LaurentPoly::monomial(-1, 0));
        assert_eq!(c.shift(1, 0).euler_class(), neg);
        let id = ChainMap::identity(&c);
        let k = cone(&id).unwrap();
        assert!(k.is_complex());
        assert!(k.simplify().is_zero());
        let z = ChainMap::zero(&c, &c);
        let k0 = cone(&z).unwrap();
        assert_eq!(k0.total_dim(), 2 * c.total_dim());
        assert_eq!(k0.euler_class(), c.shift(1, 0).euler_class().plus(&c.euler_class()));
    }

    #[test]
    fn left_curl_simplifies_to_shifted_cap() {
        let mut w = word(2, &[(XBar, 0), (Cap, 0)]);
        w.set_bottom_orient(vec![true, false]).unwrap();
        let s = build_cube(&w).unwrap().simplify();
        assert_eq!((s.lo(), s.hi()), (0, 0));
        let sm = s.object(0).unwrap().summands();
        assert_eq!(sm.len(), 1);
        assert_eq!(sm[0].tangle, FlatTangle::cap(2, 0).unwrap());
        // Over Q the same core appears.
        let q = build_cube(&w).unwrap().map_coeffs(|&v| Q::from_i64(v)).simplify();
        assert_eq!(q.fingerprint(), s.fingerprint());
    }

    #[test]
    fn tangency_simplifies_to_vert() {
        let w = word(2, &[(X, 0), (XBar, 0)]);
        let c = build_cube(&w).unwrap();
        assert_eq!(c.hi() - c.lo(), 2);
        // Middle term: Vert, plus cup-cap with a trapped circle split in two.
        assert_eq!(c.object(c.lo() + 1).unwrap().summands().len(), 3);
        let s = c.simplify();
        assert_eq!(s.fingerprint(), build_cube(&word(2, &[])).unwrap().fingerprint());
    }

    #[test]
    fn tensor_of_cubes_matches_cube_of_composite() {
        let d1 = word(2, &[(X, 0)]);
        let d2 = word(2, &[(XBar, 0)]);
        let (c1, c2) = (build_cube(&d1).unwrap(), build_cube(&d2).unwrap());
        let t = tensor_complexes(&c2, &c1).unwrap();
        assert!(t.is_complex() && t.is_graded());
        let direct = build_cube(&d1.stack(&d2).unwrap()).unwrap();
        assert_eq!(t.fingerprint(), direct.fingerprint());
        assert_eq!(t.closures(), direct.closures());
    }

    #[test]
    fn homology_table_round_trip() {
        let c = build_cube(&word(0, &[(Cup, 0), (Cup, 1), (X, 2), (X, 2), (Cap, 1), (Cap, 0)])).unwrap();
        let h = c.homology().unwrap();
        let s = serde_json::to_string(&h).unwrap();
        let back: HomologyTable = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
    }
}
