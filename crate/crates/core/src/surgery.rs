//! Concrete planar diagrams as multigraphs, with saddle surgery acting on labelings.
//!
//! A [`Diagram`] has its boundary points numbered first (bottom `0..2n`, then top
//! `2n..2n+2m`), followed by interior nodes. Every node has degree two once the diagram is
//! closed off, so the components are arcs and circles. A component is named by its smallest
//! node, which makes circle identifiers reproducible and lets boundary-touching circles of a
//! closure line up with the circles of any other closure sharing the same boundary pairing.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::frobenius::TensorVector;
use crate::planar::{FlatTangle, Matching};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    n_bottom: usize,
    n_top: usize,
    nodes: usize,
    edges: Vec<Option<(usize, usize)>>,
}

/// What a saddle did to the components it touched.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaddleKind {
    /// Two circles became one.
    Merge { a: usize, b: usize, into: usize },
    /// One circle became two.
    Split { from: usize, a: usize, b: usize },
    /// Only boundary arcs were rearranged; no circle was created or destroyed.
    Arcs,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let nx = self.0[y];
            self.0[y] = r;
            y = nx;
        }
        r
    }
    // Keeps the smaller root so that roots are component minima.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

impl Diagram {
    /// An empty diagram with `nodes` nodes, the first `2n + 2m` of them boundary points.
    pub fn with_nodes(n_bottom: usize, n_top: usize, nodes: usize) -> Self {
        assert!(nodes >= 2 * (n_bottom + n_top));
        Self {
            n_bottom,
            n_top,
            nodes,
            edges: Vec::new(),
        }
    }

    /// A concrete picture of a flat tangle; each circle is drawn as a two-node bigon.
    pub fn from_flat(t: &FlatTangle) -> Self {
        let b = t.num_points();
        let mut d = Self::with_nodes(t.n_bottom(), t.n_top(), b + 2 * t.circles());
        for (p, &q) in t.pairs().iter().enumerate() {
            if p < q {
                d.add_edge(p, q);
            }
        }
        for c in 0..t.circles() {
            d.add_edge(b + 2 * c, b + 2 * c + 1);
            d.add_edge(b + 2 * c, b + 2 * c + 1);
        }
        d
    }

    pub fn n_bottom(&self) -> usize {
        self.n_bottom
    }

    pub fn n_top(&self) -> usize {
        self.n_top
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    /// Number of edge ids handed out so far (removed edges keep their slot).
    pub fn edge_slots(&self) -> usize {
        self.edges.len()
    }

    pub fn boundary_points(&self) -> usize {
        2 * (self.n_bottom + self.n_top)
    }

    pub fn add_edge(&mut self, p: usize, q: usize) -> usize {
        assert!(p < self.nodes && q < self.nodes);
        self.edges.push(Some((p, q)));
        self.edges.len() - 1
    }

    pub fn add_node(&mut self) -> usize {
        self.nodes += 1;
        self.nodes - 1
    }

    pub fn edge(&self, e: usize) -> Option<(usize, usize)> {
        self.edges.get(e).copied().flatten()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, (usize, usize))> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.map(|e| (i, e)))
    }

    /// Component name (smallest node) of every node.
    pub fn component_of(&self) -> Vec<usize> {
        let mut dsu = Dsu::new(self.nodes);
        for (_, (p, q)) in self.edges() {
            dsu.union(p, q);
        }
        (0..self.nodes).map(|x| dsu.find(x)).collect()
    }

    /// Circle identifiers in increasing order. Isolated nodes are ignored; a component is a
    /// circle when it contains no boundary point, or always once the diagram is closed.
    pub fn circles(&self) -> Vec<usize> {
        let comp = self.component_of();
        let degree = self.degrees();
        let mut out: Vec<usize> = (0..self.nodes)
            .filter(|&x| comp[x] == x && degree[x] > 0)
            .filter(|&x| x >= self.boundary_points())
            .collect();
        out.sort_unstable();
        out
    }

    fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes];
        for (_, (p, q)) in self.edges() {
            deg[p] += 1;
            deg[q] += 1;
        }
        deg
    }

    pub fn is_closed(&self) -> bool {
        self.boundary_points() == 0
    }

    /// Caps off the top with `W(top)` and the bottom with `bottom`, keeping node numbers.
    /// The result has no boundary; circles through former boundary points keep the
    /// smallest such point as their name.
    pub fn closure(&self, top: &Matching, bottom: &Matching) -> Result<Diagram> {
        Ok(self.closure_with_edges(top, bottom)?.0)
    }

    /// [`Diagram::closure`], also returning the edge ids of the bottom arcs and of the top
    /// arcs, each in the arc order of its matching.
    pub fn closure_with_edges(
        &self,
        top: &Matching,
        bottom: &Matching,
    ) -> Result<(Diagram, Vec<usize>, Vec<usize>)> {
        if top.n() != self.n_top || bottom.n() != self.n_bottom {
            return Err(Error::Arity(format!(
                "closure by matchings of sizes {} and {} on a diagram with {} top and {} bottom points",
                2 * top.n(),
                2 * bottom.n(),
                2 * self.n_top,
                2 * self.n_bottom
            )));
        }
        let mut d = self.clone();
        let bottom_edges = bottom.arcs().into_iter().map(|(p, q)| d.add_edge(p, q)).collect();
        let off = 2 * self.n_bottom;
        let top_edges = top
            .arcs()
            .into_iter()
            .map(|(p, q)| d.add_edge(off + p, off + q))
            .collect();
        d.n_bottom = 0;
        d.n_top = 0;
        Ok((d, bottom_edges, top_edges))
    }

    /// Copies every edge of `other` into `self`, sending node `v` to `map(v)`. Returns the new
    /// ids of `other`'s edges (absent edges map to `usize::MAX`).
    pub fn embed(&mut self, other: &Diagram, map: impl Fn(usize) -> usize) -> Vec<usize> {
        other
            .edges
            .iter()
            .map(|e| match e {
                Some((p, q)) => self.add_edge(map(*p), map(*q)),
                None => usize::MAX,
            })
            .collect()
    }

    /// For each circle of `self`, the name it gets once nodes are renumbered by `map`
    /// (the smallest renumbered node on it).
    pub fn circle_renaming(&self, map: impl Fn(usize) -> usize) -> BTreeMap<usize, usize> {
        let comp = self.component_of();
        let circles = self.circles();
        let mut out: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..self.nodes {
            if circles.binary_search(&comp[v]).is_ok() {
                let e = out.entry(comp[v]).or_insert(usize::MAX);
                *e = (*e).min(map(v));
            }
        }
        out
    }

    /// The isotopy class: boundary pairing plus the number of circles.
    pub fn flat(&self) -> FlatTangle {
        let b = self.boundary_points();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.nodes];
        for (e, (p, q)) in self.edges() {
            adj[p].push((e, q));
            adj[q].push((e, p));
        }
        let mut pairs = vec![usize::MAX; b];
        for s in 0..b {
            if pairs[s] != usize::MAX {
                continue;
            }
            let (mut prev_edge, mut cur) = (usize::MAX, s);
            loop {
                let next = adj[cur].iter().find(|(e, _)| *e != prev_edge).copied();
                let (e, nx) = next.expect("boundary arc ends at a boundary point");
                if nx < b {
                    pairs[s] = nx;
                    pairs[nx] = s;
                    break;
                }
                prev_edge = e;
                cur = nx;
            }
        }
        FlatTangle::new_unchecked(self.n_bottom, self.n_top, pairs, self.circles().len())
    }

    /// Surgery along a band joining edges `e1 = (p,q)` and `e2 = (r,s)`; they are replaced by
    /// `(p,r)` and `(q,s)`. Returns the effect on components.
    pub fn saddle(&mut self, e1: usize, e2: usize) -> Result<SaddleKind> {
        let (p, q) = self.edge(e1).ok_or(Error::SiteOutOfRange(e1))?;
        let (r, s) = self.edge(e2).ok_or(Error::SiteOutOfRange(e2))?;
        if e1 == e2 {
            return Err(Error::SiteOutOfRange(e2));
        }
        let before = self.component_of();
        let circ_before = self.circles();
        self.edges[e1] = Some((p, r));
        self.edges[e2] = Some((q, s));
        let after = self.component_of();
        let (c1, c2) = (before[p], before[r]);
        let is_circ = |c: usize| circ_before.binary_search(&c).is_ok();
        let outcome = if c1 == c2 {
            if after[p] == after[q] {
                Err(Error::Incompatible(
                    "band attached to one component without splitting it is non-orientable".into(),
                ))
            } else if is_circ(c1) {
                let (a, b) = (after[p].min(after[q]), after[p].max(after[q]));
                Ok(SaddleKind::Split { from: c1, a, b })
            } else {
                Err(Error::Incompatible(
                    "saddle splits a circle off a boundary arc; evaluate it on a closure".into(),
                ))
            }
        } else {
            match (is_circ(c1), is_circ(c2)) {
                (true, true) => Ok(SaddleKind::Merge {
                    a: c1,
                    b: c2,
                    into: after[p],
                }),
                (false, false) => Ok(SaddleKind::Arcs),
                _ => Err(Error::Incompatible(
                    "saddle between a boundary arc and a circle; evaluate it on a closure".into(),
                )),
            }
        };
        if outcome.is_err() {
            self.edges[e1] = Some((p, q));
            self.edges[e2] = Some((r, s));
        }
        outcome
    }

    /// Replaces edges `(p,q)`, `(r,s)` by `(p,r)`, `(q,s)` without inspecting components.
    pub fn rewire(&mut self, e1: usize, e2: usize) -> Result<()> {
        let (p, q) = self.edge(e1).ok_or(Error::SiteOutOfRange(e1))?;
        let (r, s) = self.edge(e2).ok_or(Error::SiteOutOfRange(e2))?;
        if e1 == e2 {
            return Err(Error::SiteOutOfRange(e2));
        }
        self.edges[e1] = Some((p, r));
        self.edges[e2] = Some((q, s));
        Ok(())
    }

    /// Deletes every edge of the component named `id`.
    pub fn remove_component(&mut self, id: usize) {
        let comp = self.component_of();
        for e in self.edges.iter_mut() {
            if let Some((p, _)) = *e {
                if comp[p] == id {
                    *e = None;
                }
            }
        }
    }

    /// Saddle that also transports a labeling of the circles.
    pub fn saddle_map(&mut self, e1: usize, e2: usize, v: &TensorVector) -> Result<TensorVector> {
        let kind = self.saddle(e1, e2)?;
        match kind {
            SaddleKind::Merge { a, b, into } => v.alg_multiply(a, b, into),
            SaddleKind::Split { from, a, b } => v.alg_comultiply(from, a, b),
            SaddleKind::Arcs => Ok(v.clone()),
        }
    }

    /// Adds a new circle (a two-node bigon) labeled `1`. Returns the new circle id.
    pub fn birth(&mut self, v: &TensorVector) -> Result<(usize, TensorVector)> {
        let a = self.add_node();
        let b = self.add_node();
        self.add_edge(a, b);
        self.add_edge(a, b);
        Ok((a, v.alg_birth(a)?))
    }

    /// Caps off the circle named `id`, applying the counit.
    pub fn death(&mut self, id: usize, v: &TensorVector) -> Result<TensorVector> {
        if self.circles().binary_search(&id).is_err() {
            return Err(Error::UnknownCircle(id));
        }
        self.remove_component(id);
        v.alg_death(id)
    }

    /// Graded ranks of `F` of a closed diagram: `2^k` spread binomially over degrees.
    pub fn evaluate_closed(&self) -> Result<BTreeMap<i32, u64>> {
        if !self.is_closed() {
            return Err(Error::BoundaryPresent);
        }
        Ok(closed_ranks(self.circles().len(), 0))
    }
}

/// Graded ranks of `A^{⊗k}{shift}`.
pub fn closed_ranks(k: usize, shift: i32) -> BTreeMap<i32, u64> {
    let mut out = BTreeMap::new();
    let mut binom: u64 = 1;
    for x in 0..=k {
        out.insert(2 * x as i32 - k as i32 + shift, binom);
        binom = binom * (k - x) as u64 / (x as u64 + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::{compose, matchings};

    fn bigon_pair() -> Diagram {
        // two circles: nodes (0,1) and (2,3)
        let mut d = Diagram::with_nodes(0, 0, 4);
        d.add_edge(0, 1);
        d.add_edge(0, 1);
        d.add_edge(2, 3);
        d.add_edge(2, 3);
        d
    }

    #[test]
    fn merge_x_x_is_zero() {
        let mut d = bigon_pair();
        let v = TensorVector::basis(&[(0, true), (2, true)], 0);
        assert!(d.saddle_map(0, 2, &v).unwrap().is_zero());
        assert_eq!(d.circles(), vec![0]);
    }

    #[test]
    fn split_one() {
        let mut d = Diagram::with_nodes(0, 0, 4);
        // a square 0-1-2-3-0
        let e0 = d.add_edge(0, 1);
        d.add_edge(1, 2);
        let e2 = d.add_edge(2, 3);
        d.add_edge(3, 0);
        let v = TensorVector::basis(&[(0, false)], 0);
        // (0,1),(2,3) -> (0,2),(1,3) is a twisted band: still one circle.
        let mut d2 = d.clone();
        assert!(d2.saddle(e0, e2).is_err());
        assert_eq!(d2, d);
        // With the second edge read backwards the band splits the square.
        d.edges[e2] = Some((3, 2));
        let w = d.saddle_map(e0, e2, &v).unwrap();
        assert_eq!(d.circles(), vec![0, 1]);
        let mut expect = TensorVector::basis(&[(0, false), (1, true)], 0);
        expect.add_assign(&TensorVector::basis(&[(0, true), (1, false)], 0));
        assert_eq!(w, expect);
    }

    #[test]
    fn arcs_only_saddle() {
        // vertical strands on 2 bottom + 2 top points -> cup-cap
        let mut d = Diagram::from_flat(&FlatTangle::vert(1));
        let k = d.saddle(0, 1).unwrap();
        assert_eq!(k, SaddleKind::Arcs);
        let f = d.flat();
        assert_eq!(f.pairs(), &[1, 0, 3, 2]);
    }

    #[test]
    fn flat_roundtrip_and_closure_counts() {
        for n in 0..=3 {
            let ms = matchings(n);
            for a in ms.iter() {
                for b in ms.iter() {
                    let d = Diagram::from_flat(&FlatTangle::vert(n));
                    let c = d.closure(b, a).unwrap();
                    let expect = compose(&b.as_tangle().reflect(), &a.as_tangle()).unwrap();
                    assert_eq!(c.circles().len(), expect.circles());
                }
            }
        }
    }

    #[test]
    fn evaluate_closed_ranks() {
        let d = Diagram::with_nodes(0, 0, 0);
        assert_eq!(d.evaluate_closed().unwrap(), [(0, 1)].into_iter().collect());
        assert_eq!(
            bigon_pair().evaluate_closed().unwrap(),
            [(-2, 1), (0, 2), (2, 1)].into_iter().collect()
        );
        let open = Diagram::from_flat(&FlatTangle::vert(1));
        assert_eq!(open.evaluate_closed(), Err(Error::BoundaryPresent));
    }

    #[test]
    fn birth_then_death_is_zero() {
        let mut d = bigon_pair();
        let v = TensorVector::basis(&[(0, true), (2, false)], 0);
        let (id, w) = d.birth(&v).unwrap();
        assert!(d.death(id, &w).unwrap().is_zero());
    }

    #[test]
    fn disjoint_saddles_commute() {
        // four circles; saddles (0,1) and (2,3) in either order
        let mut base = Diagram::with_nodes(0, 0, 8);
        for c in 0..4 {
            base.add_edge(2 * c, 2 * c + 1);
            base.add_edge(2 * c, 2 * c + 1);
        }
        for labels in 0..16u32 {
            let v = TensorVector::basis(
                &(0..4).map(|c| (2 * c, labels >> c & 1 == 1)).collect::<Vec<_>>(),
                0,
            );
            let mut d1 = base.clone();
            let a = d1.saddle_map(0, 2, &v).unwrap();
            let a = d1.saddle_map(4, 6, &a).unwrap();
            let mut d2 = base.clone();
            let b = d2.saddle_map(4, 6, &v).unwrap();
            let b = d2.saddle_map(0, 2, &b).unwrap();
            assert_eq!(a, b);
        }
    }
}
