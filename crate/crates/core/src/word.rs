//! Tangle words: stacks of elementary slices (crossings, caps, cups) read bottom to top,
//! their resolutions as surgery diagrams, and orientation bookkeeping.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planar::FlatTangle;
use crate::surgery::Diagram;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SliceKind {
    /// `σ_i`: 0-resolution is the vertical smoothing.
    X,
    /// `σ_i^{-1}`: 0-resolution is the horizontal smoothing.
    #[serde(rename = "xbar")]
    XBar,
    Cap,
    Cup,
    /// Identity slice; used for the empty word.
    Vert,
}

impl SliceKind {
    pub fn keyword(self) -> &'static str {
        match self {
            SliceKind::X => "x",
            SliceKind::XBar => "xbar",
            SliceKind::Cap => "cap",
            SliceKind::Cup => "cup",
            SliceKind::Vert => "vert",
        }
    }

    pub fn is_crossing(self) -> bool {
        matches!(self, SliceKind::X | SliceKind::XBar)
    }
}

/// One slice; `pos` is 0-based and `strands` is the number of points just below it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slice {
    pub kind: SliceKind,
    pub pos: usize,
    pub strands: usize,
}

impl Slice {
    pub fn strands_above(&self) -> usize {
        match self.kind {
            SliceKind::Cap => self.strands - 2,
            SliceKind::Cup => self.strands + 2,
            _ => self.strands,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangleWord {
    bottom: usize,
    slices: Vec<Slice>,
    /// Signs of the bottom points (`true` = strand leaves the point upwards).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bottom_orient: Option<Vec<bool>>,
    /// Signs of the top points (`true` = strand arrives from below).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    top_orient: Option<Vec<bool>>,
    /// 0-based component indices (ordered by smallest node) whose orientation is flipped.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    reversed: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossingType {
    X,
    Y,
}

/// Result of orientation propagation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orientation {
    pub bottom: Vec<bool>,
    pub top: Vec<bool>,
    pub crossings: Vec<CrossingType>,
    pub x: usize,
    pub y: usize,
    pub components: usize,
    /// Per crossing: (component, runs upward) for the strand from bottom-left to top-right,
    /// then for the strand from bottom-right to top-left.
    pub strands: Vec<[(usize, bool); 2]>,
}

/// Node numbering of the layered picture: bottom points, top points, then interior levels.
struct Layout {
    widths: Vec<usize>,
    base: Vec<usize>,
    nodes: usize,
}

impl Layout {
    fn node(&self, level: usize, p: usize) -> usize {
        debug_assert!(p < self.widths[level]);
        self.base[level] + p
    }
}

impl TangleWord {
    /// The empty word on `points` bottom points (which must be even).
    pub fn new(points: usize) -> Result<Self> {
        if points % 2 != 0 {
            return Err(Error::Arity(format!("odd number of bottom points {points}")));
        }
        Ok(Self {
            bottom: points,
            slices: Vec::new(),
            bottom_orient: None,
            top_orient: None,
            reversed: Vec::new(),
        })
    }

    /// Appends a slice at 0-based position `pos` on top of the word.
    pub fn push(&mut self, kind: SliceKind, pos: usize) -> Result<()> {
        let w = self.top_points();
        let ok = match kind {
            SliceKind::X | SliceKind::XBar | SliceKind::Cap => pos + 1 < w,
            SliceKind::Cup => pos <= w,
            SliceKind::Vert => true,
        };
        if !ok {
            return Err(Error::Arity(format!(
                "{} at {} on {w} strands",
                kind.keyword(),
                pos + 1
            )));
        }
        self.slices.push(Slice { kind, pos, strands: w });
        Ok(())
    }

    pub fn with(mut self, kind: SliceKind, pos: usize) -> Result<Self> {
        self.push(kind, pos)?;
        Ok(self)
    }

    /// Convenience constructor from `(kind, 0-based position)` pairs.
    pub fn from_slices(points: usize, slices: &[(SliceKind, usize)]) -> Result<Self> {
        let mut w = Self::new(points)?;
        for &(k, p) in slices {
            w.push(k, p)?;
        }
        Ok(w)
    }

    pub fn bottom_points(&self) -> usize {
        self.bottom
    }

    pub fn top_points(&self) -> usize {
        self.slices.last().map_or(self.bottom, |s| s.strands_above())
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    pub fn crossings(&self) -> usize {
        self.slices.iter().filter(|s| s.kind.is_crossing()).count()
    }

    pub fn bottom_orient(&self) -> Option<&[bool]> {
        self.bottom_orient.as_deref()
    }

    pub fn top_orient(&self) -> Option<&[bool]> {
        self.top_orient.as_deref()
    }

    pub fn reversed(&self) -> &[usize] {
        &self.reversed
    }

    pub fn set_bottom_orient(&mut self, signs: Vec<bool>) -> Result<()> {
        if signs.len() != self.bottom {
            return Err(Error::Orientation(format!(
                "{} bottom signs for {} points",
                signs.len(),
                self.bottom
            )));
        }
        self.bottom_orient = Some(signs);
        Ok(())
    }

    pub fn set_top_orient(&mut self, signs: Vec<bool>) -> Result<()> {
        if signs.len() != self.top_points() {
            return Err(Error::Orientation(format!(
                "{} top signs for {} points",
                signs.len(),
                self.top_points()
            )));
        }
        self.top_orient = Some(signs);
        Ok(())
    }

    /// Flips the orientation of component `k` (0-based, ordered by smallest node).
    pub fn reverse_component(&mut self, k: usize) {
        if let Some(i) = self.reversed.iter().position(|&r| r == k) {
            self.reversed.remove(i);
        } else {
            self.reversed.push(k);
            self.reversed.sort_unstable();
        }
    }

    /// The word with `upper` stacked on top. Orientation data on the outer boundary is
    /// kept; data on the glued boundary and component overrides are dropped.
    pub fn stack(&self, upper: &TangleWord) -> Result<TangleWord> {
        if self.top_points() != upper.bottom {
            return Err(Error::Arity(format!(
                "stacking {} points under {}",
                self.top_points(),
                upper.bottom
            )));
        }
        let mut out = self.clone();
        out.top_orient = upper.top_orient.clone();
        out.reversed.clear();
        for s in &upper.slices {
            out.push(s.kind, s.pos)?;
        }
        Ok(out)
    }

    /// The word with `k` untouched strands added on the left and `r` on the right.
    pub fn padded(&self, l: usize, r: usize) -> Result<TangleWord> {
        let mut out = TangleWord::new(self.bottom + l + r)?;
        for s in &self.slices {
            out.push(s.kind, s.pos + l)?;
        }
        Ok(out)
    }

    fn effective_slices(&self) -> Vec<Slice> {
        if self.slices.is_empty() {
            vec![Slice { kind: SliceKind::Vert, pos: 0, strands: self.bottom }]
        } else {
            self.slices.clone()
        }
    }

    fn layout(&self) -> Layout {
        let slices = self.effective_slices();
        let mut widths = vec![self.bottom];
        widths.extend(slices.iter().map(|s| s.strands_above()));
        let last = widths.len() - 1;
        let mut base = vec![0; widths.len()];
        base[last] = widths[0];
        let mut next = widths[0] + widths[last];
        for (l, w) in widths.iter().enumerate().take(last).skip(1) {
            base[l] = next;
            next += w;
        }
        Layout { widths, base, nodes: next }
    }

    /// Edges of slice `s` other than crossing sites, as pairs of (level, position).
    fn passing_edges(s: &Slice) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for p in 0..s.strands {
            match s.kind {
                SliceKind::X | SliceKind::XBar if p == s.pos || p == s.pos + 1 => {}
                SliceKind::Cap if p == s.pos || p == s.pos + 1 => {}
                SliceKind::Cap if p > s.pos + 1 => out.push((p, p - 2)),
                SliceKind::Cup if p >= s.pos => out.push((p, p + 2)),
                _ => out.push((p, p)),
            }
        }
        out
    }

    /// The resolution with crossing `k` smoothed according to bit `k` of `state`, along with
    /// the two edge ids at each crossing (a saddle on them moves to the other smoothing).
    pub fn resolve_with_sites(&self, state: u64) -> (Diagram, Vec<(usize, usize)>) {
        let lay = self.layout();
        let last = lay.widths.len() - 1;
        let mut d = Diagram::with_nodes(self.bottom / 2, lay.widths[last] / 2, lay.nodes);
        let mut sites = Vec::new();
        for (s, sl) in self.effective_slices().iter().enumerate() {
            let lo = |p| lay.node(s, p);
            let hi = |p| lay.node(s + 1, p);
            for (p, q) in Self::passing_edges(sl) {
                d.add_edge(lo(p), hi(q));
            }
            let i = sl.pos;
            match sl.kind {
                SliceKind::X | SliceKind::XBar => {
                    let bit = state >> sites.len() & 1 == 1;
                    let vertical = bit == (sl.kind == SliceKind::XBar);
                    // Stored so that rewiring swaps the two smoothings.
                    let e = if vertical {
                        (d.add_edge(lo(i), hi(i)), d.add_edge(lo(i + 1), hi(i + 1)))
                    } else {
                        (d.add_edge(lo(i), lo(i + 1)), d.add_edge(hi(i), hi(i + 1)))
                    };
                    sites.push(e);
                }
                SliceKind::Cap => {
                    d.add_edge(lo(i), lo(i + 1));
                }
                SliceKind::Cup => {
                    d.add_edge(hi(i), hi(i + 1));
                }
                SliceKind::Vert => {}
            }
        }
        (d, sites)
    }

    pub fn resolve(&self, state: u64) -> Diagram {
        self.resolve_with_sites(state).0
    }

    /// The flat tangle of a resolution.
    pub fn resolution(&self, state: u64) -> FlatTangle {
        self.resolve(state).flat()
    }

    /// Propagates orientations through the word and classifies every crossing.
    pub fn orientation(&self) -> Result<Orientation> {
        let lay = self.layout();
        let slices = self.effective_slices();
        let last = lay.widths.len() - 1;
        let n = lay.nodes;
        // Strand graph: crossings are traversed diagonally; each edge is stored lower end first.
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut cross_edges = Vec::new();
        let mut cup_edges = Vec::new();
        for (s, sl) in slices.iter().enumerate() {
            let lo = |p| lay.node(s, p);
            let hi = |p| lay.node(s + 1, p);
            for (p, q) in Self::passing_edges(sl) {
                edges.push((lo(p), hi(q)));
            }
            let i = sl.pos;
            match sl.kind {
                SliceKind::X | SliceKind::XBar => {
                    edges.push((lo(i), hi(i + 1)));
                    edges.push((lo(i + 1), hi(i)));
                    cross_edges.push((sl.kind, edges.len() - 2, edges.len() - 1));
                }
                SliceKind::Cap => edges.push((lo(i), lo(i + 1))),
                SliceKind::Cup => {
                    edges.push((hi(i), hi(i + 1)));
                    cup_edges.push(edges.len() - 1);
                }
                SliceKind::Vert => {}
            }
        }
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (e, &(p, q)) in edges.iter().enumerate() {
            adj[p].push((e, q));
            adj[q].push((e, p));
        }
        let nb = lay.widths[0];
        let nt = lay.widths[last];
        let boundary = nb + nt;
        // Walk every component, recording a traversal direction per edge (`true` = forward).
        let mut comp_of_edge = vec![usize::MAX; edges.len()];
        let mut comps: Vec<(Vec<usize>, Option<(usize, usize)>)> = Vec::new();
        for start in 0..n {
            if adj[start].is_empty() || adj[start].iter().all(|&(e, _)| comp_of_edge[e] != usize::MAX) {
                continue;
            }
            let id = comps.len();
            let mut members = Vec::new();
            let mut stack = vec![start];
            let mut ends = Vec::new();
            while let Some(v) = stack.pop() {
                if v < boundary {
                    ends.push(v);
                }
                for &(e, w) in &adj[v] {
                    if comp_of_edge[e] == usize::MAX {
                        comp_of_edge[e] = id;
                        members.push(e);
                        stack.push(w);
                    }
                }
            }
            ends.sort_unstable();
            ends.dedup();
            let arc = (ends.len() == 2).then(|| (ends[0], ends[1]));
            comps.push((members, arc));
        }
        let mut forward = vec![true; edges.len()];
        let mut bottom = vec![true; nb];
        let mut top = vec![true; nt];
        for (k, (_, arc)) in comps.iter().enumerate() {
            let flip = self.reversed.contains(&k);
            let (from, first) = match *arc {
                Some((a, b)) => {
                    // `true` when the walk should start at `a`.
                    let wants = |p: usize| -> Option<bool> {
                        if p < nb {
                            self.bottom_orient.as_ref().map(|o| o[p])
                        } else {
                            self.top_orient.as_ref().map(|o| !o[p - nb])
                        }
                    };
                    let pinned = match (wants(a), wants(b)) {
                        (Some(x), Some(y)) if x == y => {
                            return Err(Error::Orientation(format!(
                                "strand between boundary points {} and {} has clashing end signs",
                                a + 1,
                                b + 1
                            )))
                        }
                        (Some(x), _) => Some(x),
                        (None, Some(y)) => Some(!y),
                        (None, None) => None,
                    };
                    if pinned.is_some() && flip {
                        return Err(Error::Orientation(format!(
                            "component {} is fixed by its endpoint signs",
                            k + 1
                        )));
                    }
                    let start_at_a = pinned.unwrap_or(true) != flip;
                    let s = if start_at_a { a } else { b };
                    (s, adj[s][0].0)
                }
                None => {
                    let e = *cup_edges
                        .iter()
                        .find(|&&e| comp_of_edge[e] == k)
                        .expect("closed component has a lowest cup");
                    // Left to right along the cup, i.e. from its first stored endpoint.
                    if flip { (edges[e].1, e) } else { (edges[e].0, e) }
                }
            };
            let (mut v, mut e) = (from, first);
            loop {
                let (p, q) = edges[e];
                forward[e] = p == v;
                let w = if p == v { q } else { p };
                if w < boundary && w != from {
                    break;
                }
                if w == from {
                    break;
                }
                let next = adj[w].iter().find(|&&(f, _)| f != e);
                match next {
                    Some(&(f, _)) => {
                        v = w;
                        e = f;
                    }
                    None => break,
                }
            }
            if let Some((a, b)) = *arc {
                let (s, t) = if from == a { (a, b) } else { (b, a) };
                // The walk leaves `s` and arrives at `t`.
                if s < nb {
                    bottom[s] = true;
                } else {
                    top[s - nb] = false;
                }
                if t < nb {
                    bottom[t] = false;
                } else {
                    top[t - nb] = true;
                }
            }
        }
        let mut crossings = Vec::new();
        let mut strands = Vec::new();
        let (mut x, mut y) = (0, 0);
        for &(kind, e1, e2) in &cross_edges {
            strands.push([(comp_of_edge[e1], forward[e1]), (comp_of_edge[e2], forward[e2])]);
            // Edges are stored lower end first, so `forward` means upward.
            let opposite = forward[e1] != forward[e2];
            let is_x = opposite == (kind == SliceKind::X);
            if is_x {
                x += 1;
                crossings.push(CrossingType::X);
            } else {
                y += 1;
                crossings.push(CrossingType::Y);
            }
        }
        Ok(Orientation {
            bottom,
            top,
            crossings,
            x,
            y,
            components: comps.len(),
            strands,
        })
    }

    /// Text in the word grammar; parsing it back gives an equal word.
    pub fn to_text(&self) -> String {
        let sign = |b: &bool| if *b { '+' } else { '-' };
        let mut out = format!("bottom {}\n", self.bottom);
        if let Some(o) = &self.bottom_orient {
            out.push_str(&format!("orient {}\n", o.iter().map(sign).collect::<String>()));
        }
        for s in &self.slices {
            if s.kind == SliceKind::Vert {
                out.push_str("vert\n");
            } else {
                out.push_str(&format!("{} {}\n", s.kind.keyword(), s.pos + 1));
            }
        }
        if let Some(o) = &self.top_orient {
            out.push_str(&format!("orient top {}\n", o.iter().map(sign).collect::<String>()));
        }
        for r in &self.reversed {
            out.push_str(&format!("reverse-component {}\n", r + 1));
        }
        out
    }
}

impl fmt::Display for TangleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = std::iter::once(format!("bottom {}", self.bottom))
            .chain(self.slices.iter().map(|s| match s.kind {
                SliceKind::Vert => "vert".to_string(),
                k => format!("{} {}", k.keyword(), s.pos + 1),
            }))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::compose;
    use SliceKind::*;

    fn w(points: usize, s: &[(SliceKind, usize)]) -> TangleWord {
        TangleWord::from_slices(points, s).unwrap()
    }

    #[test]
    fn resolutions_match_planar_composition() {
        let t = w(2, &[(X, 0), (Cap, 0)]);
        let vert_then_cap = compose(&FlatTangle::cap(2, 0).unwrap(), &FlatTangle::vert(1)).unwrap();
        assert_eq!(t.resolution(0), vert_then_cap);
        let (f, _) = t.resolution(1).remove_circles();
        assert_eq!(t.resolution(1).circles(), 1);
        assert_eq!(f, FlatTangle::cap(2, 0).unwrap());
        let u = w(2, &[(XBar, 0), (Cap, 0)]);
        assert_eq!(u.resolution(1), vert_then_cap);
    }

    #[test]
    fn empty_word_is_vert() {
        assert_eq!(TangleWord::new(4).unwrap().resolution(0), FlatTangle::vert(2));
        assert_eq!(w(4, &[(Vert, 0)]).resolution(0), FlatTangle::vert(2));
    }

    #[test]
    fn circle_counts() {
        let nested = w(0, &[(Cup, 0), (Cup, 1), (Cap, 1), (Cap, 0)]);
        assert_eq!(nested.resolution(0).circles(), 2);
        let side = w(0, &[(Cup, 0), (Cup, 0), (Cap, 0), (Cap, 0)]);
        assert_eq!(side.resolution(0).circles(), 2);
        let one = w(0, &[(Cup, 0), (Cup, 0), (Cap, 1), (Cap, 0)]);
        assert_eq!(one.resolution(0).circles(), 1);
    }

    #[test]
    fn saddle_sites_toggle_smoothings() {
        let t = w(4, &[(X, 0), (XBar, 2), (X, 1)]);
        for state in 0..8u64 {
            let (d, sites) = t.resolve_with_sites(state);
            for (k, &(e1, e2)) in sites.iter().enumerate() {
                let mut g = d.clone();
                g.rewire(e1, e2).unwrap();
                let other = t.resolve(state ^ (1 << k));
                assert_eq!(g.flat(), other.flat());
                assert_eq!(g.circles(), other.circles());
            }
        }
    }

    #[test]
    fn curl_pins() {
        for orient in [vec![true, false], vec![false, true]] {
            let mut left = w(2, &[(XBar, 0), (Cap, 0)]);
            left.set_bottom_orient(orient.clone()).unwrap();
            let o = left.orientation().unwrap();
            assert_eq!((o.x, o.y), (0, 1));
            let mut right = w(2, &[(X, 0), (Cap, 0)]);
            right.set_bottom_orient(orient.clone()).unwrap();
            let o = right.orientation().unwrap();
            assert_eq!((o.x, o.y), (1, 0));
        }
        let o = w(0, &[(Cup, 0), (X, 0)]).orientation().unwrap();
        assert_eq!((o.x, o.y), (1, 0));
    }

    #[test]
    fn braid_crossings_and_reversal() {
        // Parallel upward strands: σ is y-type, σ^{-1} is x-type.
        let mut t = w(2, &[(X, 0), (XBar, 0)]);
        t.set_bottom_orient(vec![true, true]).unwrap();
        let o = t.orientation().unwrap();
        assert_eq!(o.crossings, vec![CrossingType::Y, CrossingType::X]);
        assert_eq!(o.top, vec![true, true]);
        let mut t = w(2, &[(X, 0)]);
        t.reverse_component(1);
        let o = t.orientation().unwrap();
        assert_eq!(o.bottom, vec![true, false]);
        assert_eq!(o.crossings, vec![CrossingType::X]);
    }

    #[test]
    fn clashing_signs_are_rejected() {
        let mut t = w(2, &[(Cap, 0)]);
        t.set_bottom_orient(vec![true, true]).unwrap();
        assert!(matches!(t.orientation(), Err(Error::Orientation(_))));
        let mut t = w(2, &[(Cap, 0)]);
        t.set_bottom_orient(vec![true, false]).unwrap();
        t.reverse_component(0);
        assert!(t.orientation().is_err());
    }

    #[test]
    fn closed_orientation_default_and_components() {
        let hopf = w(0, &[(Cup, 0), (Cup, 1), (X, 2), (X, 2), (Cap, 1), (Cap, 0)]);
        let o = hopf.orientation().unwrap();
        assert_eq!(o.components, 2);
        assert_eq!(o.x + o.y, 2);
        let mut flipped = hopf.clone();
        flipped.reverse_component(1);
        let p = flipped.orientation().unwrap();
        assert_eq!((p.x, p.y), (o.y, o.x));
    }

    #[test]
    fn arity_checks_and_text() {
        assert!(TangleWord::new(3).is_err());
        assert!(w(2, &[]).with(Cap, 1).is_err());
        assert!(w(2, &[]).with(X, 1).is_err());
        let t = w(2, &[(Cup, 2), (X, 1), (Cap, 0)]);
        assert_eq!(t.top_points(), 2);
        assert_eq!(t.to_string(), "bottom 2; cup 3; x 2; cap 1");
        assert_eq!(t.stack(&w(2, &[(Cap, 0)])).unwrap().top_points(), 0);
    }
}
