//! Named diagrams shared by the checks and the command-line tool.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parse::parse_braid;
use crate::word::{SliceKind, TangleWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Move {
    LeftCurl,
    RightCurl,
    Tangency,
    TriplePoint,
}

impl Move {
    pub const ALL: [Move; 4] = [Move::LeftCurl, Move::RightCurl, Move::Tangency, Move::TriplePoint];

    /// Short name used on the command line.
    pub fn code(self) -> &'static str {
        match self {
            Move::LeftCurl => "r1l",
            Move::RightCurl => "r1r",
            Move::Tangency => "r2",
            Move::TriplePoint => "r3",
        }
    }

    pub fn from_code(s: &str) -> Option<Move> {
        Move::ALL.into_iter().find(|m| m.code() == s)
    }
}

/// The curl on a single cap: left with `xbar`, right with `x`.
pub fn curl_cap(mv: Move) -> TangleWord {
    let kind = if mv == Move::LeftCurl { SliceKind::XBar } else { SliceKind::X };
    TangleWord::from_slices(2, &[(kind, 0), (SliceKind::Cap, 0)]).expect("valid curl")
}

fn slices_for(mv: Move, strands: usize) -> Vec<(SliceKind, usize)> {
    use SliceKind::*;
    match mv {
        // Kink on the first through strand.
        Move::LeftCurl => vec![(Cup, 1), (XBar, 0), (Cap, 0)],
        Move::RightCurl => vec![(Cup, 1), (X, 0), (Cap, 0)],
        Move::Tangency => vec![(X, 0), (XBar, 0)],
        // Three strands: with two boundary strands the third is a cup/cap on the right.
        Move::TriplePoint if strands == 2 => vec![(Cup, 2), (X, 0), (X, 1), (X, 0), (Cap, 2)],
        Move::TriplePoint => vec![(X, 0), (X, 1), (X, 0)],
    }
}

/// The two sides of a move on `strands` boundary points at each end, before and after.
pub fn move_pair(mv: Move, strands: usize) -> Result<(TangleWord, TangleWord)> {
    if strands < 2 || strands % 2 != 0 {
        return Err(Error::Arity(format!("moves need an even number of strands >= 2, got {strands}")));
    }
    let lhs = TangleWord::from_slices(strands, &slices_for(mv, strands))?;
    let rhs = match mv {
        Move::TriplePoint => {
            let s: Vec<(SliceKind, usize)> = slices_for(mv, strands)
                .into_iter()
                .map(|(k, p)| if k == SliceKind::X { (k, if p == 0 { 1 } else { 0 }) } else { (k, p) })
                .collect();
            TangleWord::from_slices(strands, &s)?
        }
        _ => TangleWord::new(strands)?,
    };
    Ok((lhs, rhs))
}

/// Surrounds `inner` by the fixed outer context: `x 1` below and `xbar` on the last pair above.
pub fn in_context(inner: &TangleWord) -> Result<TangleWord> {
    let n = inner.bottom_points();
    let m = inner.top_points();
    if n < 2 || m < 2 {
        return Err(Error::Arity("the outer context needs two strands at each end".into()));
    }
    let below = TangleWord::from_slices(n, &[(SliceKind::X, 0)])?;
    let above = TangleWord::from_slices(m, &[(SliceKind::XBar, m - 2)])?;
    below.stack(inner)?.stack(&above)
}

#[derive(Clone, Debug)]
pub struct Named {
    pub name: String,
    pub word: TangleWord,
}

fn named(name: impl Into<String>, word: TangleWord) -> Named {
    Named { name: name.into(), word }
}

/// Single slices on two and four strands.
pub fn elementary() -> Vec<Named> {
    let mut out = Vec::new();
    for points in [2, 4] {
        for kind in [SliceKind::X, SliceKind::XBar, SliceKind::Cap, SliceKind::Cup] {
            for pos in 0..points - 1 {
                let w = TangleWord::from_slices(points, &[(kind, pos)]).expect("elementary slice");
                out.push(named(format!("{} {} on {points}", kind.keyword(), pos + 1), w));
            }
        }
    }
    out.push(named("vert on 2", TangleWord::new(2).expect("vert")));
    out
}

/// Small links, each given by a short word or a braid closure.
pub fn links() -> Vec<Named> {
    use SliceKind::*;
    let w = |s: &[(SliceKind, usize)]| TangleWord::from_slices(0, s).expect("link word");
    let braid = |t: &str| parse_braid(t, None).and_then(|b| b.closure()).expect("braid closure");
    vec![
        named("unknot", w(&[(Cup, 0), (Cap, 0)])),
        named("unknot with kink", w(&[(Cup, 0), (X, 0), (Cap, 0)])),
        named("2-unlink", w(&[(Cup, 0), (Cup, 2), (Cap, 2), (Cap, 0)])),
        named("hopf", braid("s1 s1")),
        named("trefoil", braid("s1 s1 s1")),
        named("figure-8", braid("s1 s2^-1 s1 s2^-1")),
    ]
}

/// Every diagram used by the structural checks.
pub fn corpus() -> Vec<Named> {
    let mut out = elementary();
    for mv in Move::ALL {
        let (lhs, rhs) = move_pair(mv, 2).expect("move");
        out.push(named(format!("{} lhs", mv.code()), lhs));
        if mv == Move::TriplePoint {
            out.push(named(format!("{} rhs", mv.code()), rhs));
        }
    }
    out.push(named("left curl on cap", curl_cap(Move::LeftCurl)));
    out.push(named("right curl on cap", curl_cap(Move::RightCurl)));
    out.extend(links());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curl_types() {
        for (mv, want) in [(Move::LeftCurl, (0, 1)), (Move::RightCurl, (1, 0))] {
            for w in [curl_cap(mv), move_pair(mv, 2).unwrap().0] {
                for comp in [false, true] {
                    let mut w = w.clone();
                    if comp {
                        w.reverse_component(0);
                    }
                    let o = w.orientation().unwrap();
                    assert_eq!((o.x, o.y), want, "{mv:?} {w}");
                }
            }
        }
    }

    #[test]
    fn move_sides_share_boundary() {
        for mv in Move::ALL {
            for k in [2, 4, 6] {
                let (l, r) = move_pair(mv, k).unwrap();
                assert_eq!((l.bottom_points(), l.top_points()), (k, k));
                assert_eq!((r.bottom_points(), r.top_points()), (k, k));
                let (l, r) = (in_context(&l).unwrap(), in_context(&r).unwrap());
                assert_eq!(l.orientation().unwrap().top, r.orientation().unwrap().top, "{mv:?} {k}");
            }
        }
    }

    #[test]
    fn link_components() {
        let comps: Vec<usize> = links().iter().map(|l| l.word.orientation().unwrap().components).collect();
        assert_eq!(comps, vec![1, 1, 2, 2, 1, 1]);
    }
}
