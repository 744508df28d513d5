//! Decategorified invariants and the move-equivalence checker.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coeff::Q;
use crate::complex::{build_cube, BoundedComplex, FingerprintEntry, HomologyTable};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::planar::{compose, tl_compose, FlatTangle, TLMorphism};
use crate::word::{SliceKind, TangleWord};

/// Element of the split Grothendieck group: a combination of circle-free flat tangles.
pub type GrothendieckClass = TLMorphism;

fn horizontal(points: usize, i: usize) -> Result<FlatTangle> {
    compose(&FlatTangle::cup(points - 2, i)?, &FlatTangle::cap(points, i)?)
}

/// The bracket of a single slice.
fn slice_bracket(kind: SliceKind, points: usize, i: usize) -> Result<TLMorphism> {
    let minus_inv_q = LaurentPoly::monomial(-1, -1);
    let vert = TLMorphism::identity(points / 2);
    Ok(match kind {
        SliceKind::X => vert.plus(&TLMorphism::lin(&horizontal(points, i)?).scaled(&minus_inv_q)),
        SliceKind::XBar => TLMorphism::lin(&horizontal(points, i)?).plus(&vert.scaled(&minus_inv_q)),
        SliceKind::Cap => TLMorphism::lin(&FlatTangle::cap(points, i)?),
        SliceKind::Cup => TLMorphism::lin(&FlatTangle::cup(points, i)?),
        SliceKind::Vert => vert,
    })
}

/// `⟨D⟩`, computed slice by slice in the Temperley-Lieb category.
pub fn bracket(word: &TangleWord) -> Result<TLMorphism> {
    let mut acc = TLMorphism::identity(word.bottom_points() / 2);
    for s in word.slices() {
        acc = tl_compose(&slice_bracket(s.kind, s.strands, s.pos)?, &acc)?;
    }
    Ok(acc)
}

/// `⟨D⟩ = Σ_s (-q^{-1})^{|s|} lin(D(s))` summed over all resolutions.
pub fn bracket_state_sum(word: &TangleWord) -> TLMorphism {
    let k = word.crossings();
    let mut out = TLMorphism::zero(word.bottom_points() / 2, word.top_points() / 2);
    for s in 0..1u64 << k {
        let w = s.count_ones() as i32;
        let sign = if w % 2 == 0 { 1 } else { -1 };
        out = out.plus(&TLMorphism::lin(&word.resolution(s)).scaled(&LaurentPoly::monomial(sign, -w)));
    }
    out
}

/// `K(D) = (-1)^x q^{2x-y} ⟨D⟩`.
pub fn kauffman(word: &TangleWord) -> Result<TLMorphism> {
    let o = word.orientation()?;
    let (x, y) = (o.x as i32, o.y as i32);
    let sign = if x % 2 == 0 { 1 } else { -1 };
    Ok(bracket(word)?.scaled(&LaurentPoly::monomial(sign, 2 * x - y)))
}

pub fn euler_class<R: crate::coeff::Coeff>(c: &BoundedComplex<R>) -> GrothendieckClass {
    c.euler_class()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JonesReport {
    pub state_sum: LaurentPoly,
    pub from_homology: LaurentPoly,
    pub agree: bool,
}

fn require_link(word: &TangleWord) -> Result<()> {
    if word.bottom_points() != 0 || word.top_points() != 0 {
        return Err(Error::BoundaryPresent);
    }
    Ok(())
}

/// The unnormalized-at-infinity Jones polynomial `K(L)` of a link word.
pub fn jones(word: &TangleWord) -> Result<LaurentPoly> {
    require_link(word)?;
    Ok(kauffman(word)?.coeff(&FlatTangle::vert(0)))
}

/// Both routes to the Jones polynomial: state sum and `Σ (-1)^i q^j rk H^{i,j}`.
pub fn jones_report(word: &TangleWord) -> Result<JonesReport> {
    let state_sum = jones(word)?;
    let from_homology = build_cube(word)?.homology()?.euler();
    Ok(JonesReport { agree: state_sum == from_homology, state_sum, from_homology })
}

/// Integral homology of every closure of the tangle complex.
pub fn closures(c: &BoundedComplex<i64>) -> BTreeMap<(usize, usize), HomologyTable> {
    c.closures()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    EquivalentEvidence,
    Distinct,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub verdict: Verdict,
    pub euler_classes_agree: bool,
    pub cores_agree: bool,
    pub closures_agree: bool,
    pub core_left: Vec<FingerprintEntry>,
    pub core_right: Vec<FingerprintEntry>,
    pub closures_compared: usize,
}

/// Compares two oriented words with the same boundary through their rational cores and the
/// integral homology of every closure, after checking Euler classes. Agreement is evidence,
/// not a certificate.
pub fn equivalent(d1: &TangleWord, d2: &TangleWord) -> Result<EquivalenceReport> {
    if d1.bottom_points() != d2.bottom_points() || d1.top_points() != d2.top_points() {
        return Err(Error::Incompatible("words have different boundaries".into()));
    }
    let (o1, o2) = (d1.orientation()?, d2.orientation()?);
    if o1.bottom != o2.bottom || o1.top != o2.top {
        return Err(Error::Incompatible("words have different boundary orientations".into()));
    }
    let (c1, c2) = (build_cube(d1)?, build_cube(d2)?);
    let euler_classes_agree = c1.euler_class() == c2.euler_class();
    let core = |c: &BoundedComplex<i64>| c.map_coeffs(|&v| <Q as crate::coeff::Coeff>::from_i64(v)).simplify().fingerprint();
    let (core_left, core_right) = (core(&c1), core(&c2));
    let cores_agree = core_left == core_right;
    let (h1, h2) = (c1.simplify().closures(), c2.simplify().closures());
    let closures_agree = h1 == h2;
    let verdict = if euler_classes_agree && cores_agree && closures_agree {
        Verdict::EquivalentEvidence
    } else {
        Verdict::Distinct
    };
    Ok(EquivalenceReport {
        verdict,
        euler_classes_agree,
        cores_agree,
        closures_agree,
        core_left,
        core_right,
        closures_compared: h1.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::SliceKind::*;

    fn w(points: usize, s: &[(SliceKind, usize)]) -> TangleWord {
        TangleWord::from_slices(points, s).unwrap()
    }

    #[test]
    fn circle_and_single_crossing() {
        let circle = w(0, &[(Cup, 0), (Cap, 0)]);
        assert_eq!(bracket(&circle).unwrap().coeff(&FlatTangle::vert(0)), LaurentPoly::circle());
        let b = bracket(&w(2, &[(X, 0)])).unwrap();
        assert_eq!(b.coeff(&FlatTangle::vert(1)), LaurentPoly::one());
        assert_eq!(b.coeff(&horizontal(2, 0).unwrap()), LaurentPoly::monomial(-1, -1));
    }

    #[test]
    fn state_sum_matches_slice_product() {
        for word in [
            w(2, &[(X, 0), (XBar, 0)]),
            w(4, &[(X, 0), (X, 1), (X, 0), (Cap, 1)]),
            w(0, &[(Cup, 0), (Cup, 1), (X, 2), (X, 2), (X, 2), (Cap, 1), (Cap, 0)]),
        ] {
            assert_eq!(bracket(&word).unwrap(), bracket_state_sum(&word), "{word}");
        }
    }

    #[test]
    fn kinks_are_normalized_away() {
        let circle = jones(&w(0, &[(Cup, 0), (Cap, 0)])).unwrap();
        for k in [X, XBar] {
            assert_eq!(jones(&w(0, &[(Cup, 0), (k, 0), (Cap, 0)])).unwrap(), circle);
        }
        let unlink = jones(&w(0, &[(Cup, 0), (Cup, 0), (Cap, 0), (Cap, 0)])).unwrap();
        assert_eq!(unlink, LaurentPoly::circle().pow(2));
    }

    #[test]
    fn kauffman_is_functorial() {
        // Pieces carry the orientation they inherit from the whole word.
        let mut d1 = w(2, &[(X, 0)]);
        d1.set_bottom_orient(vec![true, false]).unwrap();
        let mut d2 = w(2, &[(XBar, 0), (Cap, 0)]);
        d2.set_bottom_orient(d1.orientation().unwrap().top).unwrap();
        let whole = d1.stack(&d2).unwrap();
        let composed = tl_compose(&kauffman(&d2).unwrap(), &kauffman(&d1).unwrap()).unwrap();
        assert_eq!(kauffman(&whole).unwrap(), composed);
    }

    #[test]
    fn euler_class_is_kauffman() {
        let word = w(4, &[(X, 0), (XBar, 2), (X, 1), (Cap, 0)]);
        assert_eq!(build_cube(&word).unwrap().euler_class(), kauffman(&word).unwrap());
    }

    #[test]
    fn trefoil_pipelines_agree() {
        let t = w(0, &[(Cup, 0), (Cup, 1), (X, 2), (X, 2), (X, 2), (Cap, 1), (Cap, 0)]);
        let r = jones_report(&t).unwrap();
        assert!(r.agree, "{r:?}");
    }

    #[test]
    fn tangency_is_equivalent_and_crossing_is_not_flat() {
        let r = equivalent(&w(2, &[(X, 0), (XBar, 0)]), &w(2, &[])).unwrap();
        assert_eq!(r.verdict, Verdict::EquivalentEvidence, "{r:?}");
        let r = equivalent(&w(2, &[(X, 0)]), &w(2, &[])).unwrap();
        assert_eq!(r.verdict, Verdict::Distinct);
        assert!(!r.euler_classes_agree);
    }
}
