use arcring::corpus::{in_context, move_pair, Move};
use arcring::invariants::{equivalent, Verdict};
use arcring::{parse_tangle, TangleWord};

fn word(text: &str) -> TangleWord {
    parse_tangle(text).unwrap()
}

fn verdict(a: &TangleWord, b: &TangleWord) -> Verdict {
    equivalent(&in_context(a).unwrap(), &in_context(b).unwrap()).unwrap().verdict
}

#[test]
fn moves_hold_with_reversed_strands() {
    for mv in Move::ALL {
        let (l, r) = move_pair(mv, 4).unwrap();
        let comps = l.orientation().unwrap().components;
        for k in 0..comps {
            let (mut l2, mut r2) = (l.clone(), r.clone());
            l2.reverse_component(k);
            // Components are numbered by their smallest point, so the sides agree.
            r2.reverse_component(k);
            if l2.orientation().unwrap().bottom != r2.orientation().unwrap().bottom {
                continue;
            }
            let e = equivalent(&l2, &r2).unwrap();
            assert_eq!(e.verdict, Verdict::EquivalentEvidence, "{mv:?} component {k}");
        }
    }
}

#[test]
fn mixed_triple_points() {
    for (a, b) in [
        ("bottom 4; x 1; x 2; xbar 1", "bottom 4; xbar 2; x 1; x 2"),
        ("bottom 4; xbar 1; xbar 2; xbar 1", "bottom 4; xbar 2; xbar 1; xbar 2"),
        ("bottom 4; xbar 2; x 1; x 2", "bottom 4; x 1; x 2; xbar 1"),
    ] {
        assert_eq!(verdict(&word(a), &word(b)), Verdict::EquivalentEvidence, "{a} / {b}");
    }
}

#[test]
fn tangency_between_cap_and_cup() {
    let a = word("bottom 2; cup 3; xbar 2; x 2; cap 3");
    let b = word("bottom 2; cup 3; cap 3");
    assert_eq!(equivalent(&a, &b).unwrap().verdict, Verdict::EquivalentEvidence);
}

#[test]
fn non_moves_are_distinct() {
    for (a, b) in [
        ("bottom 4; x 1", "bottom 4"),
        ("bottom 4; x 1; x 1", "bottom 4"),
        ("bottom 4; x 1; x 2; x 1", "bottom 4; x 1; x 2; xbar 1"),
        ("bottom 2; x 1; x 1; x 1", "bottom 2; x 1"),
    ] {
        assert_eq!(verdict(&word(a), &word(b)), Verdict::Distinct, "{a} / {b}");
    }
}

#[test]
fn mismatched_boundaries_are_rejected() {
    assert!(equivalent(&word("bottom 2"), &word("bottom 4")).is_err());
    assert!(equivalent(&word("bottom 2; orient +-"), &word("bottom 2")).is_err());
}
