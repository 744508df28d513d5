//! Inputs shared by the benchmarks.

use arcring::{parse_braid, TangleWord};

/// Closed braids of growing size, up to six crossings.
pub fn link_words() -> Vec<(&'static str, TangleWord)> {
    [
        ("trefoil", "s1 s1 s1"),
        ("figure-8", "s1 s-2 s1 s-2"),
        ("torus(2,5)", "s1 s1 s1 s1 s1"),
        ("6-crossing", "s1 s1 s1 s2 s-1 s2"),
    ]
    .into_iter()
    .map(|(name, b)| (name, parse_braid(b, None).and_then(|b| b.closure()).expect("braid")))
    .collect()
}
