//! Khovanov's functor-valued tangle invariant over the integers.
//!
//! Flat tangles give bimodules over the arc rings `H^n`. An oriented tangle diagram gives a
//! complex of such bimodules up to homotopy, whose Euler class is the Kauffman bracket.

pub mod bimodule;
pub mod coeff;
pub mod corpus;
pub mod complex;
pub mod error;
pub mod frobenius;
pub mod invariants;
pub mod laurent;
pub mod matrix;
pub mod parse;
pub mod planar;
pub mod report;
pub mod ring;
pub mod surgery;
pub mod word;

pub use error::{Error, Result};
pub use frobenius::TensorVector;
pub use laurent::LaurentPoly;
pub use parse::{parse_braid, parse_input, parse_pd, parse_tangle, Braid, InputFormat};
pub use planar::{compose, enumerate_matchings, tl_compose, FlatTangle, Matching, TLMorphism};
pub use surgery::Diagram;
pub use word::{CrossingType, Orientation, SliceKind, TangleWord};
pub use ring::{ArcRing, RingElement};
pub use bimodule::{build_bimodule, GeometricBimodule, Summand};
pub use complex::{build_cube, BoundedComplex, HomologyGroup, HomologyTable};
