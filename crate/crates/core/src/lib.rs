//! Configuration-model random graphs built from heavy-tailed i.i.d. degree
//! sequences, and the degree-degree correlation measures ANND (average
//! nearest neighbor degree) and ANNR (average nearest neighbor rank).
//!
//! The crate is organised bottom-up:
//!
//! * [`distributions`]: the floor-Pareto degree law, the Riemann zeta
//!   function, limit constants, and the `d_1` / `d_tv` distances.
//! * [`degree_sequences`]: i.i.d. degree sequences with parity correction.
//! * [`graphs`]: uniform stub pairing, erasure, and repeated pairing.
//! * [`measures`]: joint degree distribution, ANND, ANNR, diagnostics.
//! * [`experiments`]: replica ensembles and the scaling experiments.
//!
//! A narrative guide lives in the `book/` directory of the repository; its
//! code snippets are compiled as doctests of this crate.

#![forbid(unsafe_code)]

pub mod degree_sequences;
pub mod distributions;
mod error;
pub mod experiments;
pub mod graphs;
pub mod measures;
pub mod seeding;

pub use degree_sequences::DegreeSequence;
pub use distributions::{DiscreteDistribution, Distance, FloorParetoLaw};
pub use error::{Error, Result};
pub use graphs::{DegreeGraph, MultiGraph, SimpleGraph, StubMatching};
pub use measures::{JointDegreeDistribution, MeasureKind, MixingCurve};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/degree_law.md")]
    mod degree_law {}
    #[doc = include_str!("../../../book/src/configuration_model.md")]
    mod configuration_model {}
    #[doc = include_str!("../../../book/src/mixing_measures.md")]
    mod mixing_measures {}
    #[doc = include_str!("../../../book/src/ensembles.md")]
    mod ensembles {}
}
