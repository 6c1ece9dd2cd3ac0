//! Exact computation of equivariant Grothendieck rings of toric bundles,
//! flag bundles and regular group-compactification bundles.
//!
//! The library is organized around a few exact-arithmetic layers:
//!
//! * [`lattice`] / [`weyl`] — root data, weight lattices and Weyl groups for
//!   a fixed table of desk-scale types (A1, A1xA1, A2, B2, A3);
//! * [`laurent`] — the group algebra `Z[Λ]` with its Weyl action, exact
//!   divisibility by `1 - e^{-χ}` and the augmentation;
//! * [`steinberg`] — the Steinberg basis of `R(T)^{W_I}` over `R(T)^W`, basis
//!   expansion and structure constants;
//! * [`fan`] — rational polyhedral fans in the cocharacter lattice, smoothness
//!   and facet queries, Weyl-chamber fans;
//! * [`gkm`] — fixed-point-indexed rings cut out by divisibility congruences;
//! * [`presentation`] — generator/relation presentations of toric and flag
//!   bundle K-rings, with rank and localization cross-checks;
//! * [`regcomp`] — the rank-`|W|` module model of a regular compactification
//!   bundle, its closed-form product and the embedding into the congruence
//!   ring used as a verification oracle.
//!
//! All arithmetic is exact (big integers / big rationals); every sampled
//! check is driven by an explicit seed so that reports are reproducible
//! byte for byte.

pub mod error;
pub mod fan;
pub mod gkm;
pub mod lattice;
pub mod laurent;
pub mod linalg;
pub mod presentation;
pub mod regcomp;
pub mod rng;
pub mod steinberg;
pub mod verify;
pub mod weyl;

pub use error::Error;
pub use lattice::{LatticeVector, RootDatum, RootSystemType, Subset};
pub use laurent::LaurentPoly;
pub use weyl::{WeylElement, WeylGroup};
