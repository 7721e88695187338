//! Exact wall-and-chamber computations on the Neron-Severi lattice of an
//! iterated blow-up of the projective plane.
//!
//! The engine models ordered blow-up configurations (with infinitely-near
//! points), enumerates their birational contractions, carves the positive
//! cone into one chamber per contraction target together with the
//! codimension-one walls between them, evaluates central charges on
//! numerical classes, and identifies the surface attached to the skyscraper
//! class in each chamber. All chamber decisions are made in exact rational
//! arithmetic.

pub mod chambers;
pub mod cli;
pub mod configuration;
pub mod contractions;
pub mod document;
pub mod error;
pub mod lattice;
pub mod prng;
pub mod rat;
pub mod report;
pub mod stability;
pub mod svg;
