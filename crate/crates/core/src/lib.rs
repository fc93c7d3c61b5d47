//! Exact-arithmetic laboratory for the arithmetic and geometry of finite
//! complex sets.
//!
//! Everything here runs over Gaussian rationals (complex numbers with
//! arbitrary-precision rational parts), so all set algebra, energies,
//! geometric predicates and incidence counts are exact: a reported identity
//! either holds or the run fails, with no tolerance knobs.
//!
//! The crate is organised around four layers:
//!
//! - [`set`]: finite complex sets, sum/difference/product/ratio sets,
//!   representation counts, the sector test, and deterministic generators
//!   (in [`gen`]).
//! - [`energy`]: additive, multiplicative and cubic energies, slice sets,
//!   popular differences, and the exact verification of the inequality
//!   chain connecting them.
//! - [`geometry`]: the meniscus/rhombus construction over the ratio set,
//!   exact Euclidean minimum spanning trees, and the disjointness and
//!   injectivity checks they support.
//! - [`incidence`]: point-line incidence counting in the complex plane,
//!   weighted line families, dyadic popular-line extraction, and the
//!   finite-instance incidence reports.
//!
//! The `sumprod` binary exposes the same machinery as a CLI (`gen`,
//! `stats`, `verify`, `sweep`); see [`suite`] and [`report`].

pub mod energy;
pub mod error;
pub mod gen;
pub mod geometry;
pub mod incidence;
pub mod naive;
pub mod powcmp;
pub mod rational;
pub mod report;
pub mod set;
pub mod suite;

pub use error::{Error, Result};
pub use rational::{GaussianRational, Rational};
pub use set::{FiniteComplexSet, RepCounts, SetOp};
