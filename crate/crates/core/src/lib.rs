//! Broken-circuit (NBC) complexes of graphic matroids and their truncations.
//!
//! The crate is organized bottom-up:
//!
//! * [`graph`] holds the multigraph substrate and exhaustive graph-side
//!   counting oracles (chromatic polynomial, acyclic orientations,
//!   independent sets, G-parking functions).
//! * [`matroid`] exposes graphic and truncated-graphic matroids as
//!   independence oracles.
//! * [`nbc`] implements the broken-circuit machinery on top of any oracle.
//! * [`chain`] builds exact down-up and local walk matrices and measures
//!   spectral gaps and conductance.
//! * [`gadgets`] constructs the hardness gadgets and certifies the bounds
//!   each construction promises.
//! * [`cli`] and [`verify`] back the `nbc` binary.

pub mod chain;
pub mod cli;
pub mod error;
pub mod gadgets;
pub mod graph;
pub mod matroid;
pub mod nbc;
pub mod rational;
pub mod verify;

pub use chain::{FacetComplex, LocalProfile, StochasticMatrix};
pub use error::{Error, Guard, Result};
pub use graph::{IntPolynomial, MultiGraph, NamedGraph, SizeCounts};
pub use matroid::{Matroid, MatroidOracle};
pub use nbc::{ElementOrder, FaceNumbers, NbcComplex};
pub use rational::Rational;
