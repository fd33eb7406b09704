//! Exact computations on finite metric measure spaces.
//!
//! A finite mm-space is a point set with a rational distance matrix and a
//! rational probability vector. This crate implements the Lipschitz order
//! with additive error `X ≻_ε Y`, the unilateral box metric `□_≻`, the box
//! metric `□`, the Prokhorov and Ky Fan distances, the gluing and composition
//! of couplings, and the 1-Lipschitz-up-to-ε map constructions. Every value is
//! an exact rational and every solver returns a witness that can be checked
//! independently.
//!
//! The crate is `no_std` (it needs `alloc`); file formats and the command line
//! live in the `mmlip` crate.

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod clique;
pub mod error;
pub mod flow;
pub mod gen;
pub mod maps;
pub mod order;
pub mod prokhorov;
pub mod rational;
pub mod space;
pub mod transport;

pub use error::{Error, Result};
pub use order::{OrderWitness, KyWitness, SearchBudget};
pub use rational::Rational;
pub use space::{FiniteMMSpace, PointMap, ProductL1, Subset};
pub use transport::{Coupling, PairSet, TripleMeasure};
