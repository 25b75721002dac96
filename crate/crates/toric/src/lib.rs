//! Exact-arithmetic combinatorics of affine toric varieties.
//!
//! The crate computes the root data of an affine toric variety from a cone
//! description, exposes the slice machinery used to put coordinates on the
//! infinite root families, and reconstructs a lattice isomorphism from an
//! abstract bijection between two root data sets, cross-checked against a
//! brute-force search. All arithmetic is exact (big integers and rationals);
//! there is no floating point anywhere.

pub mod cones;
pub mod degeneration;
pub mod error;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod reconstruct;
pub mod roots;

pub use error::{Error, Result};
pub use linalg::{Int, IntegerMatrix, LatticeVector, Rat, RationalVector};
