//! Exact-arithmetic construction and verification of Seifert bundles over
//! complex surface orbifolds.
//!
//! The library models divisor lattices of rational and elliptic surfaces,
//! contracts chains of rational curves into cyclic quotient singularities,
//! computes orbifold canonical classes, solves the Diophantine conditions
//! making the bundle's Chern class primitive, and emits self-contained
//! certificates identifying the second homology of the resulting simply
//! connected 5-manifold.
//!
//! All arithmetic is exact (arbitrary-precision integers and rationals);
//! certificates contain no floating-point values.

pub mod arith;
pub mod cert;
pub mod classify;
pub mod cli;
pub mod error;
pub mod families;
pub mod models;
pub mod orbifold;
pub mod seifert;
pub mod surface;

pub use error::{Error, Result};
