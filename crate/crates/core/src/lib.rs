//! Exact computational geometry for integral affine manifolds with
//! polyhedral decompositions: monodromy extraction, positivity and
//! simplicity certificates, flag-Čech cohomology of the local systems
//! `i_* ∧^r Λ̌`, `i_* ∧^r Λ` and `i_* ∧^r Aff(B,ℤ)`, the radiance
//! obstruction and its cup action, and monoid-graded log derivation /
//! log differential calculators for the toric local models.
//!
//! All arithmetic is exact: arbitrary-precision integers and rationals
//! throughout. Data-parallel inner loops run on rayon when the
//! `parallel` feature (default) is enabled and fall back to sequential
//! iteration otherwise.

pub mod error;
pub mod exec;
pub mod lattice;
pub mod polytope;
pub mod complex;
pub mod cech;
pub mod localmodel;
pub mod fixtures;
pub mod report;

pub use error::{Error, Result};
pub use lattice::{Int, Rat, IntMat, RatMat};
