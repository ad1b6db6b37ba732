//! Certificates that finitely many isometries of a hyperbolic space generate a
//! free, undistorted, purely loxodromic subgroup, plus a Monte Carlo harness
//! for subgroups generated by independent random walks.
//!
//! Two model actions are provided: the free group on its Cayley tree (exact,
//! 0-hyperbolic) and unit-determinant real matrices on the upper half-plane.

pub mod certify;
#[cfg(feature = "cli")]
pub mod cli;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod moebius;
pub mod parallel;
pub mod plane;
pub mod plot;
pub mod space;
pub mod walk;
pub mod word;

pub use error::{Error, Result};
pub use space::{GroupElement, ModelSpace, SpaceKind, SpacePoint};
