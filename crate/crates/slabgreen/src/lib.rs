//! Heat conduction in a plane-parallel layer with symmetric Robin boundaries.
//!
//! The layer occupies `0 <= z <= L` with the boundary condition
//! `(d/dz - lambda) T = 0` at `z = 0` and `(d/dz + lambda) T = 0` at `z = L`.
//! The crate evaluates the Green's function of this problem as an
//! image-source series whose coefficients are built from the derivative
//! family of the scaled complementary error function, together with an
//! independent eigenfunction-expansion path used to cross-check it, and the
//! evolution of an initially uniform temperature (Dirichlet part plus a
//! finite-conductance correction, with large-conductance and thick-layer
//! approximations).
//!
//! Everything is expressed in caller-supplied consistent units; internally
//! the math runs in the dimensionless variables of [`slab::ScaledVars`].
//! All operations are pure functions and safe to call concurrently.

pub mod eigen;
pub mod error;
pub mod kernel;
pub mod quad;
pub mod slab;
pub mod special;
mod sum;
pub mod temp;

pub use error::{Result, SlabError};
pub use kernel::{ImageSign, SeriesValue, TruncationPolicy};
pub use slab::{RobinCondition, ScaledVars, SlabConfig};
