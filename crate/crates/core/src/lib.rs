//! Exact computation of saturated Jacobian invariants of plane-curve
//! singularities, their Thom–Sebastiani suspensions, and a truncated model
//! of (a,b)-modules.
//!
//! All arithmetic is over the rationals and exact. Germs at the origin are
//! represented by polynomials; statements about the local ring are decided
//! either degree by degree for quasi-homogeneous input (exact) or in jet
//! spaces `O/m^M` with a stabilization check (heuristic, flagged as such).

pub mod ab_module;
pub mod curve;
pub mod error;
pub mod forms;
pub mod linalg;
pub mod local_algebra;
mod parse;
pub mod poly;
pub mod rational;
pub mod suspension;

pub use error::{Error, Result};
pub use forms::{DiffForm, VectorField};
pub use local_algebra::{Caps, IdealGens};
pub use poly::{weighted_degree, Monomial, Poly, Vars, WeightSystem};
pub use rational::Q;
