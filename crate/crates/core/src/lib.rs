//! Solver library for non-Archimedean (lexicographic multi-objective) linear
//! and quadratic programs.
//!
//! The pipeline: prioritized objectives are scalarized with infinitesimal
//! weights into a single cost over truncated Euclidean numbers ([`Ban`]),
//! the problem is normalized to equality standard form, embedded so that
//! infeasibility and unboundedness become readable from the solution, and
//! solved by a predictor-corrector infeasible primal-dual interior point
//! loop running entirely over the fixed-length arithmetic.
//!
//! The arithmetic kernel and the dense linear algebra are generic over the
//! coefficient scalar (see [`real::Real`]); `f64` instantiations are exported
//! here and used by the modelling and solver layers.

pub mod ban;
pub mod linalg;
pub mod model;
pub mod real;
pub mod solver;

pub mod fixtures;

pub use ban::{Ban, BanError, ParseError};
pub use linalg::{BanMatrix, BanVector, LinalgError};
pub use real::Real;

/// `f32`-coefficient scalar.
pub type Ban32 = ban::Ban<f32>;
/// `f64`-coefficient scalar (the default used by the solver layers).
pub type Ban64 = ban::Ban<f64>;
/// Dense vector over `f32` coefficients.
pub type BanVector32 = linalg::BanVector<f32>;
/// Dense matrix over `f32` coefficients.
pub type BanMatrix32 = linalg::BanMatrix<f32>;
