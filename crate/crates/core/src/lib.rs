//! Numerical laboratory for double phase elliptic problems in the plane.
//!
//! The integrand is `H(x, z) = |z|^p + a(x) |z|^q`. The crate solves the
//! associated Dirichlet and obstacle problems with P1 finite elements,
//! computes intrinsic capacities and covering estimates of intrinsic
//! Hausdorff measures, and checks regularity estimates on computed fields.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod caphaus;
pub mod energy;
pub mod error;
pub mod geometry;
pub mod mesh;
pub mod regularity;
pub mod removability;
pub mod solver;

pub use energy::{DoublePhaseSpec, Fidelity, MonotoneField, Weight};
pub use error::{Error, Result};
pub use geometry::{Ball, Point, Region, Vec2};
pub use mesh::{build_domain, DiscreteDomain, NodalField, SetDescriptor, Shape};
pub use solver::{ObstacleProblem, ResidualMeasure, SolveReport, SolverConfig};
