//! Intrinsic capacities and covering estimates of intrinsic Hausdorff
//! pre-measures.

mod capacity;
mod covering;
mod study;

pub use capacity::{capacity, CapacityProblem, CapacityReport};
pub use covering::{
    covering_value, hausdorff_premeasure, hausdorff_premeasure_with, premeasure_of_ball, CoveringEstimate, Kernel,
};
pub use study::{capacity_measure_link, measure_decay_study, DecayClass, DecayRow, DecayStudy, LinkReport, SLOPE_TOL};
