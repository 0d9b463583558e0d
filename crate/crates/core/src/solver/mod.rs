//! Discrete Dirichlet and obstacle problems for monotone fields, the
//! residual (Riesz) measure and supersolution checks.

mod checks;
mod config;
mod discrete;
mod general;
mod linear;
mod measure;
mod newton;
mod problem;

pub use checks::{comparison_check, is_supersolution, Comparison, SupersolutionCheck};
pub use config::SolverConfig;
pub(crate) use discrete::DiscreteEnergy;
pub(crate) use linear::StiffnessPattern;
pub use measure::ResidualMeasure;
pub use newton::StageLog;
pub(crate) use newton::{minimize, Bounds};
pub use problem::{
    h_energy, reflected_field, residual_measure, solve_a_harmonic, solve_obstacle, solve_obstacle_from, KktSummary,
    ObstacleProblem, SolveReport,
};
