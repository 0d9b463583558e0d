use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and iteration limits shared by all discrete solves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Regularization levels `ε`, with `|z|` replaced by `sqrt(|z|^2 + ε^2)`.
    /// A final unregularized polish always follows.
    pub eps_schedule: Vec<f64>,
    /// Regularization kept in the Hessian during the polish.
    pub eps_floor: f64,
    pub max_iterations: usize,
    /// Absolute gap `v - ψ` below which a node counts as in contact.
    pub contact_tol: f64,
    pub kkt_tol: f64,
    pub complementarity_tol: f64,
    /// Stopping tolerance on the projected gradient during the polish.
    pub stop_tol: f64,
    /// Stopping tolerance on the projected gradient for regularized stages.
    pub stage_tol: f64,
    pub armijo: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            eps_schedule: vec![1e-2, 1e-4, 1e-6],
            eps_floor: 1e-6,
            max_iterations: 200,
            contact_tol: 1e-8,
            kkt_tol: 1e-8,
            complementarity_tol: 1e-10,
            stop_tol: 1e-11,
            stage_tol: 1e-9,
            armijo: 1e-4,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("eps_floor", self.eps_floor),
            ("contact_tol", self.contact_tol),
            ("kkt_tol", self.kkt_tol),
            ("complementarity_tol", self.complementarity_tol),
            ("stop_tol", self.stop_tol),
            ("stage_tol", self.stage_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Configuration(format!("{name} must be positive, got {v}")));
            }
        }
        if self.eps_schedule.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(Error::Configuration("eps_schedule entries must be positive".into()));
        }
        if self.eps_schedule.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Configuration("eps_schedule must be strictly decreasing".into()));
        }
        if !(self.armijo > 0.0 && self.armijo < 0.5) {
            return Err(Error::Configuration(format!("armijo must lie in (0, 0.5), got {}", self.armijo)));
        }
        if self.max_iterations == 0 {
            return Err(Error::Configuration("max_iterations must be positive".into()));
        }
        Ok(())
    }
}
