use serde::Serialize;

use super::measure::ResidualMeasure;
use super::problem::SolveReport;
use crate::energy::MonotoneField;
use crate::error::Result;
use crate::mesh::NodalField;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SupersolutionCheck {
    pub is_supersolution: bool,
    /// Most negative atom (0 when none is negative).
    pub worst_violation: f64,
}

/// `∫ A(x, Dṽ) · Dφ_i >= -tol` for every interior, non-excluded hat function.
pub fn is_supersolution(candidate: &NodalField, field: &MonotoneField, tol: f64) -> Result<SupersolutionCheck> {
    let measure = ResidualMeasure::of_field(candidate, field)?;
    let worst = measure.min_atom();
    Ok(SupersolutionCheck { is_supersolution: worst >= -tol, worst_violation: worst })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `ṽ >= v - 1e-10` everywhere.
    Holds,
    Fails,
    /// The candidate is not a supersolution or `min(v, ṽ)` leaves the constraint set.
    Inconclusive,
}

/// Comparison of the obstacle solution `v` with a supersolution `ṽ` whose
/// minimum with `v` is admissible.
pub fn comparison_check(
    report: &SolveReport,
    vtilde: &NodalField,
    field: &MonotoneField,
    obstacle: Option<&NodalField>,
    tol: f64,
) -> Result<Comparison> {
    let v = &report.solution;
    if !std::sync::Arc::ptr_eq(v.domain(), vtilde.domain()) {
        return Ok(Comparison::Inconclusive);
    }
    if !is_supersolution(vtilde, field, tol)?.is_supersolution {
        return Ok(Comparison::Inconclusive);
    }
    let domain = v.domain();
    for i in 0..domain.num_nodes() {
        let m = v.value(i).min(vtilde.value(i));
        let below_obstacle = obstacle.is_some_and(|psi| m < psi.value(i) - 1e-12);
        let wrong_trace = domain.is_boundary(i) && (m - v.value(i)).abs() > 1e-12 * v.value(i).abs().max(1.0);
        if below_obstacle || wrong_trace {
            return Ok(Comparison::Inconclusive);
        }
    }
    let holds = (0..domain.num_nodes()).all(|i| vtilde.value(i) >= v.value(i) - 1e-10);
    Ok(if holds { Comparison::Holds } else { Comparison::Fails })
}
