use std::sync::Arc;

use serde::Serialize;

use super::config::SolverConfig;
use super::discrete::{triangle_gradient, triangle_weights, DiscreteEnergy};
use super::general::solve_general;
use super::linear::StiffnessPattern;
use super::measure::{field_atoms, ResidualMeasure};
use super::newton::{minimize, Bounds, StageLog};
use crate::energy::{DoublePhaseSpec, FieldForm, MonotoneField};
use crate::error::{Error, Result};
use crate::geometry::norm;
use crate::mesh::{DiscreteDomain, NodalField};

/// Obstacle problem `v >= ψ`, `v = g` on the boundary; `ψ = None` stands for `-∞`.
#[derive(Clone, Debug)]
pub struct ObstacleProblem {
    pub field: MonotoneField,
    pub domain: Arc<DiscreteDomain>,
    pub obstacle: Option<NodalField>,
    pub boundary: NodalField,
}

impl ObstacleProblem {
    pub fn new(field: MonotoneField, obstacle: Option<NodalField>, boundary: NodalField) -> Result<Self> {
        let domain = Arc::clone(boundary.domain());
        if let Some(psi) = &obstacle {
            if !Arc::ptr_eq(psi.domain(), &domain) {
                return Err(Error::Data("obstacle and boundary data live on different meshes".into()));
            }
        }
        Ok(ObstacleProblem { field, domain, obstacle, boundary })
    }

    /// `ψ <= g` at every boundary node, i.e. the discrete constraint set is nonempty.
    pub fn is_admissible(&self) -> bool {
        self.first_infeasible().is_none()
    }

    fn first_infeasible(&self) -> Option<usize> {
        let psi = self.obstacle.as_ref()?;
        self.domain.boundary_nodes().iter().copied().find(|&i| {
            let g = self.boundary.value(i);
            psi.value(i) > g + 1e-12 * g.abs().max(1.0)
        })
    }
}

/// Converged discrete solution with its diagnostics.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub solution: NodalField,
    pub iterations: usize,
    /// Worst violation of the discrete KKT conditions on the atoms.
    pub final_kkt_residual: f64,
    /// `max_i |atom_i (v_i - ψ_i)|`.
    pub complementarity: f64,
    /// `∫ H(x, Dv) dx`.
    pub energy: f64,
    /// Nodes with `v - ψ <= contact_tol`.
    pub active_set: Vec<usize>,
    pub stages: Vec<StageLog>,
    pub atoms: ResidualMeasure,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KktSummary {
    pub residual: f64,
    pub complementarity: f64,
    pub min_gap: f64,
}

/// `∫ H(x, Dv)` by the edge-midpoint rule.
pub fn h_energy(spec: &DoublePhaseSpec, v: &NodalField) -> Result<f64> {
    let domain = v.domain();
    let abar = triangle_weights(domain, spec)?;
    Ok((0..domain.num_triangles())
        .map(|t| domain.area(t) * spec.h_scalar(abar[t], norm(triangle_gradient(domain, t, v.values()))))
        .sum())
}

pub(crate) fn kkt(
    domain: &DiscreteDomain,
    atoms: &[f64],
    v: &[f64],
    bounds: &Bounds,
    config: &SolverConfig,
) -> (KktSummary, Vec<usize>) {
    let mut residual: f64 = 0.0;
    let mut complementarity: f64 = 0.0;
    let mut min_gap = f64::INFINITY;
    let mut active = Vec::new();
    for i in 0..v.len() {
        if bounds.pinned[i] || domain.is_boundary(i) {
            continue;
        }
        let (r, lo, up) = (atoms[i], v[i] - bounds.lower[i], bounds.upper[i] - v[i]);
        min_gap = min_gap.min(lo);
        if lo <= config.contact_tol {
            active.push(i);
            residual = residual.max(-r);
            complementarity = complementarity.max((r * lo).abs());
        } else if up <= config.contact_tol {
            residual = residual.max(r);
            complementarity = complementarity.max((r * up).abs());
        } else {
            residual = residual.max(r.abs());
        }
    }
    (KktSummary { residual: residual.max(0.0), complementarity, min_gap }, active)
}

fn energy_weights(field: &MonotoneField) -> Option<([f64; 2], [f64; 2])> {
    let spec = field.spec();
    match field.form() {
        FieldForm::Prototype => Some(([1.0 / spec.p(), 1.0 / spec.q()], [0.0, 0.0])),
        FieldForm::Drift { b } => Some(([1.0 / spec.p(), 1.0 / spec.q()], *b)),
        FieldForm::Custom { .. } => None,
    }
}

fn run(
    field: &MonotoneField,
    domain: &Arc<DiscreteDomain>,
    bounds: Bounds,
    mut v: Vec<f64>,
    config: &SolverConfig,
) -> Result<SolveReport> {
    config.validate()?;
    let stages = match energy_weights(field) {
        Some((w, drift)) => {
            let energy = DiscreteEnergy::new(domain, field.spec(), w[0], w[1], drift)?;
            let pattern = StiffnessPattern::for_domain(domain);
            minimize(&energy, &pattern, &bounds, &mut v, config)?
        }
        None => vec![solve_general(field, domain, &bounds, &mut v, config)?],
    };
    let iterations = stages.iter().map(|s| s.iterations).sum();
    let atoms = field_atoms(field, domain, &v)?;
    let (summary, active_set) = kkt(domain, &atoms, &v, &bounds, config);
    if summary.residual > config.kkt_tol || summary.complementarity > config.complementarity_tol {
        return Err(Error::Solver {
            message: format!(
                "KKT conditions not met (complementarity {:.3e}) after {} stages",
                summary.complementarity,
                stages.len()
            ),
            iterations,
            residual: summary.residual,
        });
    }
    let solution = NodalField::new(Arc::clone(domain), v)?;
    Ok(SolveReport {
        energy: h_energy(field.spec(), &solution)?,
        solution,
        iterations,
        final_kkt_residual: summary.residual,
        complementarity: summary.complementarity,
        active_set,
        stages,
        atoms: ResidualMeasure::from_atoms(Arc::clone(domain), atoms),
    })
}

/// Solves `-div A(x, Du) = 0` with `u = g` on the boundary. Excluded nodes,
/// if any, are held at the values of `g` as well.
pub fn solve_a_harmonic(field: &MonotoneField, g: &NodalField, config: &SolverConfig) -> Result<SolveReport> {
    let domain = g.domain();
    let n = domain.num_nodes();
    let bounds = Bounds {
        lower: vec![f64::NEG_INFINITY; n],
        upper: vec![f64::INFINITY; n],
        pinned: (0..n).map(|i| !domain.is_free(i)).collect(),
    };
    run(field, domain, bounds, g.values().to_vec(), config)
}

/// Solves the obstacle problem starting from `max(g, ψ)`.
pub fn solve_obstacle(problem: &ObstacleProblem, config: &SolverConfig) -> Result<SolveReport> {
    let start = match &problem.obstacle {
        Some(psi) => problem.boundary.zip_with(psi, f64::max)?,
        None => problem.boundary.clone(),
    };
    solve_obstacle_from(problem, &start, config)
}

/// Solves the obstacle problem from a given initial iterate (its boundary
/// values are replaced by `g`).
pub fn solve_obstacle_from(
    problem: &ObstacleProblem,
    start: &NodalField,
    config: &SolverConfig,
) -> Result<SolveReport> {
    if let Some(i) = problem.first_infeasible() {
        return Err(Error::Feasibility(format!(
            "obstacle exceeds boundary data at node {i} ({} > {})",
            problem.obstacle.as_ref().map(|p| p.value(i)).unwrap_or(f64::NAN),
            problem.boundary.value(i)
        )));
    }
    let domain = &problem.domain;
    let n = domain.num_nodes();
    let lower = match &problem.obstacle {
        Some(psi) => psi.values().to_vec(),
        None => vec![f64::NEG_INFINITY; n],
    };
    let pinned: Vec<bool> = (0..n).map(|i| domain.is_boundary(i)).collect();
    let v: Vec<f64> = (0..n).map(|i| if pinned[i] { problem.boundary.value(i) } else { start.value(i) }).collect();
    let bounds = Bounds { lower, upper: vec![f64::INFINITY; n], pinned };
    run(&problem.field, domain, bounds, v, config)
}

/// Residual measure of a converged solve.
pub fn residual_measure(report: &SolveReport, field: &MonotoneField) -> Result<ResidualMeasure> {
    ResidualMeasure::of_field(&report.solution, field)
}

/// The field `z ↦ -A(x, -z)`.
pub fn reflected_field(field: &MonotoneField) -> MonotoneField {
    field.reflected()
}
