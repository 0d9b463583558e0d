//! Projected Newton for `min J(v)` subject to `lower <= v <= upper`, with
//! pinned (Dirichlet) nodes held fixed and an `ε` continuation.

use serde::Serialize;

use super::config::SolverConfig;
use super::discrete::DiscreteEnergy;
use super::linear::StiffnessPattern;
use crate::error::{Error, Result};

pub(crate) struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub pinned: Vec<bool>,
}

impl Bounds {
    #[inline]
    fn clamp(&self, i: usize, x: f64) -> f64 {
        x.max(self.lower[i]).min(self.upper[i])
    }
}

/// Iterations spent at one regularization level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageLog {
    pub eps: f64,
    pub iterations: usize,
    pub projected_gradient: f64,
    pub stagnated: bool,
}

fn projected_gradient(bounds: &Bounds, v: &[f64], g: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..v.len() {
        if !bounds.pinned[i] {
            worst = worst.max((v[i] - bounds.clamp(i, v[i] - g[i])).abs());
        }
    }
    worst
}

/// Runs one stage at fixed `eps`, returning its log. `v` must be feasible.
fn stage(
    energy: &DiscreteEnergy<'_>,
    pattern: &StiffnessPattern,
    bounds: &Bounds,
    v: &mut [f64],
    eps: f64,
    tol: f64,
    config: &SolverConfig,
) -> Result<StageLog> {
    let n = v.len();
    let hess_eps = eps.max(config.eps_floor);
    let mut g = vec![0.0; n];
    let mut hess = pattern.zeros();
    let mut trial = vec![0.0; n];
    let mut g_trial = vec![0.0; n];
    let mut binding = vec![false; n];
    energy.gradient(v, eps, &mut g);
    let mut pg = projected_gradient(bounds, v, &g);
    let mut j = energy.value(v, eps);
    let mut iterations = 0;
    let mut stagnated = false;
    while pg > tol && iterations < config.max_iterations {
        iterations += 1;
        let width = pg.min(1e-3);
        for i in 0..n {
            binding[i] = bounds.pinned[i]
                || (v[i] <= bounds.lower[i] + width && g[i] > 0.0)
                || (v[i] >= bounds.upper[i] - width && g[i] < 0.0);
        }
        energy.hessian(v, hess_eps, pattern, &mut hess);
        let diag: Vec<f64> = (0..n).map(|i| pattern.diagonal(&hess, i)).collect();
        pattern.pin(&mut hess, &binding);
        let rhs: Vec<f64> = (0..n).map(|i| if binding[i] { 0.0 } else { -g[i] }).collect();
        let mut d = pattern.solve_spd(&hess, &rhs)?;
        for i in 0..n {
            if bounds.pinned[i] {
                d[i] = 0.0;
            } else if binding[i] {
                d[i] = -g[i] / diag[i].max(f64::MIN_POSITIVE);
            }
        }
        let free_slope: f64 = (0..n).filter(|&i| !binding[i]).map(|i| g[i] * d[i]).sum();
        let mut alpha = 1.0;
        let accepted = loop {
            for i in 0..n {
                trial[i] = if bounds.pinned[i] { v[i] } else { bounds.clamp(i, v[i] + alpha * d[i]) };
            }
            let j_trial = energy.value(&trial, eps);
            let bound_part: f64 = (0..n).filter(|&i| binding[i]).map(|i| g[i] * (v[i] - trial[i])).sum();
            let predicted = config.armijo * (-alpha * free_slope + bound_part);
            if j - j_trial >= predicted {
                break Some(j_trial);
            }
            // below roundoff the energy cannot certify descent; fall back on
            // the projected gradient for the full step
            if alpha == 1.0 && predicted.abs() <= 1e-13 * j.abs().max(1.0) {
                energy.gradient(&trial, eps, &mut g_trial);
                if projected_gradient(bounds, &trial, &g_trial) < pg {
                    break Some(j_trial);
                }
            }
            alpha *= 0.5;
            if alpha < 1e-12 {
                break None;
            }
        };
        match accepted {
            Some(j_new) => {
                v.copy_from_slice(&trial);
                j = j_new;
                energy.gradient(v, eps, &mut g);
                pg = projected_gradient(bounds, v, &g);
            }
            None => {
                stagnated = true;
                break;
            }
        }
    }
    Ok(StageLog { eps, iterations, projected_gradient: pg, stagnated })
}

/// Minimizes through the `ε` schedule and a final unregularized polish.
pub(crate) fn minimize(
    energy: &DiscreteEnergy<'_>,
    pattern: &StiffnessPattern,
    bounds: &Bounds,
    v: &mut [f64],
    config: &SolverConfig,
) -> Result<Vec<StageLog>> {
    for i in 0..v.len() {
        if !bounds.pinned[i] {
            v[i] = bounds.clamp(i, v[i]);
        }
        if bounds.lower[i] > bounds.upper[i] {
            return Err(Error::Feasibility(format!("empty bounds at node {i}")));
        }
    }
    let mut logs = Vec::with_capacity(config.eps_schedule.len() + 1);
    for &eps in &config.eps_schedule {
        logs.push(stage(energy, pattern, bounds, v, eps, config.stage_tol, config)?);
    }
    logs.push(stage(energy, pattern, bounds, v, 0.0, config.stop_tol, config)?);
    Ok(logs)
}
