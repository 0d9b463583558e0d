//! Decay of covering estimates as `δ → 0`, and the capacity of shrinking
//! neighborhoods of a point set.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::capacity::{capacity, CapacityProblem};
use super::covering::{hausdorff_premeasure, Kernel};
use crate::energy::DoublePhaseSpec;
use crate::error::{Error, Result};
use crate::mesh::{DiscreteDomain, SetDescriptor};
use crate::solver::SolverConfig;

/// Fitted slopes within this distance of zero classify as finite.
pub const SLOPE_TOL: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayClass {
    Zero,
    Finite,
    Divergent,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecayRow {
    pub delta: f64,
    pub value: f64,
    /// Local slope of `log value` against `log δ` from the previous row.
    pub slope_estimate: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayStudy {
    pub kernel: Kernel,
    pub rows: Vec<DecayRow>,
    /// Least-squares slope over all rows with positive value.
    pub fitted_slope: Option<f64>,
    pub class: DecayClass,
    /// Rows whose value dropped below the previous (larger `δ`) one.
    pub monotone_violations: Vec<usize>,
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Covering estimates for each `δ` (strictly decreasing) and a limit
/// classification from the fitted log-log slope.
pub fn measure_decay_study(
    set: &SetDescriptor,
    kernel: Kernel,
    spec: &DoublePhaseSpec,
    domain: &DiscreteDomain,
    deltas: &[f64],
) -> Result<DecayStudy> {
    if deltas.is_empty() || deltas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::parameter("deltas must be nonempty and strictly decreasing"));
    }
    let mut rows: Vec<DecayRow> = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let value = hausdorff_premeasure(set, delta, kernel, spec, domain)?.value;
        let slope_estimate = rows
            .last()
            .filter(|r| r.value > 0.0 && value > 0.0)
            .map(|r| (value / r.value).ln() / (delta / r.delta).ln());
        rows.push(DecayRow { delta, value, slope_estimate });
    }
    let monotone_violations = (1..rows.len()).filter(|&i| rows[i].value < rows[i - 1].value).collect();
    let positive: Vec<&DecayRow> = rows.iter().filter(|r| r.value > 0.0).collect();
    let xs: Vec<f64> = positive.iter().map(|r| r.delta.ln()).collect();
    let ys: Vec<f64> = positive.iter().map(|r| r.value.ln()).collect();
    let fitted_slope = least_squares_slope(&xs, &ys);
    let class = match fitted_slope {
        _ if positive.is_empty() => DecayClass::Zero,
        Some(s) if s > SLOPE_TOL => DecayClass::Zero,
        Some(s) if s < -SLOPE_TOL => DecayClass::Divergent,
        _ => DecayClass::Finite,
    };
    Ok(DecayStudy { kernel, rows, fitted_slope, class, monotone_violations })
}

#[derive(Clone, Debug, Serialize)]
pub struct LinkReport {
    pub study: DecayStudy,
    /// `(ε, capacity of the ε-neighborhood)`, in the given order of `ε`.
    pub capacities: Vec<(f64, f64)>,
    pub capacity_decreasing: bool,
}

/// Decay study with kernel `H` next to the capacities of `K_ε`, the nodes
/// within `ε` of the point set `E`.
pub fn capacity_measure_link(
    set: &SetDescriptor,
    spec: &DoublePhaseSpec,
    domain: &Arc<DiscreteDomain>,
    deltas: &[f64],
    eps: &[f64],
    config: &SolverConfig,
) -> Result<LinkReport> {
    if !set.is_point_like() {
        return Err(Error::parameter("capacity-measure link needs a finite point set"));
    }
    if eps.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::parameter("neighborhood radii must be strictly decreasing"));
    }
    let study = measure_decay_study(set, Kernel::H, spec, domain, deltas)?;
    let mut capacities = Vec::with_capacity(eps.len());
    for &e in eps {
        let problem = CapacityProblem::neighborhood(spec.clone(), Arc::clone(domain), set, e)?;
        capacities.push((e, capacity(&problem, config)?.value));
    }
    let capacity_decreasing = capacities.windows(2).all(|w| w[1].1 <= w[0].1);
    Ok(LinkReport { study, capacities, capacity_decreasing })
}
