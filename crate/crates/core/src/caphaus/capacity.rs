//! Intrinsic capacity of a compact node set relative to the domain.

use std::sync::Arc;

use serde::Serialize;

use crate::energy::DoublePhaseSpec;
use crate::error::{Error, Result};
use crate::geometry::{dist, Point};
use crate::mesh::{DiscreteDomain, NodalField, SetDescriptor};
use crate::solver::{h_energy, minimize, Bounds, DiscreteEnergy, SolverConfig, StageLog, StiffnessPattern};

/// Minimize `∫ H(x, Df)` over `0 <= f <= 1`, `f = 1` on `K`, `f = 0` on the
/// outer boundary.
#[derive(Clone, Debug)]
pub struct CapacityProblem {
    spec: DoublePhaseSpec,
    domain: Arc<DiscreteDomain>,
    k_nodes: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CapacityReport {
    pub value: f64,
    #[serde(skip)]
    pub potential: NodalField,
    pub k_nodes: usize,
    pub stages: Vec<StageLog>,
}

impl CapacityProblem {
    pub fn new(spec: DoublePhaseSpec, domain: Arc<DiscreteDomain>, mut k_nodes: Vec<usize>) -> Result<Self> {
        k_nodes.sort_unstable();
        k_nodes.dedup();
        if let Some(&i) = k_nodes.iter().find(|&&i| i >= domain.num_nodes()) {
            return Err(Error::parameter(format!("node {i} out of range")));
        }
        if let Some(&i) = k_nodes.iter().find(|&&i| domain.is_boundary(i)) {
            let x = domain.node(i);
            return Err(Error::Feasibility(format!("compact set touches the boundary at ({}, {})", x[0], x[1])));
        }
        Ok(CapacityProblem { spec, domain, k_nodes })
    }

    /// `K` = nodes of the closed disk `B(center, radius)`.
    pub fn disk(spec: DoublePhaseSpec, domain: Arc<DiscreteDomain>, center: Point, radius: f64) -> Result<Self> {
        let nodes = nodes_within(&domain, |x| dist(x, center), radius);
        Self::new(spec, domain, nodes)
    }

    /// `K` = nodes within `eps` of `E`, plus the node nearest to each point
    /// of `E` so that `K` is never empty for nonempty `E`.
    pub fn neighborhood(
        spec: DoublePhaseSpec,
        domain: Arc<DiscreteDomain>,
        set: &SetDescriptor,
        eps: f64,
    ) -> Result<Self> {
        let mut nodes = nodes_within(&domain, |x| set.distance(x), eps);
        if !set.is_empty() {
            nodes.extend(set.samples(domain.h()).into_iter().map(|x| domain.nearest_node(x)));
        }
        Self::new(spec, domain, nodes)
    }

    pub fn k_nodes(&self) -> &[usize] {
        &self.k_nodes
    }

    pub fn domain(&self) -> &Arc<DiscreteDomain> {
        &self.domain
    }

    pub fn spec(&self) -> &DoublePhaseSpec {
        &self.spec
    }
}

fn nodes_within(domain: &DiscreteDomain, distance: impl Fn(Point) -> f64, radius: f64) -> Vec<usize> {
    // a relative slack keeps nodes placed exactly on the circle
    let r = radius * (1.0 + 1e-12);
    (0..domain.num_nodes()).filter(|&i| distance(domain.node(i)) <= r).collect()
}

/// Discrete capacity by projected Newton on the box-constrained energy.
pub fn capacity(problem: &CapacityProblem, config: &SolverConfig) -> Result<CapacityReport> {
    config.validate()?;
    let domain = &problem.domain;
    let n = domain.num_nodes();
    if problem.k_nodes.is_empty() {
        return Ok(CapacityReport {
            value: 0.0,
            potential: NodalField::constant(domain, 0.0)?,
            k_nodes: 0,
            stages: Vec::new(),
        });
    }
    let mut in_k = vec![false; n];
    for &i in &problem.k_nodes {
        in_k[i] = true;
    }
    let pinned: Vec<bool> = (0..n).map(|i| in_k[i] || domain.is_boundary(i)).collect();
    let mut v: Vec<f64> = in_k.iter().map(|&k| if k { 1.0 } else { 0.0 }).collect();
    let bounds = Bounds { lower: vec![0.0; n], upper: vec![1.0; n], pinned };
    let energy = DiscreteEnergy::new(domain, &problem.spec, 1.0, 1.0, [0.0, 0.0])?;
    let pattern = StiffnessPattern::for_domain(domain);
    let stages = minimize(&energy, &pattern, &bounds, &mut v, config)?;
    let potential = NodalField::new(Arc::clone(domain), v)?;
    Ok(CapacityReport {
        value: h_energy(&problem.spec, &potential)?,
        potential,
        k_nodes: problem.k_nodes.len(),
        stages,
    })
}
