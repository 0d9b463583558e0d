//! Measure density near the contact set:
//! `μ(B_ρ(x̄)) <= c ∫_{B_ρ(x̄)} H_σ(x, 1/ρ) dx` with `σ = 1 - β0 (p - 1) / q`,
//! for `ρ < min(1, dist(K, ∂Ω)) / 40`.

use super::report::{InequalityReport, InequalitySample};
use crate::caphaus::{premeasure_of_ball, Kernel};
use crate::energy::DoublePhaseSpec;
use crate::error::{Error, Result};
use crate::geometry::{dist, Ball, Point, Region};
use crate::mesh::NodalField;
use crate::solver::ResidualMeasure;

/// The obstacle with its Hölder data `|ψ(x) - ψ(y)| <= C_ψ |x - y|^{β0}`.
#[derive(Clone, Copy, Debug)]
pub struct DensityInput<'a> {
    pub psi: &'a NodalField,
    pub beta0: f64,
    pub c_psi: f64,
}

pub fn check_measure_density(
    mu: &ResidualMeasure,
    spec: &DoublePhaseSpec,
    input: DensityInput<'_>,
    points: &[Point],
    rhos: &[f64],
) -> Result<InequalityReport> {
    let sigma = spec.sigma_exponent(input.beta0)?;
    let domain = mu.domain();
    if points.is_empty() || rhos.is_empty() {
        return Err(Error::parameter("measure density needs points and radii"));
    }
    let gap = points.iter().map(|&x| domain.inner_distance(x)).fold(f64::INFINITY, f64::min);
    let limit = gap.min(1.0) / 40.0;
    if let Some(&r) = rhos.iter().find(|&&r| !(r > 0.0 && r < limit)) {
        return Err(Error::parameter(format!("radius {r} violates rho < min(1, dist(K, boundary)) / 40 = {limit}")));
    }
    let reach = 2.0 * rhos.iter().cloned().fold(0.0, f64::max);
    let near: Vec<usize> =
        (0..domain.num_nodes()).filter(|&i| points.iter().any(|&x| dist(x, domain.node(i)) < reach)).collect();
    for (k, &i) in near.iter().enumerate() {
        for &j in &near[k + 1..] {
            let q = (input.psi.value(i) - input.psi.value(j)).abs()
                / dist(domain.node(i), domain.node(j)).powf(input.beta0);
            if q > input.c_psi * (1.0 + 1e-9) {
                return Err(Error::Precondition(format!(
                    "obstacle Hölder quotient {q} exceeds C_psi = {} near the contact points",
                    input.c_psi
                )));
            }
        }
    }
    let kernel = Kernel::HSigma { sigma };
    let mut samples = Vec::with_capacity(points.len() * rhos.len());
    for &x in points {
        for &rho in rhos {
            let ball = Ball::new(x, rho);
            let lhs = mu.spread_measure_of_ball(&ball).max(0.0);
            let rhs = premeasure_of_ball(&ball, kernel, spec)?;
            samples.push(InequalitySample::new(format!("rho={rho}"), ball, lhs, rhs));
        }
    }
    Ok(InequalityReport::new("measure_density", samples).with_extra("sigma", sigma))
}
