//! Reverse Hölder (Gehring) estimate for obstacle solutions:
//! `(⨍_{B_{ρ/2}} H(x, Dv)^{1+δ})^{1/(1+δ)}
//!    <= c (∫_{B_ρ} H(x, Dψ)^{1+δ})^{1/(1+δ)} + c ⨍_{B_ρ} H(x, Dv)`.
//! The variant with an averaged first term on the right is logged too.

use super::report::{InequalityReport, InequalitySample};
use super::sampling::require_inside;
use super::{ball_integral, ball_mean, h_of_gradient, power_mean};
use crate::energy::DoublePhaseSpec;
use crate::error::{Error, Result};
use crate::geometry::Ball;
use crate::mesh::NodalField;

pub const GEHRING_DELTAS: [f64; 4] = [0.05, 0.1, 0.25, 0.5];

fn label(delta: f64) -> String {
    format!("delta={delta}")
}

/// `psi = None` stands for the unconstrained problem (`H(x, Dψ) = 0`).
pub fn check_gehring(
    v: &NodalField,
    psi: Option<&NodalField>,
    spec: &DoublePhaseSpec,
    balls: &[Ball],
    deltas: &[f64],
) -> Result<InequalityReport> {
    if deltas.is_empty() || deltas.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::parameter("gehring exponents must be positive"));
    }
    let domain = v.domain();
    let mut samples = Vec::new();
    let mut worst_averaged: f64 = 0.0;
    for ball in balls {
        if ball.radius > 1.0 {
            return Err(Error::parameter("ball radius exceeds 1"));
        }
        require_inside(domain, ball, 1.0)?;
        let inner = ball.scaled(0.5);
        let energy = ball_mean(domain, ball, |t, qp| h_of_gradient(spec, v, t, qp))?.unwrap_or(0.0);
        for &delta in deltas {
            let e = 1.0 + delta;
            let lhs = power_mean(
                ball_mean(domain, &inner, |t, qp| Ok(h_of_gradient(spec, v, t, qp)?.powf(e)))?.unwrap_or(0.0),
                e,
            );
            let (obstacle, obstacle_avg) = match psi {
                Some(psi) => {
                    let f = |t: usize, qp: &crate::mesh::QuadPoint| Ok(h_of_gradient(spec, psi, t, qp)?.powf(e));
                    (
                        power_mean(ball_integral(domain, ball, f)?, e),
                        power_mean(ball_mean(domain, ball, f)?.unwrap_or(0.0), e),
                    )
                }
                None => (0.0, 0.0),
            };
            let avg = InequalitySample::new("", *ball, lhs, obstacle_avg + energy);
            if let Some(r) = avg.ratio {
                worst_averaged = worst_averaged.max(r);
            }
            samples.push(InequalitySample::new(label(delta), *ball, lhs, obstacle + energy));
        }
    }
    let report = InequalityReport::new("gehring", samples);
    let per_delta: Vec<(f64, f64)> = deltas.iter().map(|&d| (d, report.worst_with_label(&label(d)))).collect();
    let smallest = per_delta.iter().cloned().fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a });
    let delta0 = per_delta
        .iter()
        .filter(|(_, w)| w.is_finite() && *w <= 2.0 * smallest.1.max(f64::MIN_POSITIVE))
        .map(|&(d, _)| d)
        .fold(0.0, f64::max);
    Ok(report.with_extra("worst_averaged", worst_averaged).with_extra("delta0", delta0))
}
