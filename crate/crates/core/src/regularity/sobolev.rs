//! Sobolev–Poincaré in averaged form:
//! `⨍ H(x, (w - (w)_ρ)/ρ) <= c (⨍ H(x, Dw)^{d1})^{1/d1}` and
//! `(⨍ H(x, (w - (w)_ρ)/ρ)^{d2})^{1/d2} <= c ⨍ H(x, Dw)`.

use super::report::{InequalityReport, InequalitySample};
use super::sampling::require_inside;
use super::{ball_mean, h_of_gradient, power_mean};
use crate::energy::{DoublePhaseSpec, DIM};
use crate::error::{Error, Result};
use crate::geometry::Ball;
use crate::mesh::NodalField;

/// Upper end `np / (q (n - p))` of the admissible `d2` range (infinite for
/// `p >= n`).
pub fn max_d2(spec: &DoublePhaseSpec) -> f64 {
    let (p, q) = (spec.p(), spec.q());
    if p >= DIM {
        f64::INFINITY
    } else {
        DIM * p / (q * (DIM - p))
    }
}

pub fn check_sobolev_poincare(
    w: &NodalField,
    spec: &DoublePhaseSpec,
    balls: &[Ball],
    d1: f64,
    d2: f64,
) -> Result<InequalityReport> {
    if !(d1 > 0.0 && d1 < 1.0) {
        return Err(Error::parameter(format!("d1 must lie in (0, 1), got {d1}")));
    }
    let top = max_d2(spec);
    if !(d2 > 1.0 && d2 <= top) {
        return Err(Error::parameter(format!("d2 must lie in (1, {top}], got {d2}")));
    }
    let domain = w.domain();
    let mut samples = Vec::with_capacity(2 * balls.len());
    for ball in balls {
        if ball.radius > 1.0 {
            return Err(Error::parameter("ball radius exceeds 1"));
        }
        require_inside(domain, ball, 1.0)?;
        let Some(avg) = ball_mean(domain, ball, |t, qp| Ok(w.value_in(t, qp.lambda)))? else {
            continue;
        };
        let rho = ball.radius;
        let h_osc = |t: usize, qp: &crate::mesh::QuadPoint| -> Result<f64> {
            Ok(spec.h_scalar(spec.a(qp.x)?, (w.value_in(t, qp.lambda) - avg).abs() / rho))
        };
        let lhs1 = ball_mean(domain, ball, h_osc)?.unwrap_or(0.0);
        let rhs1 = power_mean(
            ball_mean(domain, ball, |t, qp| Ok(h_of_gradient(spec, w, t, qp)?.powf(d1)))?.unwrap_or(0.0),
            d1,
        );
        let lhs2 = power_mean(ball_mean(domain, ball, |t, qp| Ok(h_osc(t, qp)?.powf(d2)))?.unwrap_or(0.0), d2);
        let rhs2 = ball_mean(domain, ball, |t, qp| h_of_gradient(spec, w, t, qp))?.unwrap_or(0.0);
        samples.push(InequalitySample::new("sopo1", *ball, lhs1, rhs1));
        samples.push(InequalitySample::new("sopo2", *ball, lhs2, rhs2));
    }
    let r = InequalityReport::new("sobolev_poincare", samples);
    let (w1, w2) = (r.worst_with_label("sopo1"), r.worst_with_label("sopo2"));
    Ok(r.with_extra("worst_sopo1", w1).with_extra("worst_sopo2", w2).with_extra("d1", d1).with_extra("d2", d2))
}
