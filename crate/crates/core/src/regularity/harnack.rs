//! Harnack-type estimates on a ball `B_ρ`:
//! `sup_{B_{ρ/2}} (v - M)_+ <= c (⨍_{B_ρ} (v - M)_+^h)^{1/h}` for `M` above
//! the obstacle, and the weak Harnack inequality
//! `(⨍_{B_ρ} ṽ^{h⁻})^{1/h⁻} <= c inf_{B_{ρ/2}} ṽ` for nonnegative
//! supersolutions.

use serde::Serialize;

use super::report::{InequalityReport, InequalitySample};
use super::sampling::require_inside;
use super::{ball_mean, power_mean, values_in};
use crate::error::{Error, Result};
use crate::geometry::Ball;
use crate::mesh::NodalField;

pub const HARNACK_EXPONENTS: [f64; 3] = [0.5, 1.0, 2.0];
pub const WEAK_HARNACK_EXPONENTS: [f64; 3] = [0.1, 0.25, 0.5];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarnackReport {
    pub sup: InequalityReport,
    pub weak: InequalityReport,
    /// Largest `h⁻` on the grid whose ratio stays within twice the ratio at
    /// the smallest exponent.
    pub h_minus: f64,
}

impl HarnackReport {
    /// Both parts as one report.
    pub fn combined(&self) -> InequalityReport {
        InequalityReport::merge("harnack", vec![self.sup.clone(), self.weak.clone()])
    }
}

pub fn check_harnack(
    v: &NodalField,
    psi: Option<&NodalField>,
    m: f64,
    vtilde: &NodalField,
    ball: &Ball,
    hs: &[f64],
    h_minus: &[f64],
) -> Result<HarnackReport> {
    if hs.iter().chain(h_minus).any(|&h| !(h > 0.0)) {
        return Err(Error::parameter("harnack exponents must be positive"));
    }
    let domain = v.domain();
    require_inside(domain, ball, 1.0)?;
    let inner = ball.scaled(0.5);
    if values_in(v, &inner).next().is_none() {
        return Err(Error::Geometry(format!("no mesh node inside B({:?}, {})", inner.center, inner.radius)));
    }
    if let Some(psi) = psi {
        let top = values_in(psi, ball).fold(f64::NEG_INFINITY, f64::max);
        if top > m {
            return Err(Error::Precondition(format!("level {m} lies below sup of the obstacle on the ball ({top})")));
        }
    }
    let excess_sup = values_in(v, &inner).map(|x| (x - m).max(0.0)).fold(0.0, f64::max);
    let mut sup = Vec::with_capacity(hs.len());
    for &h in hs {
        let mean = ball_mean(domain, ball, |t, qp| Ok((v.value_in(t, qp.lambda) - m).max(0.0).powf(h)))?.unwrap_or(0.0);
        sup.push(InequalitySample::new(format!("h={h}"), *ball, excess_sup, power_mean(mean, h)));
    }

    if let Some(x) = values_in(vtilde, ball).find(|&x| !(x >= 0.0)) {
        return Err(Error::Precondition(format!("supersolution takes the negative value {x} in the ball")));
    }
    let inf = values_in(vtilde, &inner).fold(f64::INFINITY, f64::min);
    let mut weak = Vec::with_capacity(h_minus.len());
    for &h in h_minus {
        let mean = ball_mean(domain, ball, |t, qp| Ok(vtilde.value_in(t, qp.lambda).max(0.0).powf(h)))?.unwrap_or(0.0);
        weak.push(InequalitySample::new(format!("h-={h}"), *ball, power_mean(mean, h), inf));
    }
    let base = h_minus
        .iter()
        .zip(&weak)
        .fold((f64::INFINITY, 0.0), |acc, (&h, s)| if h < acc.0 { (h, s.ratio.unwrap_or(0.0)) } else { acc })
        .1;
    let empirical = h_minus
        .iter()
        .zip(&weak)
        .filter(|(_, s)| s.ratio.is_none_or(|r| r.is_finite() && r <= 2.0 * base))
        .map(|(&h, _)| h)
        .fold(0.0, f64::max);
    Ok(HarnackReport {
        sup: InequalityReport::new("harnack_sup", sup),
        weak: InequalityReport::new("weak_harnack", weak).with_extra("h_minus", empirical),
        h_minus: empirical,
    })
}
