//! Empirical checks of the quantitative estimates (Sobolev–Poincaré,
//! Caccioppoli, Gehring, boundedness, Harnack, oscillation decay, measure
//! density) on computed fields.
//!
//! Essential suprema and infima are nodal extrema over the nodes of a ball;
//! averages use the triangles whose barycenter lies in the ball.

mod benchmark;
mod bounded;
mod caccioppoli;
mod density;
mod gehring;
mod harnack;
mod oscillation;
mod report;
mod sampling;
mod sobolev;

pub use benchmark::{run_case, standard_cases, BenchmarkCase, BenchmarkLevels, CaseResult};
pub use bounded::check_boundedness;
pub use caccioppoli::{check_caccioppoli, default_gamma};
pub use density::{check_measure_density, DensityInput};
pub use gehring::{check_gehring, GEHRING_DELTAS};
pub use harnack::{check_harnack, HarnackReport, HARNACK_EXPONENTS, WEAK_HARNACK_EXPONENTS};
pub use oscillation::check_oscillation_decay;
pub use report::{InequalityReport, InequalitySample, DRIFT_BUDGET, ZERO_TOL};
pub use sampling::{require_inside, BallSampler, DEFAULT_BALLS, DEFAULT_SEED};
pub use sobolev::{check_sobolev_poincare, max_d2};

use crate::energy::DoublePhaseSpec;
use crate::error::Result;
use crate::geometry::{norm, Ball};
use crate::mesh::{DiscreteDomain, IntegrationRegion, NodalField, QuadPoint};

/// `⨍_B f`, or `None` when no triangle falls in the ball.
pub(crate) fn ball_mean(
    domain: &DiscreteDomain,
    ball: &Ball,
    mut f: impl FnMut(usize, &QuadPoint) -> Result<f64>,
) -> Result<Option<f64>> {
    let region = IntegrationRegion::Ball(*ball);
    let mut err = None;
    let integral = domain.integrate_with(region, |t, qp| match f(t, qp) {
        Ok(v) => v,
        Err(e) => {
            err.get_or_insert(e);
            0.0
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    if integral.empty {
        return Ok(None);
    }
    Ok(Some(integral.value / domain.region_area(region)))
}

/// `∫_B f` over the triangles of the ball.
pub(crate) fn ball_integral(
    domain: &DiscreteDomain,
    ball: &Ball,
    f: impl FnMut(usize, &QuadPoint) -> Result<f64>,
) -> Result<f64> {
    let area = domain.region_area(IntegrationRegion::Ball(*ball));
    Ok(ball_mean(domain, ball, f)?.map_or(0.0, |m| m * area))
}

/// `H(x, Dw)` at a quadrature point of triangle `t`.
pub(crate) fn h_of_gradient(spec: &DoublePhaseSpec, w: &NodalField, t: usize, qp: &QuadPoint) -> Result<f64> {
    Ok(spec.h_scalar(spec.a(qp.x)?, norm(w.gradient(t))))
}

/// Nodal values of `w` at nodes inside the ball.
pub(crate) fn values_in<'a>(w: &'a NodalField, ball: &'a Ball) -> impl Iterator<Item = f64> + 'a {
    let d = w.domain();
    (0..d.num_nodes()).filter(move |&i| ball.contains(d.node(i))).map(move |i| w.value(i))
}

/// `(⨍ f^e)^{1/e}` for a nonnegative integrand.
pub(crate) fn power_mean(mean_of_power: f64, e: f64) -> f64 {
    mean_of_power.max(0.0).powf(1.0 / e)
}
