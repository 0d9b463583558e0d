//! Oscillation decay of obstacle solutions: on balls meeting the contact
//! set `osc_{B_ρ} v <= c osc_{B_{2ρ}} ψ`; elsewhere `v` is A-harmonic and
//! `osc_{B_ρ} v <= osc_{B_{2ρ}} v`. A sampled Hölder quotient
//! `[v]_{β0} / [ψ]_{β0}` is reported as `holder_ratio`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{InequalityReport, InequalitySample};
use super::sampling::{require_inside, DEFAULT_SEED};
use super::values_in;
use crate::error::{Error, Result};
use crate::geometry::{dist, Ball, Point, Region};
use crate::mesh::NodalField;

const CONTACT_TOL: f64 = 1e-8;
const HOLDER_PAIRS: usize = 20_000;

fn oscillation(w: &NodalField, ball: &Ball) -> Option<f64> {
    let (lo, hi) = values_in(w, ball).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    (lo <= hi).then_some(hi - lo)
}

/// Largest `|w(x) - w(y)| / |x - y|^β0` over the given node pairs.
fn holder_quotient(w: &NodalField, pairs: &[(usize, usize)], beta0: f64) -> f64 {
    let d = w.domain();
    pairs
        .iter()
        .map(|&(i, j)| (w.value(i) - w.value(j)).abs() / dist(d.node(i), d.node(j)).powf(beta0))
        .fold(0.0, f64::max)
}

pub fn check_oscillation_decay(
    v: &NodalField,
    psi: &NodalField,
    centers: &[Point],
    rho: f64,
    beta0: f64,
) -> Result<InequalityReport> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::parameter(format!("radius must lie in (0, 1], got {rho}")));
    }
    if !(beta0 > 0.0 && beta0 <= 1.0) {
        return Err(Error::parameter(format!("beta0 must lie in (0, 1], got {beta0}")));
    }
    let domain = v.domain();
    let mut samples = Vec::with_capacity(centers.len());
    for &c in centers {
        let ball = Ball::new(c, rho);
        require_inside(domain, &ball, 4.0)?;
        let Some(osc_v) = oscillation(v, &ball) else {
            return Err(Error::Geometry(format!("no mesh node inside B({c:?}, {rho})")));
        };
        let touches =
            (0..domain.num_nodes()).any(|i| ball.contains(domain.node(i)) && v.value(i) - psi.value(i) <= CONTACT_TOL);
        let sample = if touches {
            InequalitySample::new("contact", ball, osc_v, oscillation(psi, &ball.scaled(2.0)).unwrap_or(0.0))
        } else {
            InequalitySample::new("free", ball, osc_v, oscillation(v, &ball.scaled(2.0)).unwrap_or(0.0))
        };
        samples.push(sample);
    }
    let report = InequalityReport::new("oscillation_decay", samples);

    // Hölder quotients on the nodes at distance >= 2ρ from the boundary:
    // mesh edges for the small scales, random pairs for the large ones
    let inside: Vec<usize> =
        (0..domain.num_nodes()).filter(|&i| domain.inner_distance(domain.node(i)) >= 2.0 * rho).collect();
    let mut pairs = Vec::new();
    let keep: Vec<bool> = {
        let mut k = vec![false; domain.num_nodes()];
        for &i in &inside {
            k[i] = true;
        }
        k
    };
    for tri in domain.triangles() {
        for e in 0..3 {
            let (i, j) = (tri[e], tri[(e + 1) % 3]);
            if keep[i] && keep[j] {
                pairs.push((i, j));
            }
        }
    }
    if inside.len() > 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        for _ in 0..HOLDER_PAIRS {
            let i = inside[rng.gen_range(0..inside.len())];
            let j = inside[rng.gen_range(0..inside.len())];
            if i != j {
                pairs.push((i, j));
            }
        }
    }
    let (qv, qpsi) = (holder_quotient(v, &pairs, beta0), holder_quotient(psi, &pairs, beta0));
    let mut report = report.with_extra("holder_v", qv).with_extra("holder_psi", qpsi);
    if qpsi > 0.0 {
        report = report.with_extra("holder_ratio", qv / qpsi);
    }
    Ok(report)
}
