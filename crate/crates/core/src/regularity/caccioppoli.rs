//! Caccioppoli inequality for positive supersolutions:
//! `∫ ṽ^{-γ} η^q H(x, Dṽ) <= c ∫ ṽ^{-γ} H(x, |Dη| ṽ)`.

use super::report::{InequalityReport, InequalitySample};
use super::sampling::require_inside;
use crate::energy::DoublePhaseSpec;
use crate::error::{Error, Result};
use crate::geometry::{norm, Ball};
use crate::mesh::NodalField;

/// `γ = (1 + p) / 2`.
pub fn default_gamma(spec: &DoublePhaseSpec) -> f64 {
    0.5 * (1.0 + spec.p())
}

/// Both integrals run over the triangles where the cutoff `eta` is not
/// identically zero; `ball` is the cutoff's outer ball.
pub fn check_caccioppoli(
    vtilde: &NodalField,
    spec: &DoublePhaseSpec,
    ball: &Ball,
    gamma: f64,
    eta: &NodalField,
) -> Result<InequalityReport> {
    let (p, q) = (spec.p(), spec.q());
    if !(gamma > 1.0 && gamma < p) {
        return Err(Error::parameter(format!("gamma must lie in (1, {p}), got {gamma}")));
    }
    let domain = vtilde.domain();
    if !std::sync::Arc::ptr_eq(domain, eta.domain()) {
        return Err(Error::parameter("cutoff lives on a different mesh"));
    }
    require_inside(domain, ball, 1.0)?;
    let (mut lhs, mut rhs) = (0.0, 0.0);
    for t in 0..domain.num_triangles() {
        let tri = domain.triangles()[t];
        if tri.iter().all(|&i| eta.value(i) == 0.0) {
            continue;
        }
        if let Some(&i) = tri.iter().find(|&&i| !(vtilde.value(i) > 0.0)) {
            return Err(Error::Precondition(format!(
                "supersolution is not positive at node {i} ({})",
                vtilde.value(i)
            )));
        }
        let dv = norm(vtilde.gradient(t));
        let deta = norm(eta.gradient(t));
        for qp in domain.quadrature(t) {
            let a = spec.a(qp.x)?;
            let v = vtilde.value_in(t, qp.lambda);
            let e = eta.value_in(t, qp.lambda);
            let wv = qp.weight * v.powf(-gamma);
            lhs += wv * e.powf(q) * spec.h_scalar(a, dv);
            rhs += wv * spec.h_scalar(a, deta * v);
        }
    }
    Ok(InequalityReport::new("caccioppoli", vec![InequalitySample::new("cacc", *ball, lhs, rhs)])
        .with_extra("gamma", gamma))
}
