//! Fixtures shared by the criterion benches in `benches/`.

use std::sync::Arc;

use dplab_core::{
    build_domain, DiscreteDomain, DoublePhaseSpec, MonotoneField, NodalField, ObstacleProblem, Shape, Weight,
};

pub fn disk(h: f64) -> Arc<DiscreteDomain> {
    build_domain(Shape::UnitDisk, h).expect("registry disk builds")
}

pub fn double_phase() -> DoublePhaseSpec {
    DoublePhaseSpec::new(1.5, 1.8, Weight::radial_power(1.0, 0.5)).expect("balanced exponents")
}

/// Cone obstacle below tilted boundary data; about a fifth of the nodes touch.
pub fn cone_obstacle(domain: &Arc<DiscreteDomain>) -> ObstacleProblem {
    let g = NodalField::from_fn(domain, |x| 0.5 * x[0]).unwrap();
    let psi = NodalField::from_fn(domain, |x| 0.4 - 2.0 * x[0].hypot(x[1])).unwrap();
    ObstacleProblem::new(MonotoneField::prototype(double_phase()), Some(psi), g).unwrap()
}
