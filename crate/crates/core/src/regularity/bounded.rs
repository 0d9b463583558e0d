//! Local boundedness: `‖v‖_{L∞(Ω̃)}` against the data it is bounded by,
//! `max(‖v‖_{L∞(∂Ω)}, ‖ψ‖_{L∞(Ω)})`.

use super::report::{InequalityReport, InequalitySample};
use super::sampling::require_inside;
use super::values_in;
use crate::error::{Error, Result};
use crate::geometry::Ball;
use crate::mesh::NodalField;

pub fn check_boundedness(v: &NodalField, psi: Option<&NodalField>, subdomain: &Ball) -> Result<InequalityReport> {
    let domain = v.domain();
    require_inside(domain, subdomain, 1.0)?;
    if let Some(i) = v.values().iter().position(|x| !x.is_finite()) {
        return Err(Error::Data(format!("non-finite value at node {i}")));
    }
    let sup = values_in(v, subdomain).map(f64::abs).fold(0.0, f64::max);
    let boundary = domain.boundary_nodes().iter().map(|&i| v.value(i).abs()).fold(0.0, f64::max);
    let obstacle = psi.map_or(0.0, |p| p.values().iter().map(|x| x.abs()).fold(0.0, f64::max));
    let sample = InequalitySample::new("sup", *subdomain, sup, boundary.max(obstacle));
    Ok(InequalityReport::new("boundedness", vec![sample])
        .with_extra("sup_abs", sup)
        .with_extra("boundary_sup", boundary)
        .with_extra("obstacle_sup", obstacle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_domain, Shape};

    #[test]
    fn constant_solution() {
        let d = build_domain(Shape::UnitDisk, 0.2).unwrap();
        let v = NodalField::constant(&d, 3.0).unwrap();
        let r = check_boundedness(&v, None, &Ball::new([0.0, 0.0], 0.5)).unwrap();
        assert_eq!(r.extras["sup_abs"], 3.0);
        assert_eq!(r.worst_ratio, 1.0);
    }
}
