use super::{DiscreteDomain, NodalField};
use crate::geometry::{dist, Ball, Point, Vec2};

/// Where an integral is taken; triangles are selected by their barycenter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IntegrationRegion {
    All,
    Ball(Ball),
    Complement(Ball),
}

impl IntegrationRegion {
    #[inline]
    pub fn contains(&self, x: Point) -> bool {
        match self {
            IntegrationRegion::All => true,
            IntegrationRegion::Ball(b) => dist(x, b.center) < b.radius,
            IntegrationRegion::Complement(b) => dist(x, b.center) >= b.radius,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Set when no triangle fell in the region.
    pub empty: bool,
}

/// A quadrature point of the edge-midpoint rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadPoint {
    pub x: Point,
    pub weight: f64,
    pub lambda: [f64; 3],
}

impl DiscreteDomain {
    /// Edge-midpoint rule on triangle `t`: exact for quadratics.
    pub fn quadrature(&self, t: usize) -> [QuadPoint; 3] {
        let m = self.midpoints(t);
        let w = self.area(t) / 3.0;
        [
            QuadPoint { x: m[0], weight: w, lambda: [0.5, 0.5, 0.0] },
            QuadPoint { x: m[1], weight: w, lambda: [0.0, 0.5, 0.5] },
            QuadPoint { x: m[2], weight: w, lambda: [0.5, 0.0, 0.5] },
        ]
    }

    pub fn triangles_in(&self, region: IntegrationRegion) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_triangles()).filter(move |&t| region.contains(self.barycenter(t)))
    }

    /// `Σ_T Σ_m w_m f(t, x_m, λ_m)` over the triangles of `region`.
    pub fn integrate_with(&self, region: IntegrationRegion, mut f: impl FnMut(usize, &QuadPoint) -> f64) -> Integral {
        let mut value = 0.0;
        let mut empty = true;
        for t in self.triangles_in(region) {
            empty = false;
            for qp in self.quadrature(t) {
                value += qp.weight * f(t, &qp);
            }
        }
        Integral { value, empty }
    }

    /// Area of the triangles selected by `region`.
    pub fn region_area(&self, region: IntegrationRegion) -> f64 {
        self.triangles_in(region).map(|t| self.area(t)).sum()
    }
}

/// `∫ f(x, w(x), Dw(x)) dx` over `region`.
pub fn integrate(
    field: &NodalField,
    region: IntegrationRegion,
    mut f: impl FnMut(Point, f64, Vec2) -> f64,
) -> Integral {
    let domain = field.domain();
    domain.integrate_with(region, |t, qp| f(qp.x, field.value_in(t, qp.lambda), field.gradient(t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::norm;
    use crate::mesh::{build_domain, Shape};

    #[test]
    fn exact_integrals_on_square() {
        let d = build_domain(Shape::UnitSquare, 0.25).unwrap();
        let w = NodalField::from_fn(&d, |x| x[0]).unwrap();
        assert!((integrate(&w, IntegrationRegion::All, |_, _, _| 1.0).value - 1.0).abs() < 1e-12);
        assert!((integrate(&w, IntegrationRegion::All, |x, _, _| x[0]).value - 0.5).abs() < 1e-12);
        assert!((integrate(&w, IntegrationRegion::All, |_, _, g| norm(g).powi(2)).value - 1.0).abs() < 1e-12);
        // degree 2 exactness
        assert!((integrate(&w, IntegrationRegion::All, |x, _, _| x[0] * x[1]).value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn ball_and_complement_partition() {
        let d = build_domain(Shape::UnitDisk, 0.1).unwrap();
        let w = NodalField::from_fn(&d, |x| (x[0] * 3.0).sin() + x[1]).unwrap();
        let f = |x: Point, v: f64, g: Vec2| v * v + x[0] + norm(g);
        let ball = Ball::new([0.2, -0.1], 0.4);
        let all = integrate(&w, IntegrationRegion::All, f).value;
        let inside = integrate(&w, IntegrationRegion::Ball(ball), f).value;
        let outside = integrate(&w, IntegrationRegion::Complement(ball), f).value;
        assert!((inside + outside - all).abs() <= 1e-12 * all.abs().max(1.0));
        let empty = integrate(&w, IntegrationRegion::Ball(Ball::new([5.0, 5.0], 0.1)), f);
        assert!(empty.empty && empty.value == 0.0);
    }

    #[test]
    fn refinement_changes_shrink_by_four() {
        // on the disk the polygonal boundary dominates: successive changes fall like h^2
        let d0 = build_domain(Shape::UnitDisk, 0.3).unwrap();
        let d1 = d0.refine().unwrap();
        let d2 = d1.refine().unwrap();
        let value = |d: &std::sync::Arc<DiscreteDomain>| {
            d.integrate_with(IntegrationRegion::All, |_, qp| (qp.x[0] + 0.5 * qp.x[1]).exp()).value
        };
        let (i0, i1, i2) = (value(&d0), value(&d1), value(&d2));
        let r = (i1 - i0) / (i2 - i1);
        assert!((3.0..=5.0).contains(&r), "ratio {r}");
    }
}
