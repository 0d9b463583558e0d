use std::sync::Arc;

use super::DiscreteDomain;
use crate::error::{Error, Result};
use crate::geometry::{dist, Ball, Point, Region, Vec2};

/// Piecewise linear scalar field given by its nodal values.
#[derive(Clone, Debug)]
pub struct NodalField {
    domain: Arc<DiscreteDomain>,
    values: Vec<f64>,
}

impl PartialEq for NodalField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.domain, &other.domain) && self.values == other.values
    }
}

impl NodalField {
    pub fn new(domain: Arc<DiscreteDomain>, values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.num_nodes() {
            return Err(Error::Data(format!("{} values for {} nodes", values.len(), domain.num_nodes())));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!("value at node {i} is not finite")));
        }
        Ok(NodalField { domain, values })
    }

    /// Nodal interpolant of `f`.
    pub fn from_fn(domain: &Arc<DiscreteDomain>, f: impl Fn(Point) -> f64) -> Result<Self> {
        let values = domain.nodes().iter().map(|&x| f(x)).collect();
        Self::new(Arc::clone(domain), values)
    }

    pub fn constant(domain: &Arc<DiscreteDomain>, c: f64) -> Result<Self> {
        Self::new(Arc::clone(domain), vec![c; domain.num_nodes()])
    }

    pub fn domain(&self) -> &Arc<DiscreteDomain> {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// Constant gradient on triangle `t`.
    #[inline]
    pub fn gradient(&self, t: usize) -> Vec2 {
        let tri = self.domain.triangles()[t];
        let g = self.domain.hat_gradients(t);
        let mut out = [0.0; 2];
        for k in 0..3 {
            let v = self.values[tri[k]];
            out[0] += v * g[k][0];
            out[1] += v * g[k][1];
        }
        out
    }

    /// Value at barycentric coordinates `lambda` of triangle `t`.
    #[inline]
    pub fn value_in(&self, t: usize, lambda: [f64; 3]) -> f64 {
        let tri = self.domain.triangles()[t];
        lambda[0] * self.values[tri[0]] + lambda[1] * self.values[tri[1]] + lambda[2] * self.values[tri[2]]
    }

    /// Interpolated value at an arbitrary point of the mesh.
    pub fn eval(&self, x: Point) -> Option<f64> {
        self.domain.locate(x).map(|(t, l)| self.value_in(t, l))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(Arc::clone(&self.domain), self.values.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise combination with a field on the same mesh.
    pub fn zip_with(&self, other: &NodalField, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if !Arc::ptr_eq(&self.domain, &other.domain) {
            return Err(Error::Data("fields live on different meshes".into()));
        }
        Self::new(Arc::clone(&self.domain), self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect())
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `max_i |self_i - other_i|`.
    pub fn max_abs_diff(&self, other: &NodalField) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Extremes over the nodes inside `ball`; `None` when it holds no node.
    pub fn extrema_in(&self, ball: &Ball) -> Option<(f64, f64)> {
        let mut out: Option<(f64, f64)> = None;
        for (i, &x) in self.domain.nodes().iter().enumerate() {
            if dist(x, ball.center) <= ball.radius {
                let v = self.values[i];
                out = Some(match out {
                    None => (v, v),
                    Some((lo, hi)) => (lo.min(v), hi.max(v)),
                });
            }
        }
        out
    }
}

/// Per-triangle gradient of a P1 field.
pub fn gradient(field: &NodalField, t: usize) -> Vec2 {
    field.gradient(t)
}

/// Nodal cutoff equal to 1 on `B(center, inner)`, 0 outside
/// `B(center, outer)` and radially linear in between.
pub fn cutoff(domain: &Arc<DiscreteDomain>, inner: f64, outer: f64, center: Point) -> Result<NodalField> {
    if !(inner >= 0.0 && inner < outer) {
        return Err(Error::parameter(format!("cutoff radii must satisfy 0 <= inner < outer, got {inner}, {outer}")));
    }
    if !domain.contains_ball(&Ball::new(center, outer)) {
        return Err(Error::domain(format!(
            "ball of radius {outer} at ({}, {}) leaves the domain",
            center[0], center[1]
        )));
    }
    NodalField::from_fn(domain, |x| ((outer - dist(x, center)) / (outer - inner)).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::norm;
    use crate::mesh::{build_domain, Shape};

    #[test]
    fn affine_gradients_reproduced() {
        let d = build_domain(Shape::UnitDisk, 0.2).unwrap();
        let w = NodalField::from_fn(&d, |x| 3.0 + 2.0 * x[0] - x[1]).unwrap();
        for t in 0..d.num_triangles() {
            let g = w.gradient(t);
            assert!((g[0] - 2.0).abs() < 1e-12 && (g[1] + 1.0).abs() < 1e-12);
        }
        let c = NodalField::constant(&d, 4.0).unwrap();
        assert!((0..d.num_triangles()).all(|t| norm(c.gradient(t)) < 1e-13));
    }

    #[test]
    fn quadratic_gradient_error_is_order_h() {
        let d = build_domain(Shape::UnitSquare, 1.0 / 32.0).unwrap();
        let w = NodalField::from_fn(&d, |x| x[0] * x[0] + x[1] * x[1]).unwrap();
        let worst = (0..d.num_triangles())
            .map(|t| {
                let b = d.barycenter(t);
                let g = w.gradient(t);
                (g[0] - 2.0 * b[0]).hypot(g[1] - 2.0 * b[1])
            })
            .fold(0.0, f64::max);
        // P1 gradient error for |x|^2 is at most (second derivative) * h = 2h
        assert!(worst <= 2.0 * d.h(), "{worst} vs h = {}", d.h());
    }

    #[test]
    fn cutoff_values_and_slope() {
        let d = build_domain(Shape::UnitDisk, 0.25 / 8.0).unwrap();
        let eta = cutoff(&d, 0.25, 0.5, [0.0, 0.0]).unwrap();
        assert_eq!(eta.value(0), 1.0);
        for (i, &x) in d.nodes().iter().enumerate() {
            if norm(x) >= 0.5 {
                assert_eq!(eta.value(i), 0.0);
            }
        }
        let max_slope = (0..d.num_triangles()).map(|t| norm(eta.gradient(t))).fold(0.0, f64::max);
        assert!(max_slope <= 1.1 / 0.25, "{max_slope}");
        assert!(cutoff(&d, 0.25, 1.5, [0.0, 0.0]).is_err());
        assert!(cutoff(&d, 0.5, 0.25, [0.0, 0.0]).is_err());
    }
}
