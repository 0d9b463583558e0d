use std::sync::Arc;

use crate::energy::MonotoneField;
use crate::error::Result;
use crate::geometry::{dist, dot, Ball, Point};
use crate::mesh::{DiscreteDomain, NodalField, SetDescriptor};

use super::discrete::triangle_gradient;

/// `∫ A(x, Dv) · Dφ_i dx` for every node, by the edge-midpoint rule.
pub(crate) fn field_atoms(field: &MonotoneField, domain: &DiscreteDomain, v: &[f64]) -> Result<Vec<f64>> {
    let spec = field.spec();
    let mut atoms = vec![0.0; domain.num_nodes()];
    for t in 0..domain.num_triangles() {
        let z = triangle_gradient(domain, t, v);
        let mut flux = [0.0; 2];
        for x in domain.midpoints(t) {
            let a = field.eval_with(x, spec.a(x)?, z);
            flux[0] += a[0] / 3.0;
            flux[1] += a[1] / 3.0;
        }
        let area = domain.area(t);
        let g = domain.hat_gradients(t);
        for (l, &i) in domain.triangles()[t].iter().enumerate() {
            atoms[i] += area * dot(flux, g[l]);
        }
    }
    Ok(atoms)
}

/// Nodal atoms of `μ = -div A(x, Dv)` tested against hat functions.
#[derive(Clone, Debug)]
pub struct ResidualMeasure {
    domain: Arc<DiscreteDomain>,
    atoms: Vec<f64>,
}

impl ResidualMeasure {
    pub(crate) fn from_atoms(domain: Arc<DiscreteDomain>, mut atoms: Vec<f64>) -> Self {
        for (i, a) in atoms.iter_mut().enumerate() {
            if domain.is_boundary(i) {
                *a = 0.0;
            }
        }
        ResidualMeasure { domain, atoms }
    }

    /// Atoms for the field `v`; boundary nodes carry 0.
    pub fn of_field(v: &NodalField, field: &MonotoneField) -> Result<Self> {
        let atoms = field_atoms(field, v.domain(), v.values())?;
        Ok(Self::from_atoms(Arc::clone(v.domain()), atoms))
    }

    pub fn domain(&self) -> &Arc<DiscreteDomain> {
        &self.domain
    }

    /// One value per node; only interior, non-excluded nodes are meaningful.
    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    fn counted(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        (0..self.atoms.len()).filter(|&i| self.domain.is_free(i)).map(|i| (i, self.atoms[i]))
    }

    /// Sum of atoms at nodes inside the open ball.
    pub fn measure_of_ball(&self, ball: &Ball) -> f64 {
        self.counted().filter(|&(i, _)| ball.contains(self.domain.node(i))).map(|(_, a)| a).sum()
    }

    /// `μ(B)` with each atom spread as a lumped P1 density, `atom_i / m_i`
    /// with `m_i = ∫ φ_i`, integrated over the ball on sub-triangles of size
    /// at most `ρ/16`. Unlike [`Self::measure_of_ball`] it varies smoothly
    /// with the radius when the ball is smaller than a mesh cell.
    pub fn spread_measure_of_ball(&self, ball: &Ball) -> f64 {
        let d = &self.domain;
        let mut lumped = vec![0.0; d.num_nodes()];
        for t in 0..d.num_triangles() {
            for &i in &d.triangles()[t] {
                lumped[i] += d.area(t) / 3.0;
            }
        }
        let density: Vec<f64> = (0..d.num_nodes())
            .map(|i| if d.is_free(i) && lumped[i] > 0.0 { self.atoms[i] / lumped[i] } else { 0.0 })
            .collect();
        let mut total = 0.0;
        for t in 0..d.num_triangles() {
            let tri = d.triangles()[t];
            let x = tri.map(|i| d.node(i));
            let diam = dist(x[0], x[1]).max(dist(x[1], x[2])).max(dist(x[2], x[0]));
            if dist(d.barycenter(t), ball.center) > ball.radius + diam {
                continue;
            }
            let s = ((16.0 * diam / ball.radius).ceil() as usize).clamp(1, 128);
            let w = d.area(t) / (s * s) as f64;
            let sf = s as f64;
            let mut add = |l1: f64, l2: f64| {
                let l = [l1, l2, 1.0 - l1 - l2];
                let y = [
                    l[0] * x[0][0] + l[1] * x[1][0] + l[2] * x[2][0],
                    l[0] * x[0][1] + l[1] * x[1][1] + l[2] * x[2][1],
                ];
                if ball.contains(y) {
                    total += w * (l[0] * density[tri[0]] + l[1] * density[tri[1]] + l[2] * density[tri[2]]);
                }
            };
            // centroids of the s^2 congruent sub-triangles
            for i in 0..s {
                for j in 0..s - i {
                    add((i as f64 + 1.0 / 3.0) / sf, (j as f64 + 1.0 / 3.0) / sf);
                    if i + j + 1 < s {
                        add((i as f64 + 2.0 / 3.0) / sf, (j as f64 + 2.0 / 3.0) / sf);
                    }
                }
            }
        }
        total
    }

    /// Sum of atoms at nodes within `distance` of `set`.
    pub fn mass_near(&self, set: &SetDescriptor, distance: f64) -> f64 {
        self.counted().filter(|&(i, _)| set.distance(self.domain.node(i)) <= distance).map(|(_, a)| a).sum()
    }

    pub fn mass_where(&self, mut keep: impl FnMut(Point) -> bool) -> f64 {
        self.counted().filter(|&(i, _)| keep(self.domain.node(i))).map(|(_, a)| a).sum()
    }

    pub fn total(&self) -> f64 {
        self.counted().map(|(_, a)| a).sum()
    }

    /// Most negative atom (0 when all are nonnegative).
    pub fn min_atom(&self) -> f64 {
        self.counted().map(|(_, a)| a).fold(0.0, f64::min)
    }

    /// Largest `|atom|` over counted nodes accepted by `keep`.
    pub fn max_abs_where(&self, mut keep: impl FnMut(usize) -> bool) -> f64 {
        self.counted().filter(|&(i, _)| keep(i)).map(|(_, a)| a.abs()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_domain, Shape};

    fn uniform(domain: &Arc<DiscreteDomain>, c: f64) -> ResidualMeasure {
        let mut atoms = vec![0.0; domain.num_nodes()];
        for t in 0..domain.num_triangles() {
            for &i in &domain.triangles()[t] {
                atoms[i] += c * domain.area(t) / 3.0;
            }
        }
        ResidualMeasure::from_atoms(Arc::clone(domain), atoms)
    }

    #[test]
    fn spread_measure_of_uniform_density() {
        let d = build_domain(Shape::UnitDisk, 0.1).unwrap();
        let mu = uniform(&d, 2.0);
        // a ball far smaller than a cell still sees the density
        for r in [0.3, 0.05, 0.01] {
            let b = Ball::new([0.1, -0.2], r);
            let got = mu.spread_measure_of_ball(&b);
            assert!((got / (2.0 * b.area()) - 1.0).abs() < 0.02, "r = {r}: {got}");
        }
        let all = mu.spread_measure_of_ball(&Ball::new([0.0, 0.0], 2.0));
        assert!((all - mu.total()).abs() < 1e-12 * mu.total());
    }
}
