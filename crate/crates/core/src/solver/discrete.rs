//! The discrete energy `Σ_T |T| (w_p |z_T|^p + w_q ā_T |z_T|^q)` with its
//! gradient and Hessian, `ā_T` being the midpoint average of `a`.

use super::linear::StiffnessPattern;
use crate::energy::DoublePhaseSpec;
use crate::error::Result;
use crate::geometry::{dot, Vec2};
use crate::mesh::DiscreteDomain;

pub(crate) struct DiscreteEnergy<'a> {
    domain: &'a DiscreteDomain,
    p: f64,
    q: f64,
    wp: f64,
    wq: f64,
    abar: Vec<f64>,
    drift: Vec2,
}

/// Midpoint averages of the weight, one per triangle.
pub(crate) fn triangle_weights(domain: &DiscreteDomain, spec: &DoublePhaseSpec) -> Result<Vec<f64>> {
    (0..domain.num_triangles())
        .map(|t| {
            let m = domain.midpoints(t);
            Ok((spec.a(m[0])? + spec.a(m[1])? + spec.a(m[2])?) / 3.0)
        })
        .collect()
}

#[inline]
pub(crate) fn triangle_gradient(domain: &DiscreteDomain, t: usize, v: &[f64]) -> Vec2 {
    let tri = domain.triangles()[t];
    let g = domain.hat_gradients(t);
    [
        v[tri[0]] * g[0][0] + v[tri[1]] * g[1][0] + v[tri[2]] * g[2][0],
        v[tri[0]] * g[0][1] + v[tri[1]] * g[1][1] + v[tri[2]] * g[2][1],
    ]
}

impl<'a> DiscreteEnergy<'a> {
    pub(crate) fn new(
        domain: &'a DiscreteDomain,
        spec: &DoublePhaseSpec,
        wp: f64,
        wq: f64,
        drift: Vec2,
    ) -> Result<Self> {
        Ok(DiscreteEnergy { domain, p: spec.p(), q: spec.q(), wp, wq, abar: triangle_weights(domain, spec)?, drift })
    }

    /// Energy density for the (regularized) gradient length `s`.
    #[inline]
    fn density(&self, t: usize, s: f64) -> f64 {
        if s == 0.0 {
            return 0.0;
        }
        let a = self.abar[t];
        let mut d = self.wp * s.powf(self.p);
        if a != 0.0 {
            d += self.wq * a * s.powf(self.q);
        }
        d
    }

    /// `φ'(s)/s`, so that the gradient of the density in `z` is `k(s) z`.
    #[inline]
    fn k(&self, t: usize, s: f64) -> f64 {
        let a = self.abar[t];
        let mut k = self.p * self.wp * s.powf(self.p - 2.0);
        if a != 0.0 {
            k += self.q * self.wq * a * s.powf(self.q - 2.0);
        }
        k
    }

    /// Derivative of `k` divided by `s`.
    #[inline]
    fn dk(&self, t: usize, s: f64) -> f64 {
        let a = self.abar[t];
        let mut c = self.p * self.wp * (self.p - 2.0) * s.powf(self.p - 4.0);
        if a != 0.0 {
            c += self.q * self.wq * a * (self.q - 2.0) * s.powf(self.q - 4.0);
        }
        c
    }

    pub(crate) fn value(&self, v: &[f64], eps: f64) -> f64 {
        let mut total = 0.0;
        for t in 0..self.domain.num_triangles() {
            let z = triangle_gradient(self.domain, t, v);
            let s = (dot(z, z) + eps * eps).sqrt();
            total += self.domain.area(t) * (self.density(t, s) + dot(self.drift, z));
        }
        total
    }

    pub(crate) fn gradient(&self, v: &[f64], eps: f64, out: &mut [f64]) {
        out.iter_mut().for_each(|x| *x = 0.0);
        for t in 0..self.domain.num_triangles() {
            let z = triangle_gradient(self.domain, t, v);
            let s = (dot(z, z) + eps * eps).sqrt();
            let flux = if s == 0.0 {
                self.drift
            } else {
                let k = self.k(t, s);
                [k * z[0] + self.drift[0], k * z[1] + self.drift[1]]
            };
            let area = self.domain.area(t);
            let g = self.domain.hat_gradients(t);
            for (l, &i) in self.domain.triangles()[t].iter().enumerate() {
                out[i] += area * dot(flux, g[l]);
            }
        }
    }

    /// Assembles the Hessian with regularization `eps` (at least `floor`).
    pub(crate) fn hessian(&self, v: &[f64], eps: f64, pattern: &StiffnessPattern, values: &mut [f64]) {
        values.iter_mut().for_each(|x| *x = 0.0);
        for t in 0..self.domain.num_triangles() {
            let z = triangle_gradient(self.domain, t, v);
            let s = (dot(z, z) + eps * eps).sqrt();
            let (k, c) = (self.k(t, s), self.dk(t, s));
            let m = [[k + c * z[0] * z[0], c * z[0] * z[1]], [c * z[0] * z[1], k + c * z[1] * z[1]]];
            let area = self.domain.area(t);
            let g = self.domain.hat_gradients(t);
            let mut local = [[0.0; 3]; 3];
            for a in 0..3 {
                let mg = [m[0][0] * g[a][0] + m[0][1] * g[a][1], m[1][0] * g[a][0] + m[1][1] * g[a][1]];
                for b in 0..3 {
                    local[a][b] = area * dot(mg, g[b]);
                }
            }
            pattern.add_local(values, t, &local);
        }
    }
}
