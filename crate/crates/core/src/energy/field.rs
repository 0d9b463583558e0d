use std::fmt;
use std::sync::Arc;

use rand::Rng;

use super::spec::DoublePhaseSpec;
use crate::error::{Error, Result};
use crate::geometry::{dot, norm, scale, sub, Point, Vec2};

/// A user supplied evaluation rule `(x, a(x), z) ↦ A(x, z)`.
pub trait CustomRule: Send + Sync + fmt::Debug {
    fn eval(&self, x: Point, a: f64, z: Vec2) -> Vec2;

    fn label(&self) -> String {
        "custom".into()
    }
}

#[derive(Clone, Debug)]
pub enum FieldForm {
    /// `|z|^{p-2} z + a |z|^{q-2} z`, the Euler-Lagrange field of `H/p`-type energies.
    Prototype,
    /// Prototype plus a constant vector `b`.
    Drift { b: Vec2 },
    /// Arbitrary rule; `reflected` evaluates `-rule(x, -z)` instead.
    Custom { rule: Arc<dyn CustomRule>, reflected: bool },
}

/// The vector field `A(x, z)` with ellipticity constants `(ν, L)`.
#[derive(Clone, Debug)]
pub struct MonotoneField {
    spec: DoublePhaseSpec,
    nu: f64,
    big_l: f64,
    form: FieldForm,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonotonicityGap {
    /// `|V_p(z1)-V_p(z2)|^2 + a |V_q(z1)-V_q(z2)|^2`.
    pub v: f64,
    /// `<A(x,z1) - A(x,z2), z1 - z2>`.
    pub pairing: f64,
}

impl MonotonicityGap {
    /// `V / pairing`, or `None` when both vanish.
    pub fn ratio(&self) -> Option<f64> {
        if self.pairing > 0.0 {
            Some(self.v / self.pairing)
        } else if self.v == 0.0 {
            None
        } else {
            Some(f64::INFINITY)
        }
    }
}

/// Result of a random sampling audit of a field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldAudit {
    pub samples: usize,
    /// Largest `|A| / (L (|z|^{p-1} + a |z|^{q-1}))`; at most 1 when the growth bound holds.
    pub worst_growth_ratio: f64,
    /// Most negative monotonicity pairing seen (0 when all are nonnegative).
    pub worst_pairing: f64,
}

impl FieldAudit {
    pub fn passes(&self, tol: f64) -> bool {
        self.worst_growth_ratio <= 1.0 + tol && self.worst_pairing >= -tol
    }
}

#[inline]
fn power_vector(t: f64, z: Vec2) -> Vec2 {
    // |z|^{t-2} z, extended by 0 at the origin
    let r = norm(z);
    if r == 0.0 {
        [0.0, 0.0]
    } else {
        scale(r.powf(t - 2.0), z)
    }
}

/// `V_t(z) = |z|^{(t-2)/2} z`.
#[inline]
pub fn v_map(t: f64, z: Vec2) -> Vec2 {
    let r = norm(z);
    if r == 0.0 {
        [0.0, 0.0]
    } else {
        scale(r.powf((t - 2.0) / 2.0), z)
    }
}

impl MonotoneField {
    pub fn prototype(spec: DoublePhaseSpec) -> Self {
        let nu = (spec.p() - 1.0).min(1.0);
        let big_l = spec.q().max(2.0);
        MonotoneField { spec, nu, big_l, form: FieldForm::Prototype }
    }

    pub fn drift(spec: DoublePhaseSpec, b: Vec2) -> Self {
        let mut field = Self::prototype(spec);
        field.form = FieldForm::Drift { b };
        field
    }

    pub fn custom(spec: DoublePhaseSpec, nu: f64, big_l: f64, rule: Arc<dyn CustomRule>) -> Result<Self> {
        if !(nu > 0.0 && big_l >= nu && big_l.is_finite()) {
            return Err(Error::parameter(format!("need 0 < nu <= L, got nu = {nu}, L = {big_l}")));
        }
        Ok(MonotoneField { spec, nu, big_l, form: FieldForm::Custom { rule, reflected: false } })
    }

    pub fn spec(&self) -> &DoublePhaseSpec {
        &self.spec
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn big_l(&self) -> f64 {
        self.big_l
    }

    pub fn form(&self) -> &FieldForm {
        &self.form
    }

    /// True when `A(x, ·)` is the gradient of a convex energy density, so
    /// the discrete problems are convex minimizations.
    pub fn is_potential(&self) -> bool {
        !matches!(self.form, FieldForm::Custom { .. })
    }

    pub fn label(&self) -> String {
        match &self.form {
            FieldForm::Prototype => "prototype".into(),
            FieldForm::Drift { b } => format!("drift({}, {})", b[0], b[1]),
            FieldForm::Custom { rule, reflected } => {
                if *reflected {
                    format!("reflected {}", rule.label())
                } else {
                    rule.label()
                }
            }
        }
    }

    /// `A(x, z)` given the precomputed coefficient `a = a(x)`.
    #[inline]
    pub fn eval_with(&self, x: Point, a: f64, z: Vec2) -> Vec2 {
        let (p, q) = (self.spec.p(), self.spec.q());
        match &self.form {
            FieldForm::Prototype => prototype_value(p, q, a, z),
            FieldForm::Drift { b } => {
                let v = prototype_value(p, q, a, z);
                [v[0] + b[0], v[1] + b[1]]
            }
            FieldForm::Custom { rule, reflected } => {
                if *reflected {
                    scale(-1.0, rule.eval(x, a, [-z[0], -z[1]]))
                } else {
                    rule.eval(x, a, z)
                }
            }
        }
    }

    pub fn eval(&self, x: Point, z: Vec2) -> Result<Vec2> {
        Ok(self.eval_with(x, self.spec.a(x)?, z))
    }

    /// The field `z ↦ -A(x, -z)`, with the same `(ν, L)`.
    pub fn reflected(&self) -> Self {
        let form = match &self.form {
            FieldForm::Prototype => FieldForm::Prototype,
            FieldForm::Drift { b } => FieldForm::Drift { b: [-b[0], -b[1]] },
            FieldForm::Custom { rule, reflected } => {
                FieldForm::Custom { rule: Arc::clone(rule), reflected: !reflected }
            }
        };
        MonotoneField { form, ..self.clone() }
    }

    pub fn monotonicity_gap(&self, x: Point, z1: Vec2, z2: Vec2) -> Result<MonotonicityGap> {
        let a = self.spec.a(x)?;
        let (p, q) = (self.spec.p(), self.spec.q());
        let dp = sub(v_map(p, z1), v_map(p, z2));
        let dq = sub(v_map(q, z1), v_map(q, z2));
        let v = dot(dp, dp) + a * dot(dq, dq);
        let pairing = dot(sub(self.eval_with(x, a, z1), self.eval_with(x, a, z2)), sub(z1, z2));
        Ok(MonotonicityGap { v, pairing })
    }

    /// Samples random points from `points` and random gradients of magnitude
    /// up to `z_max`, checking the growth bound and monotonicity.
    pub fn audit<R: Rng>(&self, points: &[Point], z_max: f64, samples: usize, rng: &mut R) -> Result<FieldAudit> {
        if points.is_empty() {
            return Err(Error::parameter("audit needs at least one sample point"));
        }
        let (p, q) = (self.spec.p(), self.spec.q());
        let mut worst_growth: f64 = 0.0;
        let mut worst_pairing: f64 = 0.0;
        let random_z = |rng: &mut R| -> Vec2 {
            let r = z_max * rng.gen::<f64>();
            let t = std::f64::consts::TAU * rng.gen::<f64>();
            [r * t.cos(), r * t.sin()]
        };
        for _ in 0..samples {
            let x = points[rng.gen_range(0..points.len())];
            let a = self.spec.a(x)?;
            let z1 = random_z(rng);
            let z2 = random_z(rng);
            let r = norm(z1);
            let bound = self.big_l * (r.powf(p - 1.0) + a * r.powf(q - 1.0));
            let value = norm(self.eval_with(x, a, z1));
            let ratio = if bound > 0.0 {
                value / bound
            } else if value == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            worst_growth = worst_growth.max(ratio);
            let pairing = dot(sub(self.eval_with(x, a, z1), self.eval_with(x, a, z2)), sub(z1, z2));
            worst_pairing = worst_pairing.min(pairing);
        }
        Ok(FieldAudit { samples, worst_growth_ratio: worst_growth, worst_pairing })
    }
}

#[inline]
pub(crate) fn prototype_value(p: f64, q: f64, a: f64, z: Vec2) -> Vec2 {
    let vp = power_vector(p, z);
    if a == 0.0 {
        return vp;
    }
    let vq = power_vector(q, z);
    [vp[0] + a * vq[0], vp[1] + a * vq[1]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::Weight;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[derive(Debug)]
    struct Skewed;

    impl CustomRule for Skewed {
        fn eval(&self, _x: Point, _a: f64, z: Vec2) -> Vec2 {
            // gradient of |z|^2/2 + max(z_1, 0)^3/3: monotone, not odd
            let extra = if z[0] > 0.0 { z[0] * z[0] } else { 0.0 };
            [z[0] + extra, z[1]]
        }
    }

    #[test]
    fn prototype_is_its_own_reflection() {
        let spec = DoublePhaseSpec::new(1.5, 1.8, Weight::radial_power(1.0, 0.5)).unwrap();
        let f = MonotoneField::prototype(spec);
        let r = f.reflected();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let x = [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
            let z = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            assert_eq!(f.eval(x, z).unwrap(), r.eval(x, z).unwrap());
        }
    }

    #[test]
    fn drift_reflection_flips_sign_of_b() {
        let spec = DoublePhaseSpec::single_phase(2.0).unwrap();
        let f = MonotoneField::drift(spec, [0.3, -0.2]);
        let z = [0.7, 0.1];
        let fr = f.reflected().eval([0.0, 0.0], z).unwrap();
        assert!((fr[0] - (0.7 - 0.3)).abs() < 1e-15 && (fr[1] - (0.1 + 0.2)).abs() < 1e-15);
    }

    #[test]
    fn custom_reflection_is_an_involution() {
        let spec = DoublePhaseSpec::single_phase(2.0).unwrap();
        let f = MonotoneField::custom(spec, 1.0, 3.0, Arc::new(Skewed)).unwrap();
        let rr = f.reflected().reflected();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let z = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            assert_eq!(f.eval([0.0, 0.0], z).unwrap(), rr.eval([0.0, 0.0], z).unwrap());
        }
        let r = f.reflected().eval([0.0, 0.0], [-1.0, 0.0]).unwrap();
        assert_eq!(r, [-2.0, 0.0]);
        assert!(!f.is_potential());
    }

    #[test]
    fn quadratic_gap_ratio_is_one() {
        let spec = DoublePhaseSpec::single_phase(2.0).unwrap();
        let f = MonotoneField::prototype(spec);
        let g = f.monotonicity_gap([0.0, 0.0], [1.0, 2.0], [-0.5, 0.25]).unwrap();
        assert!((g.v - g.pairing).abs() < 1e-14);
        assert!((g.ratio().unwrap() - 1.0).abs() < 1e-14);
        let g = f.monotonicity_gap([0.0, 0.0], [1.0, 2.0], [1.0, 2.0]).unwrap();
        assert_eq!((g.v, g.pairing), (0.0, 0.0));
        assert_eq!(g.ratio(), None);
    }

    #[test]
    fn prototype_passes_audit() {
        let spec = DoublePhaseSpec::new(1.6, 1.9, Weight::half_plane_power(1.0, 0.5)).unwrap();
        let f = MonotoneField::prototype(spec);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pts: Vec<Point> = (0..50).map(|i| [-1.0 + 0.04 * i as f64, 0.1]).collect();
        let audit = f.audit(&pts, 5.0, 1000, &mut rng).unwrap();
        assert!(audit.passes(1e-12), "{audit:?}");
    }

    #[test]
    fn drift_fails_growth_bound_near_zero() {
        let spec = DoublePhaseSpec::single_phase(2.0).unwrap();
        let f = MonotoneField::drift(spec, [1.0, 0.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let audit = f.audit(&[[0.0, 0.0]], 1e-3, 100, &mut rng).unwrap();
        assert!(audit.worst_growth_ratio > 1.0);
        assert!(audit.worst_pairing >= -1e-15);
    }
}
