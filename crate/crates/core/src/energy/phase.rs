use serde::Serialize;

use super::spec::DoublePhaseSpec;
use crate::error::{Error, Result};
use crate::geometry::{Ball, Region};

const POLAR_SAMPLES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseVerdict {
    Degenerate,
    Nondegenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseClass {
    pub ball: Ball,
    pub a_inf: f64,
    pub a_sup: f64,
    /// `4 [a] ρ^α`.
    pub threshold: f64,
    pub verdict: PhaseVerdict,
}

impl PhaseClass {
    /// `a_s <= 2 a_i`, expected in the nondegenerate phase.
    pub fn sup_within_twice_inf(&self) -> bool {
        self.a_sup <= 2.0 * self.a_inf
    }

    /// `a_s <= 6 [a] ρ^α`, expected in the degenerate phase.
    pub fn sup_within_degenerate_bound(&self) -> bool {
        self.a_sup <= 1.5 * self.threshold
    }
}

/// Degenerate when `a_i(B) <= 4 [a] ρ^α`. Extremes come from a 64 × 64
/// polar grid, tightened by closed-form extrema where the weight has them.
pub fn classify_phase(spec: &DoublePhaseSpec, ball: &Ball, region: &dyn Region) -> Result<PhaseClass> {
    if !(ball.radius > 0.0 && ball.radius <= 1.0) {
        return Err(Error::parameter(format!("ball radius must lie in (0, 1], got {}", ball.radius)));
    }
    if !region.contains_ball(ball) {
        return Err(Error::domain(format!("ball {ball:?} leaves the domain")));
    }
    let mut a_inf = f64::INFINITY;
    let mut a_sup = f64::NEG_INFINITY;
    for i in 0..POLAR_SAMPLES {
        let r = ball.radius * i as f64 / (POLAR_SAMPLES - 1) as f64;
        for j in 0..POLAR_SAMPLES {
            let t = std::f64::consts::TAU * j as f64 / POLAR_SAMPLES as f64;
            let a = spec.a([ball.center[0] + r * t.cos(), ball.center[1] + r * t.sin()])?;
            a_inf = a_inf.min(a);
            a_sup = a_sup.max(a);
            if i == 0 {
                break;
            }
        }
    }
    if let Some((lo, hi)) = spec.weight().exact_extrema(ball) {
        a_inf = a_inf.min(lo);
        a_sup = a_sup.max(hi);
    }
    let threshold = 4.0 * spec.holder_seminorm() * ball.radius.powf(spec.alpha());
    let verdict = if a_inf <= threshold { PhaseVerdict::Degenerate } else { PhaseVerdict::Nondegenerate };
    Ok(PhaseClass { ball: *ball, a_inf, a_sup, threshold, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::Weight;
    use crate::geometry::Point;

    struct Plane;

    impl Region for Plane {
        fn inner_distance(&self, _x: Point) -> f64 {
            f64::INFINITY
        }
    }

    struct UnitDisk;

    impl Region for UnitDisk {
        fn inner_distance(&self, x: Point) -> f64 {
            1.0 - x[0].hypot(x[1])
        }
    }

    #[test]
    fn zero_weight_is_degenerate() {
        let spec = DoublePhaseSpec::single_phase(1.5).unwrap();
        let c = classify_phase(&spec, &Ball::new([0.2, 0.1], 0.3), &Plane).unwrap();
        assert_eq!(c.verdict, PhaseVerdict::Degenerate);
        assert_eq!((c.a_inf, c.a_sup, c.threshold), (0.0, 0.0, 0.0));
    }

    #[test]
    fn constant_weight_is_nondegenerate() {
        let spec = DoublePhaseSpec::new(1.5, 1.8, Weight::constant(1.0)).unwrap();
        let c = classify_phase(&spec, &Ball::new([0.0, 0.0], 0.5), &Plane).unwrap();
        assert_eq!(c.verdict, PhaseVerdict::Nondegenerate);
        assert!(c.sup_within_twice_inf());
    }

    #[test]
    fn radial_weight_at_origin() {
        let spec = DoublePhaseSpec::new(1.5, 1.8, Weight::radial_power(1.0, 0.5)).unwrap();
        for rho in [0.05, 0.2, 0.5] {
            let c = classify_phase(&spec, &Ball::new([0.0, 0.0], rho), &UnitDisk).unwrap();
            assert_eq!(c.verdict, PhaseVerdict::Degenerate);
            assert_eq!(c.a_inf, 0.0);
            assert!(c.sup_within_degenerate_bound());
        }
    }

    #[test]
    fn ball_outside_domain_rejected() {
        let spec = DoublePhaseSpec::single_phase(1.5).unwrap();
        assert!(matches!(classify_phase(&spec, &Ball::new([0.8, 0.0], 0.3), &UnitDisk), Err(Error::Domain(_))));
        assert!(classify_phase(&spec, &Ball::new([0.0, 0.0], 2.0), &Plane).is_err());
    }
}
