//! Greedy lattice coverings and the covering sums `Σ_j ∫_{B_j} K(x, 1/ρ_j)`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::energy::DoublePhaseSpec;
use crate::error::{Error, Result};
use crate::geometry::{integrate_ball, Ball, Point, Region};
use crate::mesh::SetDescriptor;

const RADIAL_NODES: usize = 10;
const ANGULAR_NODES: usize = 32;
/// Samples of `E` per unit of `δ`.
const SAMPLES_PER_DELTA: f64 = 8.0;

/// Integrand used for the ball pre-measure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Kernel {
    H,
    HSigma { sigma: f64 },
}

impl Kernel {
    fn eval(&self, spec: &DoublePhaseSpec, x: Point, t: f64) -> Result<f64> {
        let a = spec.a(x)?;
        Ok(match *self {
            Kernel::H => spec.h_scalar(a, t),
            Kernel::HSigma { sigma } => spec.h_sigma_scalar(sigma, a, t),
        })
    }

    fn validate(&self, spec: &DoublePhaseSpec) -> Result<()> {
        match *self {
            Kernel::H => Ok(()),
            Kernel::HSigma { sigma } => spec.check_sigma(sigma),
        }
    }
}

/// An upper bound for `H_{K,δ}(E)` together with the covering realizing it.
#[derive(Clone, Debug, Serialize)]
pub struct CoveringEstimate {
    pub delta: f64,
    pub kernel: Kernel,
    pub balls: Vec<Ball>,
    pub value: f64,
    pub samples: usize,
}

/// `∫_B K(x, 1/ρ(B)) dx` by a polar tensor rule.
pub fn premeasure_of_ball(ball: &Ball, kernel: Kernel, spec: &DoublePhaseSpec) -> Result<f64> {
    kernel.validate(spec)?;
    let t = 1.0 / ball.radius;
    let mut err = None;
    let v = integrate_ball(ball, RADIAL_NODES, ANGULAR_NODES, |x| match kernel.eval(spec, x, t) {
        Ok(v) => v,
        Err(e) => {
            err.get_or_insert(e);
            0.0
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// Covering sum of an explicit family of balls.
pub fn covering_value(balls: &[Ball], kernel: Kernel, spec: &DoublePhaseSpec) -> Result<f64> {
    balls.iter().map(|b| premeasure_of_ball(b, kernel, spec)).sum()
}

struct Candidate {
    ball: Ball,
    cost: f64,
    covers: Vec<usize>,
}

fn candidates(
    set: &SetDescriptor,
    samples: &[Point],
    delta: f64,
    kernel: Kernel,
    spec: &DoublePhaseSpec,
    region: &dyn Region,
) -> Result<Vec<Candidate>> {
    let pitch = 0.5 * delta;
    let mut out = Vec::new();
    for radius in [delta, 0.5 * delta, 0.25 * delta] {
        // lattice indices of centers within `radius` of some piece of E
        let mut sites = BTreeSet::new();
        let boxes = set.points.iter().map(|&x| (x, x)).chain(
            set.segments.iter().map(|[a, b]| ([a[0].min(b[0]), a[1].min(b[1])], [a[0].max(b[0]), a[1].max(b[1])])),
        );
        for (lo, hi) in boxes {
            let i0 = ((lo[0] - radius) / pitch).floor() as i64;
            let i1 = ((hi[0] + radius) / pitch).ceil() as i64;
            let j0 = ((lo[1] - radius) / pitch).floor() as i64;
            let j1 = ((hi[1] + radius) / pitch).ceil() as i64;
            for i in i0..=i1 {
                for j in j0..=j1 {
                    let c = [i as f64 * pitch, j as f64 * pitch];
                    if set.distance(c) < radius {
                        sites.insert((i, j));
                    }
                }
            }
        }
        for (i, j) in sites {
            let ball = Ball::new([i as f64 * pitch, j as f64 * pitch], radius);
            if !region.contains_ball(&ball) {
                continue;
            }
            let covers: Vec<usize> = (0..samples.len()).filter(|&k| ball.contains(samples[k])).collect();
            if covers.is_empty() {
                continue;
            }
            let cost = premeasure_of_ball(&ball, kernel, spec)?;
            out.push(Candidate { ball, cost, covers });
        }
    }
    Ok(out)
}

fn covers_all(balls: &[Ball], samples: &[Point]) -> bool {
    samples.iter().all(|&x| balls.iter().any(|b| b.contains(x)))
}

/// Greedy weighted set cover of the samples of `E` by lattice balls of
/// radius `δ`, `δ/2`, `δ/4` (centers on a lattice of pitch `δ/2`). The value
/// is an upper bound for the infimum over all coverings.
pub fn hausdorff_premeasure(
    set: &SetDescriptor,
    delta: f64,
    kernel: Kernel,
    spec: &DoublePhaseSpec,
    region: &dyn Region,
) -> Result<CoveringEstimate> {
    hausdorff_premeasure_with(set, delta, kernel, spec, region, &[])
}

/// As [`hausdorff_premeasure`], also trying the `supplied` coverings and
/// keeping the cheapest admissible one.
pub fn hausdorff_premeasure_with(
    set: &SetDescriptor,
    delta: f64,
    kernel: Kernel,
    spec: &DoublePhaseSpec,
    region: &dyn Region,
    supplied: &[Vec<Ball>],
) -> Result<CoveringEstimate> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::parameter(format!("delta must be positive, got {delta}")));
    }
    kernel.validate(spec)?;
    let samples = set.samples(delta / SAMPLES_PER_DELTA);
    if let Some(x) = samples.iter().find(|&&x| region.inner_distance(x) <= 0.0) {
        return Err(Error::domain(format!("set point ({}, {}) lies outside the domain", x[0], x[1])));
    }
    let mut best = CoveringEstimate { delta, kernel, balls: Vec::new(), value: 0.0, samples: samples.len() };
    if samples.is_empty() {
        return Ok(best);
    }
    let cands = candidates(set, &samples, delta, kernel, spec, region)?;
    let mut covered = vec![false; samples.len()];
    let mut left = samples.len();
    let mut used = vec![false; cands.len()];
    while left > 0 {
        let mut pick = None;
        let mut best_rate = f64::INFINITY;
        for (c, cand) in cands.iter().enumerate() {
            if used[c] {
                continue;
            }
            let fresh = cand.covers.iter().filter(|&&k| !covered[k]).count();
            if fresh == 0 {
                continue;
            }
            let rate = cand.cost / fresh as f64;
            // rates equal to roundoff go to the smaller ball
            let tied = pick.is_some() && (rate - best_rate).abs() <= 1e-12 * best_rate;
            let smaller = pick.is_some_and(|b: usize| cand.ball.radius < cands[b].ball.radius);
            if (rate < best_rate && !tied) || (tied && smaller) {
                best_rate = rate;
                pick = Some(c);
            }
        }
        let Some(c) = pick else {
            let k = covered.iter().position(|&c| !c).unwrap_or(0);
            return Err(Error::domain(format!(
                "no ball of radius <= {delta} inside the domain covers ({}, {})",
                samples[k][0], samples[k][1]
            )));
        };
        used[c] = true;
        for &k in &cands[c].covers {
            if !covered[k] {
                covered[k] = true;
                left -= 1;
            }
        }
        best.balls.push(cands[c].ball);
        best.value += cands[c].cost;
    }
    for balls in supplied {
        if let Some(b) = balls.iter().find(|b| b.radius > delta) {
            return Err(Error::parameter(format!("supplied ball radius {} exceeds delta {delta}", b.radius)));
        }
        if !covers_all(balls, &samples) {
            return Err(Error::parameter("supplied balls do not cover the set"));
        }
        let value = covering_value(balls, kernel, spec)?;
        if value < best.value {
            best.balls = balls.clone();
            best.value = value;
        }
    }
    Ok(best)
}
