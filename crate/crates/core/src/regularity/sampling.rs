//! Reproducible ball samples obeying a containment rule.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Ball, Region};
use crate::mesh::DiscreteDomain;

pub const DEFAULT_SEED: u64 = 0xD0B1E;
pub const DEFAULT_BALLS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BallSampler {
    pub count: usize,
    /// Radii are drawn uniformly from `[lo, hi]`.
    pub radius: (f64, f64),
    /// `B(x, containment * ρ)` must lie strictly inside the domain.
    pub containment: f64,
    pub seed: u64,
}

impl BallSampler {
    pub fn new(radius: (f64, f64), containment: f64) -> Self {
        BallSampler { count: DEFAULT_BALLS, radius, containment, seed: DEFAULT_SEED }
    }

    pub fn with_count(mut self, count: usize) -> Self {
        self.count = count;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Centers uniform over the admissible part of the domain's bounding
    /// box, by rejection. Radii are never shrunk to fit.
    pub fn sample(&self, domain: &DiscreteDomain) -> Result<Vec<Ball>> {
        let (lo, hi) = self.radius;
        if !(lo > 0.0 && lo <= hi && hi <= 1.0) {
            return Err(Error::parameter(format!("ball radii must satisfy 0 < lo <= hi <= 1, got ({lo}, {hi})")));
        }
        if !(self.containment >= 1.0) {
            return Err(Error::parameter("containment factor must be at least 1"));
        }
        let mut bmin = [f64::INFINITY; 2];
        let mut bmax = [f64::NEG_INFINITY; 2];
        for x in domain.nodes() {
            for k in 0..2 {
                bmin[k] = bmin[k].min(x[k]);
                bmax[k] = bmax[k].max(x[k]);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Vec::with_capacity(self.count);
        let budget = 10_000 * self.count.max(1);
        for _ in 0..budget {
            if out.len() == self.count {
                break;
            }
            let r = if hi > lo { rng.gen_range(lo..=hi) } else { lo };
            let c = [rng.gen_range(bmin[0]..=bmax[0]), rng.gen_range(bmin[1]..=bmax[1])];
            if domain.inner_distance(c) > self.containment * r {
                out.push(Ball::new(c, r));
            }
        }
        if out.len() < self.count {
            return Err(Error::Geometry(format!(
                "only {} of {} balls satisfy the containment rule",
                out.len(),
                self.count
            )));
        }
        Ok(out)
    }
}

/// Rejects a ball whose `factor`-dilate is not strictly inside the domain.
pub fn require_inside(domain: &DiscreteDomain, ball: &Ball, factor: f64) -> Result<()> {
    if domain.inner_distance(ball.center) > factor * ball.radius {
        Ok(())
    } else {
        Err(Error::Geometry(format!(
            "ball B(({:.4}, {:.4}), {factor} * {:.4}) is not compactly inside the domain",
            ball.center[0], ball.center[1], ball.radius
        )))
    }
}
