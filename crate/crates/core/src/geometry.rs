use serde::{Deserialize, Serialize};

/// A point of the plane.
pub type Point = [f64; 2];

/// A vector of the plane (gradients, field values).
pub type Vec2 = [f64; 2];

#[inline]
pub fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn norm(a: Vec2) -> f64 {
    a[0].hypot(a[1])
}

#[inline]
pub fn sub(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn add(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn scale(s: f64, a: Vec2) -> Vec2 {
    [s * a[0], s * a[1]]
}

#[inline]
pub fn dist(a: Point, b: Point) -> f64 {
    norm(sub(a, b))
}

/// Distance from `x` to the closed segment `[a, b]`.
pub fn dist_to_segment(x: Point, a: Point, b: Point) -> f64 {
    let ab = sub(b, a);
    let len2 = dot(ab, ab);
    if len2 == 0.0 {
        return dist(x, a);
    }
    let t = (dot(sub(x, a), ab) / len2).clamp(0.0, 1.0);
    dist(x, add(a, scale(t, ab)))
}

/// Open Euclidean ball.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Self {
        Ball { center, radius }
    }

    #[inline]
    pub fn contains(&self, x: Point) -> bool {
        dist(x, self.center) < self.radius
    }

    /// Concentric ball with radius multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Ball {
        Ball::new(self.center, self.radius * factor)
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius
    }
}

/// Anything that can tell whether a ball lies inside it.
pub trait Region {
    /// Distance from `x` to the complement of the region (0 outside).
    fn inner_distance(&self, x: Point) -> f64;

    fn contains_ball(&self, ball: &Ball) -> bool {
        self.inner_distance(ball.center) >= ball.radius
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp;
        let mut iter = 0;
        loop {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j - 1) as f64 * z * p2 - (j - 1) as f64 * p3) / j as f64;
            }
            dp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let z_old = z;
            z = z_old - p1 / dp;
            iter += 1;
            if (z - z_old).abs() < 1e-15 || iter > 100 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Integrates `f` over a ball with a tensor polar rule: Gauss–Legendre in the
/// radius, uniform in the angle.
pub fn integrate_ball(ball: &Ball, radial: usize, angular: usize, mut f: impl FnMut(Point) -> f64) -> f64 {
    let (gx, gw) = gauss_legendre(radial);
    let r0 = ball.radius;
    let dtheta = 2.0 * std::f64::consts::PI / angular as f64;
    let mut total = 0.0;
    for (xi, wi) in gx.iter().zip(&gw) {
        let r = 0.5 * r0 * (xi + 1.0);
        let wr = 0.5 * r0 * wi * r;
        let mut ring = 0.0;
        for k in 0..angular {
            let th = (k as f64 + 0.5) * dtheta;
            ring += f([ball.center[0] + r * th.cos(), ball.center[1] + r * th.sin()]);
        }
        total += wr * ring * dtheta;
    }
    total
}
