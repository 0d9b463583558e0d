//! Registry of modulating coefficients `a(·)`.
//!
//! Every entry knows its Hölder exponent and the exact Hölder seminorm over
//! the plane, so phase tests can compare against the true constant rather
//! than a sampled estimate. The grid variant only carries an upper bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dist, Ball, Point};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Weight {
    /// `a(x) = value`.
    Constant { value: f64 },
    /// `a(x) = scale * |x - center|^alpha`.
    RadialPower {
        scale: f64,
        alpha: f64,
        #[serde(default)]
        center: Point,
    },
    /// `a(x) = scale * max(0, x1)^alpha`.
    HalfPlanePower { scale: f64, alpha: f64 },
    /// `a(x) = scale * min(1, max(0, x1) / width)^alpha`, a Hölder ramp from
    /// the zero phase to a saturated phase.
    SmoothedStep { scale: f64, alpha: f64, width: f64 },
    /// Bilinear interpolation of nodal values on a rectangle.
    Grid(GridWeight),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridWeight {
    pub lower: Point,
    pub upper: Point,
    pub nx: usize,
    pub ny: usize,
    /// Row-major values, `values[j * nx + i]` at grid point `(i, j)`.
    pub values: Vec<f64>,
    pub alpha: f64,
}

impl GridWeight {
    pub fn new(lower: Point, upper: Point, nx: usize, ny: usize, values: Vec<f64>, alpha: f64) -> Result<Self> {
        if nx < 2 || ny < 2 || values.len() != nx * ny {
            return Err(Error::parameter("grid weight needs at least 2x2 values in row-major order"));
        }
        if !(upper[0] > lower[0] && upper[1] > lower[1]) {
            return Err(Error::parameter("grid weight box is empty"));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::parameter("grid weight Hölder exponent must lie in (0, 1]"));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Data("grid weight values must be finite and nonnegative".into()));
        }
        Ok(GridWeight { lower, upper, nx, ny, values, alpha })
    }

    /// Samples `f` on the grid.
    pub fn from_fn(
        lower: Point,
        upper: Point,
        nx: usize,
        ny: usize,
        alpha: f64,
        f: impl Fn(Point) -> f64,
    ) -> Result<Self> {
        let (dx, dy) = ((upper[0] - lower[0]) / (nx - 1) as f64, (upper[1] - lower[1]) / (ny - 1) as f64);
        let mut values = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                values.push(f([lower[0] + i as f64 * dx, lower[1] + j as f64 * dy]));
            }
        }
        Self::new(lower, upper, nx, ny, values, alpha)
    }

    fn spacing(&self) -> (f64, f64) {
        ((self.upper[0] - self.lower[0]) / (self.nx - 1) as f64, (self.upper[1] - self.lower[1]) / (self.ny - 1) as f64)
    }

    fn eval(&self, x: Point) -> Result<f64> {
        let tol = 1e-12;
        if x[0] < self.lower[0] - tol
            || x[0] > self.upper[0] + tol
            || x[1] < self.lower[1] - tol
            || x[1] > self.upper[1] + tol
        {
            return Err(Error::domain(format!("point ({}, {}) lies outside the weight grid", x[0], x[1])));
        }
        let (dx, dy) = self.spacing();
        let sx = ((x[0] - self.lower[0]) / dx).clamp(0.0, (self.nx - 1) as f64);
        let sy = ((x[1] - self.lower[1]) / dy).clamp(0.0, (self.ny - 1) as f64);
        let i = (sx.floor() as usize).min(self.nx - 2);
        let j = (sy.floor() as usize).min(self.ny - 2);
        let (tx, ty) = (sx - i as f64, sy - j as f64);
        let v = |i: usize, j: usize| self.values[j * self.nx + i];
        Ok((1.0 - tx) * (1.0 - ty) * v(i, j)
            + tx * (1.0 - ty) * v(i + 1, j)
            + (1.0 - tx) * ty * v(i, j + 1)
            + tx * ty * v(i + 1, j + 1))
    }

    /// Lipschitz constant of the bilinear interpolant. The squared gradient
    /// norm is convex on each cell, so its maximum sits at a cell corner.
    fn lipschitz(&self) -> f64 {
        let (dx, dy) = self.spacing();
        let v = |i: usize, j: usize| self.values[j * self.nx + i];
        let mut best: f64 = 0.0;
        for j in 0..self.ny - 1 {
            for i in 0..self.nx - 1 {
                for (cx, cy) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                    let gx = (v(i + 1, j + cy) - v(i, j + cy)) / dx;
                    let gy = (v(i + cx, j + 1) - v(i + cx, j)) / dy;
                    best = best.max(gx.hypot(gy));
                }
            }
        }
        best
    }

    fn oscillation(&self) -> f64 {
        let (lo, hi) =
            self.values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
        hi - lo
    }
}

impl Weight {
    pub fn zero() -> Self {
        Weight::Constant { value: 0.0 }
    }

    pub fn constant(value: f64) -> Self {
        Weight::Constant { value }
    }

    pub fn radial_power(scale: f64, alpha: f64) -> Self {
        Weight::RadialPower { scale, alpha, center: [0.0, 0.0] }
    }

    pub fn half_plane_power(scale: f64, alpha: f64) -> Self {
        Weight::HalfPlanePower { scale, alpha }
    }

    pub fn smoothed_step(scale: f64, alpha: f64, width: f64) -> Self {
        Weight::SmoothedStep { scale, alpha, width }
    }

    /// Checks the registry parameters.
    pub fn validate(&self) -> Result<()> {
        let check_alpha = |alpha: f64| {
            if alpha > 0.0 && alpha <= 1.0 {
                Ok(())
            } else {
                Err(Error::parameter(format!("Hölder exponent {alpha} outside (0, 1]")))
            }
        };
        let check_scale = |scale: f64| {
            if scale.is_finite() && scale >= 0.0 {
                Ok(())
            } else {
                Err(Error::parameter(format!("weight scale {scale} must be finite and nonnegative")))
            }
        };
        match self {
            Weight::Constant { value } => check_scale(*value),
            Weight::RadialPower { scale, alpha, .. } | Weight::HalfPlanePower { scale, alpha } => {
                check_scale(*scale)?;
                check_alpha(*alpha)
            }
            Weight::SmoothedStep { scale, alpha, width } => {
                check_scale(*scale)?;
                check_alpha(*alpha)?;
                if *width > 0.0 {
                    Ok(())
                } else {
                    Err(Error::parameter("smoothed step width must be positive"))
                }
            }
            Weight::Grid(g) => check_alpha(g.alpha),
        }
    }

    /// Evaluates `a(x)`. Only the grid variant has a bounded domain.
    pub fn eval(&self, x: Point) -> Result<f64> {
        Ok(match self {
            Weight::Constant { value } => *value,
            Weight::RadialPower { scale, alpha, center } => scale * dist(x, *center).powf(*alpha),
            Weight::HalfPlanePower { scale, alpha } => scale * x[0].max(0.0).powf(*alpha),
            Weight::SmoothedStep { scale, alpha, width } => scale * (x[0].max(0.0) / width).min(1.0).powf(*alpha),
            Weight::Grid(g) => return g.eval(x),
        })
    }

    /// Hölder exponent `alpha` of the coefficient. Constants are Lipschitz.
    pub fn alpha(&self) -> f64 {
        match self {
            Weight::Constant { .. } => 1.0,
            Weight::RadialPower { alpha, .. }
            | Weight::HalfPlanePower { alpha, .. }
            | Weight::SmoothedStep { alpha, .. } => *alpha,
            Weight::Grid(g) => g.alpha,
        }
    }

    /// Hölder seminorm `[a]_{0,alpha}` over the plane; exact for every
    /// closed-form entry, an upper bound for grids.
    pub fn holder_seminorm(&self) -> f64 {
        match self {
            Weight::Constant { .. } => 0.0,
            // | |x|^α - |y|^α | <= ||x| - |y||^α <= |x - y|^α, equality at y = center
            Weight::RadialPower { scale, .. } | Weight::HalfPlanePower { scale, .. } => *scale,
            Weight::SmoothedStep { scale, alpha, width } => scale * width.powf(-alpha),
            Weight::Grid(g) => {
                let lip = g.lipschitz();
                if g.alpha >= 1.0 {
                    lip
                } else {
                    // min(L r, osc) <= L^α osc^(1-α) r^α
                    lip.powf(g.alpha) * g.oscillation().powf(1.0 - g.alpha)
                }
            }
        }
    }

    /// Whether `holder_seminorm` is the exact constant.
    pub fn seminorm_is_exact(&self) -> bool {
        match self {
            Weight::Grid(g) => g.alpha >= 1.0,
            _ => true,
        }
    }

    /// Exact `(inf, sup)` of the weight over an open ball, when known in
    /// closed form.
    pub fn exact_extrema(&self, ball: &Ball) -> Option<(f64, f64)> {
        let r = ball.radius;
        let c = ball.center;
        match self {
            Weight::Constant { value } => Some((*value, *value)),
            Weight::RadialPower { scale, alpha, center } => {
                let d = dist(c, *center);
                Some((scale * (d - r).max(0.0).powf(*alpha), scale * (d + r).powf(*alpha)))
            }
            Weight::HalfPlanePower { scale, alpha } => {
                let f = |t: f64| scale * t.max(0.0).powf(*alpha);
                Some((f(c[0] - r), f(c[0] + r)))
            }
            Weight::SmoothedStep { .. } => {
                // monotone in x1 alone
                let lo = self.eval([c[0] - r, c[1]]).ok()?;
                let hi = self.eval([c[0] + r, c[1]]).ok()?;
                Some((lo, hi))
            }
            Weight::Grid(_) => None,
        }
    }

    /// Short identifier used in reports.
    pub fn label(&self) -> String {
        match self {
            Weight::Constant { value } => format!("constant({value})"),
            Weight::RadialPower { scale, alpha, .. } => format!("radial_power({scale},{alpha})"),
            Weight::HalfPlanePower { scale, alpha } => format!("half_plane_power({scale},{alpha})"),
            Weight::SmoothedStep { scale, alpha, width } => format!("smoothed_step({scale},{alpha},{width})"),
            Weight::Grid(g) => format!("grid({}x{})", g.nx, g.ny),
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        match self {
            Weight::Constant { value } => *value == 0.0,
            Weight::RadialPower { scale, .. }
            | Weight::HalfPlanePower { scale, .. }
            | Weight::SmoothedStep { scale, .. } => *scale == 0.0,
            Weight::Grid(g) => g.values.iter().all(|v| *v == 0.0),
        }
    }
}
