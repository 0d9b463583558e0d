use serde::{Deserialize, Serialize};

use super::weight::Weight;
use crate::error::{Error, Result};
use crate::geometry::{norm, Point, Vec2};

/// Spatial dimension of every computation in this crate.
pub const DIM: f64 = 2.0;

/// How strictly exponent constraints are enforced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Fidelity {
    /// `1 < p < q < n` and `q/p <= 1 + alpha/n`.
    #[default]
    Strict,
    /// Only `1 < p < q`; used for single phase and large-exponent studies.
    Exploratory,
}

/// The double phase integrand `H(x, z) = |z|^p + a(x) |z|^q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoublePhaseSpec {
    p: f64,
    q: f64,
    alpha: f64,
    holder_seminorm: f64,
    weight: Weight,
    fidelity: Fidelity,
}

impl DoublePhaseSpec {
    /// Strict constructor: rejects exponents outside `1 < p < q < 2` and
    /// violations of the balance condition.
    pub fn new(p: f64, q: f64, weight: Weight) -> Result<Self> {
        Self::with_fidelity(p, q, weight, Fidelity::Strict)
    }

    pub fn exploratory(p: f64, q: f64, weight: Weight) -> Result<Self> {
        Self::with_fidelity(p, q, weight, Fidelity::Exploratory)
    }

    /// Pure `p`-growth (`a ≡ 0`), exploratory since `q` is immaterial.
    pub fn single_phase(p: f64) -> Result<Self> {
        Self::exploratory(p, p + 1.0, Weight::zero())
    }

    pub fn with_fidelity(p: f64, q: f64, weight: Weight, fidelity: Fidelity) -> Result<Self> {
        weight.validate()?;
        if !(p.is_finite() && q.is_finite()) || p <= 1.0 || q <= p {
            return Err(Error::parameter(format!("exponents must satisfy 1 < p < q, got p = {p}, q = {q}")));
        }
        let alpha = weight.alpha();
        if fidelity == Fidelity::Strict {
            if q >= DIM {
                return Err(Error::parameter(format!("strict mode requires q < n = 2, got q = {q}")));
            }
            let bound = 1.0 + alpha / DIM;
            if q / p > bound {
                return Err(Error::Balance { ratio: q / p, bound });
            }
        }
        Ok(DoublePhaseSpec { p, q, alpha, holder_seminorm: weight.holder_seminorm(), weight, fidelity })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn holder_seminorm(&self) -> f64 {
        self.holder_seminorm
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn fidelity(&self) -> Fidelity {
        self.fidelity
    }

    /// Whether the balance condition holds, regardless of fidelity mode.
    pub fn satisfies_balance(&self) -> bool {
        self.q / self.p <= 1.0 + self.alpha / DIM && self.q < DIM
    }

    #[inline]
    pub fn a(&self, x: Point) -> Result<f64> {
        self.weight.eval(x)
    }

    /// `t^p + a t^q` for a known coefficient value.
    #[inline]
    pub fn h_scalar(&self, a: f64, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        t.powf(self.p) + a * t.powf(self.q)
    }

    /// `t^{pσ} + a^σ t^{qσ}`.
    #[inline]
    pub fn h_sigma_scalar(&self, sigma: f64, a: f64, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        t.powf(self.p * sigma) + a.powf(sigma) * t.powf(self.q * sigma)
    }

    /// `H(x, z) = |z|^p + a(x)|z|^q`.
    pub fn eval_h(&self, x: Point, z: Vec2) -> Result<f64> {
        Ok(self.h_scalar(self.a(x)?, norm(z)))
    }

    /// `H_σ(x, z) = |z|^{pσ} + a(x)^σ |z|^{qσ}` for `1/p < σ <= 1`.
    pub fn eval_h_sigma(&self, sigma: f64, x: Point, z: Vec2) -> Result<f64> {
        self.check_sigma(sigma)?;
        Ok(self.h_sigma_scalar(sigma, self.a(x)?, norm(z)))
    }

    pub fn check_sigma(&self, sigma: f64) -> Result<()> {
        if sigma > 1.0 / self.p && sigma <= 1.0 {
            Ok(())
        } else {
            Err(Error::parameter(format!("sigma = {sigma} outside (1/p, 1] = ({}, 1]", 1.0 / self.p)))
        }
    }

    /// `σ = 1 - β0 (p - 1) / q`, the exponent tying Hölder continuity of
    /// order `β0` to the intrinsic measure that detects removable sets.
    pub fn sigma_exponent(&self, beta0: f64) -> Result<f64> {
        if !(beta0 > 0.0 && beta0 <= 1.0) {
            return Err(Error::parameter(format!("beta0 = {beta0} outside (0, 1]")));
        }
        Ok(1.0 - beta0 * (self.p - 1.0) / self.q)
    }
}
