use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::energy::DoublePhaseSpec;
use crate::error::{Error, Result};
use crate::geometry::{norm, Point};
use crate::mesh::SetDescriptor;

/// `|u(x) - u(y)| <= c_u |x - y|^β0` on the unit disk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderCertificate {
    pub c_u: f64,
    pub beta0: f64,
}

/// Audited analytic candidates. Each is a solution of its default equation
/// off its singular set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Candidate {
    /// `u = x1`, Laplace; smooth across the origin.
    Linear,
    /// `u = |x|^{1/2}`, the radial 3-harmonic function with exponent
    /// `(p - n) / (p - 1)`, singular at the origin.
    SqrtRadius,
    /// `u = ln(1/|x|)`; unbounded at the origin, so no certificate.
    LogInverseRadius,
    /// `u = |x2|`, harmonic off the chord `x2 = 0` with a kink along it.
    AbsX2,
}

impl Candidate {
    pub const ALL: [Candidate; 4] =
        [Candidate::Linear, Candidate::SqrtRadius, Candidate::LogInverseRadius, Candidate::AbsX2];

    pub fn id(&self) -> &'static str {
        match self {
            Candidate::Linear => "linear",
            Candidate::SqrtRadius => "sqrt_radius",
            Candidate::LogInverseRadius => "log_inverse_radius",
            Candidate::AbsX2 => "abs_x2",
        }
    }

    pub fn formula(&self) -> &'static str {
        match self {
            Candidate::Linear => "x1",
            Candidate::SqrtRadius => "|x|^(1/2)",
            Candidate::LogInverseRadius => "ln(1/|x|)",
            Candidate::AbsX2 => "|x2|",
        }
    }

    pub fn eval(&self, x: Point) -> f64 {
        match self {
            Candidate::Linear => x[0],
            Candidate::SqrtRadius => norm(x).sqrt(),
            Candidate::LogInverseRadius => -norm(x).ln(),
            Candidate::AbsX2 => x[1].abs(),
        }
    }

    /// `|x1| <= |x|`, `|√r - √s| <= |r - s|^{1/2}` and `||x2| - |y2|| <= |x - y|`.
    pub fn certificate(&self) -> Option<HolderCertificate> {
        match self {
            Candidate::Linear | Candidate::AbsX2 => Some(HolderCertificate { c_u: 1.0, beta0: 1.0 }),
            Candidate::SqrtRadius => Some(HolderCertificate { c_u: 1.0, beta0: 0.5 }),
            Candidate::LogInverseRadius => None,
        }
    }

    pub fn singular_set(&self) -> SetDescriptor {
        match self {
            Candidate::AbsX2 => SetDescriptor::segment([-1.0, 0.0], [1.0, 0.0]),
            _ => SetDescriptor::point([0.0, 0.0]),
        }
    }

    /// Compact subset of the singular set away from the boundary, used for
    /// covering estimates (positive measure of a subset is enough).
    pub fn interior_part(&self) -> SetDescriptor {
        match self {
            Candidate::AbsX2 => SetDescriptor::segment([-0.5, 0.0], [0.5, 0.0]),
            _ => self.singular_set(),
        }
    }

    pub fn default_spec(&self) -> Result<DoublePhaseSpec> {
        match self {
            Candidate::SqrtRadius => DoublePhaseSpec::single_phase(3.0),
            _ => DoublePhaseSpec::single_phase(2.0),
        }
    }

    /// The certificate, or a configuration error if there is none or `beta0`
    /// asks for more than it grants. On the unit disk a `β0` bound implies
    /// every smaller exponent with `c_u 2^{β0 - β}`.
    pub fn certify(&self, beta0: Option<f64>) -> Result<HolderCertificate> {
        let cert = self.certificate().ok_or_else(|| {
            Error::Configuration(format!(
                "candidate {} = {} is not Hölder continuous near its singular set",
                self.id(),
                self.formula()
            ))
        })?;
        match beta0 {
            None => Ok(cert),
            Some(b) if b > 0.0 && b <= cert.beta0 => {
                Ok(HolderCertificate { c_u: cert.c_u * 2f64.powf(cert.beta0 - b), beta0: b })
            }
            Some(b) => Err(Error::Configuration(format!(
                "candidate {} is certified only up to beta0 = {}, got {b}",
                self.id(),
                cert.beta0
            ))),
        }
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Candidate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Candidate::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::Configuration(format!("unknown candidate `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn certificates_hold_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for c in Candidate::ALL {
            let Some(cert) = c.certificate() else { continue };
            for _ in 0..10_000 {
                let x = [rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7)];
                let y = [rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7)];
                let d = norm([x[0] - y[0], x[1] - y[1]]);
                assert!((c.eval(x) - c.eval(y)).abs() <= cert.c_u * d.powf(cert.beta0) + 1e-12, "{c}");
            }
        }
    }

    #[test]
    fn log_candidate_rejected() {
        let err = Candidate::LogInverseRadius.certify(None).unwrap_err();
        assert!(matches!(err, Error::Configuration(_)));
        assert!(Candidate::SqrtRadius.certify(Some(0.75)).is_err());
        let weaker = Candidate::Linear.certify(Some(0.5)).unwrap();
        assert!((weaker.c_u - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn ids_round_trip() {
        for c in Candidate::ALL {
            assert_eq!(c.id().parse::<Candidate>().unwrap(), c);
        }
    }
}
