//! Closed-form functions usable as boundary data, obstacles and exact
//! solutions in configs.

use serde::{Deserialize, Serialize};

use dplab_core::geometry::norm;
use dplab_core::Point;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AnalyticFn {
    Constant {
        value: f64,
    },
    /// `c[0] + c[1] x1 + c[2] x2`.
    Linear {
        c: [f64; 3],
    },
    /// `scale (x1^2 - x2^2)`.
    Saddle {
        scale: f64,
    },
    /// `offset + scale |x|^exponent`.
    RadialPower {
        scale: f64,
        exponent: f64,
        #[serde(default)]
        offset: f64,
    },
    /// `offset + scale ln |x|`.
    RadialLog {
        scale: f64,
        #[serde(default)]
        offset: f64,
    },
}

impl AnalyticFn {
    pub fn eval(&self, x: Point) -> f64 {
        match *self {
            AnalyticFn::Constant { value } => value,
            AnalyticFn::Linear { c } => c[0] + c[1] * x[0] + c[2] * x[1],
            AnalyticFn::Saddle { scale } => scale * (x[0] * x[0] - x[1] * x[1]),
            AnalyticFn::RadialPower { scale, exponent, offset } => offset + scale * norm(x).powf(exponent),
            AnalyticFn::RadialLog { scale, offset } => offset + scale * norm(x).ln(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_from_toml() {
        #[derive(Deserialize)]
        struct W {
            f: AnalyticFn,
        }
        let w: W =
            toml::from_str("f = { kind = \"radial_power\", scale = -2.0, exponent = 1.0, offset = 0.4 }").unwrap();
        assert_eq!(w.f.eval([0.3, 0.4]), 0.4 - 1.0);
        assert!(toml::from_str::<W>("f = { kind = \"saddle\", scale = 1.0, bogus = 1 }").is_err());
    }
}
