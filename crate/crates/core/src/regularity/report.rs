//! Per-ball samples of an inequality `lhs <= c rhs` and their summary.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::geometry::Ball;

/// Both sides below this count as zero.
pub const ZERO_TOL: f64 = 1e-10;

/// Largest allowed ratio between the worst ratios of two refinement levels.
pub const DRIFT_BUDGET: f64 = 2.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalitySample {
    pub label: String,
    pub ball: Ball,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`; `None` when both sides vanish.
    pub ratio: Option<f64>,
}

impl InequalitySample {
    pub fn new(label: impl Into<String>, ball: Ball, lhs: f64, rhs: f64) -> Self {
        let ratio = if lhs.abs() <= ZERO_TOL && rhs.abs() <= ZERO_TOL {
            None
        } else if rhs > 0.0 {
            Some(lhs / rhs)
        } else {
            Some(f64::INFINITY)
        };
        InequalitySample { label: label.into(), ball, lhs, rhs, ratio }
    }

    pub fn is_degenerate(&self) -> bool {
        self.ratio.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityReport {
    pub name: String,
    pub samples: Vec<InequalitySample>,
    /// Largest ratio over the nondegenerate samples (0 if there are none).
    pub worst_ratio: f64,
    pub degenerate: usize,
    /// `[coarse, fine]` worst ratios when compared across a refinement.
    pub refinement_trend: Option<[f64; 2]>,
    /// Named scalar by-products (empirical exponents, variants).
    pub extras: BTreeMap<String, f64>,
}

impl InequalityReport {
    pub fn new(name: impl Into<String>, samples: Vec<InequalitySample>) -> Self {
        let worst_ratio = samples.iter().filter_map(|s| s.ratio).fold(0.0, f64::max);
        let degenerate = samples.iter().filter(|s| s.is_degenerate()).count();
        InequalityReport {
            name: name.into(),
            samples,
            worst_ratio,
            degenerate,
            refinement_trend: None,
            extras: BTreeMap::new(),
        }
    }

    /// Concatenates the samples of several reports under one name. Extras of
    /// the parts are kept with their maximum.
    pub fn merge(name: impl Into<String>, parts: Vec<InequalityReport>) -> Self {
        let mut extras: BTreeMap<String, f64> = BTreeMap::new();
        let mut samples = Vec::new();
        for p in parts {
            for (k, v) in p.extras {
                let e = extras.entry(k).or_insert(v);
                *e = e.max(v);
            }
            samples.extend(p.samples);
        }
        let mut r = Self::new(name, samples);
        r.extras = extras;
        r
    }

    pub fn with_extra(mut self, key: &str, value: f64) -> Self {
        self.extras.insert(key.to_string(), value);
        self
    }

    /// Worst ratio restricted to samples whose label starts with `prefix`.
    pub fn worst_with_label(&self, prefix: &str) -> f64 {
        self.samples.iter().filter(|s| s.label.starts_with(prefix)).filter_map(|s| s.ratio).fold(0.0, f64::max)
    }

    /// Records the trend against the same check on the coarser level.
    pub fn with_trend(mut self, coarse: &InequalityReport) -> Self {
        self.refinement_trend = Some([coarse.worst_ratio, self.worst_ratio]);
        self
    }

    /// `max / min` of the two trend values; 1 when both vanish.
    pub fn drift(&self) -> Option<f64> {
        self.refinement_trend.map(|[a, b]| {
            let (lo, hi) = (a.min(b), a.max(b));
            if hi <= ZERO_TOL {
                1.0
            } else if lo <= 0.0 {
                f64::INFINITY
            } else {
                hi / lo
            }
        })
    }

    /// Finite worst ratio and, when a trend is present, drift below
    /// [`DRIFT_BUDGET`].
    pub fn passes(&self) -> bool {
        self.worst_ratio.is_finite() && self.drift().is_none_or(|d| d < DRIFT_BUDGET)
    }
}
