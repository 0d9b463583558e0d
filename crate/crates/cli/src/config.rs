//! Experiment configuration: TOML on input, fully resolved JSON in the
//! manifest. A manifest is itself a valid config.

use std::path::Path;

use serde::{Deserialize, Serialize};

use dplab_core::caphaus::DecayClass;
use dplab_core::regularity::DEFAULT_SEED;
use dplab_core::removability::Candidate;
use dplab_core::{DoublePhaseSpec, Fidelity, SetDescriptor, Shape, SolverConfig, Weight};

use crate::analytic::AnalyticFn;
use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Solve,
    Obstacle,
    Capacity,
    Hausdorff,
    Regularity,
    Removability,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Solve => "solve",
            Kind::Obstacle => "obstacle",
            Kind::Capacity => "capacity",
            Kind::Hausdorff => "hausdorff",
            Kind::Regularity => "regularity",
            Kind::Removability => "removability",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub shape: Shape,
    pub h: f64,
    /// Uniform refinements after the coarse mesh; levels = refine + 1.
    #[serde(default = "one")]
    pub refine: usize,
}

fn one() -> usize {
    1
}

impl Default for DomainConfig {
    fn default() -> Self {
        DomainConfig { shape: Shape::UnitDisk, h: 1.0 / 32.0, refine: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecConfig {
    pub p: f64,
    pub q: f64,
    #[serde(default = "Weight::zero")]
    pub weight: Weight,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldConfig {
    #[default]
    Prototype,
    Drift {
        b: [f64; 2],
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    pub boundary: AnalyticFn,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstacle: Option<AnalyticFn>,
    /// Exact solution for error columns.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<AnalyticFn>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CompactConfig {
    Disk {
        center: [f64; 2],
        radius: f64,
    },
    /// Nodes within `eps` of the set `e`.
    Neighborhood {
        eps: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacityConfig {
    pub compact: CompactConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelChoice {
    H,
    HSigma,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HausdorffConfig {
    pub kernel: KernelChoice,
    /// Hölder exponent giving `σ`; required for `h_sigma`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta0: Option<f64>,
    pub deltas: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<DecayClass>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularityConfig {
    /// Benchmark case labels; empty runs the whole standard set.
    #[serde(default)]
    pub cases: Vec<String>,
    #[serde(default = "default_balls")]
    pub balls: usize,
}

fn default_balls() -> usize {
    dplab_core::regularity::DEFAULT_BALLS
}

impl Default for RegularityConfig {
    fn default() -> Self {
        RegularityConfig { cases: Vec::new(), balls: default_balls() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RemovabilityConfig {
    pub candidate: Candidate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta0: Option<f64>,
    #[serde(default = "default_cross_check")]
    pub cross_check_deltas: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<String>,
}

fn default_cross_check() -> Vec<f64> {
    vec![0.125, 0.0625, 0.03125, 0.015625]
}

/// Thresholds for the asserted invariants. Unset optional entries are not
/// checked.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linf: Option<f64>,
    /// Minimal error reduction factor per refinement.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    pub min_gap: f64,
    pub complementarity: f64,
    /// Largest residual atom allowed at nodes with `v - ψ > contact_margin`.
    pub free_atom: f64,
    pub contact_margin: f64,
    /// Agreement of obstacle solves from different starts.
    pub uniqueness: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub capacity_rel: Option<f64>,
    pub mass_floor: f64,
    pub gap_tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_decay: Option<f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            linf: None,
            rate: None,
            min_gap: 1e-12,
            complementarity: 1e-10,
            free_atom: 1e-8,
            contact_margin: 1e-6,
            uniqueness: 1e-8,
            capacity_rel: None,
            mass_floor: 1e-8,
            gap_tol: 5e-8,
            min_decay: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Skip the strict exponent checks.
    #[serde(default)]
    pub exploratory: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default)]
    pub domain: DomainConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<SpecConfig>,
    #[serde(default)]
    pub field: FieldConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<DataConfig>,
    /// Compact set `E` in the text form of [`SetDescriptor`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity: Option<CapacityConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hausdorff: Option<HausdorffConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regularity: Option<RegularityConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub removability: Option<RemovabilityConfig>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub solver: SolverConfig,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

#[derive(Deserialize)]
struct Manifest {
    config: ExperimentConfig,
}

impl ExperimentConfig {
    /// Reads TOML, or a JSON manifest when the extension is `.json`.
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, path.extension().is_some_and(|e| e == "json"))
    }

    pub fn parse(text: &str, json: bool) -> CliResult<Self> {
        if json {
            serde_json::from_str::<Manifest>(text)
                .map(|m| m.config)
                .map_err(|e| CliError::Config(format!("manifest: {e}")))
        } else {
            toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
        }
    }

    /// Fills kind-specific defaults and checks every parameter, so that the
    /// result can be echoed verbatim.
    pub fn resolve(mut self, kind: Kind, strict: bool) -> CliResult<Resolved> {
        if strict {
            self.exploratory = false;
        }
        match self.kind {
            Some(k) if k != kind => {
                return Err(CliError::Usage(format!(
                    "config is for `{}` but `{}` was requested",
                    k.as_str(),
                    kind.as_str()
                )));
            }
            _ => self.kind = Some(kind),
        }
        if !(self.domain.h > 0.0 && self.domain.h < 1.0) {
            return Err(CliError::Config(format!("domain.h must lie in (0, 1), got {}", self.domain.h)));
        }
        self.solver.validate()?;
        let require = |present: bool, section: &str| {
            if present {
                Ok(())
            } else {
                Err(CliError::Config(format!("`{}` needs a [{section}] section", kind.as_str())))
            }
        };
        match kind {
            Kind::Solve | Kind::Obstacle => require(self.data.is_some(), "data")?,
            Kind::Capacity => require(self.capacity.is_some(), "capacity")?,
            Kind::Hausdorff => require(self.hausdorff.is_some() && self.set.is_some(), "hausdorff] and [set")?,
            Kind::Regularity => {
                self.regularity.get_or_insert_with(RegularityConfig::default);
                if self.domain.refine != 1 {
                    return Err(CliError::Config("regularity always compares two levels; refine must be 1".into()));
                }
            }
            Kind::Removability => {
                require(self.removability.is_some(), "removability")?;
                if self.domain.refine < 1 {
                    return Err(CliError::Config("removability needs at least one refinement".into()));
                }
            }
        }
        if kind == Kind::Obstacle && self.data.as_ref().is_some_and(|d| d.obstacle.is_none()) {
            return Err(CliError::Config("`obstacle` needs data.obstacle".into()));
        }
        if self.spec.is_none() {
            if let Some(r) = &self.removability {
                let s = r.candidate.default_spec()?;
                self.spec = Some(SpecConfig { p: s.p(), q: s.q(), weight: s.weight().clone() });
                // the registry's own equation is exempt from the strict range
                self.exploratory = !strict;
            } else if kind != Kind::Regularity {
                return Err(CliError::Config("missing [spec] section".into()));
            }
        }
        let spec = match &self.spec {
            Some(s) => {
                let f = if self.exploratory { Fidelity::Exploratory } else { Fidelity::Strict };
                Some(DoublePhaseSpec::with_fidelity(s.p, s.q, s.weight.clone(), f)?)
            }
            None => None,
        };
        let set = match &self.set {
            Some(text) => Some(text.parse::<SetDescriptor>()?),
            None => None,
        };
        if let (Kind::Capacity, Some(CapacityConfig { compact: CompactConfig::Neighborhood { .. }, .. })) =
            (kind, &self.capacity)
        {
            require(set.is_some(), "set")?;
        }
        if let Some(h) = &self.hausdorff {
            if h.kernel == KernelChoice::HSigma && h.beta0.is_none() {
                return Err(CliError::Config("kernel h_sigma needs hausdorff.beta0".into()));
            }
        }
        if let Some(r) = &self.removability {
            r.candidate.certify(r.beta0)?;
            if let Some(e) = &r.expect {
                if !["removable-consistent", "non-removable", "inconclusive"].contains(&e.as_str()) {
                    return Err(CliError::Config(format!("unknown verdict `{e}`")));
                }
            }
        }
        Ok(Resolved { config: self, kind, spec, set })
    }
}

/// A checked config with its parsed parts.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub config: ExperimentConfig,
    pub kind: Kind,
    pub spec: Option<DoublePhaseSpec>,
    pub set: Option<SetDescriptor>,
}

#[cfg(test)]
mod tests {
    use super::*;

    const OBSTACLE: &str = r#"
[domain]
shape = { kind = "unit_disk" }
h = 0.1

[spec]
p = 1.5
q = 1.8
weight = { kind = "radial_power", scale = 1.0, alpha = 0.5 }

[data]
boundary = { kind = "linear", c = [0.0, 0.5, 0.0] }
obstacle = { kind = "radial_power", scale = -2.0, exponent = 1.0, offset = 0.4 }
"#;

    #[test]
    fn manifest_round_trip() {
        let r = ExperimentConfig::parse(OBSTACLE, false).unwrap().resolve(Kind::Obstacle, false).unwrap();
        let json = serde_json::json!({ "config": r.config }).to_string();
        let back = ExperimentConfig::parse(&json, true).unwrap();
        assert_eq!(back, r.config);
    }

    #[test]
    fn balance_violation_is_a_config_error() {
        let text = OBSTACLE.replace("q = 1.8", "q = 1.9").replace("p = 1.5", "p = 1.2");
        let err = ExperimentConfig::parse(&text, false).unwrap().resolve(Kind::Obstacle, false).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("q/p <= 1 + alpha/n"), "{err}");
    }

    #[test]
    fn kind_mismatch_and_missing_sections() {
        let cfg = ExperimentConfig::parse(&format!("kind = \"solve\"\n{OBSTACLE}"), false).unwrap();
        assert!(cfg.clone().resolve(Kind::Capacity, false).is_err());
        assert!(cfg.resolve(Kind::Solve, false).is_ok());
        assert!(ExperimentConfig::parse("[domain]\nh = 0.1\nshape = { kind = \"unit_disk\" }\n", false)
            .unwrap()
            .resolve(Kind::Hausdorff, false)
            .is_err());
        assert!(ExperimentConfig::parse("unknown = 1", false).is_err());
    }
}
