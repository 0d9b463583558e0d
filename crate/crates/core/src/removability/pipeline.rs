use serde::Serialize;

use super::analytic::{Candidate, HolderCertificate};
use crate::caphaus::{measure_decay_study, DecayClass, DecayStudy, Kernel};
use crate::energy::{DoublePhaseSpec, MonotoneField};
use crate::error::{Error, Result};
use crate::mesh::{build_domain, NodalField, SetDescriptor, Shape};
use crate::solver::{solve_obstacle, ObstacleProblem, SolverConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    RemovableConsistent,
    NonRemovable,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::RemovableConsistent => "removable-consistent",
            Verdict::NonRemovable => "non-removable",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RemovabilityInput {
    pub candidate: Candidate,
    pub spec: DoublePhaseSpec,
    pub shape: Shape,
    /// Mesh size of the coarsest level.
    pub h: f64,
    /// Number of mesh levels (uniform refinements of the coarsest), at least 2.
    pub levels: usize,
    /// Hölder exponent to use; `None` takes the certified one.
    pub beta0: Option<f64>,
    pub solver: SolverConfig,
    /// Masses with absolute value at or below this count as zero.
    pub mass_floor: f64,
    /// Barrier gaps at or below this count as closed.
    pub gap_tol: f64,
    /// Covering scales for the measure cross-check; empty skips it.
    pub cross_check_deltas: Vec<f64>,
}

impl RemovabilityInput {
    pub fn new(candidate: Candidate) -> Result<Self> {
        Ok(RemovabilityInput {
            candidate,
            spec: candidate.default_spec()?,
            shape: Shape::UnitDisk,
            h: 1.0 / 32.0,
            levels: 2,
            beta0: None,
            solver: SolverConfig::default(),
            mass_floor: 1e-8,
            gap_tol: 5e-8,
            cross_check_deltas: vec![0.125, 0.0625, 0.03125, 0.015625],
        })
    }
}

/// Barrier data on one mesh level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BarrierLevel {
    pub h: f64,
    /// Residual mass of both barriers at nodes within `2h` of `E`.
    pub mu_on_e: f64,
    pub mu_off_e: f64,
    /// `max |v + v̂|`.
    pub barrier_gap: f64,
    /// `max (u - v)`, nonpositive when `u <= v`.
    pub upper_violation: f64,
    /// `max (-v̂ - u)`, nonpositive when `-v̂ <= u`.
    pub lower_violation: f64,
    pub iterations: [usize; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct RemovabilityVerdict {
    pub candidate: Candidate,
    pub formula: &'static str,
    pub set: SetDescriptor,
    pub certificate: HolderCertificate,
    pub sigma: f64,
    pub levels: Vec<BarrierLevel>,
    /// Values on the finest level reached.
    pub mu_on_e: f64,
    pub mu_off_e: f64,
    pub barrier_gap: f64,
    /// `mu_on_e` of each level over that of the next.
    pub decay_ratios: Vec<f64>,
    pub verdict: Verdict,
    pub hausdorff: Option<DecayStudy>,
    pub diagnostics: Vec<String>,
}

impl RemovabilityVerdict {
    /// Smallest per-refinement decay factor of `mu_on_e`.
    pub fn min_decay_ratio(&self) -> Option<f64> {
        self.decay_ratios.iter().cloned().reduce(f64::min)
    }
}

/// Verdict from the level sequence, coarse to fine.
///
/// Removable-consistent: significant `mu_on_e` vanishes or strictly
/// decreases at every refinement, and the barrier gap is closed on the
/// finest level or at least halves at every refinement. Non-removable:
/// `mu_on_e` is significant on every level and never halves.
pub fn classify(levels: &[BarrierLevel], mass_floor: f64, gap_tol: f64) -> Verdict {
    if levels.len() < 2 {
        return Verdict::Inconclusive;
    }
    let sig = |x: f64| if x.abs() <= mass_floor { 0.0 } else { x.abs() };
    let mu: Vec<f64> = levels.iter().map(|l| sig(l.mu_on_e)).collect();
    let decreasing = mu.windows(2).all(|w| w[1] == 0.0 || w[1] < w[0]);
    let gaps: Vec<f64> = levels.iter().map(|l| l.barrier_gap).collect();
    let closing = gaps[gaps.len() - 1] <= gap_tol || gaps.windows(2).all(|w| w[1] <= 0.5 * w[0]);
    if decreasing && closing {
        Verdict::RemovableConsistent
    } else if mu.iter().all(|&m| m > 0.0) && mu.windows(2).all(|w| w[1] > 0.5 * w[0]) {
        Verdict::NonRemovable
    } else {
        Verdict::Inconclusive
    }
}

fn barrier_level(
    input: &RemovabilityInput,
    field: &MonotoneField,
    reflected: &MonotoneField,
    domain: &std::sync::Arc<crate::mesh::DiscreteDomain>,
) -> Result<BarrierLevel> {
    let set = input.candidate.singular_set();
    let u = NodalField::from_fn(domain, |x| input.candidate.eval(x))?;
    let minus_u = u.map(|x| -x)?;
    let upper = solve_obstacle(&ObstacleProblem::new(field.clone(), Some(u.clone()), u.clone())?, &input.solver)?;
    let lower =
        solve_obstacle(&ObstacleProblem::new(reflected.clone(), Some(minus_u.clone()), minus_u)?, &input.solver)?;
    let (v, vh) = (&upper.solution, &lower.solution);
    let reach = 2.0 * domain.h();
    let on = upper.atoms.mass_near(&set, reach) + lower.atoms.mass_near(&set, reach);
    let total = upper.atoms.total() + lower.atoms.total();
    let max_of = |f: &dyn Fn(usize) -> f64| (0..domain.num_nodes()).map(f).fold(f64::NEG_INFINITY, f64::max);
    Ok(BarrierLevel {
        h: domain.h(),
        mu_on_e: on,
        mu_off_e: total - on,
        barrier_gap: max_of(&|i| (v.value(i) + vh.value(i)).abs()),
        upper_violation: max_of(&|i| u.value(i) - v.value(i)),
        lower_violation: max_of(&|i| -vh.value(i) - u.value(i)),
        iterations: [upper.iterations, lower.iterations],
    })
}

/// Runs the two-barrier experiment on `levels` meshes. An uncertified
/// candidate or invalid parameters are errors; a failed solve ends the
/// sequence with an inconclusive verdict and a diagnostic.
pub fn run_removability(input: &RemovabilityInput) -> Result<RemovabilityVerdict> {
    let candidate = input.candidate;
    let certificate = candidate.certify(input.beta0)?;
    if input.shape != Shape::UnitDisk {
        return Err(Error::Configuration("removability candidates are certified on the unit disk only".into()));
    }
    if input.levels < 2 {
        return Err(Error::Configuration(format!("at least two mesh levels are needed, got {}", input.levels)));
    }
    if !(input.mass_floor >= 0.0 && input.gap_tol >= 0.0) {
        return Err(Error::Configuration("tolerances must be nonnegative".into()));
    }
    input.solver.validate()?;
    let sigma = input.spec.sigma_exponent(certificate.beta0)?;
    let field = MonotoneField::prototype(input.spec.clone());
    let reflected = field.reflected();
    let coarse = build_domain(input.shape, input.h)?;

    let mut diagnostics = Vec::new();
    let mut levels = Vec::with_capacity(input.levels);
    let mut failed = false;
    let mut domain = coarse.clone();
    for k in 0..input.levels {
        if k > 0 {
            domain = domain.refine()?;
        }
        match barrier_level(input, &field, &reflected, &domain) {
            Ok(level) => levels.push(level),
            Err(e) => {
                diagnostics.push(format!("level {k} (h = {:.5}): {e}", domain.h()));
                failed = true;
                break;
            }
        }
    }

    let hausdorff = if input.cross_check_deltas.is_empty() {
        None
    } else if let Err(e) = input.spec.check_sigma(sigma) {
        diagnostics.push(format!("measure cross-check skipped: {e}"));
        None
    } else {
        match measure_decay_study(
            &candidate.interior_part(),
            Kernel::HSigma { sigma },
            &input.spec,
            &coarse,
            &input.cross_check_deltas,
        ) {
            Ok(study) => Some(study),
            Err(e) => {
                diagnostics.push(format!("measure cross-check failed: {e}"));
                None
            }
        }
    };

    let verdict = if failed { Verdict::Inconclusive } else { classify(&levels, input.mass_floor, input.gap_tol) };
    if let Some(study) = &hausdorff {
        let disagree = matches!(
            (study.class, verdict),
            (DecayClass::Zero, Verdict::NonRemovable) | (DecayClass::Divergent, Verdict::RemovableConsistent)
        );
        if disagree {
            diagnostics.push(format!("verdict {} disagrees with covering class {:?}", verdict.as_str(), study.class));
        }
    }
    let last = levels.last().copied();
    let decay_ratios = levels.windows(2).map(|w| w[0].mu_on_e.abs() / w[1].mu_on_e.abs()).collect();
    Ok(RemovabilityVerdict {
        candidate,
        formula: candidate.formula(),
        set: candidate.singular_set(),
        certificate,
        sigma,
        mu_on_e: last.map_or(f64::NAN, |l| l.mu_on_e),
        mu_off_e: last.map_or(f64::NAN, |l| l.mu_off_e),
        barrier_gap: last.map_or(f64::NAN, |l| l.barrier_gap),
        levels,
        decay_ratios,
        verdict,
        hausdorff,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn level(mu: f64, gap: f64) -> BarrierLevel {
        BarrierLevel {
            h: 0.1,
            mu_on_e: mu,
            mu_off_e: 0.0,
            barrier_gap: gap,
            upper_violation: 0.0,
            lower_violation: 0.0,
            iterations: [0, 0],
        }
    }

    #[test]
    fn classification_rules() {
        let c = |a: [(f64, f64); 2]| classify(&[level(a[0].0, a[0].1), level(a[1].0, a[1].1)], 1e-8, 5e-8);
        assert_eq!(c([(1e-12, 0.0), (3e-12, 0.0)]), Verdict::RemovableConsistent);
        assert_eq!(c([(1.0, 0.4), (0.4, 0.1)]), Verdict::RemovableConsistent);
        assert_eq!(c([(1.0, 0.4), (0.9, 0.1)]), Verdict::RemovableConsistent);
        assert_eq!(c([(1.0, 0.4), (0.4, 0.3)]), Verdict::Inconclusive);
        assert_eq!(c([(1.0, 1.0), (1.1, 1.0)]), Verdict::NonRemovable);
        assert_eq!(c([(1.0, 1e-9), (1.1, 1e-9)]), Verdict::NonRemovable);
        assert_eq!(classify(&[level(0.0, 0.0)], 1e-8, 5e-8), Verdict::Inconclusive);
    }

    #[test]
    fn uncertified_candidate_is_a_configuration_error() {
        let input = RemovabilityInput::new(Candidate::LogInverseRadius).unwrap();
        assert!(matches!(run_removability(&input), Err(Error::Configuration(_))));
    }
}
