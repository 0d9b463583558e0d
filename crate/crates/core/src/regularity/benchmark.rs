//! The standard benchmark set: three weights times two exponent pairs, each
//! solved as a Lipschitz-obstacle problem on the unit disk at two mesh
//! levels and run through every check.

use std::sync::Arc;

use serde::Serialize;

use super::report::InequalityReport;
use super::sampling::{BallSampler, DEFAULT_SEED};
use super::{
    check_boundedness, check_caccioppoli, check_gehring, check_harnack, check_measure_density, check_oscillation_decay,
    check_sobolev_poincare, default_gamma, max_d2, values_in, DensityInput, GEHRING_DELTAS, HARNACK_EXPONENTS,
    WEAK_HARNACK_EXPONENTS,
};
use crate::energy::{DoublePhaseSpec, MonotoneField, Weight};
use crate::error::Result;
use crate::geometry::{norm, Ball};
use crate::mesh::{build_domain, cutoff, DiscreteDomain, NodalField, Shape};
use crate::solver::{residual_measure, solve_obstacle, ObstacleProblem, SolverConfig};

/// Lipschitz constant of the benchmark obstacle `0.4 - 2|x|`.
const OBSTACLE_SLOPE: f64 = 2.0;
const OSC_RADIUS: f64 = 0.05;
const DENSITY_RADII: [f64; 3] = [0.02, 0.01, 0.005];
const DENSITY_POINTS: [[f64; 2]; 5] = [[0.0, 0.0], [0.03, 0.0], [-0.03, 0.0], [0.0, 0.03], [0.0, -0.03]];

#[derive(Clone, Debug)]
pub struct BenchmarkCase {
    pub label: String,
    pub spec: DoublePhaseSpec,
}

/// Weights `|x|^{1/2}`, `(x1)_+^{1/2}` and a Hölder ramp, each with
/// `(p, q) = (1.5, 1.8)` and `(1.6, 1.9)`.
pub fn standard_cases() -> Vec<BenchmarkCase> {
    let weights = [
        ("radial", Weight::radial_power(1.0, 0.5)),
        ("half_plane", Weight::half_plane_power(1.0, 0.5)),
        ("ramp", Weight::smoothed_step(1.0, 0.5, 0.25)),
    ];
    let mut out = Vec::new();
    for (name, w) in weights {
        for (p, q) in [(1.5, 1.8), (1.6, 1.9)] {
            out.push(BenchmarkCase {
                label: format!("{name}_p{p}_q{q}"),
                spec: DoublePhaseSpec::new(p, q, w.clone()).expect("registry case satisfies the balance condition"),
            });
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct BenchmarkLevels {
    /// Target mesh size of the coarse level; the fine level is one uniform
    /// refinement of it.
    pub h: f64,
    pub balls: usize,
    pub seed: u64,
    pub config: SolverConfig,
}

impl Default for BenchmarkLevels {
    fn default() -> Self {
        BenchmarkLevels { h: 1.0 / 64.0, balls: 20, seed: DEFAULT_SEED, config: SolverConfig::default() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub label: String,
    /// Fine-level reports carrying the coarse-to-fine trend.
    pub reports: Vec<InequalityReport>,
}

impl CaseResult {
    pub fn passes(&self) -> bool {
        self.reports.iter().all(InequalityReport::passes)
    }

    pub fn report(&self, name: &str) -> Option<&InequalityReport> {
        self.reports.iter().find(|r| r.name == name)
    }
}

fn level_reports(
    spec: &DoublePhaseSpec,
    domain: &Arc<DiscreteDomain>,
    levels: &BenchmarkLevels,
) -> Result<Vec<InequalityReport>> {
    let field = MonotoneField::prototype(spec.clone());
    let g = NodalField::from_fn(domain, |x| 0.5 * x[0])?;
    let psi = NodalField::from_fn(domain, |x| 0.4 - OBSTACLE_SLOPE * norm(x))?;
    let report = solve_obstacle(&ObstacleProblem::new(field.clone(), Some(psi.clone()), g)?, &levels.config)?;
    let v = &report.solution;
    let vtilde = v.map({
        let m = v.min();
        move |x| x - m + 0.1
    })?;
    let sampler = BallSampler::new((0.1, 0.3), 1.0).with_count(levels.balls).with_seed(levels.seed);
    let balls = sampler.sample(domain)?;

    let sopo = check_sobolev_poincare(v, spec, &balls, 0.5, max_d2(spec).min(2.0))?;
    let mut cacc = Vec::with_capacity(balls.len());
    let mut harn = Vec::with_capacity(balls.len());
    for b in &balls {
        let eta = cutoff(domain, 0.5 * b.radius, b.radius, b.center)?;
        cacc.push(check_caccioppoli(&vtilde, spec, b, default_gamma(spec), &eta)?);
        let m = values_in(&psi, b).fold(f64::NEG_INFINITY, f64::max);
        harn.push(check_harnack(v, Some(&psi), m, &vtilde, b, &HARNACK_EXPONENTS, &WEAK_HARNACK_EXPONENTS)?.combined());
    }
    let gehring = check_gehring(v, Some(&psi), spec, &balls, &GEHRING_DELTAS)?;
    let bounded = check_boundedness(v, Some(&psi), &Ball::new([0.0, 0.0], 0.8))?;
    let centers: Vec<_> = BallSampler::new((OSC_RADIUS, OSC_RADIUS), 4.0)
        .with_count(levels.balls)
        .with_seed(levels.seed)
        .sample(domain)?
        .into_iter()
        .map(|b| b.center)
        .collect();
    let osc = check_oscillation_decay(v, &psi, &centers, OSC_RADIUS, 1.0)?;
    let mu = residual_measure(&report, &field)?;
    let density = check_measure_density(
        &mu,
        spec,
        DensityInput { psi: &psi, beta0: 1.0, c_psi: OBSTACLE_SLOPE },
        &DENSITY_POINTS,
        &DENSITY_RADII,
    )?;
    Ok(vec![
        sopo,
        InequalityReport::merge("caccioppoli", cacc),
        gehring,
        bounded,
        InequalityReport::merge("harnack", harn),
        osc,
        density,
    ])
}

/// Runs every check on both levels of one case.
pub fn run_case(case: &BenchmarkCase, levels: &BenchmarkLevels) -> Result<CaseResult> {
    let coarse_domain = build_domain(Shape::UnitDisk, levels.h)?;
    let fine_domain = coarse_domain.refine()?;
    let coarse = level_reports(&case.spec, &coarse_domain, levels)?;
    let fine = level_reports(&case.spec, &fine_domain, levels)?;
    let reports = fine.into_iter().zip(&coarse).map(|(f, c)| f.with_trend(c)).collect();
    Ok(CaseResult { label: case.label.clone(), reports })
}
