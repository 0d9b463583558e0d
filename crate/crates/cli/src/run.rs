//! One workflow per experiment kind. Each returns its tables, a JSON
//! summary and the list of asserted invariants.

use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use dplab_core::caphaus::{capacity, measure_decay_study, CapacityProblem, Kernel};
use dplab_core::regularity::{run_case, standard_cases, BenchmarkLevels, DRIFT_BUDGET};
use dplab_core::removability::{run_removability, RemovabilityInput, Verdict};
use dplab_core::solver::{solve_a_harmonic, solve_obstacle, solve_obstacle_from};
use dplab_core::{build_domain, DiscreteDomain, DoublePhaseSpec, MonotoneField, NodalField, ObstacleProblem};

use crate::analytic::AnalyticFn;
use crate::config::{CompactConfig, FieldConfig, KernelChoice, Kind, Resolved};
use crate::error::{CliError, CliResult, Running};
use crate::output::{num, opt, Table};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: Option<f64>,
    pub limit: Option<f64>,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check { name: name.into(), passed: value <= limit, value: Some(value), limit: Some(limit) }
    }

    fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check { name: name.into(), passed: value >= limit, value: Some(value), limit: Some(limit) }
    }

    fn holds(name: impl Into<String>, passed: bool) -> Self {
        Check { name: name.into(), passed, value: None, limit: None }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub tables: Vec<(String, Table)>,
    pub details: Value,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run(r: &Resolved) -> CliResult<Outcome> {
    match r.kind {
        Kind::Solve => solve(r),
        Kind::Obstacle => obstacle(r),
        Kind::Capacity => capacity_run(r),
        Kind::Hausdorff => hausdorff(r),
        Kind::Regularity => regularity(r),
        Kind::Removability => removability(r),
    }
}

fn levels(r: &Resolved) -> CliResult<Vec<Arc<DiscreteDomain>>> {
    let d = &r.config.domain;
    let mut out = vec![build_domain(d.shape, d.h).running()?];
    for _ in 0..d.refine {
        let next = out[out.len() - 1].refine().running()?;
        out.push(next);
    }
    Ok(out)
}

fn spec(r: &Resolved) -> &DoublePhaseSpec {
    r.spec.as_ref().expect("resolved configs carry a spec for this kind")
}

fn field(r: &Resolved) -> MonotoneField {
    match r.config.field {
        FieldConfig::Prototype => MonotoneField::prototype(spec(r).clone()),
        FieldConfig::Drift { b } => MonotoneField::drift(spec(r).clone(), b),
    }
}

fn interpolate(d: &Arc<DiscreteDomain>, f: &AnalyticFn) -> CliResult<NodalField> {
    NodalField::from_fn(d, |x| f.eval(x)).running()
}

fn linf_error(v: &NodalField, f: &AnalyticFn) -> f64 {
    let d = v.domain();
    (0..d.num_nodes()).map(|i| (v.value(i) - f.eval(d.node(i))).abs()).fold(0.0, f64::max)
}

fn solve(r: &Resolved) -> CliResult<Outcome> {
    let data = r.config.data.as_ref().expect("checked in resolve");
    let tol = &r.config.tolerances;
    let exact = data.exact.as_ref();
    let field = field(r);
    let mut table =
        Table::new(&["level", "h", "nodes", "iterations", "energy", "kkt_residual", "linf_error", "error_ratio"]);
    let mut errors: Vec<f64> = Vec::new();
    for (k, d) in levels(r)?.iter().enumerate() {
        let g = interpolate(d, &data.boundary)?;
        let rep = solve_a_harmonic(&field, &g, &r.config.solver).running()?;
        let err = exact.map(|e| linf_error(&rep.solution, e));
        let ratio = err.zip(errors.last().copied()).map(|(e, prev)| prev / e);
        if let Some(e) = err {
            errors.push(e);
        }
        table.push(vec![
            k.to_string(),
            num(d.h()),
            d.num_nodes().to_string(),
            rep.iterations.to_string(),
            num(rep.energy),
            num(rep.final_kkt_residual),
            opt(err),
            opt(ratio),
        ]);
    }
    let mut checks = Vec::new();
    if let Some(limit) = tol.linf {
        for (k, &e) in errors.iter().enumerate() {
            checks.push(Check::at_most(format!("level{k}/linf_error"), e, limit));
        }
    }
    if let Some(rate) = tol.rate {
        for (k, w) in errors.windows(2).enumerate() {
            checks.push(Check::at_least(format!("error_ratio_{}", k + 1), w[0] / w[1], rate));
        }
    }
    Ok(Outcome { tables: vec![("solve.csv".into(), table)], details: json!({ "linf_errors": errors }), checks })
}

fn obstacle(r: &Resolved) -> CliResult<Outcome> {
    let data = r.config.data.as_ref().expect("checked in resolve");
    let psi_fn = data.obstacle.as_ref().expect("checked in resolve");
    let tol = &r.config.tolerances;
    let field = field(r);
    let mut table = Table::new(&[
        "level",
        "h",
        "nodes",
        "iterations",
        "energy",
        "min_gap",
        "complementarity",
        "kkt_residual",
        "active_nodes",
        "max_free_atom",
        "uniqueness_diff",
        "unconstrained_diff",
        "linf_error",
    ]);
    let mut checks = Vec::new();
    for (k, d) in levels(r)?.iter().enumerate() {
        let g = interpolate(d, &data.boundary)?;
        let psi = interpolate(d, psi_fn)?;
        let problem = ObstacleProblem::new(field.clone(), Some(psi.clone()), g.clone()).map_err(CliError::Invalid)?;
        let rep = solve_obstacle(&problem, &r.config.solver).running()?;
        let v = &rep.solution;
        let min_gap = (0..d.num_nodes()).map(|i| v.value(i) - psi.value(i)).fold(f64::INFINITY, f64::min);
        let free_atom = rep.atoms.max_abs_where(|i| v.value(i) - psi.value(i) > tol.contact_margin);
        let lifted = g.zip_with(&psi, f64::max).running()?.map(|x| x + 1.0).running()?;
        let other = solve_obstacle_from(&problem, &lifted, &r.config.solver).running()?;
        let uniqueness = v.max_abs_diff(&other.solution);
        let unconstrained = if rep.active_set.is_empty() {
            Some(v.max_abs_diff(&solve_a_harmonic(&field, &g, &r.config.solver).running()?.solution))
        } else {
            None
        };
        let err = data.exact.as_ref().map(|e| linf_error(v, e));
        table.push(vec![
            k.to_string(),
            num(d.h()),
            d.num_nodes().to_string(),
            rep.iterations.to_string(),
            num(rep.energy),
            num(min_gap),
            num(rep.complementarity),
            num(rep.final_kkt_residual),
            rep.active_set.len().to_string(),
            num(free_atom),
            num(uniqueness),
            opt(unconstrained),
            opt(err),
        ]);
        checks.push(Check::at_least(format!("level{k}/min_gap"), min_gap, -tol.min_gap));
        checks.push(Check::at_most(format!("level{k}/complementarity"), rep.complementarity, tol.complementarity));
        checks.push(Check::at_most(format!("level{k}/max_free_atom"), free_atom, tol.free_atom));
        checks.push(Check::at_most(format!("level{k}/uniqueness"), uniqueness, tol.uniqueness));
        if let Some(u) = unconstrained {
            checks.push(Check::at_most(format!("level{k}/unconstrained"), u, tol.uniqueness));
        }
        if let (Some(e), Some(limit)) = (err, tol.linf) {
            checks.push(Check::at_most(format!("level{k}/linf_error"), e, limit));
        }
    }
    Ok(Outcome { tables: vec![("obstacle.csv".into(), table)], details: json!({}), checks })
}

fn capacity_run(r: &Resolved) -> CliResult<Outcome> {
    let cfg = r.config.capacity.as_ref().expect("checked in resolve");
    let spec = spec(r);
    let mut table = Table::new(&["level", "h", "nodes", "k_nodes", "value", "rel_error"]);
    let mut last = None;
    for (k, d) in levels(r)?.iter().enumerate() {
        let problem = match &cfg.compact {
            CompactConfig::Disk { center, radius } => {
                CapacityProblem::disk(spec.clone(), Arc::clone(d), *center, *radius)
            }
            CompactConfig::Neighborhood { eps } => CapacityProblem::neighborhood(
                spec.clone(),
                Arc::clone(d),
                r.set.as_ref().expect("checked in resolve"),
                *eps,
            ),
        }
        .map_err(CliError::Invalid)?;
        let rep = capacity(&problem, &r.config.solver).running()?;
        let rel = cfg.reference.map(|c| (rep.value - c).abs() / c);
        last = rel;
        table.push(vec![
            k.to_string(),
            num(d.h()),
            d.num_nodes().to_string(),
            rep.k_nodes.to_string(),
            num(rep.value),
            opt(rel),
        ]);
    }
    let mut checks = Vec::new();
    if let (Some(rel), Some(limit)) = (last, r.config.tolerances.capacity_rel) {
        checks.push(Check::at_most("capacity_rel_error", rel, limit));
    }
    Ok(Outcome { tables: vec![("capacity.csv".into(), table)], details: json!({ "reference": cfg.reference }), checks })
}

fn hausdorff(r: &Resolved) -> CliResult<Outcome> {
    let cfg = r.config.hausdorff.as_ref().expect("checked in resolve");
    let spec = spec(r);
    let kernel = match cfg.kernel {
        KernelChoice::H => Kernel::H,
        KernelChoice::HSigma => Kernel::HSigma {
            sigma: spec.sigma_exponent(cfg.beta0.expect("checked in resolve")).map_err(CliError::Invalid)?,
        },
    };
    let d = build_domain(r.config.domain.shape, r.config.domain.h).running()?;
    let set = r.set.as_ref().expect("checked in resolve");
    let study = measure_decay_study(set, kernel, spec, &d, &cfg.deltas).map_err(|e| match e {
        dplab_core::Error::Parameter(_) | dplab_core::Error::Domain(_) => CliError::Invalid(e),
        e => CliError::Core(e),
    })?;
    let mut table = Table::new(&["delta", "value", "slope"]);
    for row in &study.rows {
        table.push(vec![num(row.delta), num(row.value), opt(row.slope_estimate)]);
    }
    let mut checks = Vec::new();
    if let Some(expect) = cfg.expect {
        checks.push(Check::holds(format!("class_{expect:?}").to_lowercase(), study.class == expect));
    }
    Ok(Outcome { tables: vec![("hausdorff.csv".into(), table)], details: serde_json::to_value(&study)?, checks })
}

fn regularity(r: &Resolved) -> CliResult<Outcome> {
    let cfg = r.config.regularity.as_ref().expect("filled in resolve");
    let all = standard_cases();
    let cases: Vec<_> = if cfg.cases.is_empty() {
        all
    } else {
        let mut picked = Vec::new();
        for label in &cfg.cases {
            let c = all.iter().find(|c| &c.label == label).ok_or_else(|| {
                let known: Vec<_> = all.iter().map(|c| c.label.as_str()).collect();
                CliError::Config(format!("unknown benchmark case `{label}`; known: {}", known.join(", ")))
            })?;
            picked.push(c.clone());
        }
        picked
    };
    let levels = BenchmarkLevels {
        h: r.config.domain.h,
        balls: cfg.balls,
        seed: r.config.seed,
        config: r.config.solver.clone(),
    };
    let mut per_check: Vec<(String, Table)> = Vec::new();
    let mut summary = Table::new(&["case", "check", "worst_ratio", "coarse", "fine", "drift", "degenerate", "passes"]);
    let mut checks = Vec::new();
    let mut results = Vec::new();
    for case in &cases {
        let res = run_case(case, &levels).running()?;
        for rep in &res.reports {
            let name = format!("regularity_{}.csv", rep.name);
            let idx = match per_check.iter().position(|(n, _)| *n == name) {
                Some(i) => i,
                None => {
                    per_check.push((name, Table::new(&["case", "label", "cx", "cy", "radius", "lhs", "rhs", "ratio"])));
                    per_check.len() - 1
                }
            };
            for s in &rep.samples {
                per_check[idx].1.push(vec![
                    case.label.clone(),
                    s.label.clone(),
                    num(s.ball.center[0]),
                    num(s.ball.center[1]),
                    num(s.ball.radius),
                    num(s.lhs),
                    num(s.rhs),
                    opt(s.ratio),
                ]);
            }
            let trend = rep.refinement_trend;
            summary.push(vec![
                case.label.clone(),
                rep.name.clone(),
                num(rep.worst_ratio),
                opt(trend.map(|t| t[0])),
                opt(trend.map(|t| t[1])),
                opt(rep.drift()),
                rep.degenerate.to_string(),
                rep.passes().to_string(),
            ]);
            checks.push(Check {
                name: format!("{}/{}", case.label, rep.name),
                passed: rep.passes(),
                value: rep.drift(),
                limit: Some(DRIFT_BUDGET),
            });
        }
        results.push(res);
    }
    let mut tables = vec![("regularity_summary.csv".to_string(), summary)];
    tables.extend(per_check);
    let details = json!({
        "cases": results.iter().map(|c| json!({
            "label": c.label,
            "reports": c.reports.iter().map(|r| json!({
                "name": r.name, "worst_ratio": r.worst_ratio, "drift": r.drift(), "degenerate": r.degenerate, "extras": r.extras,
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    Ok(Outcome { tables, details, checks })
}

fn removability(r: &Resolved) -> CliResult<Outcome> {
    let cfg = r.config.removability.as_ref().expect("checked in resolve");
    let tol = &r.config.tolerances;
    let input = RemovabilityInput {
        candidate: cfg.candidate,
        spec: spec(r).clone(),
        shape: r.config.domain.shape,
        h: r.config.domain.h,
        levels: r.config.domain.refine + 1,
        beta0: cfg.beta0,
        solver: r.config.solver.clone(),
        mass_floor: tol.mass_floor,
        gap_tol: tol.gap_tol,
        cross_check_deltas: cfg.cross_check_deltas.clone(),
    };
    let verdict = run_removability(&input).map_err(|e| match e {
        dplab_core::Error::Configuration(_) => CliError::Invalid(e),
        e => CliError::Core(e),
    })?;
    let mut table = Table::new(&[
        "level",
        "h",
        "mu_on_e",
        "mu_off_e",
        "barrier_gap",
        "upper_violation",
        "lower_violation",
        "decay_ratio",
    ]);
    for (k, l) in verdict.levels.iter().enumerate() {
        let ratio = k.checked_sub(1).and_then(|j| verdict.decay_ratios.get(j)).copied();
        table.push(vec![
            k.to_string(),
            num(l.h),
            num(l.mu_on_e),
            num(l.mu_off_e),
            num(l.barrier_gap),
            num(l.upper_violation),
            num(l.lower_violation),
            opt(ratio),
        ]);
    }
    let mut tables = vec![("removability.csv".to_string(), table)];
    if let Some(study) = &verdict.hausdorff {
        let mut cover = Table::new(&["delta", "value", "slope"]);
        for row in &study.rows {
            cover.push(vec![num(row.delta), num(row.value), opt(row.slope_estimate)]);
        }
        tables.push(("removability_cover.csv".to_string(), cover));
    }
    let grew = verdict
        .levels
        .windows(2)
        .any(|w| w[1].mu_on_e.abs() > tol.mass_floor && w[1].mu_on_e.abs() > w[0].mu_on_e.abs());
    let mut checks =
        vec![Check::holds("verdict_soundness", !(grew && verdict.verdict == Verdict::RemovableConsistent))];
    if let Some(expect) = &cfg.expect {
        checks.push(Check::holds(format!("verdict_{expect}"), verdict.verdict.as_str() == expect));
    }
    if let Some(limit) = tol.min_decay {
        checks.push(Check::at_least("min_decay_ratio", verdict.min_decay_ratio().unwrap_or(f64::NAN), limit));
    }
    Ok(Outcome { tables, details: serde_json::to_value(&verdict)?, checks })
}
