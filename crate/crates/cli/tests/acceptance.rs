//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use dplab_core::caphaus::{capacity, measure_decay_study, CapacityProblem, DecayClass, Kernel};
use dplab_core::energy::{modular_and_luxemburg, ModularSample};
use dplab_core::geometry::norm;
use dplab_core::regularity::{run_case, standard_cases, BenchmarkLevels};
use dplab_core::removability::{run_removability, Candidate, RemovabilityInput, Verdict};
use dplab_core::solver::{residual_measure, solve_a_harmonic, solve_obstacle, solve_obstacle_from};
use dplab_core::{
    build_domain, DoublePhaseSpec, MonotoneField, NodalField, ObstacleProblem, SetDescriptor, Shape, SolverConfig,
    Weight,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Line {
    passed: bool,
    detail: String,
}

fn line(passed: bool, detail: String) -> Line {
    Line { passed, detail }
}

fn linf(v: &NodalField, exact: impl Fn([f64; 2]) -> f64) -> f64 {
    let d = v.domain();
    (0..d.num_nodes()).map(|i| (v.value(i) - exact(d.node(i))).abs()).fold(0.0, f64::max)
}

fn harmonic() -> Line {
    let saddle = |x: [f64; 2]| x[0] * x[0] - x[1] * x[1];
    let field = MonotoneField::prototype(DoublePhaseSpec::single_phase(2.0).unwrap());
    let mut d = build_domain(Shape::UnitDisk, 1.0 / 32.0).unwrap();
    let mut errs = Vec::new();
    for _ in 0..3 {
        let g = NodalField::from_fn(&d, saddle).unwrap();
        errs.push(linf(&solve_a_harmonic(&field, &g, &SolverConfig::default()).unwrap().solution, saddle));
        d = d.refine().unwrap();
    }
    let ratios = [errs[0] / errs[1], errs[1] / errs[2]];
    line(
        errs[0] <= 1e-2 && ratios.iter().all(|&r| r >= 3.0),
        format!("err(1/32) = {:.3e} <= 1e-2, ratios {:.3} {:.3} >= 3", errs[0], ratios[0], ratios[1]),
    )
}

fn radial() -> Line {
    let d = build_domain(Shape::Annulus { inner: 0.25, outer: 1.0 }, 1.0 / 64.0).unwrap();
    let exact = |x: [f64; 2]| norm(x).sqrt();
    let g = NodalField::from_fn(&d, exact).unwrap();
    let field = MonotoneField::prototype(DoublePhaseSpec::single_phase(3.0).unwrap());
    let e = linf(&solve_a_harmonic(&field, &g, &SolverConfig::default()).unwrap().solution, exact);
    line(e <= 5e-3, format!("err = {e:.3e} <= 5e-3"))
}

fn condenser() -> Line {
    let d = build_domain(Shape::UnitDisk, 1.0 / 64.0).unwrap();
    let p = CapacityProblem::disk(DoublePhaseSpec::single_phase(2.0).unwrap(), d, [0.0, 0.0], 0.25).unwrap();
    let c = capacity(&p, &SolverConfig::default()).unwrap().value;
    let exact = 2.0 * PI / 4f64.ln();
    let rel = (c / exact - 1.0).abs();
    line(rel <= 0.05, format!("cap = {c:.6} vs {exact:.6}, rel {rel:.2e} <= 5e-2"))
}

fn luxemburg() -> Line {
    let spec = DoublePhaseSpec::exploratory(2.0, 4.0, Weight::constant(1.0)).unwrap();
    let unit = [ModularSample { x: [0.0, 0.0], weight: 1.0, value: 1.0 }];
    let norm1 = modular_and_luxemburg(&spec, &unit).unwrap().norm;
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let err = (norm1 - golden.sqrt()).abs();
    let balanced = DoublePhaseSpec::new(1.5, 1.8, Weight::half_plane_power(1.0, 0.5)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut held = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..40);
        let scale = 10f64.powf(rng.gen_range(-2.0..2.0));
        let samples: Vec<_> = (0..n)
            .map(|_| ModularSample {
                x: [rng.gen_range(-0.9..0.9), rng.gen_range(-0.4..0.4)],
                weight: rng.gen_range(0.01..0.2),
                value: scale * rng.gen_range(0.0..1.0),
            })
            .collect();
        let m = modular_and_luxemburg(&balanced, &samples).unwrap();
        if m.sandwich_holds(1.5, 1.8, 1e-9) {
            held += 1;
        }
    }
    line(err <= 1e-6 && held == 100, format!("|‖1‖ - φ^(1/2)| = {err:.1e} <= 1e-6, sandwich {held}/100"))
}

fn obstacle_setup(h: f64) -> (MonotoneField, NodalField, NodalField) {
    let d = build_domain(Shape::UnitDisk, h).unwrap();
    let field = MonotoneField::prototype(DoublePhaseSpec::new(1.5, 1.8, Weight::radial_power(1.0, 0.5)).unwrap());
    let g = NodalField::from_fn(&d, |x| 0.5 * x[0]).unwrap();
    let psi = NodalField::from_fn(&d, |x| 0.4 - 2.0 * norm(x)).unwrap();
    (field, g, psi)
}

fn obstacle() -> Line {
    let config = SolverConfig::default();
    let (field, g, psi) = obstacle_setup(1.0 / 32.0);
    let free = solve_a_harmonic(&field, &g, &config).unwrap().solution;
    let low = free.map(|v| v - 0.5).unwrap();
    let inactive =
        solve_obstacle(&ObstacleProblem::new(field.clone(), Some(low), g.clone()).unwrap(), &config).unwrap();
    let reproduce = inactive.solution.max_abs_diff(&free);
    let problem = ObstacleProblem::new(field, Some(psi.clone()), g.clone()).unwrap();
    let r = solve_obstacle(&problem, &config).unwrap();
    let v = &r.solution;
    let min_gap = (0..psi.domain().num_nodes()).map(|i| v.value(i) - psi.value(i)).fold(f64::INFINITY, f64::min);
    let start = g.zip_with(&psi, f64::max).unwrap().map(|x| x + 1.0).unwrap();
    let unique = solve_obstacle_from(&problem, &start, &config).unwrap().solution.max_abs_diff(v);
    line(
        reproduce <= 1e-8 && min_gap >= -1e-12 && r.complementarity <= 1e-10 && unique <= 1e-8,
        format!(
            "inactive {reproduce:.1e} <= 1e-8, min gap {min_gap:.1e} >= -1e-12, compl {:.1e} <= 1e-10, starts {unique:.1e} <= 1e-8",
            r.complementarity
        ),
    )
}

fn free_atoms() -> Line {
    let (field, g, psi) = obstacle_setup(1.0 / 32.0);
    let r =
        solve_obstacle(&ObstacleProblem::new(field.clone(), Some(psi.clone()), g).unwrap(), &SolverConfig::default())
            .unwrap();
    let v = &r.solution;
    let off = residual_measure(&r, &field).unwrap().max_abs_where(|i| v.value(i) - psi.value(i) > 1e-6);
    line(off <= 1e-8, format!("max free atom {off:.1e} <= 1e-8 ({} contact nodes)", r.active_set.len()))
}

const REQUIRED: [&str; 6] =
    ["sobolev_poincare", "caccioppoli", "gehring", "harnack", "oscillation_decay", "measure_density"];

fn inequalities() -> Line {
    let start = Instant::now();
    let levels = BenchmarkLevels::default();
    let mut worst_drift: f64 = 1.0;
    let mut failed = Vec::new();
    let mut checks = 0;
    let cases = standard_cases();
    for case in &cases {
        let res = run_case(case, &levels).unwrap();
        for name in REQUIRED {
            if res.report(name).is_none() {
                failed.push(format!("{}/{name} missing", res.label));
            }
        }
        for r in &res.reports {
            checks += 1;
            worst_drift = worst_drift.max(r.drift().unwrap_or(f64::INFINITY));
            if !(r.passes() && r.refinement_trend.is_some()) {
                failed.push(format!("{}/{}", res.label, r.name));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    line(
        failed.is_empty() && cases.len() == 6 && secs <= 600.0,
        format!(
            "{} cases, {checks} reports, worst drift {worst_drift:.3} < 2, {secs:.0} s <= 600 s {failed:?}",
            cases.len()
        ),
    )
}

fn hausdorff() -> Line {
    let spec = DoublePhaseSpec::new(1.5, 1.8, Weight::half_plane_power(1.0, 0.5)).unwrap();
    let sigma = spec.sigma_exponent(0.4).unwrap();
    let d = build_domain(Shape::UnitDisk, 1.0 / 16.0).unwrap();
    let deltas: Vec<f64> = (3..=7).map(|k| 0.5f64.powi(k)).collect();
    let kernel = Kernel::HSigma { sigma };
    let point = measure_decay_study(&SetDescriptor::point([-0.3, 0.0]), kernel, &spec, &d, &deltas).unwrap();
    let segment =
        measure_decay_study(&SetDescriptor::segment([-0.6, -0.5], [-0.6, 0.5]), kernel, &spec, &d, &deltas).unwrap();
    // a vanishes on x1 < 0: h(B) = π ρ^{2 - pσ} per ball, pσ = 4/3
    let (sp, ss) = (point.fitted_slope.unwrap(), segment.fitted_slope.unwrap());
    let ok = (sp / (2.0 / 3.0) - 1.0).abs() <= 0.15
        && (ss / (-1.0 / 3.0) - 1.0).abs() <= 0.15
        && segment.class == DecayClass::Divergent
        && (spec.p() * sigma - 4.0 / 3.0).abs() < 1e-12;
    line(ok, format!("point slope {sp:.4} ~ 2/3, segment slope {ss:.4} ~ -1/3 ({:?}), within 15%", segment.class))
}

fn removability() -> Line {
    let run = |c| run_removability(&RemovabilityInput::new(c).unwrap()).unwrap();
    let linear = run(Candidate::Linear);
    let a = linear.verdict == Verdict::RemovableConsistent && linear.barrier_gap <= 5e-8;
    let sqrt = run(Candidate::SqrtRadius);
    let decays = sqrt.levels.windows(2).all(|w| w[0].mu_on_e >= 2.0 * w[1].mu_on_e);
    let b = sqrt.verdict == Verdict::RemovableConsistent && decays;
    let chord = run(Candidate::AbsX2);
    let c = chord.verdict != Verdict::RemovableConsistent;
    line(
        a && b && c,
        format!(
            "(a) {} gap {:.1e} <= 5e-8 [{}]; (b) {} mu_on_E decay {:.3} >= 2 [{}]; (c) {} [{}]",
            linear.verdict.as_str(),
            linear.barrier_gap,
            pf(a),
            sqrt.verdict.as_str(),
            sqrt.min_decay_ratio().unwrap_or(f64::NAN),
            pf(b),
            chord.verdict.as_str(),
            pf(c)
        ),
    )
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

const SMALL_REGULARITY: &str = r#"
kind = "regularity"
seed = 11

[domain]
shape = { kind = "unit_disk" }
h = 0.0625

[regularity]
cases = ["radial_p1.5_q1.8"]
balls = 6
"#;

fn determinism() -> Line {
    let tmp = tempfile::tempdir().unwrap();
    let small = tmp.path().join("regularity_small.toml");
    fs::write(&small, SMALL_REGULARITY).unwrap();
    let runs = [
        ("solve", configs().join("harmonic.toml")),
        ("obstacle", configs().join("obstacle.toml")),
        ("hausdorff", configs().join("hausdorff_point.toml")),
        ("removability", configs().join("removability_linear.toml")),
        ("regularity", small),
    ];
    let mut compared = 0;
    let mut differ = Vec::new();
    for (kind, cfg) in &runs {
        let outs = ["a", "b"].map(|s| tmp.path().join(format!("{kind}_{s}")));
        for o in &outs {
            let status = Command::new(env!("CARGO_BIN_EXE_dplab"))
                .args([kind, "--config", cfg.to_str().unwrap(), "--out", o.to_str().unwrap()])
                .output()
                .unwrap()
                .status;
            if status.code() == Some(2) || status.code().is_none() {
                differ.push(format!("{kind} did not run"));
            }
        }
        for entry in fs::read_dir(&outs[0]).unwrap().filter_map(|e| e.ok()) {
            let name = entry.file_name();
            if name.to_string_lossy().ends_with(".csv") {
                compared += 1;
                if fs::read(entry.path()).unwrap() != fs::read(outs[1].join(&name)).unwrap_or_default() {
                    differ.push(name.to_string_lossy().into_owned());
                }
            }
        }
    }
    line(
        differ.is_empty() && compared > 0,
        format!("{compared} CSVs compared across {} configs, differing {differ:?}", runs.len()),
    )
}

type Criterion = (&'static str, fn() -> Line);

fn pf(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("harmonic oracle", harmonic),
        ("radial p = 3 oracle", radial),
        ("condenser capacity", condenser),
        ("luxemburg norm", luxemburg),
        ("obstacle correctness", obstacle),
        ("harmonic off contact", free_atoms),
        ("inequality suite", inequalities),
        ("hausdorff decay", hausdorff),
        ("removability pair", removability),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let l = f();
        failures += usize::from(!l.passed);
        println!(
            "{} criterion {:>2} {name}: {} ({:.1} s)",
            pf(l.passed),
            k + 1,
            l.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of 10 criteria pass", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
