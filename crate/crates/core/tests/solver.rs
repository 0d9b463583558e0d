use std::sync::Arc;

use dplab_core::energy::{CustomRule, DoublePhaseSpec, MonotoneField, Weight};
use dplab_core::geometry::{norm, Point, Vec2};
use dplab_core::mesh::{build_domain, unit_disk_rings, DiscreteDomain, NodalField, Shape};
use dplab_core::solver::{
    comparison_check, h_energy, is_supersolution, residual_measure, solve_a_harmonic, solve_obstacle,
    solve_obstacle_from, Comparison, ObstacleProblem, SolverConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn laplace() -> MonotoneField {
    MonotoneField::prototype(DoublePhaseSpec::single_phase(2.0).unwrap())
}

fn double_phase() -> MonotoneField {
    MonotoneField::prototype(DoublePhaseSpec::new(1.5, 1.8, Weight::half_plane_power(1.0, 0.5)).unwrap())
}

fn cone_obstacle(d: &Arc<DiscreteDomain>) -> NodalField {
    NodalField::from_fn(d, |x| 0.4 - 2.0 * norm(x)).unwrap()
}

#[test]
fn affine_data_reproduced() {
    let d = build_domain(Shape::UnitDisk, 0.1).unwrap();
    let g = NodalField::from_fn(&d, |x| x[0]).unwrap();
    let r = solve_a_harmonic(&laplace(), &g, &SolverConfig::default()).unwrap();
    assert!(r.solution.max_abs_diff(&g) < 1e-12);
    // any p: affine functions have constant gradient, so every atom cancels
    let f = MonotoneField::prototype(DoublePhaseSpec::exploratory(3.0, 4.0, Weight::zero()).unwrap());
    let r = solve_a_harmonic(&f, &g, &SolverConfig::default()).unwrap();
    assert!(r.solution.max_abs_diff(&g) < 1e-10);
}

#[test]
fn constants_need_no_iterations() {
    let d = build_domain(Shape::UnitSquare, 0.1).unwrap();
    let g = NodalField::constant(&d, 5.0).unwrap();
    let r = solve_a_harmonic(&double_phase_square(), &g, &SolverConfig::default()).unwrap();
    assert_eq!(r.iterations, 0);
    assert!(r.solution.values().iter().all(|&v| v == 5.0));
}

fn double_phase_square() -> MonotoneField {
    MonotoneField::prototype(DoublePhaseSpec::new(1.5, 1.8, Weight::constant(1.0)).unwrap())
}

#[test]
fn radial_three_harmonic_on_annulus() {
    // u = r^{(p-n)/(p-1)} = r^{1/2} for p = 3, n = 2
    let d = build_domain(Shape::Annulus { inner: 0.25, outer: 1.0 }, 1.0 / 64.0).unwrap();
    let exact = NodalField::from_fn(&d, |x| norm(x).sqrt()).unwrap();
    let field = MonotoneField::prototype(DoublePhaseSpec::single_phase(3.0).unwrap());
    let r = solve_a_harmonic(&field, &exact, &SolverConfig::default()).unwrap();
    let err = r.solution.max_abs_diff(&exact);
    assert!(err <= 5e-3, "L∞ error {err}");
    assert!(r.final_kkt_residual <= 1e-8);
}

#[test]
fn maximum_principle_and_symmetry() {
    let d = unit_disk_rings(12).unwrap();
    let g = NodalField::from_fn(&d, |x| x[0] * x[0] + 0.3 * x[1]).unwrap();
    let field = MonotoneField::prototype(DoublePhaseSpec::new(1.5, 1.8, Weight::radial_power(1.0, 0.5)).unwrap());
    let r = solve_a_harmonic(&field, &g, &SolverConfig::default()).unwrap();
    let (lo, hi) = boundary_range(&g);
    assert!(r.solution.min() >= lo - 1e-10 && r.solution.max() <= hi + 1e-10);
    // data and weight are even in x1
    for (i, &x) in d.nodes().iter().enumerate() {
        let j = d.nodes().iter().position(|&y| y == [-x[0], x[1]]).unwrap();
        assert!((r.solution.value(i) - r.solution.value(j)).abs() < 1e-8);
    }
}

fn boundary_range(g: &NodalField) -> (f64, f64) {
    let d = g.domain();
    let vals = d.boundary_nodes().iter().map(|&i| g.value(i));
    (vals.clone().fold(f64::INFINITY, f64::min), vals.fold(f64::NEG_INFINITY, f64::max))
}

#[test]
fn unconstrained_obstacle_matches_dirichlet_solve() {
    let d = build_domain(Shape::UnitDisk, 0.1).unwrap();
    let g = NodalField::from_fn(&d, |x| 0.5 * x[0] + x[1] * x[1]).unwrap();
    let field = double_phase();
    let config = SolverConfig::default();
    let free = solve_a_harmonic(&field, &g, &config).unwrap();
    let none = solve_obstacle(&ObstacleProblem::new(field.clone(), None, g.clone()).unwrap(), &config).unwrap();
    assert!(none.solution.max_abs_diff(&free.solution) < 1e-8);
    // an obstacle strictly below the unconstrained solution is inactive
    let low = free.solution.map(|v| v - 0.5).unwrap();
    let below = solve_obstacle(&ObstacleProblem::new(field, Some(low), g).unwrap(), &config).unwrap();
    assert!(below.active_set.is_empty());
    assert!(below.solution.max_abs_diff(&free.solution) < 1e-8);
}

#[test]
fn obstacle_kkt_uniqueness_and_measure() {
    let d = build_domain(Shape::UnitDisk, 1.0 / 16.0).unwrap();
    let g = NodalField::from_fn(&d, |x| 0.5 * x[0]).unwrap();
    let psi = cone_obstacle(&d);
    let field = double_phase();
    let problem = ObstacleProblem::new(field.clone(), Some(psi.clone()), g.clone()).unwrap();
    let config = SolverConfig::default();
    let r = solve_obstacle(&problem, &config).unwrap();
    let v = &r.solution;
    assert!(!r.active_set.is_empty());
    let min_gap = (0..d.num_nodes()).map(|i| v.value(i) - psi.value(i)).fold(f64::INFINITY, f64::min);
    assert!(min_gap >= -1e-12);
    assert!(r.complementarity <= 1e-10 && r.final_kkt_residual <= 1e-8);
    // second initialization: max(ψ, g) + 1
    let start = g.zip_with(&psi, f64::max).unwrap().map(|x| x + 1.0).unwrap();
    let r2 = solve_obstacle_from(&problem, &start, &config).unwrap();
    assert!(r2.solution.max_abs_diff(v) < 1e-8);
    // the measure lives on the contact set
    let mu = residual_measure(&r, &field).unwrap();
    assert!(mu.min_atom() >= -1e-8);
    let off = mu.max_abs_where(|i| v.value(i) - psi.value(i) > 1e-6);
    assert!(off <= 1e-8, "{off}");
    assert!(mu.total() > 0.0);
    // obstacle solutions are supersolutions and lie below other admissible supersolutions
    assert!(is_supersolution(v, &field, 1e-8).unwrap().is_supersolution);
    assert_eq!(comparison_check(&r, v, &field, Some(&psi), 1e-8).unwrap(), Comparison::Holds);
    let shifted = v.map(|x| x + 0.25).unwrap();
    // shifted field has the wrong boundary trace only where min picks it, which it never does
    assert_eq!(comparison_check(&r, &shifted, &field, Some(&psi), 1e-8).unwrap(), Comparison::Holds);
}

#[test]
fn harmonic_majorizes_obstacle_solution_with_same_data() {
    // ψ = g = u with u A-harmonic: v is the smallest supersolution above u, so v = u
    let d = build_domain(Shape::UnitDisk, 0.1).unwrap();
    let g = NodalField::from_fn(&d, |x| x[0] * x[0] - x[1] * x[1]).unwrap();
    let config = SolverConfig::default();
    let u = solve_a_harmonic(&laplace(), &g, &config).unwrap().solution;
    let r = solve_obstacle(&ObstacleProblem::new(laplace(), Some(u.clone()), u.clone()).unwrap(), &config).unwrap();
    assert!((0..d.num_nodes()).all(|i| u.value(i) >= r.solution.value(i) - 1e-8));
}

#[test]
fn energy_is_minimal_among_perturbations() {
    let d = build_domain(Shape::UnitDisk, 0.125).unwrap();
    let field = double_phase();
    let spec = field.spec().clone();
    let g = NodalField::from_fn(&d, |x| 0.5 * x[0]).unwrap();
    let psi = cone_obstacle(&d);
    let r =
        solve_obstacle(&ObstacleProblem::new(field, Some(psi.clone()), g).unwrap(), &SolverConfig::default()).unwrap();
    let functional = |w: &NodalField| -> f64 {
        // Σ |T| (|z|^p/p + ā |z|^q/q)
        let dom = w.domain();
        (0..dom.num_triangles())
            .map(|t| {
                let m = dom.midpoints(t);
                let a = (spec.a(m[0]).unwrap() + spec.a(m[1]).unwrap() + spec.a(m[2]).unwrap()) / 3.0;
                let s = norm(w.gradient(t));
                dom.area(t) * (s.powf(spec.p()) / spec.p() + a * s.powf(spec.q()) / spec.q())
            })
            .sum()
    };
    let best = functional(&r.solution);
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for _ in 0..50 {
        let scale = 10f64.powf(rng.gen_range(-4.0..-1.0));
        let vals: Vec<f64> = (0..d.num_nodes())
            .map(|i| {
                let v = r.solution.value(i);
                if d.is_boundary(i) {
                    v
                } else {
                    (v + scale * rng.gen_range(-1.0..1.0)).max(psi.value(i))
                }
            })
            .collect();
        let w = NodalField::new(Arc::clone(&d), vals).unwrap();
        assert!(functional(&w) >= best - 1e-12);
    }
}

#[test]
fn obstacle_energy_bound_is_stable() {
    // ψ = g: ∫H(Dv) <= c ∫H(Dψ), with c recorded at two levels
    let field = double_phase();
    let mut ratios = Vec::new();
    let mut d = build_domain(Shape::UnitDisk, 0.125).unwrap();
    for _ in 0..2 {
        let psi = NodalField::from_fn(&d, |x| 0.3 - (x[0] - 0.2).abs() - 0.5 * x[1].abs()).unwrap();
        let r = solve_obstacle(
            &ObstacleProblem::new(field.clone(), Some(psi.clone()), psi.clone()).unwrap(),
            &SolverConfig::default(),
        )
        .unwrap();
        ratios.push(r.energy / h_energy(field.spec(), &psi).unwrap());
        d = d.refine().unwrap();
    }
    assert!(ratios.iter().all(|r| r.is_finite() && *r <= 1.0 + 1e-9), "{ratios:?}");
    assert!(ratios[1] / ratios[0] < 2.0 && ratios[0] / ratios[1] < 2.0);
}

#[test]
fn infeasible_obstacle_rejected() {
    let d = build_domain(Shape::UnitDisk, 0.2).unwrap();
    let g = NodalField::constant(&d, 0.0).unwrap();
    let psi = NodalField::constant(&d, 1.0).unwrap();
    let p = ObstacleProblem::new(laplace(), Some(psi), g).unwrap();
    assert!(!p.is_admissible());
    assert!(matches!(solve_obstacle(&p, &SolverConfig::default()), Err(dplab_core::Error::Feasibility(_))));
}

fn four_triangle_square() -> Arc<DiscreteDomain> {
    let nodes = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]];
    let tris = vec![[0, 1, 4], [1, 2, 4], [2, 3, 4], [3, 0, 4]];
    Arc::new(DiscreteDomain::from_parts(Shape::Imported, nodes, tris).unwrap())
}

#[test]
fn hand_assembled_supersolution_atoms() {
    // u = x1^2 has -Δu = -2 < 0: the centre atom, assembled by hand, is
    // -1/4 - 1/4 - 3/4 + 1/4 = -1
    let d = four_triangle_square();
    let u = NodalField::from_fn(&d, |x| x[0] * x[0]).unwrap();
    let check = is_supersolution(&u, &laplace(), 1e-12).unwrap();
    assert!(!check.is_supersolution);
    assert!((check.worst_violation + 1.0).abs() < 1e-14);
    let w = NodalField::from_fn(&d, |x| -x[0] * x[0]).unwrap();
    assert!(is_supersolution(&w, &laplace(), 1e-12).unwrap().is_supersolution);
}

#[test]
fn solved_harmonic_is_supersolution() {
    let d = build_domain(Shape::UnitDisk, 0.1).unwrap();
    let g = NodalField::from_fn(&d, |x| x[0] * x[1] + x[1]).unwrap();
    let field = double_phase();
    let r = solve_a_harmonic(&field, &g, &SolverConfig::default()).unwrap();
    let check = is_supersolution(&r.solution, &field, 1e-8).unwrap();
    assert!(check.is_supersolution && check.worst_violation.abs() <= 1e-8);
    assert!(residual_measure(&r, &field).unwrap().max_abs_where(|_| true) <= 1e-8);
}

#[derive(Debug)]
struct PLaplaceRule(f64);

impl CustomRule for PLaplaceRule {
    fn eval(&self, _x: Point, _a: f64, z: Vec2) -> Vec2 {
        let r = norm(z);
        if r == 0.0 {
            [0.0, 0.0]
        } else {
            let k = r.powf(self.0 - 2.0);
            [k * z[0], k * z[1]]
        }
    }
}

#[derive(Debug)]
struct Anisotropic;

impl CustomRule for Anisotropic {
    // monotone, no potential: a rotation-free part plus a skew coupling
    fn eval(&self, _x: Point, _a: f64, z: Vec2) -> Vec2 {
        [2.0 * z[0] + 0.5 * z[1], -0.5 * z[0] + z[1] + z[1] * z[1].abs()]
    }
}

#[test]
fn custom_rule_matches_potential_solver() {
    let d = build_domain(Shape::UnitDisk, 0.125).unwrap();
    let spec = DoublePhaseSpec::single_phase(2.5).unwrap();
    let proto = MonotoneField::prototype(spec.clone());
    let custom = MonotoneField::custom(spec, 1.0, 2.5, Arc::new(PLaplaceRule(2.5))).unwrap();
    let g = NodalField::from_fn(&d, |x| 0.5 * x[0]).unwrap();
    let psi = cone_obstacle(&d);
    let config = SolverConfig::default();
    let a = solve_obstacle(&ObstacleProblem::new(proto, Some(psi.clone()), g.clone()).unwrap(), &config).unwrap();
    let b = solve_obstacle(&ObstacleProblem::new(custom, Some(psi), g).unwrap(), &config).unwrap();
    assert!(a.solution.max_abs_diff(&b.solution) < 1e-8);
}

#[test]
fn nonpotential_field_obstacle_solve() {
    let d = build_domain(Shape::UnitDisk, 0.125).unwrap();
    let field =
        MonotoneField::custom(DoublePhaseSpec::single_phase(2.0).unwrap(), 0.5, 4.0, Arc::new(Anisotropic)).unwrap();
    let g = NodalField::from_fn(&d, |x| 0.5 * x[0]).unwrap();
    let psi = cone_obstacle(&d);
    let config = SolverConfig::default();
    let r =
        solve_obstacle(&ObstacleProblem::new(field.clone(), Some(psi.clone()), g.clone()).unwrap(), &config).unwrap();
    assert!(r.final_kkt_residual <= 1e-8 && r.complementarity <= 1e-10);
    // the reflected field gives the reflected problem's solution
    let rf = field.reflected();
    let neg_g = g.map(|x| -x).unwrap();
    let r2 = solve_a_harmonic(&rf, &neg_g, &config).unwrap();
    let r1 = solve_a_harmonic(&field, &g, &config).unwrap();
    assert!(r1.solution.map(|x| -x).unwrap().max_abs_diff(&r2.solution) < 1e-8);
}
