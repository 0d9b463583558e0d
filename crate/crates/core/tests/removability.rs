use dplab_core::caphaus::DecayClass;
use dplab_core::removability::{run_removability, Candidate, RemovabilityInput, Verdict};

#[test]
fn smooth_solution_is_removable() {
    let r = run_removability(&RemovabilityInput::new(Candidate::Linear).unwrap()).unwrap();
    assert_eq!(r.verdict, Verdict::RemovableConsistent, "{:?}", r.diagnostics);
    assert!(r.barrier_gap <= 5e-8);
    assert_eq!(r.hausdorff.as_ref().unwrap().class, DecayClass::Zero);
    for l in &r.levels {
        assert!(l.upper_violation <= 1e-12 && l.lower_violation <= 1e-12);
    }
}

#[test]
fn chord_kink_is_not_removable() {
    let r = run_removability(&RemovabilityInput::new(Candidate::AbsX2).unwrap()).unwrap();
    assert_ne!(r.verdict, Verdict::RemovableConsistent);
    assert_eq!(r.verdict, Verdict::NonRemovable);
    // -Δ|x2| = -2 H^1 on the chord: the lower barrier carries mass 2 per unit length
    assert!((r.mu_on_e / 4.0 - 1.0).abs() < 0.05, "{}", r.mu_on_e);
    assert_eq!(r.hausdorff.as_ref().unwrap().class, DecayClass::Divergent);
}

#[test]
fn sqrt_radius_carries_point_mass() {
    // flux of |Du| Du for u = r^{1/2} through every circle is 2π/4, so the
    // lower barrier -u keeps an atom of mass π/2 at the origin
    let r = run_removability(&RemovabilityInput::new(Candidate::SqrtRadius).unwrap()).unwrap();
    let study = r.hausdorff.as_ref().unwrap();
    // pσ = 9/4 > 2: covering sums of a point blow up like δ^{-1/4}
    assert!((r.sigma - 0.75).abs() < 1e-15);
    assert!((study.fitted_slope.unwrap() + 0.25).abs() < 0.0375);
    assert_eq!(study.class, DecayClass::Divergent);
    assert!((r.mu_on_e / std::f64::consts::FRAC_PI_2 - 1.0).abs() < 0.1, "{}", r.mu_on_e);
    assert!((r.barrier_gap - 1.0).abs() < 1e-6);
    assert_eq!(r.verdict, Verdict::NonRemovable);
}

#[test]
fn singular_log_is_rejected_before_solving() {
    let err = run_removability(&RemovabilityInput::new(Candidate::LogInverseRadius).unwrap()).unwrap_err();
    assert!(err.to_string().contains("not Hölder"), "{err}");
}

#[test]
fn beta0_beyond_certificate_is_rejected() {
    let mut input = RemovabilityInput::new(Candidate::SqrtRadius).unwrap();
    input.beta0 = Some(0.9);
    assert!(run_removability(&input).is_err());
}
