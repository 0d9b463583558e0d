use super::spec::DoublePhaseSpec;
use crate::error::{Error, Result};
use crate::geometry::Point;

const GOLDEN_TOL: f64 = 1e-10;
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximizes a unimodal function on `[lo, hi]` by golden section search.
/// Returns `(argmax, max)`.
pub fn golden_section_max(mut lo: f64, mut hi: f64, tol: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut guard = 0;
    while hi - lo > tol * (1.0 + hi.abs()) && guard < 300 {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
        guard += 1;
    }
    // endpoints are candidates too: the supremum may sit at s = 0
    let mid = 0.5 * (lo + hi);
    [(mid, f(mid)), (lo, f(lo)), (hi, f(hi))].into_iter().fold((mid, f64::NEG_INFINITY), |best, cand| {
        if cand.1 > best.1 {
            cand
        } else {
            best
        }
    })
}

/// `H*(x, t) = sup_{s >= 0} (s t - H(x, s))`.
pub fn fenchel_conjugate(spec: &DoublePhaseSpec, x: Point, t: f64) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::parameter(format!("conjugate argument must be finite and >= 0, got {t}")));
    }
    let a = spec.a(x)?;
    Ok(conjugate_scalar(spec, a, t))
}

/// Conjugate for a known coefficient value.
pub fn conjugate_scalar(spec: &DoublePhaseSpec, a: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    // beyond s^{p-1} = t the supremand s t - s^p is already negative
    let s_max = t.powf(1.0 / (spec.p() - 1.0));
    let (_, value) = golden_section_max(0.0, s_max, GOLDEN_TOL, |s| s * t - spec.h_scalar(a, s));
    value.max(0.0)
}

/// `H*(x, H(x,t)/t) / H(x,t)`; bounded above and below by constants
/// depending only on `p` and `q`.
pub fn conjugate_equivalence_ratio(spec: &DoublePhaseSpec, x: Point, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::parameter("equivalence ratio needs t > 0"));
    }
    let a = spec.a(x)?;
    let h = spec.h_scalar(a, t);
    Ok(conjugate_scalar(spec, a, h / t) / h)
}
