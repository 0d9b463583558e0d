//! Pointwise double phase quantities: the integrand, its conjugate,
//! modulars and norms, monotone fields and the phase dichotomy.

mod conjugate;
mod field;
mod luxemburg;
mod phase;
mod spec;
mod weight;

pub use conjugate::{conjugate_equivalence_ratio, conjugate_scalar, fenchel_conjugate, golden_section_max};
pub use field::{v_map, CustomRule, FieldAudit, FieldForm, MonotoneField, MonotonicityGap};
pub use luxemburg::{modular_and_luxemburg, ModularNorm, ModularSample};
pub use phase::{classify_phase, PhaseClass, PhaseVerdict};
pub use spec::{DoublePhaseSpec, Fidelity, DIM};
pub use weight::{GridWeight, Weight};
