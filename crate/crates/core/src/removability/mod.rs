//! Removability experiments: for a Hölder candidate `u` that solves the
//! equation off a compact set `E`, compute the upper barrier `v` (obstacle
//! `u`) and the lower barrier `v̂` (reflected field, obstacle `-u`), and
//! watch the residual mass they carry near `E` under refinement.

mod analytic;
mod pipeline;

pub use analytic::{Candidate, HolderCertificate};
pub use pipeline::{classify, run_removability, BarrierLevel, RemovabilityInput, RemovabilityVerdict, Verdict};
