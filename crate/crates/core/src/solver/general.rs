//! Semismooth Newton for fields without a potential: the complementarity
//! system `min(F(v), c (v - ψ)) = 0` with a finite-difference Jacobian of
//! the field. Convergence is monitored, not guaranteed.

use super::config::SolverConfig;
use super::discrete::triangle_gradient;
use super::linear::StiffnessPattern;
use super::measure::field_atoms;
use super::newton::{Bounds, StageLog};
use crate::energy::MonotoneField;
use crate::error::{Error, Result};
use crate::geometry::{dot, Point, Vec2};
use crate::mesh::DiscreteDomain;

fn mean_field(field: &MonotoneField, mids: &[Point; 3], a: &[f64; 3], z: Vec2) -> Vec2 {
    let mut out = [0.0; 2];
    for m in 0..3 {
        let f = field.eval_with(mids[m], a[m], z);
        out[0] += f[0] / 3.0;
        out[1] += f[1] / 3.0;
    }
    out
}

fn jacobian(
    field: &MonotoneField,
    domain: &DiscreteDomain,
    weights: &[[f64; 3]],
    pattern: &super::linear::GeneralPattern,
    v: &[f64],
) -> Vec<f64> {
    let mut values = pattern.zeros();
    for t in 0..domain.num_triangles() {
        let z = triangle_gradient(domain, t, v);
        let mids = domain.midpoints(t);
        let delta = 1e-6 * z[0].hypot(z[1]).max(1.0);
        let mut da = [[0.0; 2]; 2];
        for k in 0..2 {
            let mut zp = z;
            let mut zm = z;
            zp[k] += delta;
            zm[k] -= delta;
            let (fp, fm) = (mean_field(field, &mids, &weights[t], zp), mean_field(field, &mids, &weights[t], zm));
            da[0][k] = (fp[0] - fm[0]) / (2.0 * delta);
            da[1][k] = (fp[1] - fm[1]) / (2.0 * delta);
        }
        let area = domain.area(t);
        let g = domain.hat_gradients(t);
        let mut local = [[0.0; 3]; 3];
        for b in 0..3 {
            let col = [da[0][0] * g[b][0] + da[0][1] * g[b][1], da[1][0] * g[b][0] + da[1][1] * g[b][1]];
            for a in 0..3 {
                local[a][b] = area * dot(g[a], col);
            }
        }
        pattern.add_local(&mut values, t, &local);
    }
    values
}

fn ncp(bounds: &Bounds, v: &[f64], f: &[f64], scale: &[f64], out: &mut [f64], active: &mut [bool]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..v.len() {
        active[i] = false;
        out[i] = if bounds.pinned[i] {
            0.0
        } else if bounds.lower[i].is_finite() && scale[i] * (v[i] - bounds.lower[i]) <= f[i] {
            active[i] = true;
            scale[i] * (v[i] - bounds.lower[i])
        } else {
            f[i]
        };
        worst = worst.max(out[i].abs());
    }
    worst
}

pub(crate) fn solve_general(
    field: &MonotoneField,
    domain: &DiscreteDomain,
    bounds: &Bounds,
    v: &mut [f64],
    config: &SolverConfig,
) -> Result<StageLog> {
    if bounds.upper.iter().any(|u| u.is_finite()) {
        return Err(Error::Configuration("upper bounds need a field with a potential".into()));
    }
    let n = v.len();
    let spec = field.spec();
    let weights: Vec<[f64; 3]> = (0..domain.num_triangles())
        .map(|t| {
            let m = domain.midpoints(t);
            Ok([spec.a(m[0])?, spec.a(m[1])?, spec.a(m[2])?])
        })
        .collect::<Result<_>>()?;
    let pattern = StiffnessPattern::for_domain(domain);
    let general = pattern.general(domain);
    for i in 0..n {
        if !bounds.pinned[i] {
            v[i] = v[i].max(bounds.lower[i]);
        }
    }
    let mut active = vec![false; n];
    let mut phi = vec![0.0; n];
    let f = field_atoms(field, domain, v)?;
    let jac0 = jacobian(field, domain, &weights, general, v);
    // constraint rows are scaled like the Jacobian diagonal
    let scale: Vec<f64> = (0..n)
        .map(|i| {
            let d = general.diagonal(&jac0, i).abs();
            if d > 0.0 {
                d
            } else {
                1.0
            }
        })
        .collect();
    let mut res = ncp(bounds, v, &f, &scale, &mut phi, &mut active);
    let mut iterations = 0;
    let mut stagnated = false;
    let mut trial = vec![0.0; n];
    let mut phi_trial = vec![0.0; n];
    let mut active_trial = vec![false; n];
    while res > config.stop_tol && iterations < config.max_iterations {
        iterations += 1;
        let mut jac = jacobian(field, domain, &weights, general, v);
        let replaced: Vec<bool> = (0..n).map(|i| bounds.pinned[i] || active[i]).collect();
        let diag: Vec<f64> = (0..n).map(|i| if bounds.pinned[i] { 1.0 } else { scale[i] }).collect();
        general.replace_rows(&mut jac, &replaced, &diag);
        let rhs: Vec<f64> = phi.iter().map(|x| -x).collect();
        let d = general.solve(&jac, &rhs)?;
        let merit = phi.iter().map(|x| x * x).sum::<f64>();
        let mut alpha = 1.0;
        loop {
            for i in 0..n {
                trial[i] = if bounds.pinned[i] { v[i] } else { v[i] + alpha * d[i] };
            }
            let f_trial = field_atoms(field, domain, &trial)?;
            let r = ncp(bounds, &trial, &f_trial, &scale, &mut phi_trial, &mut active_trial);
            let merit_trial = phi_trial.iter().map(|x| x * x).sum::<f64>();
            if merit_trial <= (1.0 - 1e-4 * alpha) * merit || (alpha == 1.0 && r < res) {
                v.copy_from_slice(&trial);
                std::mem::swap(&mut phi, &mut phi_trial);
                std::mem::swap(&mut active, &mut active_trial);
                res = r;
                break;
            }
            alpha *= 0.5;
            if alpha < 1e-10 {
                stagnated = true;
                break;
            }
        }
        if stagnated {
            break;
        }
    }
    Ok(StageLog { eps: 0.0, iterations, projected_gradient: res, stagnated })
}
