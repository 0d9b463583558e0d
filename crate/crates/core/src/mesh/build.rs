use std::f64::consts::{FRAC_PI_3, TAU};
use std::sync::Arc;

use super::{DiscreteDomain, SetDescriptor, Shape};
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Builds a registry domain with maximal edge length at most `target_h`.
pub fn build_domain(shape: Shape, target_h: f64) -> Result<Arc<DiscreteDomain>> {
    if !(target_h > 0.0 && target_h.is_finite()) {
        return Err(Error::parameter(format!("target_h must be positive, got {target_h}")));
    }
    let domain = match shape {
        Shape::UnitSquare => unit_square(target_h)?,
        Shape::UnitDisk => {
            // ring counts are multiples of 4 so circles of radius 1/4 and 1/2 are mesh lines
            let mut rings = 4;
            loop {
                let d = disk_with_rings(rings)?;
                if d.h() <= target_h {
                    break d;
                }
                rings += 4;
            }
        }
        Shape::Annulus { inner, outer } => annulus(inner, outer, target_h)?,
        Shape::Imported => return Err(Error::parameter("imported meshes are read, not built")),
    };
    Ok(Arc::new(domain))
}

/// A registry domain with an excluded set `E`.
pub fn build_punctured(shape: Shape, set: &SetDescriptor, target_h: f64) -> Result<Arc<DiscreteDomain>> {
    let domain = build_domain(shape, target_h)?;
    let domain = Arc::try_unwrap(domain).expect("freshly built domain is not shared");
    Ok(Arc::new(domain.with_excluded_set(set.clone())?))
}

/// Unit disk made of `rings` concentric rings, ring `k` carrying `6k`
/// nodes. Rings inside radius 1/4 blend from hexagons at the centre to
/// circles, so the centre patch is a regular lattice; rings from 1/4 outward
/// are exact circles. Symmetric under `x1 ↦ -x1`.
pub fn unit_disk_rings(rings: usize) -> Result<Arc<DiscreteDomain>> {
    Ok(Arc::new(disk_with_rings(rings)?))
}

fn unit_square(target_h: f64) -> Result<DiscreteDomain> {
    let n = ((2f64.sqrt() / target_h).ceil() as usize).max(1);
    let idx = |i: usize, j: usize| j * (n + 1) + i;
    let mut nodes = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            nodes.push([i as f64 / n as f64, j as f64 / n as f64]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            if (i + j) % 2 == 0 {
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            } else {
                triangles.push([a, b, d]);
                triangles.push([b, c, d]);
            }
        }
    }
    DiscreteDomain::from_parts(Shape::UnitSquare, nodes, triangles)
}

const HEX_BLEND_RADIUS: f64 = 0.25;

fn disk_with_rings(rings: usize) -> Result<DiscreteDomain> {
    if rings == 0 {
        return Err(Error::parameter("a disk needs at least one ring"));
    }
    let start = |k: usize| if k == 0 { 0 } else { 1 + 3 * k * (k - 1) };
    let mut nodes: Vec<Point> = vec![[0.0, 0.0]];
    for k in 1..=rings {
        let r = k as f64 / rings as f64;
        let w = (r / HEX_BLEND_RADIUS).min(1.0);
        for j in 0..6 * k {
            let t = TAU * j as f64 / (6 * k) as f64;
            let corner = |s: usize| [(s as f64 * FRAC_PI_3).cos(), (s as f64 * FRAC_PI_3).sin()];
            let (a, b) = (corner(j / k), corner(j / k + 1));
            let f = (j % k) as f64 / k as f64;
            let hex = [(1.0 - f) * a[0] + f * b[0], (1.0 - f) * a[1] + f * b[1]];
            nodes.push([r * ((1.0 - w) * hex[0] + w * t.cos()), r * ((1.0 - w) * hex[1] + w * t.sin())]);
        }
    }
    // snap the x1 -> -x1 mirror images so symmetric data stay bitwise symmetric
    for k in 1..=rings {
        for j in 0..6 * k {
            let m = (9 * k - j) % (6 * k);
            let (i, im) = (start(k) + j, start(k) + m);
            if j == m {
                nodes[i][0] = 0.0;
            } else if j < m {
                nodes[im] = [-nodes[i][0], nodes[i][1]];
            }
        }
    }
    let mut triangles = Vec::with_capacity(6 * rings * rings);
    for k in 1..=rings {
        let outer = |m: usize| start(k) + m % (6 * k);
        let inner = |m: usize| if k == 1 { 0 } else { start(k - 1) + m % (6 * (k - 1)) };
        for s in 0..6 {
            for m in 0..k {
                triangles.push([outer(s * k + m), outer(s * k + m + 1), inner(s * (k - 1) + m)]);
            }
            for m in 0..k.saturating_sub(1) {
                triangles.push([inner(s * (k - 1) + m), outer(s * k + m + 1), inner(s * (k - 1) + m + 1)]);
            }
        }
    }
    DiscreteDomain::from_parts(Shape::UnitDisk, nodes, triangles)
}

fn annulus(inner: f64, outer: f64, target_h: f64) -> Result<DiscreteDomain> {
    if !(inner > 0.0 && inner < outer && outer.is_finite()) {
        return Err(Error::parameter(format!("annulus needs 0 < r < R, got r = {inner}, R = {outer}")));
    }
    let mut spacing = target_h / 1.2;
    for _ in 0..60 {
        let layers = ((outer - inner) / spacing).ceil() as usize;
        let dr = (outer - inner) / layers as f64;
        let counts: Vec<usize> =
            (0..=layers).map(|k| ((TAU * (inner + k as f64 * dr) / dr).ceil() as usize).max(6)).collect();
        let mut nodes = Vec::new();
        let mut starts = Vec::with_capacity(counts.len());
        for (k, &n) in counts.iter().enumerate() {
            starts.push(nodes.len());
            let r = inner + k as f64 * dr;
            let offset = if k % 2 == 1 { 0.5 } else { 0.0 };
            for j in 0..n {
                let t = TAU * (j as f64 + offset) / n as f64;
                nodes.push([r * t.cos(), r * t.sin()]);
            }
        }
        let mut triangles = Vec::new();
        for k in 0..layers {
            let (na, nb) = (counts[k], counts[k + 1]);
            let (oa, ob) = (if k % 2 == 1 { 0.5 } else { 0.0 }, if (k + 1) % 2 == 1 { 0.5 } else { 0.0 });
            let angle_a = |i: usize| TAU * (i as f64 + oa) / na as f64;
            let angle_b = |j: usize| TAU * (j as f64 + ob) / nb as f64;
            let a = |i: usize| starts[k] + i % na;
            let b = |j: usize| starts[k + 1] + j % nb;
            let (mut i, mut j) = (0, 0);
            while i < na || j < nb {
                let advance_inner = j == nb || (i < na && angle_a(i + 1) < angle_b(j + 1));
                if advance_inner {
                    triangles.push([a(i), a(i + 1), b(j)]);
                    i += 1;
                } else {
                    triangles.push([a(i), b(j + 1), b(j)]);
                    j += 1;
                }
            }
        }
        let domain = DiscreteDomain::from_parts(Shape::Annulus { inner, outer }, nodes, triangles)?;
        if domain.h() <= target_h {
            return Ok(domain);
        }
        spacing *= 0.95;
    }
    Err(Error::Geometry(format!("could not reach h <= {target_h} for the annulus")))
}
