//! Triangulated planar domains with P1 fields and edge-midpoint quadrature.

mod build;
mod field;
mod io;
mod quadrature;
mod set;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dist, dist_to_segment, norm, Point, Region, Vec2};
use crate::solver::StiffnessPattern;

pub use build::{build_domain, build_punctured, unit_disk_rings};
pub use field::{cutoff, gradient, NodalField};
pub use io::{read_mesh, write_mesh};
pub use quadrature::{integrate, Integral, IntegrationRegion, QuadPoint};
pub use set::SetDescriptor;

/// Smallest interior angle accepted in a triangulation, in degrees.
pub const MIN_ANGLE_DEG: f64 = 15.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    /// `[0, 1]^2`.
    UnitSquare,
    /// Open unit disk centered at the origin.
    UnitDisk,
    /// `{inner < |x| < outer}`.
    Annulus { inner: f64, outer: f64 },
    /// Read from a mesh file; geometry known only through the triangulation.
    Imported,
}

impl Shape {
    pub fn area(&self) -> Option<f64> {
        use std::f64::consts::PI;
        match *self {
            Shape::UnitSquare => Some(1.0),
            Shape::UnitDisk => Some(PI),
            Shape::Annulus { inner, outer } => Some(PI * (outer * outer - inner * inner)),
            Shape::Imported => None,
        }
    }

    /// Number of boundary components.
    fn boundary_loops(&self) -> Option<usize> {
        match self {
            Shape::UnitSquare | Shape::UnitDisk => Some(1),
            Shape::Annulus { .. } => Some(2),
            Shape::Imported => None,
        }
    }

    fn analytic_inner_distance(&self, x: Point) -> Option<f64> {
        let r = norm(x);
        match *self {
            Shape::UnitSquare => Some(x[0].min(1.0 - x[0]).min(x[1]).min(1.0 - x[1]).max(0.0)),
            Shape::UnitDisk => Some((1.0 - r).max(0.0)),
            Shape::Annulus { inner, outer } => Some((r - inner).min(outer - r).max(0.0)),
            Shape::Imported => None,
        }
    }

    /// Moves a point created on a boundary edge back onto the curved boundary.
    fn project_to_boundary(&self, x: Point) -> Point {
        let r = norm(x);
        let target = match *self {
            Shape::UnitDisk => 1.0,
            Shape::Annulus { inner, outer } => {
                if r < 0.5 * (inner + outer) {
                    inner
                } else {
                    outer
                }
            }
            _ => return x,
        };
        [x[0] * target / r, x[1] * target / r]
    }
}

/// A conforming, positively oriented triangulation with boundary and
/// excluded-node bookkeeping. Immutable once built.
pub struct DiscreteDomain {
    shape: Shape,
    nodes: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<usize>,
    is_boundary: Vec<bool>,
    boundary_edges: Vec<[usize; 2]>,
    excluded: Vec<usize>,
    is_excluded: Vec<bool>,
    excluded_set: Option<SetDescriptor>,
    h: f64,
    areas: Vec<f64>,
    hat_grads: Vec<[Vec2; 3]>,
    level: usize,
    pattern: OnceLock<Arc<StiffnessPattern>>,
}

impl fmt::Debug for DiscreteDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiscreteDomain")
            .field("shape", &self.shape)
            .field("nodes", &self.nodes.len())
            .field("triangles", &self.triangles.len())
            .field("boundary", &self.boundary.len())
            .field("excluded", &self.excluded.len())
            .field("h", &self.h)
            .field("level", &self.level)
            .finish()
    }
}

fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

fn min_angle_deg(a: Point, b: Point, c: Point) -> f64 {
    let (la, lb, lc) = (dist(b, c), dist(a, c), dist(a, b));
    let angle =
        |opp: f64, s1: f64, s2: f64| ((s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2)).clamp(-1.0, 1.0).acos();
    angle(la, lb, lc).min(angle(lb, la, lc)).min(angle(lc, la, lb)).to_degrees()
}

impl DiscreteDomain {
    /// Validates and assembles a domain. Triangles are reoriented
    /// counterclockwise; boundary nodes are derived from the topology.
    pub fn from_parts(shape: Shape, nodes: Vec<Point>, mut triangles: Vec<[usize; 3]>) -> Result<Self> {
        if nodes.is_empty() || triangles.is_empty() {
            return Err(Error::Geometry("empty triangulation".into()));
        }
        if let Some(bad) = nodes.iter().position(|x| !(x[0].is_finite() && x[1].is_finite())) {
            return Err(Error::Geometry(format!("node {bad} has non-finite coordinates")));
        }
        let n = nodes.len();
        let mut areas = Vec::with_capacity(triangles.len());
        let mut hat_grads = Vec::with_capacity(triangles.len());
        let mut edges: HashMap<(usize, usize), usize> = HashMap::with_capacity(3 * triangles.len() / 2 + 8);
        let mut h: f64 = 0.0;
        let mut used = vec![false; n];
        for (t, tri) in triangles.iter_mut().enumerate() {
            if tri.iter().any(|&i| i >= n) {
                return Err(Error::Geometry(format!("triangle {t} references a missing node")));
            }
            let [a, b, c] = tri.map(|i| nodes[i]);
            let mut area = signed_area(a, b, c);
            if area < 0.0 {
                tri.swap(1, 2);
                area = -area;
            }
            let [a, b, c] = tri.map(|i| nodes[i]);
            let angle = if area > 0.0 { min_angle_deg(a, b, c) } else { 0.0 };
            if !(angle > MIN_ANGLE_DEG) {
                return Err(Error::Geometry(format!("triangle {t} has minimum angle {angle:.2} degrees")));
            }
            // ∇φ_i = rot90(opposite edge) / (2|T|)
            let grad = |p: Point, q: Point| [(p[1] - q[1]) / (2.0 * area), (q[0] - p[0]) / (2.0 * area)];
            hat_grads.push([grad(b, c), grad(c, a), grad(a, b)]);
            areas.push(area);
            for k in 0..3 {
                let (i, j) = (tri[k], tri[(k + 1) % 3]);
                used[i] = true;
                h = h.max(dist(nodes[i], nodes[j]));
                *edges.entry((i.min(j), i.max(j))).or_insert(0) += 1;
            }
        }
        if let Some(orphan) = used.iter().position(|&u| !u) {
            return Err(Error::Geometry(format!("node {orphan} belongs to no triangle")));
        }
        let mut is_boundary = vec![false; n];
        let mut boundary_edges = Vec::new();
        for (&(i, j), &count) in &edges {
            match count {
                1 => {
                    is_boundary[i] = true;
                    is_boundary[j] = true;
                    boundary_edges.push([i, j]);
                }
                2 => {}
                _ => return Err(Error::Geometry(format!("edge ({i}, {j}) shared by {count} triangles"))),
            }
        }
        boundary_edges.sort_unstable();
        let boundary: Vec<usize> = (0..n).filter(|&i| is_boundary[i]).collect();
        let loops = count_loops(n, &boundary_edges);
        let euler = n as i64 - edges.len() as i64 + triangles.len() as i64;
        if euler != 2 - loops as i64 {
            return Err(Error::Geometry(format!(
                "Euler characteristic {euler} inconsistent with {loops} boundary loops"
            )));
        }
        if let Some(expected) = shape.boundary_loops() {
            if expected != loops {
                return Err(Error::Geometry(format!("{shape:?} should have {expected} boundary loops, found {loops}")));
            }
        }
        Ok(DiscreteDomain {
            shape,
            nodes,
            triangles,
            boundary,
            is_boundary,
            boundary_edges,
            excluded: Vec::new(),
            is_excluded: vec![false; n],
            excluded_set: None,
            h,
            areas,
            hat_grads,
            level: 0,
            pattern: OnceLock::new(),
        })
    }

    /// Marks the nodes nearest to sample points of `set` as excluded.
    pub fn with_excluded_set(mut self, set: SetDescriptor) -> Result<Self> {
        let spacing = 0.25 * self.h;
        let mut excluded = Vec::new();
        for x in set.samples(spacing) {
            if self.inner_distance(x) <= 0.0 {
                return Err(Error::Configuration(format!("excluded set touches the boundary at ({}, {})", x[0], x[1])));
            }
            let i = self.nearest_node(x);
            if self.is_boundary[i] {
                return Err(Error::Configuration(format!(
                    "excluded set point ({}, {}) is within one mesh cell of the boundary",
                    x[0], x[1]
                )));
            }
            excluded.push(i);
        }
        self.set_excluded(excluded)?;
        self.excluded_set = Some(set);
        Ok(self)
    }

    /// Marks explicit node indices as excluded.
    pub fn with_excluded_nodes(mut self, nodes: Vec<usize>) -> Result<Self> {
        self.set_excluded(nodes)?;
        self.excluded_set = None;
        Ok(self)
    }

    fn set_excluded(&mut self, mut nodes: Vec<usize>) -> Result<()> {
        nodes.sort_unstable();
        nodes.dedup();
        if let Some(&bad) = nodes.iter().find(|&&i| i >= self.nodes.len() || self.is_boundary[i]) {
            return Err(Error::Configuration(format!("node {bad} cannot be excluded: missing or on the boundary")));
        }
        self.is_excluded = vec![false; self.nodes.len()];
        for &i in &nodes {
            self.is_excluded[i] = true;
        }
        self.excluded = nodes;
        Ok(())
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> Point {
        self.nodes[i]
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn boundary_nodes(&self) -> &[usize] {
        &self.boundary
    }

    pub fn boundary_edges(&self) -> &[[usize; 2]] {
        &self.boundary_edges
    }

    pub fn excluded_nodes(&self) -> &[usize] {
        &self.excluded
    }

    pub fn excluded_set(&self) -> Option<&SetDescriptor> {
        self.excluded_set.as_ref()
    }

    #[inline]
    pub fn is_boundary(&self, i: usize) -> bool {
        self.is_boundary[i]
    }

    #[inline]
    pub fn is_excluded(&self, i: usize) -> bool {
        self.is_excluded[i]
    }

    /// Interior and not excluded.
    #[inline]
    pub fn is_free(&self, i: usize) -> bool {
        !self.is_boundary[i] && !self.is_excluded[i]
    }

    /// Maximal edge length.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Number of uniform refinements applied since the initial build.
    pub fn level(&self) -> usize {
        self.level
    }

    #[inline]
    pub fn area(&self, t: usize) -> f64 {
        self.areas[t]
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    /// Gradients of the three hat functions on triangle `t`, in vertex order.
    #[inline]
    pub fn hat_gradients(&self, t: usize) -> &[Vec2; 3] {
        &self.hat_grads[t]
    }

    pub fn barycenter(&self, t: usize) -> Point {
        let [a, b, c] = self.triangles[t].map(|i| self.nodes[i]);
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }

    /// Edge midpoints of triangle `t`: opposite to vertex 2, 0, 1 in turn.
    pub fn midpoints(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t].map(|i| self.nodes[i]);
        let mid = |p: Point, q: Point| [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
        [mid(a, b), mid(b, c), mid(c, a)]
    }

    pub fn min_angle(&self) -> f64 {
        self.triangles
            .iter()
            .map(|tri| {
                let [a, b, c] = tri.map(|i| self.nodes[i]);
                min_angle_deg(a, b, c)
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn nearest_node(&self, x: Point) -> usize {
        let mut best = (f64::INFINITY, 0);
        for (i, &y) in self.nodes.iter().enumerate() {
            let d = dist(x, y);
            if d < best.0 {
                best = (d, i);
            }
        }
        best.1
    }

    /// Triangle containing `x` together with its barycentric coordinates.
    pub fn locate(&self, x: Point) -> Option<(usize, [f64; 3])> {
        const SLACK: f64 = -1e-12;
        for (t, tri) in self.triangles.iter().enumerate() {
            let [a, b, c] = tri.map(|i| self.nodes[i]);
            let area = self.areas[t];
            let l0 = signed_area(x, b, c) / area;
            let l1 = signed_area(a, x, c) / area;
            let l2 = 1.0 - l0 - l1;
            if l0 >= SLACK && l1 >= SLACK && l2 >= SLACK {
                return Some((t, [l0, l1, l2]));
            }
        }
        None
    }

    /// Uniform refinement: every triangle is split into four by its edge
    /// midpoints; midpoints of curved boundary edges are projected back
    /// onto the boundary.
    pub fn refine(&self) -> Result<Arc<DiscreteDomain>> {
        let mut nodes = self.nodes.clone();
        let mut mids: HashMap<(usize, usize), usize> = HashMap::with_capacity(3 * self.triangles.len() / 2 + 8);
        let boundary_edges: std::collections::HashSet<[usize; 2]> = self.boundary_edges.iter().copied().collect();
        let mut mid = |i: usize, j: usize, nodes: &mut Vec<Point>| -> usize {
            let key = (i.min(j), i.max(j));
            *mids.entry(key).or_insert_with(|| {
                let (p, q) = (nodes[i], nodes[j]);
                let mut m = [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
                if boundary_edges.contains(&[key.0, key.1]) {
                    m = self.shape.project_to_boundary(m);
                }
                nodes.push(m);
                nodes.len() - 1
            })
        };
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let ab = mid(a, b, &mut nodes);
            let bc = mid(b, c, &mut nodes);
            let ca = mid(c, a, &mut nodes);
            triangles.extend_from_slice(&[[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        let mut fine = DiscreteDomain::from_parts(self.shape, nodes, triangles)?;
        fine.level = self.level + 1;
        let fine = match &self.excluded_set {
            Some(set) => fine.with_excluded_set(set.clone())?,
            None => fine.with_excluded_nodes(self.excluded.clone())?,
        };
        Ok(Arc::new(fine))
    }

    pub(crate) fn pattern_cache(&self) -> &OnceLock<Arc<StiffnessPattern>> {
        &self.pattern
    }
}

fn count_loops(n: usize, edges: &[[usize; 2]]) -> usize {
    // connected components of the boundary graph
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut on_boundary = vec![false; n];
    for &[i, j] in edges {
        on_boundary[i] = true;
        on_boundary[j] = true;
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri] = rj;
        }
    }
    (0..n).filter(|&i| on_boundary[i] && find(&mut parent, i) == i).count()
}

impl Region for DiscreteDomain {
    fn inner_distance(&self, x: Point) -> f64 {
        if let Some(d) = self.shape.analytic_inner_distance(x) {
            return d;
        }
        if self.locate(x).is_none() {
            return 0.0;
        }
        self.boundary_edges
            .iter()
            .map(|&[i, j]| dist_to_segment(x, self.nodes[i], self.nodes[j]))
            .fold(f64::INFINITY, f64::min)
    }
}
