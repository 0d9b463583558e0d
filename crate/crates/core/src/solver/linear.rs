//! Fixed sparsity patterns for P1 stiffness-type matrices and the sparse
//! direct solves built on them.

use std::sync::OnceLock;

use faer::prelude::Solve;
use faer::sparse::linalg::solvers::{Llt, Lu, SymbolicLlt, SymbolicLu};
use faer::sparse::{SparseColMatRef, SymbolicSparseColMatRef};
use faer::{Col, Side};

use crate::error::{Error, Result};
use crate::mesh::DiscreteDomain;

/// Compressed column pattern over all nodes of a mesh.
#[derive(Debug)]
struct Csc {
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    /// Slot of the local entry `(k, l)` of each triangle, `usize::MAX` when
    /// the entry is not stored (upper part of a lower-triangular pattern).
    tri_slots: Vec<[usize; 9]>,
    diag: Vec<usize>,
}

impl Csc {
    fn build(domain: &DiscreteDomain, lower_only: bool) -> Csc {
        let n = domain.num_nodes();
        let mut cols: Vec<Vec<usize>> = (0..n).map(|j| vec![j]).collect();
        for tri in domain.triangles() {
            for &i in tri {
                for &j in tri {
                    if i != j && (!lower_only || i > j) {
                        cols[j].push(i);
                    }
                }
            }
        }
        let mut col_ptr = Vec::with_capacity(n + 1);
        let mut row_idx = Vec::new();
        col_ptr.push(0);
        for c in &mut cols {
            c.sort_unstable();
            c.dedup();
            row_idx.extend_from_slice(c);
            col_ptr.push(row_idx.len());
        }
        let find = |i: usize, j: usize| -> usize {
            let rows = &row_idx[col_ptr[j]..col_ptr[j + 1]];
            col_ptr[j] + rows.binary_search(&i).expect("entry present in pattern")
        };
        let diag = (0..n).map(|i| find(i, i)).collect();
        let tri_slots = domain
            .triangles()
            .iter()
            .map(|tri| {
                let mut slots = [usize::MAX; 9];
                for k in 0..3 {
                    for l in 0..3 {
                        let (i, j) = (tri[k], tri[l]);
                        if !lower_only || i >= j {
                            slots[3 * k + l] = find(i, j);
                        }
                    }
                }
                slots
            })
            .collect();
        Csc { col_ptr, row_idx, tri_slots, diag }
    }

    fn symbolic(&self) -> SymbolicSparseColMatRef<'_, usize> {
        let n = self.col_ptr.len() - 1;
        SymbolicSparseColMatRef::new_checked(n, n, &self.col_ptr, None, &self.row_idx)
    }

    /// Replaces rows and columns of pinned nodes by those of the identity.
    fn pin(&self, values: &mut [f64], pinned: &[bool]) {
        for j in 0..self.col_ptr.len() - 1 {
            for s in self.col_ptr[j]..self.col_ptr[j + 1] {
                let i = self.row_idx[s];
                if pinned[i] || pinned[j] {
                    values[s] = if i == j { 1.0 } else { 0.0 };
                }
            }
        }
    }
}

/// Lower-triangular pattern for symmetric systems plus a lazily built full
/// pattern for nonsymmetric ones. Symbolic factorizations are computed
/// once per mesh and reused by every Newton step.
#[derive(Debug)]
pub struct StiffnessPattern {
    lower: Csc,
    llt: OnceLock<std::result::Result<SymbolicLlt<usize>, String>>,
    general: OnceLock<GeneralPattern>,
}

impl StiffnessPattern {
    pub(crate) fn for_domain(domain: &DiscreteDomain) -> std::sync::Arc<StiffnessPattern> {
        domain
            .pattern_cache()
            .get_or_init(|| {
                std::sync::Arc::new(StiffnessPattern {
                    lower: Csc::build(domain, true),
                    llt: OnceLock::new(),
                    general: OnceLock::new(),
                })
            })
            .clone()
    }

    /// Pattern with both triangles stored, for nonsymmetric Jacobians.
    pub(crate) fn general(&self, domain: &DiscreteDomain) -> &GeneralPattern {
        self.general.get_or_init(|| GeneralPattern { csc: Csc::build(domain, false), lu: OnceLock::new() })
    }

    pub(crate) fn nnz(&self) -> usize {
        self.lower.row_idx.len()
    }

    pub(crate) fn zeros(&self) -> Vec<f64> {
        vec![0.0; self.nnz()]
    }

    /// Adds a symmetric local 3 × 3 matrix of triangle `t`.
    #[inline]
    pub(crate) fn add_local(&self, values: &mut [f64], t: usize, local: &[[f64; 3]; 3]) {
        let slots = &self.lower.tri_slots[t];
        for k in 0..3 {
            for l in 0..3 {
                let s = slots[3 * k + l];
                if s != usize::MAX {
                    values[s] += local[k][l];
                }
            }
        }
    }

    #[inline]
    pub(crate) fn diagonal(&self, values: &[f64], i: usize) -> f64 {
        values[self.lower.diag[i]]
    }

    pub(crate) fn pin(&self, values: &mut [f64], pinned: &[bool]) {
        self.lower.pin(values, pinned);
    }

    /// Solves `K x = b` for the symmetric positive definite `K` stored in `values`.
    pub(crate) fn solve_spd(&self, values: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
        let symbolic = self
            .llt
            .get_or_init(|| SymbolicLlt::try_new(self.lower.symbolic(), Side::Lower).map_err(|e| format!("{e:?}")))
            .as_ref()
            .map_err(|e| linear_error(format!("symbolic Cholesky failed: {e}")))?;
        let mat = SparseColMatRef::new(self.lower.symbolic(), values);
        let llt = Llt::try_new_with_symbolic(symbolic.clone(), mat, Side::Lower)
            .map_err(|e| linear_error(format!("Cholesky failed: {e:?}")))?;
        let b = Col::<f64>::from_fn(rhs.len(), |i| rhs[i]);
        let x = llt.solve(&b);
        Ok((0..rhs.len()).map(|i| x[i]).collect())
    }
}

fn linear_error(message: String) -> Error {
    Error::Solver { message, iterations: 0, residual: f64::NAN }
}

/// Full pattern used by the nonsymmetric Newton solver.
#[derive(Debug)]
pub(crate) struct GeneralPattern {
    csc: Csc,
    lu: OnceLock<std::result::Result<SymbolicLu<usize>, String>>,
}

impl GeneralPattern {
    pub(crate) fn zeros(&self) -> Vec<f64> {
        vec![0.0; self.csc.row_idx.len()]
    }

    #[inline]
    pub(crate) fn diagonal(&self, values: &[f64], i: usize) -> f64 {
        values[self.csc.diag[i]]
    }

    /// Adds a (possibly nonsymmetric) local matrix: entry `[k][l]` couples
    /// row `tri[k]` with column `tri[l]`.
    #[inline]
    pub(crate) fn add_local(&self, values: &mut [f64], t: usize, local: &[[f64; 3]; 3]) {
        let slots = &self.csc.tri_slots[t];
        for k in 0..3 {
            for l in 0..3 {
                values[slots[3 * k + l]] += local[k][l];
            }
        }
    }

    /// Replaces row `i` by `scale` times the identity row, for each flagged node.
    pub(crate) fn replace_rows(&self, values: &mut [f64], rows: &[bool], scale: &[f64]) {
        let n = self.csc.col_ptr.len() - 1;
        for j in 0..n {
            for s in self.csc.col_ptr[j]..self.csc.col_ptr[j + 1] {
                let i = self.csc.row_idx[s];
                if rows[i] {
                    values[s] = if i == j { scale[i] } else { 0.0 };
                }
            }
        }
    }

    /// `y = K x`.
    #[cfg(test)]
    pub(crate) fn apply(&self, values: &[f64], x: &[f64]) -> Vec<f64> {
        let n = self.csc.col_ptr.len() - 1;
        let mut y = vec![0.0; n];
        for j in 0..n {
            for s in self.csc.col_ptr[j]..self.csc.col_ptr[j + 1] {
                y[self.csc.row_idx[s]] += values[s] * x[j];
            }
        }
        y
    }

    pub(crate) fn solve(&self, values: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
        let symbolic = self
            .lu
            .get_or_init(|| SymbolicLu::try_new(self.csc.symbolic()).map_err(|e| format!("{e:?}")))
            .as_ref()
            .map_err(|e| linear_error(format!("symbolic LU failed: {e}")))?;
        let mat = SparseColMatRef::new(self.csc.symbolic(), values);
        let lu =
            Lu::try_new_with_symbolic(symbolic.clone(), mat).map_err(|e| linear_error(format!("LU failed: {e:?}")))?;
        let b = Col::<f64>::from_fn(rhs.len(), |i| rhs[i]);
        let x = lu.solve(&b);
        Ok((0..rhs.len()).map(|i| x[i]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_domain, Shape};

    #[test]
    fn laplacian_solve_with_pinned_boundary() {
        // P1 Laplacian with u = x1 + 2 x2 on the boundary reproduces the affine function
        let d = build_domain(Shape::UnitSquare, 0.2).unwrap();
        let pat = StiffnessPattern::for_domain(&d);
        let mut k = pat.zeros();
        for t in 0..d.num_triangles() {
            let g = d.hat_gradients(t);
            let mut local = [[0.0; 3]; 3];
            for a in 0..3 {
                for b in 0..3 {
                    local[a][b] = d.area(t) * (g[a][0] * g[b][0] + g[a][1] * g[b][1]);
                }
            }
            pat.add_local(&mut k, t, &local);
        }
        let pinned: Vec<bool> = (0..d.num_nodes()).map(|i| d.is_boundary(i)).collect();
        let exact: Vec<f64> = d.nodes().iter().map(|x| x[0] + 2.0 * x[1]).collect();
        // rhs = -K_{free,pinned} u_pinned, computed before pinning
        let full = pat.general(&d);
        let mut kf = full.zeros();
        for t in 0..d.num_triangles() {
            let g = d.hat_gradients(t);
            let mut local = [[0.0; 3]; 3];
            for a in 0..3 {
                for b in 0..3 {
                    local[a][b] = d.area(t) * (g[a][0] * g[b][0] + g[a][1] * g[b][1]);
                }
            }
            full.add_local(&mut kf, t, &local);
        }
        let boundary_part: Vec<f64> = (0..d.num_nodes()).map(|i| if pinned[i] { exact[i] } else { 0.0 }).collect();
        let kb = full.apply(&kf, &boundary_part);
        let rhs: Vec<f64> = (0..d.num_nodes()).map(|i| if pinned[i] { exact[i] } else { -kb[i] }).collect();
        pat.pin(&mut k, &pinned);
        let x = pat.solve_spd(&k, &rhs).unwrap();
        let err = x.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
        let ones = vec![true; d.num_nodes()];
        full.replace_rows(&mut kf, &ones, &vec![2.0; d.num_nodes()]);
        let y = full.solve(&kf, &exact).unwrap();
        assert!(y.iter().zip(&exact).all(|(a, b)| (a - 0.5 * b).abs() < 1e-14));
    }
}
