//! Direct sparse solves with LU factorisation and iterative refinement.

use std::time::Instant;

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseRowMat, SymbolicSparseRowMat};
use faer::Mat;

use crate::assembly::CsrMatrix;
use crate::error::{Error, Result};

/// Relative residual above which a solve is reported as singular.
pub const SINGULAR_RESIDUAL: f64 = 1e-6;
/// Refinement stops once the relative residual is below this.
pub const TARGET_RESIDUAL: f64 = 1e-13;
const MAX_REFINEMENTS: usize = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LinearSolveStats {
    pub dim: usize,
    pub nnz: usize,
    pub factor_seconds: f64,
    pub solve_seconds: f64,
    /// `|b - A x| / |b|` (or `|A x|` when `b = 0`), Euclidean norms.
    pub rel_residual: f64,
    pub refinements: usize,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn residual(a: &CsrMatrix, x: &[f64], b: &[f64]) -> Vec<f64> {
    a.matvec(x).iter().zip(b).map(|(ax, bi)| bi - ax).collect()
}

/// Solves `A x = b`. Fails with [`Error::SingularMatrix`] when the
/// factorisation breaks down or the refined residual stays large.
pub fn solve(a: &CsrMatrix, b: &[f64]) -> Result<(Vec<f64>, LinearSolveStats)> {
    let n = a.n;
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: b.len() });
    }
    let mut stats = LinearSolveStats { dim: n, nnz: a.nnz(), ..Default::default() };
    if n == 0 {
        return Ok((Vec::new(), stats));
    }
    if a.values.iter().any(|v| !v.is_finite()) || b.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularMatrix("non-finite entries in the linear system".into()));
    }

    let start = Instant::now();
    let symbolic = SymbolicSparseRowMat::<usize>::new_checked(n, n, a.row_ptr.clone(), None, a.col_idx.clone());
    let mat = SparseRowMat::new(symbolic, a.values.clone());
    let lu = mat.sp_lu().map_err(|e| Error::SingularMatrix(format!("{e:?}")))?;
    stats.factor_seconds = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let apply = |r: &[f64]| -> Vec<f64> {
        let mut m = Mat::<f64>::from_fn(n, 1, |i, _| r[i]);
        lu.solve_in_place(m.as_mut());
        (0..n).map(|i| m[(i, 0)]).collect()
    };
    let mut x = apply(b);
    let scale = if norm(b) > 0.0 { norm(b) } else { 1.0 };
    let mut r = residual(a, &x, b);
    let mut rel = norm(&r) / scale;
    while rel.is_finite() && rel > TARGET_RESIDUAL && stats.refinements < MAX_REFINEMENTS {
        let dx = apply(&r);
        let candidate: Vec<f64> = x.iter().zip(&dx).map(|(xi, di)| xi + di).collect();
        let r_new = residual(a, &candidate, b);
        let rel_new = norm(&r_new) / scale;
        stats.refinements += 1;
        if !(rel_new < rel) {
            break;
        }
        x = candidate;
        r = r_new;
        rel = rel_new;
    }
    stats.solve_seconds = start.elapsed().as_secs_f64();
    stats.rel_residual = rel;
    if !rel.is_finite() || x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularMatrix("factorisation produced non-finite values".into()));
    }
    if rel > SINGULAR_RESIDUAL {
        return Err(Error::SingularMatrix(format!("relative residual {rel:.3e} after refinement")));
    }
    Ok((x, stats))
}
