//! Sparse symmetric positive definite linear algebra: compressed sparse
//! rows and a Jacobi-preconditioned conjugate-gradient solver.
//!
//! The outer iteration re-solves the same matrix with updated right-hand
//! sides, so `solve_spd` accepts a warm start and the symmetry check is
//! cached per matrix.

use crate::error::{Error, Result};
use std::sync::atomic::{AtomicBool, Ordering};

/// Compressed-sparse-row matrix with sorted column indices per row.
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    symmetry_checked: AtomicBool,
}

impl CsrMatrix {
    /// Build from (row, col, value) triplets; duplicate positions are summed.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            debug_assert!(r < n && c < n);
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] = cols.len();
                last = Some((r, c));
            }
        }
        // Make row_ptr cumulative: empty rows inherit the previous bound.
        for r in 1..=n {
            if row_ptr[r] < row_ptr[r - 1] {
                row_ptr[r] = row_ptr[r - 1];
            }
        }
        CsrMatrix { n, row_ptr, cols, vals, symmetry_checked: AtomicBool::new(false) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    /// y = A·x.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for r in 0..self.n {
            let mut acc = 0.0;
            for idx in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[idx] * x[self.cols[idx]];
            }
            y[r] = acc;
        }
    }

    /// Stored entry at (r, c), if any.
    pub fn get(&self, r: usize, c: usize) -> Option<f64> {
        let lo = self.row_ptr[r];
        let hi = self.row_ptr[r + 1];
        let row_cols = &self.cols[lo..hi];
        row_cols.binary_search(&c).ok().map(|k| self.vals[lo + k])
    }

    /// Iterate stored entries as (row, col, value).
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |idx| (r, self.cols[idx], self.vals[idx]))
        })
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|r| self.get(r, r).unwrap_or(0.0)).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n)
            .map(|r| self.vals[self.row_ptr[r]..self.row_ptr[r + 1]].iter().sum())
            .collect()
    }

    /// Verify that every stored (i,j) has a matching (j,i) entry that is
    /// equal bit-for-bit.
    pub fn check_symmetric(&self) -> Result<()> {
        for (i, j, v) in self.entries() {
            if j < i {
                continue; // each unordered pair checked once, from above
            }
            let vt = self.get(j, i);
            if vt != Some(v) {
                return Err(Error::Asymmetric {
                    i,
                    j,
                    aij: v,
                    aji: vt.unwrap_or(f64::NAN),
                });
            }
        }
        Ok(())
    }
}

/// Choice of preconditioner for the conjugate-gradient solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Preconditioner {
    None,
    #[default]
    Diagonal,
}

/// Linear-solver settings.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Relative residual tolerance ‖A·x − b‖₂ ≤ rel_tol·‖b‖₂.
    pub rel_tol: f64,
    /// Iteration cap; `None` means 10·n_unknowns.
    pub max_inner: Option<usize>,
    pub preconditioner: Preconditioner,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { rel_tol: 1e-10, max_inner: None, preconditioner: Preconditioner::Diagonal }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "rel_tol must lie in (0, 1), got {}",
                self.rel_tol
            )));
        }
        if self.max_inner == Some(0) {
            return Err(Error::InvalidConfig("max_inner must be at least 1".into()));
        }
        Ok(())
    }
}

/// Convergence report for one solve.
#[derive(Clone, Copy, Debug)]
pub struct SolveStats {
    pub iters: usize,
    /// Final relative residual ‖A·x − b‖₂/‖b‖₂.
    pub rel_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Solve A·x = b for symmetric positive definite A by preconditioned
/// conjugate gradients. `warm_start` seeds the initial iterate; the outer
/// iteration's RHS changes little between calls, making this effective.
pub fn solve_spd(
    a: &CsrMatrix,
    b: &[f64],
    cfg: &SolverConfig,
    warm_start: Option<&[f64]>,
) -> Result<(Vec<f64>, SolveStats)> {
    cfg.validate()?;
    let n = a.n();
    if b.len() != n {
        return Err(Error::InvalidConfig(format!(
            "rhs length {} does not match matrix dimension {n}",
            b.len()
        )));
    }
    if !a.symmetry_checked.load(Ordering::Relaxed) {
        a.check_symmetric()?;
        a.symmetry_checked.store(true, Ordering::Relaxed);
    }
    let bnorm = norm2(b);
    if bnorm == 0.0 {
        return Ok((vec![0.0; n], SolveStats { iters: 0, rel_residual: 0.0 }));
    }
    let inv_diag: Option<Vec<f64>> = match cfg.preconditioner {
        Preconditioner::None => None,
        Preconditioner::Diagonal => {
            let d = a.diagonal();
            if d.iter().any(|&v| !(v > 0.0)) {
                return Err(Error::InvalidConfig(
                    "diagonal preconditioner requires strictly positive diagonal".into(),
                ));
            }
            Some(d.into_iter().map(|v| 1.0 / v).collect())
        }
    };
    let apply_precond = |r: &[f64], z: &mut [f64]| match &inv_diag {
        None => z.copy_from_slice(r),
        Some(d) => {
            for i in 0..r.len() {
                z[i] = d[i] * r[i];
            }
        }
    };

    let mut x = match warm_start {
        Some(w) if w.len() == n => w.to_vec(),
        _ => vec![0.0; n],
    };
    let mut r = vec![0.0; n];
    a.matvec(&x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let mut z = vec![0.0; n];
    apply_precond(&r, &mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut q = vec![0.0; n];
    let cap = cfg.max_inner.unwrap_or(10 * n);
    let mut iters = 0usize;
    let tol = cfg.rel_tol * bnorm;
    while norm2(&r) > tol {
        if iters >= cap {
            return Err(Error::LinearSolve { residual: norm2(&r) / bnorm, iters });
        }
        a.matvec(&p, &mut q);
        let pq = dot(&p, &q);
        if !(pq > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "matrix is not positive definite: p·Ap = {pq:.3e} at iteration {iters}"
            )));
        }
        let alpha = rz / pq;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        apply_precond(&r, &mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        iters += 1;
    }
    let rel = norm2(&r) / bnorm;
    Ok((x, SolveStats { iters, rel_residual: rel }))
}
