//! Shared helpers for the integration tests: independently coded reference
//! discretizations and high-order numerical differentiation. Nothing in this
//! module calls into the library's assembly path, so comparisons against it
//! are genuine cross-checks.
#![allow(dead_code)]

use sharp_poisson::geometry::Point;
use std::collections::HashMap;

/// Centered difference of `f` along `axis` with step `d`.
fn central(f: &dyn Fn(Point) -> f64, p: Point, axis: usize, d: f64) -> f64 {
    let mut hi = p;
    let mut lo = p;
    hi[axis] += d;
    lo[axis] -= d;
    (f(hi) - f(lo)) / (2.0 * d)
}

/// Fourth-order partial derivative of `f` along `axis`: Richardson
/// extrapolation of centered differences at steps d and d/2.
pub fn richardson_partial(f: &dyn Fn(Point) -> f64, p: Point, axis: usize, d: f64) -> f64 {
    (4.0 * central(f, p, axis, 0.5 * d) - central(f, p, axis, d)) / 3.0
}

/// One flux second difference (β u_e)_e at `p` with step `d`, using β at the
/// half-step midpoints.
fn flux_dd(
    beta: &dyn Fn(Point) -> f64,
    u: &dyn Fn(Point) -> f64,
    p: Point,
    axis: usize,
    d: f64,
) -> f64 {
    let mut hi = p;
    let mut lo = p;
    let mut mid_hi = p;
    let mut mid_lo = p;
    hi[axis] += d;
    lo[axis] -= d;
    mid_hi[axis] += 0.5 * d;
    mid_lo[axis] -= 0.5 * d;
    (beta(mid_hi) * (u(hi) - u(p)) - beta(mid_lo) * (u(p) - u(lo))) / (d * d)
}

/// Fourth-order numerical Σ_e (β u_e)_e over the first `dim` axes.
pub fn richardson_flux_divergence(
    beta: &dyn Fn(Point) -> f64,
    u: &dyn Fn(Point) -> f64,
    p: Point,
    dim: usize,
    d: f64,
) -> f64 {
    (0..dim)
        .map(|axis| {
            (4.0 * flux_dd(beta, u, p, axis, 0.5 * d) - flux_dd(beta, u, p, axis, d)) / 3.0
        })
        .sum()
}

/// An independently coded classical 5-point discretization of
/// −(β uₓ)ₓ − (β u_y)_y = −f on [lo,hi]² with Dirichlet data g: the textbook
/// scheme with β sampled at edge midpoints and boundary values eliminated
/// into the right-hand side. Unknowns are interior nodes ordered x-fastest.
pub struct Classical2d {
    pub n_unknowns: usize,
    pub entries: HashMap<(usize, usize), f64>,
    pub rhs: Vec<f64>,
}

pub fn classical_poisson_2d(
    n: usize,
    lo: f64,
    hi: f64,
    beta: &dyn Fn(Point) -> f64,
    f: &dyn Fn(Point) -> f64,
    g: &dyn Fn(Point) -> f64,
) -> Classical2d {
    let h = (hi - lo) / (n - 1) as f64;
    let h2 = h * h;
    let m = n - 2;
    let coord = |i: usize| lo + i as f64 * h;
    let pt = |i: usize, j: usize| -> Point { [coord(i), coord(j), 0.0] };
    let unk = |i: usize, j: usize| (i - 1) + m * (j - 1);
    let mut entries: HashMap<(usize, usize), f64> = HashMap::new();
    let mut rhs = vec![0.0; m * m];
    for j in 1..=m {
        for i in 1..=m {
            let k = unk(i, j);
            let p = pt(i, j);
            let mut diag = 0.0;
            let neighbors: [(usize, usize); 4] =
                [(i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)];
            for (ni, nj) in neighbors {
                let q = pt(ni, nj);
                let mid = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0, 0.0];
                let w = beta(mid) / h2;
                diag += w;
                let interior = ni >= 1 && ni <= m && nj >= 1 && nj <= m;
                if interior {
                    *entries.entry((k, unk(ni, nj))).or_insert(0.0) -= w;
                } else {
                    rhs[k] += w * g(q);
                }
            }
            *entries.entry((k, k)).or_insert(0.0) += diag;
            rhs[k] -= f(p);
        }
    }
    Classical2d { n_unknowns: m * m, entries, rhs }
}

/// Dense Cholesky solve of a symmetric positive definite system given as an
/// entry map. Deliberately naive — it is the independent reference path.
pub fn dense_cholesky_solve(
    n: usize,
    entries: &HashMap<(usize, usize), f64>,
    rhs: &[f64],
) -> Vec<f64> {
    let mut a = vec![0.0f64; n * n];
    for (&(r, c), &v) in entries {
        a[r * n + c] = v;
    }
    // In-place lower-triangular factor A = L·Lᵀ.
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        assert!(d > 0.0, "reference matrix is not positive definite at pivot {j}");
        let d = d.sqrt();
        a[j * n + j] = d;
        for i in (j + 1)..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / d;
        }
    }
    // L·y = rhs, then Lᵀ·x = y.
    let mut x = rhs.to_vec();
    for i in 0..n {
        let mut s = x[i];
        for k in 0..i {
            s -= a[i * n + k] * x[k];
        }
        x[i] = s / a[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for k in (i + 1)..n {
            s -= a[k * n + i] * x[k];
        }
        x[i] = s / a[i * n + i];
    }
    x
}
