//! Define a problem from scratch — no catalog involved.
//!
//! Pieces a user supplies:
//!   1. a level set whose zero contour is the interface (here an ellipse),
//!   2. β and f on each side,
//!   3. the interface jumps [u] = a and [βuₙ] = b (here derived
//!      analytically from a manufactured two-sided solution),
//!   4. Dirichlet data on the outer box.
//!
//! Run with `cargo run --release --example custom_problem`.

use sharp_poisson::geometry::{Grid, LevelSet, Point};
use sharp_poisson::harness::{fit_slope, solve_problem};
use sharp_poisson::iterate::IterationConfig;
use sharp_poisson::linsolve::SolverConfig;
use sharp_poisson::problem::{
    jumps_from_exact, PiecewiseField, PiecewiseGradient, ProblemSpec,
};
use std::sync::Arc;

// Ellipse with semi-axes 0.3 and 0.2 centered in the unit square;
// φ < 0 inside, φ > 0 outside (the whole outer boundary is outside).
fn phi(p: Point) -> f64 {
    let (x, y) = (p[0] - 0.5, p[1] - 0.5);
    (x / 0.3).powi(2) + (y / 0.2).powi(2) - 1.0
}

fn grad_phi(p: Point) -> Point {
    let (x, y) = (p[0] - 0.5, p[1] - 0.5);
    [2.0 * x / 0.09, 2.0 * y / 0.04, 0.0]
}

// Manufactured solution: a paraboloid inside, a wave outside.
fn u_minus(p: Point) -> f64 {
    p[0] * p[0] + p[1] * p[1]
}

fn u_plus(p: Point) -> f64 {
    (2.0 * p[0]).sin() * (2.0 * p[1]).cos()
}

fn grad_u_minus(p: Point) -> Point {
    [2.0 * p[0], 2.0 * p[1], 0.0]
}

fn grad_u_plus(p: Point) -> Point {
    let (x, y) = (p[0], p[1]);
    [2.0 * (2.0 * x).cos() * (2.0 * y).cos(), -2.0 * (2.0 * x).sin() * (2.0 * y).sin(), 0.0]
}

// Variable coefficient inside, constant outside.
fn beta_minus(p: Point) -> f64 {
    2.0 + p[0].cos() * p[1].sin()
}

fn beta_plus(_p: Point) -> f64 {
    10.0
}

// Sources chosen so the manufactured solution solves ∇·(β∇u) = f exactly:
// f = β Δu + ∇β·∇u on each side.
fn f_minus(p: Point) -> f64 {
    let (x, y) = (p[0], p[1]);
    4.0 * beta_minus(p) + (-x.sin() * y.sin()) * (2.0 * x) + (x.cos() * y.cos()) * (2.0 * y)
}

fn f_plus(p: Point) -> f64 {
    -80.0 * (2.0 * p[0]).sin() * (2.0 * p[1]).cos()
}

fn build(n: usize) -> ProblemSpec {
    let grid = Grid::new(2, n, [0.0; 3], [1.0; 3]).expect("grid");
    let level_set = LevelSet::with_gradient(phi, grad_phi);
    let beta = PiecewiseField::new(beta_minus, beta_plus);
    let jumps = jumps_from_exact(
        &level_set,
        &beta,
        Arc::new(u_minus),
        Arc::new(u_plus),
        Arc::new(grad_u_minus),
        Arc::new(grad_u_plus),
    );
    ProblemSpec {
        grid,
        level_set,
        beta,
        f: PiecewiseField::new(f_minus, f_plus),
        jumps,
        dirichlet: Arc::new(u_plus), // the outer boundary lies in φ > 0
        exact: Some(PiecewiseField::new(u_minus, u_plus)),
        exact_gradient: Some(PiecewiseGradient::new(grad_u_minus, grad_u_plus)),
    }
}

fn main() {
    let ns = [21usize, 41, 81];
    let mut errs = Vec::new();
    println!("ellipse interface, manufactured solution, β contrast ~3 : 10");
    println!();
    println!("    n    error (L2)    error (max)    outer iters");
    for &n in &ns {
        let out = solve_problem(
            format!("ellipse-{n}"),
            Arc::new(build(n)),
            &IterationConfig::default(),
            &SolverConfig::default(),
        )
        .expect("solve");
        println!("{n:>5}    {:>10.3e}    {:>11.3e}    {:>11}", out.err_l2, out.err_linf, out.iters);
        errs.push(out.err_l2);
    }
    println!();
    println!("fitted order: {:.2}", fit_slope(&ns, &errs));
}
