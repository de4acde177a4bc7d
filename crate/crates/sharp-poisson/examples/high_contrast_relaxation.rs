//! Watch the relaxed outer iteration tame a 50:1 coefficient contrast.
//!
//! With β⁺/β⁻ = 0.02 the plain fixed-point update (take every corrected
//! solve as the next iterate) can overshoot; the relaxed update blends each
//! corrected solve with the previous iterate using a step-limited factor α,
//! which keeps the step sizes strictly decreasing.
//!
//! Run with `cargo run --release --example high_contrast_relaxation`.

use sharp_poisson::harness::solve_example;
use sharp_poisson::iterate::IterationConfig;
use sharp_poisson::linsolve::SolverConfig;

fn main() {
    let out = solve_example("2d-4a", 41, &IterationConfig::default(), &SolverConfig::default())
        .expect("high-contrast solve");

    println!("example {} on a {}^2 grid (β⁺ : β⁻ = 0.02 : 1)", out.example, out.n);
    println!();
    println!("  k    |u_k - u_(k-1)|     |F_k - F_(k-1)|     alpha    CG iters");
    let rows = &out.iteration.trace;
    let show = |i: usize| {
        let t = &rows[i];
        println!(
            "{:4}   {:>12}   {:>17}   {:>7}   {:6}",
            t.k,
            t.u_d.map_or("--".into(), |v| format!("{v:.6e}")),
            t.f_d.map_or("--".into(), |v| format!("{v:.6e}")),
            t.alpha.map_or("--".into(), |v| format!("{v:.4}")),
            t.inner_iters
        );
    };
    // First solves, an ellipsis, and the tail of the iteration.
    let head = rows.len().min(10);
    for i in 0..head {
        show(i);
    }
    if rows.len() > head + 3 {
        println!("  ...");
    }
    for i in head.max(rows.len().saturating_sub(3))..rows.len() {
        show(i);
    }
    println!();
    println!("converged in {} outer iterations", out.iters);
    println!("error (L2) {:.3e}, error (max) {:.3e}", out.err_l2, out.err_linf);
}
