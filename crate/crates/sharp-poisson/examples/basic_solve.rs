//! Minimal entry point: solve one catalog problem and report its errors.
//!
//! Run with `cargo run --release --example basic_solve`.

use sharp_poisson::harness::solve_example;
use sharp_poisson::iterate::IterationConfig;
use sharp_poisson::linsolve::SolverConfig;

fn main() {
    // "2d-1": a circular interface in the unit square with unit β on both
    // sides and prescribed solution/flux jumps. Defaults: relaxed outer
    // iteration, standard stopping, diagonal-preconditioned CG inside.
    let out = solve_example("2d-1", 81, &IterationConfig::default(), &SolverConfig::default())
        .expect("catalog solve");

    println!("example        : {}", out.example);
    println!("grid           : {}^2 nodes, h = {:.5}", out.n, out.h);
    println!(
        "interface      : {} edge crossings, {} corrected matrix rows",
        out.system.geometry().crossings.len(),
        out.system.rows.len()
    );
    println!("outer iterations: {}", out.iters);
    println!("CG iterations  : {} (all outer solves combined)", out.iteration.total_inner);
    println!("error (L2)     : {:.3e}", out.err_l2);
    println!("error (max)    : {:.3e}", out.err_linf);
    println!("wall time      : {:.3} s", out.seconds);
}
