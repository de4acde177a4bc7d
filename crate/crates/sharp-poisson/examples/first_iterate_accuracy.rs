//! Why iterate at all? Refinement study of the first (uncorrected) solve
//! against the converged one.
//!
//! The first solve uses only the normal-direction jump data along each
//! crossed edge — the classical sharp-interface treatment. It is O(h) in
//! the max norm. The outer iteration feeds tangential information back into
//! the right-hand side through the recovered interface values and restores
//! O(h²) without touching the (symmetric) matrix.
//!
//! Run with `cargo run --release --example first_iterate_accuracy`.

use sharp_poisson::harness::{fit_slope, solve_example};
use sharp_poisson::iterate::{IterationConfig, Stopping};
use sharp_poisson::linsolve::SolverConfig;

fn main() {
    let ns = [21usize, 41, 81, 161];
    let mut first = Vec::new();
    let mut converged = Vec::new();
    println!("example 2d-1: circular interface, unit β, jump-driven solution");
    println!();
    println!("    n    first-solve L2    converged L2");
    for &n in &ns {
        let one = IterationConfig { stopping: Stopping::Fixed(1), ..Default::default() };
        let f = solve_example("2d-1", n, &one, &SolverConfig::default()).expect("first solve");
        let c = solve_example("2d-1", n, &IterationConfig::default(), &SolverConfig::default())
            .expect("converged solve");
        println!("{n:>5}    {:>14.3e}    {:>12.3e}", f.err_l2, c.err_l2);
        first.push(f.err_l2);
        converged.push(c.err_l2);
    }
    println!();
    println!("fitted order, first solve : {:.2}", fit_slope(&ns, &first));
    println!("fitted order, converged   : {:.2}", fit_slope(&ns, &converged));
}
