//! The same machinery in 3D: solve across a torus-shaped interface.
//!
//! Nothing changes in the API — the grid dimension comes from the catalog
//! entry, the interface-chain construction picks two tangential directions
//! per crossing instead of one, and the linear algebra scales to the
//! 7-point stencil.
//!
//! Run with `cargo run --release --example three_dimensional`.

use sharp_poisson::harness::solve_example;
use sharp_poisson::iterate::IterationConfig;
use sharp_poisson::linsolve::SolverConfig;

fn main() {
    // "3d-2": torus interface, variable β, exponential two-sided solution.
    let out = solve_example("3d-2", 41, &IterationConfig::default(), &SolverConfig::default())
        .expect("3d solve");

    println!("example        : {}", out.example);
    println!("grid           : {}^3 nodes ({} unknowns)", out.n, out.system.n_unknowns());
    println!(
        "interface      : {} edge crossings, {} corrected rows",
        out.system.geometry().crossings.len(),
        out.system.rows.len()
    );
    println!("outer iterations: {}", out.iters);
    println!("error (L2)     : {:.3e}", out.err_l2);
    println!("error (max)    : {:.3e}", out.err_linf);
    println!("wall time      : {:.3} s", out.seconds);
}
