//! Error type shared across the library.

use thiserror::Error;

/// Errors that can arise while building geometry, assembling the discrete
/// system, or running the solver.
#[derive(Debug, Error)]
pub enum Error {
    /// The grid description is invalid (too few points, inconsistent extents).
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// The interface crosses a single cell edge more than once, or cuts two
    /// opposite faces of the same node so closely that the stencil cannot
    /// separate them. Refining the grid resolves this.
    #[error("interface under-resolved at h = {h}: {detail}")]
    UnderResolved { h: f64, detail: String },

    /// The 3×3 reconstruction system for the jump-decomposition coefficients
    /// is singular (normal and measured slice tangents are not independent).
    #[error("degenerate tangent basis: {0}")]
    DegenerateBasis(String),

    /// The conjugate-gradient solver failed to reach the requested tolerance.
    #[error("linear solve failed to converge: residual {residual:.3e} after {iters} iterations")]
    LinearSolve { residual: f64, iters: usize },

    /// The assembled matrix lost exact symmetry (indicates an assembly bug).
    #[error("matrix is not symmetric: rows {i} and {j} disagree ({aij} vs {aji})")]
    Asymmetric { i: usize, j: usize, aij: f64, aji: f64 },

    /// The outer iteration exceeded its iteration cap without satisfying the
    /// stopping test.
    #[error("outer iteration failed to converge within {max_outer} iterations (u_d = {u_diff:.3e}, rhs_d = {rhs_diff:.3e})")]
    OuterIteration { max_outer: usize, u_diff: f64, rhs_diff: f64 },

    /// A named example was requested that the catalog does not contain.
    #[error("unknown example '{0}'")]
    UnknownExample(String),

    /// Invalid runtime configuration (bad stopping rule, bad grid list, ...).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Wrapper for I/O failures in the harness (writing CSV/JSON outputs).
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
