//! Integration layer shared by the examples and the CLI: one-call solves of
//! catalog problems, error measurement against exact solutions, grid
//! refinement studies with fitted convergence orders, and the flat-file
//! output formats (CSV/JSON studies, JSON-lines traces, matrix dumps).

pub mod cli;

use crate::assembly::{assemble, DiscreteSystem};
use crate::error::{Error, Result};
use crate::geometry;
use crate::iterate::{self, IterationConfig, IterationOutcome, TraceRecord};
use crate::linsolve::{CsrMatrix, SolverConfig};
use crate::problem::{catalog, ExampleId, ProblemSpec};
use serde::Serialize;
use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

/// Build the interface geometry and assemble the discrete system for a
/// problem.
pub fn build_system(problem: Arc<ProblemSpec>) -> Result<DiscreteSystem> {
    let geom = Arc::new(geometry::build(&problem.grid, &problem.level_set)?);
    assemble(problem, geom)
}

/// Scaled-L2 and max-norm errors of an interior solution against the
/// problem's exact solution: err_l2 = √(h^d Σ e²) over interior nodes.
pub fn measure_error(system: &DiscreteSystem, interior: &[f64]) -> Result<(f64, f64)> {
    let grid = *system.grid();
    let exact = system.exact_full().ok_or_else(|| {
        Error::InvalidConfig("problem has no exact solution to measure against".into())
    })?;
    let full = system.full_vector(interior);
    let hd = grid.h().powi(grid.dim() as i32);
    let mut sum = 0.0;
    let mut linf = 0.0f64;
    for idx in grid.iter_indices() {
        if !grid.is_interior(idx) {
            continue;
        }
        let e = (full[grid.flat(idx)] - exact[grid.flat(idx)]).abs();
        sum += e * e;
        linf = linf.max(e);
    }
    Ok(((hd * sum).sqrt(), linf))
}

/// Everything produced by one solve.
pub struct SolveOutcome {
    pub example: String,
    pub n: usize,
    pub h: f64,
    /// NaN when the problem has no exact solution.
    pub err_l2: f64,
    pub err_linf: f64,
    /// Outer iterations (= linear solves).
    pub iters: usize,
    pub seconds: f64,
    pub iteration: IterationOutcome,
    pub system: DiscreteSystem,
}

/// Solve a catalog example by name at one resolution.
pub fn solve_example(
    name: &str,
    n: usize,
    iter_cfg: &IterationConfig,
    solver_cfg: &SolverConfig,
) -> Result<SolveOutcome> {
    let id: ExampleId = name.parse()?;
    let problem = Arc::new(catalog::make_example(id, n)?);
    solve_problem(name.to_string(), problem, iter_cfg, solver_cfg)
}

/// Solve an arbitrary problem through the full pipeline.
pub fn solve_problem(
    label: String,
    problem: Arc<ProblemSpec>,
    iter_cfg: &IterationConfig,
    solver_cfg: &SolverConfig,
) -> Result<SolveOutcome> {
    let start = Instant::now();
    let system = build_system(problem)?;
    let iteration = iterate::run(&system, solver_cfg, iter_cfg)?;
    let seconds = start.elapsed().as_secs_f64();
    let (err_l2, err_linf) = if system.exact_full().is_some() {
        measure_error(&system, &iteration.interior)?
    } else {
        (f64::NAN, f64::NAN)
    };
    Ok(SolveOutcome {
        example: label,
        n: system.grid().n(),
        h: system.grid().h(),
        err_l2,
        err_linf,
        iters: iteration.iters,
        seconds,
        iteration,
        system,
    })
}

/// One resolution of a refinement study.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    pub err_l2: f64,
    pub err_linf: f64,
    pub iters: usize,
    pub seconds: f64,
    pub converged: bool,
}

/// A grid-refinement study with fitted convergence orders.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceStudy {
    pub example: String,
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares order of err_l2 against N (positive = converging).
    pub slope_l2: f64,
    pub slope_linf: f64,
    /// True when some run failed to converge; slopes are then fitted over
    /// the converged rows only.
    pub degraded: bool,
}

/// Least-squares slope of log(err) against log(N), reported positive for
/// decreasing errors. Needs at least 3 points; returns NaN otherwise.
pub fn fit_slope(ns: &[usize], errs: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .zip(errs)
        .filter(|(_, e)| e.is_finite())
        .map(|(n, e)| ((*n as f64).ln(), e.max(1e-300).ln()))
        .collect();
    if pts.len() < 3 {
        return f64::NAN;
    }
    let m = pts.len() as f64;
    let xm = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let ym = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let num: f64 = pts.iter().map(|p| (p.0 - xm) * (p.1 - ym)).sum();
    let den: f64 = pts.iter().map(|p| (p.0 - xm) * (p.0 - xm)).sum();
    -(num / den)
}

/// Run one example over several resolutions and fit convergence orders.
/// Resolutions must be ascending and at least three. A run that exhausts the
/// outer iteration yields an unconverged row (errors NaN) instead of
/// aborting the study.
pub fn run_convergence(
    name: &str,
    ns: &[usize],
    iter_cfg: &IterationConfig,
    solver_cfg: &SolverConfig,
) -> Result<ConvergenceStudy> {
    if ns.len() < 3 {
        return Err(Error::InvalidConfig(format!(
            "a convergence study needs at least 3 resolutions, got {}",
            ns.len()
        )));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig(
            "resolutions must be strictly ascending".into(),
        ));
    }
    let id: ExampleId = name.parse()?;
    let mut rows = Vec::with_capacity(ns.len());
    let mut degraded = false;
    for &n in ns {
        let problem = Arc::new(catalog::make_example(id, n)?);
        let h = problem.grid.h();
        let start = Instant::now();
        match solve_problem(name.to_string(), problem, iter_cfg, solver_cfg) {
            Ok(out) => rows.push(ConvergenceRow {
                n,
                h,
                err_l2: out.err_l2,
                err_linf: out.err_linf,
                iters: out.iters,
                seconds: out.seconds,
                converged: true,
            }),
            Err(Error::OuterIteration { max_outer, .. }) => {
                degraded = true;
                rows.push(ConvergenceRow {
                    n,
                    h,
                    err_l2: f64::NAN,
                    err_linf: f64::NAN,
                    iters: max_outer,
                    seconds: start.elapsed().as_secs_f64(),
                    converged: false,
                });
            }
            Err(other) => return Err(other),
        }
    }
    let fit_ns: Vec<usize> = rows.iter().filter(|r| r.converged).map(|r| r.n).collect();
    let l2: Vec<f64> = rows.iter().filter(|r| r.converged).map(|r| r.err_l2).collect();
    let linf: Vec<f64> = rows.iter().filter(|r| r.converged).map(|r| r.err_linf).collect();
    Ok(ConvergenceStudy {
        example: name.to_string(),
        rows,
        slope_l2: fit_slope(&fit_ns, &l2),
        slope_linf: fit_slope(&fit_ns, &linf),
        degraded,
    })
}

impl ConvergenceStudy {
    /// CSV with the schema `n,h,err_l2,err_linf,iters,seconds` and a
    /// trailing comment carrying the fitted orders.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,h,err_l2,err_linf,iters,seconds\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.n, r.h, r.err_l2, r.err_linf, r.iters, r.seconds
            ));
        }
        out.push_str(&format!(
            "# slope_l2={}, slope_linf={}\n",
            self.slope_l2, self.slope_linf
        ));
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("study serializes");
        s.push('\n');
        s
    }
}

/// Write an iteration trace as JSON lines, one record per outer step.
pub fn write_trace(records: &[TraceRecord], w: &mut impl Write) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut *w, r)?;
        writeln!(w)?;
    }
    Ok(())
}

/// Write a matrix as `row col value` lines, full double precision.
pub fn dump_matrix(m: &CsrMatrix, w: &mut impl Write) -> std::io::Result<()> {
    for (r, c, v) in m.entries() {
        writeln!(w, "{r} {c} {v:.16e}")?;
    }
    Ok(())
}
