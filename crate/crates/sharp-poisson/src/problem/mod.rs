//! Problem descriptions: side-specific coefficient and source fields, jump
//! data on the interface, boundary values, optional exact solutions, and a
//! catalog of analytic benchmark problems.

pub mod catalog;

pub use catalog::{make_example, ExampleId};

use crate::error::{Error, Result};
use crate::geometry::{dot, norm, Grid, LevelSet, Point};
use std::sync::Arc;

/// A scalar field of position.
pub type ScalarFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;

/// A vector field of position (used for analytic gradients).
pub type GradFn = Arc<dyn Fn(Point) -> Point + Send + Sync>;

/// A field with independent branches on the two sides of the interface.
/// Both branches must be total functions: the scheme evaluates β at
/// half-segment midpoints and f at interface points, which can sit slightly
/// off-side of where the branch is "native".
#[derive(Clone)]
pub struct PiecewiseField {
    pub minus: ScalarFn,
    pub plus: ScalarFn,
}

impl PiecewiseField {
    pub fn new(
        minus: impl Fn(Point) -> f64 + Send + Sync + 'static,
        plus: impl Fn(Point) -> f64 + Send + Sync + 'static,
    ) -> Self {
        PiecewiseField { minus: Arc::new(minus), plus: Arc::new(plus) }
    }

    pub fn constant(minus: f64, plus: f64) -> Self {
        PiecewiseField::new(move |_| minus, move |_| plus)
    }

    /// Evaluate the branch selected by a classification sign.
    pub fn eval(&self, sign: i8, p: Point) -> f64 {
        if sign < 0 {
            (self.minus)(p)
        } else {
            (self.plus)(p)
        }
    }
}

/// Prescribed interface jumps: a = [u] = u⁺ − u⁻ and b = [βuₙ] =
/// β⁺uₙ⁺ − β⁻uₙ⁻, both as functions on Γ.
#[derive(Clone)]
pub struct JumpData {
    pub a: ScalarFn,
    pub b: ScalarFn,
}

impl JumpData {
    pub fn new(
        a: impl Fn(Point) -> f64 + Send + Sync + 'static,
        b: impl Fn(Point) -> f64 + Send + Sync + 'static,
    ) -> Self {
        JumpData { a: Arc::new(a), b: Arc::new(b) }
    }

    /// Homogeneous jumps (continuous solution and flux).
    pub fn none() -> Self {
        JumpData::new(|_| 0.0, |_| 0.0)
    }
}

/// Gradient of a piecewise-defined field, one branch per side of the
/// interface.
#[derive(Clone)]
pub struct PiecewiseGradient {
    pub minus: GradFn,
    pub plus: GradFn,
}

impl PiecewiseGradient {
    pub fn new(
        minus: impl Fn(Point) -> Point + Send + Sync + 'static,
        plus: impl Fn(Point) -> Point + Send + Sync + 'static,
    ) -> Self {
        PiecewiseGradient { minus: Arc::new(minus), plus: Arc::new(plus) }
    }

    pub fn eval(&self, sign: i8, p: Point) -> Point {
        if sign < 0 {
            (self.minus)(p)
        } else {
            (self.plus)(p)
        }
    }
}

/// A complete PDE instance: solve (βuₓ)ₓ + … = f on the grid's box, with
/// jumps [u] = a and [βuₙ] = b across the zero set of `level_set`, and
/// Dirichlet data on the outer boundary.
#[derive(Clone)]
pub struct ProblemSpec {
    pub grid: Grid,
    pub level_set: LevelSet,
    pub beta: PiecewiseField,
    pub f: PiecewiseField,
    pub jumps: JumpData,
    pub dirichlet: ScalarFn,
    /// Analytic solution, when known — used for error measurement and as
    /// the source of boundary data in the catalog.
    pub exact: Option<PiecewiseField>,
    /// Gradient of the analytic solution — enables reference interface data
    /// (exact tangential flux jumps) in diagnostics.
    pub exact_gradient: Option<PiecewiseGradient>,
}

impl ProblemSpec {
    pub fn beta_at(&self, sign: i8, p: Point) -> f64 {
        self.beta.eval(sign, p)
    }

    pub fn f_at(&self, sign: i8, p: Point) -> f64 {
        self.f.eval(sign, p)
    }

    pub fn dirichlet_at(&self, p: Point) -> f64 {
        (self.dirichlet)(p)
    }

    pub fn exact_at(&self, sign: i8, p: Point) -> Option<f64> {
        self.exact.as_ref().map(|e| e.eval(sign, p))
    }

    /// Check that `p` lies on Γ within the root tolerance (scaled by the
    /// local gradient magnitude so steep level sets are not rejected).
    fn check_on_interface(&self, p: Point) -> Result<()> {
        let phi = self.level_set.phi(p);
        let g = self.level_set.gradient(p, 0.5 * self.grid.h());
        let scale = norm(g).max(1.0);
        let tol = 1e-4 * self.grid.h() * scale;
        if phi.abs() > tol {
            return Err(Error::InvalidConfig(format!(
                "point ({}, {}, {}) is off the interface: |phi| = {:.3e} exceeds {:.3e}",
                p[0], p[1], p[2], phi.abs(), tol
            )));
        }
        Ok(())
    }

    /// Solution jump a = [u] at an interface point.
    pub fn eval_jump_a(&self, p: Point) -> Result<f64> {
        self.check_on_interface(p)?;
        Ok((self.jumps.a)(p))
    }

    /// Flux jump b = [βuₙ] at an interface point.
    pub fn eval_jump_b(&self, p: Point) -> Result<f64> {
        self.check_on_interface(p)?;
        Ok((self.jumps.b)(p))
    }

    /// Jump values without the on-interface check, for callers that already
    /// hold geometry-produced interface points.
    pub(crate) fn jump_a_unchecked(&self, p: Point) -> f64 {
        (self.jumps.a)(p)
    }

    pub(crate) fn jump_b_unchecked(&self, p: Point) -> f64 {
        (self.jumps.b)(p)
    }
}

/// Build jump data analytically from exact side solutions, side gradients,
/// and β branches: a = u⁺ − u⁻ and b = β⁺∇u⁺·n̂ − β⁻∇u⁻·n̂ with the
/// level-set normal.
pub fn jumps_from_exact(
    level_set: &LevelSet,
    beta: &PiecewiseField,
    u_minus: ScalarFn,
    u_plus: ScalarFn,
    grad_minus: GradFn,
    grad_plus: GradFn,
) -> JumpData {
    let a = {
        let (um, up) = (u_minus, u_plus);
        move |p: Point| up(p) - um(p)
    };
    let b = {
        let ls = level_set.clone();
        let (bm, bp) = (beta.minus.clone(), beta.plus.clone());
        move |p: Point| {
            let n = ls
                .normal(p, 1e-6)
                .expect("level-set normal must exist on the interface");
            bp(p) * dot(grad_plus(p), n) - bm(p) * dot(grad_minus(p), n)
        }
    };
    JumpData::new(a, b)
}
