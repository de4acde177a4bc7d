//! Catalog of analytic benchmark problems with known exact solutions,
//! spanning 1D/2D/3D, smooth and star/torus interfaces, and low to high
//! coefficient contrast.

use super::{jumps_from_exact, GradFn, PiecewiseField, PiecewiseGradient, ProblemSpec, ScalarFn};
use crate::error::{Error, Result};
use crate::geometry::{Grid, LevelSet, Point};
use std::sync::Arc;

/// Identifier of a catalog problem.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum ExampleId {
    OneD1,
    TwoD1,
    TwoD2,
    TwoD3,
    TwoD4a,
    TwoD4b,
    ThreeD1,
    ThreeD2,
}

impl ExampleId {
    pub const ALL: [ExampleId; 8] = [
        ExampleId::OneD1,
        ExampleId::TwoD1,
        ExampleId::TwoD2,
        ExampleId::TwoD3,
        ExampleId::TwoD4a,
        ExampleId::TwoD4b,
        ExampleId::ThreeD1,
        ExampleId::ThreeD2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExampleId::OneD1 => "1d-1",
            ExampleId::TwoD1 => "2d-1",
            ExampleId::TwoD2 => "2d-2",
            ExampleId::TwoD3 => "2d-3",
            ExampleId::TwoD4a => "2d-4a",
            ExampleId::TwoD4b => "2d-4b",
            ExampleId::ThreeD1 => "3d-1",
            ExampleId::ThreeD2 => "3d-2",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            ExampleId::OneD1 => 1,
            ExampleId::ThreeD1 | ExampleId::ThreeD2 => 3,
            _ => 2,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ExampleId::OneD1 => "1D rod, piecewise-constant beta 100/200, flux jump at x = 2-sqrt(2)",
            ExampleId::TwoD1 => "circle interface, beta 2/1, solution supported inside the circle",
            ExampleId::TwoD2 => "circle interface, variable beta- = x^2+y^2+1 against beta+ = 1",
            ExampleId::TwoD3 => "five-petal star interface, variable beta on both sides",
            ExampleId::TwoD4a => "circle interface, high contrast beta+/beta- = 0.02",
            ExampleId::TwoD4b => "circle interface, high contrast beta+/beta- = 20",
            ExampleId::ThreeD1 => "sphere interface, variable beta in 3D",
            ExampleId::ThreeD2 => "torus interface, variable beta in 3D",
        }
    }
}

impl std::fmt::Display for ExampleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExampleId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

/// Circle of radius 0.25 centered at (0.5, 0.5).
fn circle() -> LevelSet {
    LevelSet::with_gradient(
        |p| (p[0] - 0.5).powi(2) + (p[1] - 0.5).powi(2) - 0.0625,
        |p| [2.0 * (p[0] - 0.5), 2.0 * (p[1] - 0.5), 0.0],
    )
}

/// Five-petal star r = 0.5 + 0.2·sin(5θ) about (0.02√5, 0.02√5).
fn star() -> LevelSet {
    let c = 0.02 * 5.0_f64.sqrt();
    LevelSet::with_gradient(
        move |p| {
            let (dx, dy) = (p[0] - c, p[1] - c);
            let r = (dx * dx + dy * dy).sqrt();
            let th = dy.atan2(dx);
            r - (0.5 + 0.2 * (5.0 * th).sin())
        },
        move |p| {
            let (dx, dy) = (p[0] - c, p[1] - c);
            let r = (dx * dx + dy * dy).sqrt();
            let th = dy.atan2(dx);
            let dr = (5.0 * th).cos(); // d/dθ of 0.2·sin(5θ)
            let (ct, st) = (th.cos(), th.sin());
            [ct + dr * st / r, st - dr * ct / r, 0.0]
        },
    )
}

/// Sphere of radius 0.25 centered at (0.5, 0.5, 0.5).
fn sphere() -> LevelSet {
    LevelSet::with_gradient(
        |p| {
            (p[0] - 0.5).powi(2) + (p[1] - 0.5).powi(2) + (p[2] - 0.5).powi(2) - 0.0625
        },
        |p| [2.0 * (p[0] - 0.5), 2.0 * (p[1] - 0.5), 2.0 * (p[2] - 0.5)],
    )
}

/// Torus (x²+y²+z²+R²−r²)² = 4R²(x²+y²) with R = 0.501+√2/10, r = 0.251.
fn torus() -> LevelSet {
    let big_r = 0.501 + 2.0_f64.sqrt() / 10.0;
    let small_r = 0.251;
    let phi = move |p: Point| {
        let q = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        let s = q + big_r * big_r - small_r * small_r;
        s * s - 4.0 * big_r * big_r * (p[0] * p[0] + p[1] * p[1])
    };
    let grad = move |p: Point| {
        let q = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        let s = q + big_r * big_r - small_r * small_r;
        let in_plane = q - big_r * big_r - small_r * small_r;
        [4.0 * p[0] * in_plane, 4.0 * p[1] * in_plane, 4.0 * p[2] * s]
    };
    LevelSet::with_gradient(phi, grad)
}

/// Assemble a ProblemSpec from exact side solutions: jump data and boundary
/// values are derived analytically from u± and ∇u±.
#[allow(clippy::too_many_arguments)]
fn spec_from(
    dim: usize,
    n: usize,
    lo: f64,
    hi: f64,
    ls: LevelSet,
    beta: PiecewiseField,
    f: PiecewiseField,
    um: ScalarFn,
    up: ScalarFn,
    gum: GradFn,
    gup: GradFn,
) -> Result<ProblemSpec> {
    let grid = Grid::new(dim, n, [lo; 3], [hi; 3])?;
    let jumps = jumps_from_exact(&ls, &beta, um.clone(), up.clone(), gum.clone(), gup.clone());
    let dirichlet: ScalarFn = {
        let ls = ls.clone();
        let (um, up) = (um.clone(), up.clone());
        Arc::new(move |p: Point| if ls.phi(p) > 0.0 { up(p) } else { um(p) })
    };
    let exact = PiecewiseField { minus: um, plus: up };
    let exact_gradient = PiecewiseGradient { minus: gum, plus: gup };
    Ok(ProblemSpec {
        grid,
        level_set: ls,
        beta,
        f,
        jumps,
        dirichlet,
        exact: Some(exact),
        exact_gradient: Some(exact_gradient),
    })
}

/// Build a catalog problem on an N-point-per-axis grid.
pub fn make_example(id: ExampleId, n: usize) -> Result<ProblemSpec> {
    match id {
        ExampleId::OneD1 => {
            let xi = 2.0 - 2.0_f64.sqrt();
            let ls = LevelSet::with_gradient(move |p| p[0] - xi, |_| [1.0, 0.0, 0.0]);
            let beta = PiecewiseField::constant(100.0, 200.0);
            let f = PiecewiseField::new(
                |p| 100.0 * (-p[0]).exp(),
                |p| 100.0 * (-p[0]).exp() + 200.0,
            );
            let um: ScalarFn = Arc::new(|p: Point| (-p[0]).exp() - 0.3646 * p[0] + 0.4);
            let up: ScalarFn =
                Arc::new(|p: Point| 0.5 * (-p[0]).exp() + 0.5 * p[0] * p[0] + 0.5005 * p[0]);
            let gum: GradFn = Arc::new(|p: Point| [-(-p[0]).exp() - 0.3646, 0.0, 0.0]);
            let gup: GradFn =
                Arc::new(|p: Point| [-0.5 * (-p[0]).exp() + p[0] + 0.5005, 0.0, 0.0]);
            spec_from(1, n, 0.0, 1.0, ls, beta, f, um, up, gum, gup)
        }
        ExampleId::TwoD1 => {
            let beta = PiecewiseField::constant(2.0, 1.0);
            let f = PiecewiseField::new(
                |p: Point| {
                    let r2 = p[0] * p[0] + p[1] * p[1];
                    8.0 * (r2 - 1.0) * (-r2).exp()
                },
                |_| 0.0,
            );
            let um: ScalarFn = Arc::new(|p: Point| (-(p[0] * p[0] + p[1] * p[1])).exp());
            let up: ScalarFn = Arc::new(|_| 0.0);
            let gum: GradFn = Arc::new(|p: Point| {
                let e = (-(p[0] * p[0] + p[1] * p[1])).exp();
                [-2.0 * p[0] * e, -2.0 * p[1] * e, 0.0]
            });
            let gup: GradFn = Arc::new(|_| [0.0, 0.0, 0.0]);
            spec_from(2, n, 0.0, 1.0, circle(), beta, f, um, up, gum, gup)
        }
        ExampleId::TwoD2 => {
            let beta = PiecewiseField::new(|p: Point| p[0] * p[0] + p[1] * p[1] + 1.0, |_| 1.0);
            let f = PiecewiseField::new(
                |p: Point| {
                    let r2 = p[0] * p[0] + p[1] * p[1];
                    4.0 * ((r2 + 1.0) * (r2 + 1.0) + r2) * r2.exp()
                },
                |p: Point| {
                    let r2 = p[0] * p[0] + p[1] * p[1];
                    4.0 * (r2 - 1.0) * (-r2).exp()
                },
            );
            let (um, up, gum, gup) = exp_pair();
            spec_from(2, n, 0.0, 1.0, circle(), beta, f, um, up, gum, gup)
        }
        ExampleId::TwoD3 => {
            let beta = PiecewiseField::new(
                |p: Point| p[0] * p[0] + p[1] * p[1] + 1.0,
                |p: Point| (p[0] * p[0] + p[1] * p[1] + 2.0).sqrt(),
            );
            let f = PiecewiseField::new(
                |p: Point| {
                    let r2 = p[0] * p[0] + p[1] * p[1];
                    4.0 * ((r2 + 1.0) * (r2 + 1.0) + r2) * r2.exp()
                },
                |p: Point| {
                    let r2 = p[0] * p[0] + p[1] * p[1];
                    let s = (r2 + 2.0).sqrt();
                    (4.0 * s * (r2 - 1.0) - 2.0 * r2 / s) * (-r2).exp()
                },
            );
            let (um, up, gum, gup) = exp_pair();
            spec_from(2, n, -1.0, 1.0, star(), beta, f, um, up, gum, gup)
        }
        ExampleId::TwoD4a | ExampleId::TwoD4b => {
            let bp = if id == ExampleId::TwoD4a { 0.02 } else { 20.0 };
            let beta = PiecewiseField::constant(1.0, bp);
            let f = PiecewiseField::new(
                |p: Point| {
                    let r2 = p[0] * p[0] + p[1] * p[1];
                    4.0 * (r2 + 1.0) * r2.exp()
                },
                move |p: Point| {
                    let r2 = p[0] * p[0] + p[1] * p[1];
                    bp * 4.0 * (r2 - 1.0) * (-r2).exp()
                },
            );
            let (um, up, gum, gup) = exp_pair();
            spec_from(2, n, 0.0, 1.0, circle(), beta, f, um, up, gum, gup)
        }
        ExampleId::ThreeD1 | ExampleId::ThreeD2 => {
            let beta = PiecewiseField::new(
                |p: Point| 10.0 + (p[0] * p[1] + p[2]).sin(),
                |p: Point| 10.0 + (p[0] + p[1] * p[2]).cos(),
            );
            let f = PiecewiseField::new(
                |p: Point| {
                    let q = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
                    let bm = 10.0 + (p[0] * p[1] + p[2]).sin();
                    (4.0 * bm * (q + 1.5)
                        + (4.0 * p[0] * p[1] + 2.0 * p[2]) * (p[0] * p[1] + p[2]).cos())
                        * q.exp()
                },
                |_| 0.0,
            );
            let um: ScalarFn =
                Arc::new(|p: Point| (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).exp());
            let up: ScalarFn = Arc::new(|_| 0.0);
            let gum: GradFn = Arc::new(|p: Point| {
                let e = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).exp();
                [2.0 * p[0] * e, 2.0 * p[1] * e, 2.0 * p[2] * e]
            });
            let gup: GradFn = Arc::new(|_| [0.0, 0.0, 0.0]);
            if id == ExampleId::ThreeD1 {
                spec_from(3, n, 0.0, 1.0, sphere(), beta, f, um, up, gum, gup)
            } else {
                spec_from(3, n, -1.0, 1.0, torus(), beta, f, um, up, gum, gup)
            }
        }
    }
}

/// The u⁻ = exp(x²+y²), u⁺ = exp(−x²−y²) solution pair shared by several
/// 2D examples, with analytic gradients.
fn exp_pair() -> (ScalarFn, ScalarFn, GradFn, GradFn) {
    let um: ScalarFn = Arc::new(|p: Point| (p[0] * p[0] + p[1] * p[1]).exp());
    let up: ScalarFn = Arc::new(|p: Point| (-(p[0] * p[0] + p[1] * p[1])).exp());
    let gum: GradFn = Arc::new(|p: Point| {
        let e = (p[0] * p[0] + p[1] * p[1]).exp();
        [2.0 * p[0] * e, 2.0 * p[1] * e, 0.0]
    });
    let gup: GradFn = Arc::new(|p: Point| {
        let e = (-(p[0] * p[0] + p[1] * p[1])).exp();
        [-2.0 * p[0] * e, -2.0 * p[1] * e, 0.0]
    });
    (um, up, gum, gup)
}
