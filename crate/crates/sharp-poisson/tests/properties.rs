//! Property tests: structural invariants that must hold across randomized
//! inputs, not just on the benchmark catalog.

use proptest::prelude::*;
use sharp_poisson::assembly::effective_face_coefficient;
use sharp_poisson::geometry::{self, find_crossing, Grid, LevelSet, Point};
use sharp_poisson::iterate::{relaxation_alpha, Stopping};

fn log_uniform_beta() -> impl Strategy<Value = f64> {
    (-3.0f64..3.0).prop_map(|e| 10f64.powf(e))
}

fn circle(cx: f64, cy: f64, r: f64) -> LevelSet {
    LevelSet::with_gradient(
        move |p: Point| (p[0] - cx).powi(2) + (p[1] - cy).powi(2) - r * r,
        move |p: Point| [2.0 * (p[0] - cx), 2.0 * (p[1] - cy), 0.0],
    )
}

proptest! {
    /// The face coefficient is a mean: positive, bounded by the two sides,
    /// equal to the near side in either θ limit, and monotone in θ.
    #[test]
    fn effective_coefficient_is_a_monotone_mean(
        beta_lo in log_uniform_beta(),
        beta_hi in log_uniform_beta(),
        theta in 0.0f64..=1.0,
        theta2 in 0.0f64..=1.0,
    ) {
        let v = effective_face_coefficient(beta_lo, beta_hi, theta);
        let (mn, mx) = (beta_lo.min(beta_hi), beta_lo.max(beta_hi));
        prop_assert!(v > 0.0);
        prop_assert!(v >= mn * (1.0 - 1e-12) && v <= mx * (1.0 + 1e-12),
            "v = {v} outside [{mn}, {mx}]");
        let v0 = effective_face_coefficient(beta_lo, beta_hi, 0.0);
        let v1 = effective_face_coefficient(beta_lo, beta_hi, 1.0);
        prop_assert!((v0 - beta_lo).abs() <= 1e-12 * beta_lo);
        prop_assert!((v1 - beta_hi).abs() <= 1e-12 * beta_hi);
        // Monotone from β_lo toward β_hi as θ grows.
        let (ta, tb) = if theta <= theta2 { (theta, theta2) } else { (theta2, theta) };
        let (va, vb) = (
            effective_face_coefficient(beta_lo, beta_hi, ta),
            effective_face_coefficient(beta_lo, beta_hi, tb),
        );
        if beta_lo <= beta_hi {
            prop_assert!(va <= vb * (1.0 + 1e-12));
        } else {
            prop_assert!(va >= vb * (1.0 - 1e-12));
        }
    }

    /// Bisection localizes the root of a monotone level set on an edge to
    /// machine-level accuracy, and the returned fraction stays strictly
    /// inside the edge.
    #[test]
    fn crossing_search_finds_the_root(
        c in 0.05f64..0.95,
        k in 0.1f64..10.0,
        flip in proptest::bool::ANY,
    ) {
        // Monotone cubic with its only root at x = c.
        let ls = LevelSet::new(move |p: Point| {
            let d = p[0] - c;
            d * d * d + k * d
        });
        let (p_a, p_b): (Point, Point) = if flip {
            ([1.0, 0.0, 0.0], [0.0, 0.0, 0.0])
        } else {
            ([0.0, 0.0, 0.0], [1.0, 0.0, 0.0])
        };
        let (point, t) = find_crossing(&ls, p_a, p_b, 1.0).unwrap();
        prop_assert!((point[0] - c).abs() < 1e-9, "root at {} vs {c}", point[0]);
        prop_assert!((1e-6..=1.0 - 1e-6).contains(&t));
    }

    /// The two-part stopping rule implies the solution-only rule; a fixed
    /// budget ignores the diffs entirely.
    #[test]
    fn stopping_rules_are_consistent(
        u_d in 0.0f64..1.0,
        f_d in 0.0f64..10.0,
        h in 0.001f64..0.5,
        k in 1usize..300,
        target in 1usize..300,
    ) {
        if Stopping::Standard.satisfied(k, u_d, f_d, h) {
            prop_assert!(Stopping::UOnly.satisfied(k, u_d, f_d, h));
        }
        prop_assert_eq!(Stopping::Fixed(target).satisfied(k, u_d, f_d, h), k >= target);
    }

    /// The blend factor leaves contracting steps alone and rescales growing
    /// ones so the blended step contracts by exactly ρ.
    #[test]
    fn relaxation_contracts_growing_steps(
        r in 1e-6f64..1e3,
        rho in 0.05f64..0.95,
    ) {
        let alpha = relaxation_alpha(r, rho);
        prop_assert!(alpha > 0.0 && alpha <= 1.0);
        if r < 1.0 {
            prop_assert_eq!(alpha, 1.0);
        } else {
            prop_assert!((alpha * r - rho).abs() < 1e-12);
        }
    }

    /// Flat index round trip over every grid shape.
    #[test]
    fn grid_flat_unflat_round_trip(
        dim in 1usize..=3,
        n in 5usize..32,
        seed in proptest::array::uniform3(0usize..1000),
    ) {
        let grid = Grid::new(dim, n, [0.0; 3], [1.0; 3]).unwrap();
        let mut idx = [0usize; 3];
        for a in 0..dim { idx[a] = seed[a] % n; }
        prop_assert_eq!(grid.unflat(grid.flat(idx)), idx);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Classification agrees with a from-scratch re-derivation: the sign is
    /// the perturbed sign of φ and a point is standard exactly when every
    /// axis neighbor shares its sign.
    #[test]
    fn classification_matches_brute_force(
        cx in 0.35f64..0.65,
        cy in 0.35f64..0.65,
        r in 0.12f64..0.28,
    ) {
        let grid = Grid::new(2, 21, [0.0; 3], [1.0; 3]).unwrap();
        let ls = circle(cx, cy, r);
        let cl = geometry::classify_points(&grid, &ls);
        let eps = 1e-12 * grid.h();
        for idx in grid.iter_indices() {
            let f = grid.flat(idx);
            let expect: i8 = if ls.phi(grid.point(idx)) + eps > 0.0 { 1 } else { -1 };
            prop_assert_eq!(cl.signs[f], expect);
            let mut all_same = true;
            for axis in 0..2 {
                for d in [-1isize, 1] {
                    let v = idx[axis] as isize + d;
                    if v < 0 || v >= grid.npts(axis) as isize { continue; }
                    let mut nb = idx;
                    nb[axis] = v as usize;
                    if cl.signs[grid.flat(nb)] != cl.signs[f] { all_same = false; }
                }
            }
            prop_assert_eq!(cl.standard[f], all_same, "at {:?}", idx);
        }
    }

    /// Geometry invariants on random circles: every crossing's point is on
    /// the zero set, θ stays strictly inside the edge, both edge endpoints
    /// are flagged nonstandard, and the jump-decomposition basis reproduces
    /// the coordinate direction exactly.
    #[test]
    fn circle_geometry_invariants(
        cx in 0.40f64..0.60,
        cy in 0.40f64..0.60,
        r in 0.15f64..0.30,
    ) {
        let grid = Grid::new(2, 41, [0.0; 3], [1.0; 3]).unwrap();
        let ls = circle(cx, cy, r);
        let geom = geometry::build(&grid, &ls).unwrap();
        prop_assert!(geom.crossings.len() >= 8);
        for c in &geom.crossings {
            // Bisection resolves the root far below this; the bound leaves
            // room for the θ clamp on roots grazing a grid node.
            prop_assert!(ls.phi(c.point).abs() < 1e-6, "off-surface crossing");
            prop_assert!(c.theta > 0.0 && c.theta < 1.0);
            prop_assert!(!geom.is_standard(c.node_lo));
            prop_assert!(!geom.is_standard(c.node_hi));
            prop_assert_eq!(geom.sign(c.node_lo), c.sign_lo);
            prop_assert_eq!(geom.sign(c.node_hi), -c.sign_lo);
            prop_assert_eq!(c.basis.dirs.len(), 1);
            let res = c.basis.reconstruction_residual(c.axis, c.normal);
            prop_assert!(res < 1e-10, "reconstruction residual {res}");
            // Derivative weights annihilate constants.
            let wsum: f64 = c.basis.dirs[0].weights.iter().sum();
            let wscale: f64 = c.basis.dirs[0].weights.iter().map(|w| w.abs()).sum();
            prop_assert!(wsum.abs() <= 1e-9 * wscale.max(1.0));
        }
        // Conversely, every nonstandard point touches some crossed edge.
        let n_nonstandard = geom
            .classification
            .standard
            .iter()
            .filter(|s| !**s)
            .count();
        prop_assert!(n_nonstandard <= 2 * geom.crossings.len());
    }

    /// Newton projection lands on the zero set from anywhere in a wide
    /// annulus around a circular interface.
    #[test]
    fn projection_reaches_the_surface(
        cx in 0.40f64..0.60,
        cy in 0.40f64..0.60,
        r in 0.15f64..0.30,
        ang in 0.0f64..std::f64::consts::TAU,
        rad in 0.5f64..1.6,
    ) {
        let ls = circle(cx, cy, r);
        let h = 0.025;
        let start: Point = [cx + rad * r * ang.cos(), cy + rad * r * ang.sin(), 0.0];
        let q = ls.project(start, h).expect("projection should converge");
        let g = ls.gradient(q, 1e-3 * h);
        let gn = (g[0] * g[0] + g[1] * g[1]).sqrt();
        prop_assert!(ls.phi(q).abs() <= 1e-8 * h * gn, "phi = {}", ls.phi(q));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    /// 3D: on random spheres, every crossing with a fully measured basis
    /// satisfies the reconstruction identity.
    #[test]
    fn sphere_basis_reconstruction(
        cx in 0.45f64..0.55,
        cy in 0.45f64..0.55,
        cz in 0.45f64..0.55,
        r in 0.18f64..0.28,
    ) {
        let grid = Grid::new(3, 21, [0.0; 3], [1.0; 3]).unwrap();
        let ls = LevelSet::with_gradient(
            move |p: Point| {
                (p[0] - cx).powi(2) + (p[1] - cy).powi(2) + (p[2] - cz).powi(2) - r * r
            },
            move |p: Point| {
                [2.0 * (p[0] - cx), 2.0 * (p[1] - cy), 2.0 * (p[2] - cz)]
            },
        );
        let geom = geometry::build(&grid, &ls).unwrap();
        prop_assert!(!geom.crossings.is_empty());
        let mut full = 0usize;
        for c in &geom.crossings {
            if c.basis.dirs.len() == 2 && c.basis.degenerate_dirs == 0 {
                full += 1;
                let res = c.basis.reconstruction_residual(c.axis, c.normal);
                prop_assert!(res < 1e-8, "reconstruction residual {res}");
            }
        }
        // The healthy case must dominate on a smooth sphere.
        prop_assert!(full * 2 >= geom.crossings.len(),
            "only {full} of {} crossings have full bases", geom.crossings.len());
    }
}

/// Interior enumeration: walking the grid in flat order and filtering to
/// interior points yields exactly 0..interior_count in interior_flat order.
#[test]
fn interior_indexing_is_dense_and_ordered() {
    for dim in 1..=3usize {
        let grid = Grid::new(dim, 9, [0.0; 3], [1.0; 3]).unwrap();
        let mut next = 0usize;
        for idx in grid.iter_indices() {
            if grid.is_interior(idx) {
                assert_eq!(grid.interior_flat(idx), next);
                next += 1;
            }
        }
        assert_eq!(next, grid.interior_count());
    }
}
