//! Orders interface points into chains, selects differentiation triplets,
//! and builds the tangent bases that decompose coordinate-direction flux
//! jumps into normal and tangential parts.

use super::{dot, norm, Crossing, GeometryDiagnostics, Grid, Point};
use crate::error::{Error, Result};

/// Minimum triplet chord spacing as a fraction of h. Chain neighbors closer
/// than this are skipped when selecting the differentiation triplet: the
/// derivative weights scale like 1/spacing, so tighter spacings amplify
/// interface-value perturbations through the outer iteration's feedback
/// loop, which loses contraction at high coefficient contrast.
pub const TRIPLET_SPACING_FRAC: f64 = 0.5;

/// Cap on a single nearest-neighbor step when walking crossings into chains.
const WALK_CAP_FRAC: f64 = 2.0;

/// A measured chain direction is only trusted as a tangent when it is
/// reasonably orthogonal to the normal; otherwise the slice curve is
/// degenerate (near-tangent plane or zigzag between close curve branches).
const MAX_TANGENT_NORMAL_DOT: f64 = 0.5;

/// One tangential direction attached to a crossing: the machinery to
/// estimate the tangential flux jump [βu_τ] by 3-point differentiation of
/// interface values along the chain.
#[derive(Clone, Debug)]
pub struct TangentialDir {
    /// Weight of this direction's [βu_τ] in the coordinate jump [βu_e].
    pub coef: f64,
    /// Crossing ids of the differentiation triplet, in chain order.
    pub ids: [usize; 3],
    /// Lagrange derivative weights at this crossing's own chord parameter.
    pub weights: [f64; 3],
    /// Converts the chord-parameter derivative into an arclength derivative:
    /// 1/|Σ wᵢ·Pᵢ|.
    pub inv_chord: f64,
    /// Alignment of the measured chain direction with the geometric tangent
    /// (2D); 1 in 3D where the measured direction itself is the tangent.
    pub proj: f64,
    /// Unit tangent this direction differentiates along: the geometric
    /// tangent in 2D (measured alignment folded into `proj`), the measured
    /// chain direction in 3D.
    pub tangent: Point,
}

/// Decomposition of the coordinate-direction flux jump at one crossing:
/// [βu_e] = b_I·c0 + Σ_k coef_k·[βu_{τ_k}].
#[derive(Clone, Debug)]
pub struct TangentBasis {
    /// Coefficient of the normal jump b_I.
    pub c0: f64,
    /// Usable tangential directions (1 in 2D, up to 2 in 3D).
    pub dirs: Vec<TangentialDir>,
    /// Slice directions dropped as degenerate at this crossing.
    pub degenerate_dirs: usize,
}

impl TangentBasis {
    pub(super) fn placeholder() -> Self {
        TangentBasis { c0: 0.0, dirs: Vec::new(), degenerate_dirs: 0 }
    }

    /// Verify the reconstruction identity ê = c⁰n̂ + Σ cᵏτ̂ₖ; returns the
    /// residual norm. Only meaningful when no direction was dropped.
    pub fn reconstruction_residual(&self, axis: usize, normal: Point) -> f64 {
        let mut v = [0.0; 3];
        for a in 0..3 {
            v[a] = self.c0 * normal[a];
        }
        for d in &self.dirs {
            for a in 0..3 {
                v[a] += d.coef * d.tangent[a];
            }
        }
        v[axis] -= 1.0;
        norm(v)
    }
}

/// Derivative weights of the 3-point Lagrange interpolant on nodes
/// `t = (t1,t2,t3)`, evaluated at `te`.
fn lagrange_derivative_weights(t: [f64; 3], te: f64) -> [f64; 3] {
    let [t1, t2, t3] = t;
    [
        (2.0 * te - t2 - t3) / ((t1 - t2) * (t1 - t3)),
        (2.0 * te - t1 - t3) / ((t2 - t1) * (t2 - t3)),
        (2.0 * te - t1 - t2) / ((t3 - t1) * (t3 - t2)),
    ]
}

/// Walk the points of one slice into chain components by nearest-neighbor
/// steps capped at `cap`, preferring candidates that continue the current
/// heading. Returns (component point indices in walk order, closed flag).
fn walk(pts: &[(f64, f64)], cap: f64) -> Vec<(Vec<usize>, bool)> {
    let n = pts.len();
    let mut used = vec![false; n];
    let mut comps = Vec::new();
    let d2 = |a: usize, b: usize| -> f64 {
        let dx = pts[a].0 - pts[b].0;
        let dy = pts[a].1 - pts[b].1;
        (dx * dx + dy * dy).sqrt()
    };
    for seed in 0..n {
        if used[seed] {
            continue;
        }
        let mut comp = vec![seed];
        used[seed] = true;
        let mut heading: Option<(f64, f64)> = None;
        let mut cur = seed;
        loop {
            // Pick the nearest unused candidate within the cap, preferring
            // ones ahead of the current heading (avoids jumping across
            // hairpins to the opposite curve branch).
            let mut best: Option<(bool, f64, usize)> = None;
            for cand in 0..n {
                if used[cand] {
                    continue;
                }
                let dd = d2(cur, cand);
                if dd > cap {
                    continue;
                }
                let fwd = match heading {
                    None => true,
                    Some((hx, hy)) => {
                        (pts[cand].0 - pts[cur].0) * hx + (pts[cand].1 - pts[cur].1) * hy > 0.0
                    }
                };
                let key = (!fwd, dd, cand);
                let better = match best {
                    None => true,
                    Some((bf, bd, _)) => (key.0, key.1) < (bf, bd),
                };
                if better {
                    best = Some(key);
                }
            }
            let Some((_, _, next)) = best else { break };
            let vx = pts[next].0 - pts[cur].0;
            let vy = pts[next].1 - pts[cur].1;
            let vl = (vx * vx + vy * vy).sqrt();
            if vl > 0.0 {
                heading = Some((vx / vl, vy / vl));
            }
            used[next] = true;
            comp.push(next);
            cur = next;
        }
        let closed = comp.len() >= 3 && d2(comp[comp.len() - 1], comp[0]) <= cap;
        comps.push((comp, closed));
    }
    comps
}

/// A differentiation triplet: positions within the component (ascending
/// chord parameter) plus the parameters and the evaluation parameter of the
/// center crossing itself.
struct Pick {
    ids: [usize; 3],
}

/// From `pos`, step along the component in direction `dir` until a point at
/// chord distance ≥ dmin from `from` is found.
fn scan(
    len: usize,
    from: usize,
    start: usize,
    dir: isize,
    closed: bool,
    d: &dyn Fn(usize, usize) -> f64,
    dmin: f64,
) -> Option<usize> {
    let mut k = start as isize + dir;
    for _ in 0..len {
        let kk = if closed {
            k.rem_euclid(len as isize) as usize
        } else {
            if k < 0 || k >= len as isize {
                return None;
            }
            k as usize
        };
        if kk == from {
            return None;
        }
        if d(kk, from) >= dmin {
            return Some(kk);
        }
        k += dir;
    }
    None
}

/// Select the differentiation triplet for the point at component position
/// `pos`: two-sided when both chain directions offer a point ≥ dmin away,
/// else one-sided, skipping neighbors closer than dmin.
fn triplet_for(
    len: usize,
    pos: usize,
    closed: bool,
    d: &dyn Fn(usize, usize) -> f64,
    dmin: f64,
) -> Option<Pick> {
    let prev = scan(len, pos, pos, -1, closed, d, dmin);
    let next = scan(len, pos, pos, 1, closed, d, dmin);
    if let (Some(p), Some(q)) = (prev, next) {
        if p != q {
            return Some(Pick { ids: [p, pos, q] });
        }
    }
    // One-sided forward: pos, n1, n2.
    if let Some(n1) = next {
        if let Some(n2) = scan(len, n1, n1, 1, closed, d, dmin) {
            if n2 != pos && n2 != n1 {
                return Some(Pick { ids: [pos, n1, n2] });
            }
        }
    }
    // One-sided backward: p2, p1, pos.
    if let Some(p1) = prev {
        if let Some(p2) = scan(len, p1, p1, -1, closed, d, dmin) {
            if p2 != pos && p2 != p1 {
                return Some(Pick { ids: [p2, p1, pos] });
            }
        }
    }
    None
}

/// A slice measurement for one crossing: triplet, weights, and the measured
/// chain tangent at the point.
#[derive(Clone)]
struct Measured {
    ids: [usize; 3],
    weights: [f64; 3],
    inv_chord: f64,
    tangent: Point,
}

/// Signed curve parameters for an ordered point triple, measured in arc
/// length rather than chord length: each chord is inflated to the arc of the
/// circle through the three points (Menger curvature), which keeps the
/// differentiation stencil accurate where the curve turns significantly
/// between neighbors. `slot` is the index of the evaluation point, which gets
/// parameter zero.
fn arc_corrected_params(tri: [(f64, f64); 3], slot: usize) -> [f64; 3] {
    let chord = |p: (f64, f64), q: (f64, f64)| (p.0 - q.0).hypot(p.1 - q.1);
    let ca = chord(tri[0], tri[1]);
    let cb = chord(tri[1], tri[2]);
    let cc = chord(tri[0], tri[2]);
    // Twice the triangle area; Menger curvature is 4·Area/(ca·cb·cc).
    let area2 = ((tri[1].0 - tri[0].0) * (tri[2].1 - tri[0].1)
        - (tri[2].0 - tri[0].0) * (tri[1].1 - tri[0].1))
        .abs();
    let denom = ca * cb * cc;
    let kappa = if denom > 0.0 { 2.0 * area2 / denom } else { 0.0 };
    let arc = |c: f64| {
        let half = 0.5 * c * kappa;
        if half > 1e-8 {
            2.0 / kappa * half.min(1.0).asin()
        } else {
            c
        }
    };
    let cum = [0.0, arc(ca), arc(ca) + arc(cb)];
    [
        cum[0] - cum[slot],
        cum[1] - cum[slot],
        cum[2] - cum[slot],
    ]
}

/// Chain all crossings of one plane slice and measure tangential machinery
/// for each. Entries stay `None` where the slice curve is unusable; in 2D
/// (where the slice is the interface itself) that is an error instead.
fn measure_slice(
    crossings: &[Crossing],
    members: &[usize],
    plane: (usize, usize),
    dim: usize,
    h: f64,
    diag: &mut GeometryDiagnostics,
) -> Result<Vec<Option<Measured>>> {
    let pts: Vec<(f64, f64)> = members
        .iter()
        .map(|&id| (crossings[id].point[plane.0], crossings[id].point[plane.1]))
        .collect();
    let cap = WALK_CAP_FRAC * h;
    let dmin = TRIPLET_SPACING_FRAC * h;
    let comps = walk(&pts, cap);
    let mut out: Vec<Option<Measured>> = vec![None; members.len()];
    for (comp, closed) in comps {
        if comp.len() < 3 {
            if dim == 2 {
                return Err(Error::UnderResolved {
                    h,
                    detail: format!(
                        "interface component has only {} point(s); the tangential derivative cannot be estimated",
                        comp.len()
                    ),
                });
            }
            diag.stranded_points += comp.len();
            continue;
        }
        if !closed {
            diag.open_components += 1;
        }
        let dfun = |a: usize, b: usize| -> f64 {
            let dx = pts[comp[a]].0 - pts[comp[b]].0;
            let dy = pts[comp[a]].1 - pts[comp[b]].1;
            (dx * dx + dy * dy).sqrt()
        };
        for pos in 0..comp.len() {
            let pick = triplet_for(comp.len(), pos, closed, &dfun, dmin);
            let Some(pick) = pick else {
                if dim == 2 {
                    return Err(Error::UnderResolved {
                        h,
                        detail: "no chain triplet with sufficient spacing is available".into(),
                    });
                }
                continue;
            };
            let tri = pick.ids.map(|loc| pts[comp[loc]]);
            let slot = pick
                .ids
                .iter()
                .position(|&loc| loc == pos)
                .expect("triplet always contains its own crossing");
            let params = arc_corrected_params(tri, slot);
            let weights = lagrange_derivative_weights(params, 0.0);
            let gids = pick.ids.map(|loc| members[comp[loc]]);
            let mut t = [0.0; 3];
            for (w, gid) in weights.iter().zip(gids.iter()) {
                let p = crossings[*gid].point;
                for a in 0..3 {
                    t[a] += w * p[a];
                }
            }
            let tl = norm(t);
            if !(tl > 0.0) || !tl.is_finite() {
                if dim == 2 {
                    return Err(Error::UnderResolved {
                        h,
                        detail: "chain triplet produced a zero tangent".into(),
                    });
                }
                continue;
            }
            out[comp[pos]] = Some(Measured {
                ids: gids,
                weights,
                inv_chord: 1.0 / tl,
                tangent: [t[0] / tl, t[1] / tl, t[2] / tl],
            });
        }
    }
    Ok(out)
}

/// 2D basis: c-coefficients are exact functions of the normal; the measured
/// direction only enters through the projection factor.
fn basis_2d(axis: usize, normal: Point, m: Measured) -> TangentBasis {
    let tau_geom = [-normal[1], normal[0], 0.0];
    let (c0, coef) = if axis == 0 {
        (normal[0], -normal[1])
    } else {
        (normal[1], normal[0])
    };
    let proj = dot(m.tangent, tau_geom);
    TangentBasis {
        c0,
        dirs: vec![TangentialDir {
            coef,
            ids: m.ids,
            weights: m.weights,
            inv_chord: m.inv_chord,
            proj,
            // The geometric tangent is what the coefficient decomposition is
            // exact against; the measured direction is folded into proj.
            tangent: tau_geom,
        }],
        degenerate_dirs: 0,
    }
}

fn triple_product(a: Point, b: Point, c: Point) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// 3D basis: solve ê = c⁰n̂ + c¹τ̂₁ + c²τ̂₂ with measured slice tangents,
/// degrading to a least-squares fit (or the pure normal projection) when
/// slice directions were dropped as degenerate.
fn basis_3d(
    axis: usize,
    normal: Point,
    slots: [Option<Measured>; 2],
    h: f64,
    diag: &mut GeometryDiagnostics,
) -> Result<TangentBasis> {
    let mut dirs_m: Vec<Measured> = Vec::new();
    let mut degenerate = 0usize;
    for s in slots.into_iter() {
        match s {
            Some(m) if dot(m.tangent, normal).abs() <= MAX_TANGENT_NORMAL_DOT => dirs_m.push(m),
            _ => degenerate += 1,
        }
    }
    if dirs_m.len() == 2 && dot(dirs_m[0].tangent, dirs_m[1].tangent).abs() > 0.999 {
        // Nearly parallel slice tangents cannot be told apart; keep the one
        // more orthogonal to the normal.
        let drop = if dot(dirs_m[0].tangent, normal).abs() >= dot(dirs_m[1].tangent, normal).abs()
        {
            0
        } else {
            1
        };
        dirs_m.remove(drop);
        degenerate += 1;
    }
    let mut e = [0.0; 3];
    e[axis] = 1.0;
    let basis = match dirs_m.len() {
        2 => {
            let (t1, t2) = (dirs_m[0].tangent, dirs_m[1].tangent);
            let det = triple_product(normal, t1, t2);
            if det.abs() < 1e-8 {
                return Err(Error::DegenerateBasis(format!(
                    "reconstruction system singular (det = {det:.3e}) near h = {h}"
                )));
            }
            let c0 = triple_product(e, t1, t2) / det;
            let c1 = triple_product(normal, e, t2) / det;
            let c2 = triple_product(normal, t1, e) / det;
            let mk = |m: Measured, coef: f64| TangentialDir {
                coef,
                ids: m.ids,
                weights: m.weights,
                inv_chord: m.inv_chord,
                proj: 1.0,
                tangent: m.tangent,
            };
            let (m1, m2) = {
                let mut it = dirs_m.into_iter();
                (it.next().unwrap(), it.next().unwrap())
            };
            TangentBasis { c0, dirs: vec![mk(m1, c1), mk(m2, c2)], degenerate_dirs: degenerate }
        }
        1 => {
            let m = dirs_m.pop().unwrap();
            // Least-squares ê ≈ c⁰n̂ + c¹τ̂ (the dropped direction's
            // contribution is taken as zero).
            let nd = dot(normal, m.tangent);
            let g = 1.0 - nd * nd;
            let b0 = normal[axis]; // ê·n̂
            let b1 = m.tangent[axis]; // ê·τ̂
            let c0 = (b0 - nd * b1) / g;
            let c1 = (b1 - nd * b0) / g;
            TangentBasis {
                c0,
                dirs: vec![TangentialDir {
                    coef: c1,
                    ids: m.ids,
                    weights: m.weights,
                    inv_chord: m.inv_chord,
                    proj: 1.0,
                    tangent: m.tangent,
                }],
                degenerate_dirs: degenerate,
            }
        }
        _ => TangentBasis { c0: normal[axis], dirs: Vec::new(), degenerate_dirs: degenerate },
    };
    diag.degenerate_dirs += degenerate;
    Ok(basis)
}

/// The two axes other than `e`, in increasing order.
fn others(e: usize) -> (usize, usize) {
    match e {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Build chains and attach a tangent basis to every crossing.
pub(super) fn attach_bases(
    grid: &Grid,
    crossings: &mut Vec<Crossing>,
    diag: &mut GeometryDiagnostics,
) -> Result<()> {
    let dim = grid.dim();
    let h = grid.h();
    if crossings.is_empty() {
        return Ok(());
    }
    match dim {
        1 => {
            for c in crossings.iter_mut() {
                c.basis =
                    TangentBasis { c0: c.normal[0], dirs: Vec::new(), degenerate_dirs: 0 };
            }
            Ok(())
        }
        2 => {
            let members: Vec<usize> = (0..crossings.len()).collect();
            let measured = measure_slice(crossings, &members, (0, 1), dim, h, diag)?;
            for (mi, m) in measured.into_iter().enumerate() {
                let m = m.expect("2D slice measurement errors instead of degrading");
                let (axis, normal) = (crossings[mi].axis, crossings[mi].normal);
                crossings[mi].basis = basis_2d(axis, normal, m);
            }
            Ok(())
        }
        _ => {
            let mut slots: Vec<[Option<Measured>; 2]> = vec![[None, None]; crossings.len()];
            for (p, q, cax) in [(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)] {
                let mut by_level: Vec<Vec<usize>> = vec![Vec::new(); grid.n()];
                for (gid, c) in crossings.iter().enumerate() {
                    if c.axis == p || c.axis == q {
                        by_level[c.base[cax]].push(gid);
                    }
                }
                for members in by_level.iter().filter(|m| !m.is_empty()) {
                    let measured = measure_slice(crossings, members, (p, q), dim, h, diag)?;
                    for (mi, m) in measured.into_iter().enumerate() {
                        if let Some(m) = m {
                            let gid = members[mi];
                            let (o1, o2) = others(crossings[gid].axis);
                            let slot = if cax == o2 {
                                0
                            } else {
                                debug_assert_eq!(cax, o1);
                                1
                            };
                            slots[gid][slot] = Some(m);
                        }
                    }
                }
            }
            for (gid, slot_pair) in slots.into_iter().enumerate() {
                let (axis, normal) = (crossings[gid].axis, crossings[gid].normal);
                crossings[gid].basis = basis_3d(axis, normal, slot_pair, h, diag)?;
            }
            Ok(())
        }
    }
}
