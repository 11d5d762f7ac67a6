//! Closest-point projection onto an element and the range of `h/r` over it.

use super::element::{in_reference_triangle, Element, GeometrySample, Vec3};
use super::GeometryError;

const MAX_NEWTON: usize = 60;

/// Result of projecting a point onto an element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosestPoint {
    pub u: f64,
    pub v: f64,
    pub dist: f64,
    /// Newton reached the stationarity tolerance.
    pub converged: bool,
    /// The minimizer lies on an edge or vertex of the reference triangle.
    pub on_boundary: bool,
}

fn dist2(elem: &Element, p: &Vec3, u: f64, v: f64) -> f64 {
    (elem.point(u, v) - p).norm_squared()
}

/// Clamp `(u,v)` into the reference triangle.
fn clamp(u: f64, v: f64) -> (f64, f64) {
    let (mut u, mut v) = (u.max(0.0), v.max(0.0));
    let s = u + v;
    if s > 1.0 {
        u /= s;
        v /= s;
    }
    (u, v)
}

/// Minimize `|r(u,v) - r_p|^2` over the closed reference triangle.
///
/// Newton iteration with the exact Hessian starts from the best point of a
/// 7-per-edge grid. `tol` bounds `|grad dist^2|` relative to `diameter^2`,
/// which is roughly the attainable precision in `(u,v)`. When the interior
/// iteration leaves the triangle the three edges are searched instead and
/// the result is flagged as a boundary minimizer.
pub fn closest_point(elem: &Element, r_p: &Vec3, tol: f64) -> ClosestPoint {
    let scale = elem.diameter().powi(2);
    let gtol = tol * scale;

    let n = 6;
    let mut best = (0.0, 0.0, f64::INFINITY);
    for i in 0..=n {
        for j in 0..=(n - i) {
            let (u, v) = (i as f64 / n as f64, j as f64 / n as f64);
            let d = dist2(elem, r_p, u, v);
            if d < best.2 {
                best = (u, v, d);
            }
        }
    }

    let (mut u, mut v, mut d) = best;
    let mut converged = false;
    let mut left = false;
    for _ in 0..MAX_NEWTON {
        let s = elem.sample(u, v).expect("iterate kept inside triangle");
        let w = s.r - r_p;
        let g = [w.dot(&s.r_u), w.dot(&s.r_v)];
        if 2.0 * g[0].hypot(g[1]) < gtol {
            converged = true;
            break;
        }
        let (du, dv) = newton_step(&s, &w, g);
        let (mut nu, mut nv) = (u + du, v + dv);
        if !in_reference_triangle(nu, nv) {
            (nu, nv) = clamp(nu, nv);
            left = true;
        }
        let mut nd = dist2(elem, r_p, nu, nv);
        // near the minimum `d` only changes at the rounding level
        let d_accept = d * (1.0 + 8.0 * f64::EPSILON);
        let mut lambda = 1.0;
        while nd > d_accept && lambda > 1e-8 {
            lambda *= 0.5;
            (nu, nv) = clamp(u + lambda * du, v + lambda * dv);
            nd = dist2(elem, r_p, nu, nv);
        }
        if nd > d_accept {
            break;
        }
        let step = (nu - u).hypot(nv - v);
        (u, v, d) = (nu, nv, nd);
        if step < 1e-15 {
            break;
        }
    }
    let boundary_pt = u <= 0.0 || v <= 0.0 || u + v >= 1.0;
    if converged && !boundary_pt {
        return ClosestPoint { u, v, dist: d.sqrt(), converged, on_boundary: false };
    }

    // boundary search: three edges, each a 1D minimization
    let mut out = ClosestPoint { u, v, dist: d.sqrt(), converged: false, on_boundary: boundary_pt };
    let edges: [([f64; 2], [f64; 2]); 3] = [([0.0, 0.0], [1.0, 0.0]), ([1.0, 0.0], [-1.0, 1.0]), ([0.0, 1.0], [0.0, -1.0])];
    for (o, e) in edges {
        let (t, ok) = edge_min(elem, r_p, o, e, tol);
        let (eu, ev) = clamp(o[0] + t * e[0], o[1] + t * e[1]);
        let ed = dist2(elem, r_p, eu, ev).sqrt();
        if ed < out.dist || (ed == out.dist && !out.converged) {
            out = ClosestPoint { u: eu, v: ev, dist: ed, converged: ok, on_boundary: true };
        }
    }
    if left && out.on_boundary {
        out.converged = out.converged || converged;
    }
    out
}

fn newton_step(s: &GeometrySample, w: &Vec3, g: [f64; 2]) -> (f64, f64) {
    let mut h11 = s.r_u.dot(&s.r_u) + w.dot(&s.r_uu);
    let mut h12 = s.r_u.dot(&s.r_v) + w.dot(&s.r_uv);
    let mut h22 = s.r_v.dot(&s.r_v) + w.dot(&s.r_vv);
    let mut det = h11 * h22 - h12 * h12;
    if !(h11 > 0.0 && det > 0.0) {
        // indefinite: fall back to Gauss-Newton
        h11 = s.r_u.dot(&s.r_u);
        h12 = s.r_u.dot(&s.r_v);
        h22 = s.r_v.dot(&s.r_v);
        det = h11 * h22 - h12 * h12;
    }
    ((-h22 * g[0] + h12 * g[1]) / det, (h12 * g[0] - h11 * g[1]) / det)
}

/// Minimize distance along the edge `o + t e`, `t` in `[0,1]`.
fn edge_min(elem: &Element, p: &Vec3, o: [f64; 2], e: [f64; 2], tol: f64) -> (f64, bool) {
    let at = |t: f64| clamp(o[0] + t * e[0], o[1] + t * e[1]);
    let m = 32;
    let mut t = 0.0;
    let mut best = f64::INFINITY;
    for i in 0..=m {
        let ti = i as f64 / m as f64;
        let (u, v) = at(ti);
        let d = dist2(elem, p, u, v);
        if d < best {
            best = d;
            t = ti;
        }
    }
    let scale = elem.diameter().powi(2);
    for _ in 0..MAX_NEWTON {
        let (u, v) = at(t);
        let s = elem.sample(u, v).expect("edge point inside triangle");
        let w = s.r - p;
        let rt = s.r_u * e[0] + s.r_v * e[1];
        let rtt = s.r_uu * (e[0] * e[0]) + s.r_uv * (2.0 * e[0] * e[1]) + s.r_vv * (e[1] * e[1]);
        let g = w.dot(&rt);
        let stuck_low = t <= 0.0 && g >= 0.0;
        let stuck_high = t >= 1.0 && g <= 0.0;
        if 2.0 * g.abs() < tol * scale || stuck_low || stuck_high {
            return (t, true);
        }
        let hess = rt.dot(&rt) + w.dot(&rtt);
        let hess = if hess > 0.0 { hess } else { rt.dot(&rt) };
        let mut step = -g / hess;
        let mut nt = (t + step).clamp(0.0, 1.0);
        let (nu, nv) = at(nt);
        let mut nd = dist2(elem, p, nu, nv);
        while nd > best && step.abs() > 1e-16 {
            step *= 0.5;
            nt = (t + step).clamp(0.0, 1.0);
            let (nu, nv) = at(nt);
            nd = dist2(elem, p, nu, nv);
        }
        if nd > best || nt == t {
            return (t, false);
        }
        t = nt;
        best = nd;
    }
    (t, false)
}

/// `h/r` at one parameter point, or an error if `r_p` sits on the element.
fn h_hat(elem: &Element, r_p: &Vec3, u: f64, v: f64, r_floor: f64) -> Result<f64, GeometryError> {
    let s = elem.sample(u, v)?;
    let d = r_p - s.r;
    let r = d.norm();
    if r <= r_floor {
        return Err(GeometryError::OnElement);
    }
    Ok((s.n.dot(&d) / r).clamp(-1.0, 1.0))
}

/// Range `(min, max)` of `h/r` over the element as seen from `r_p`.
///
/// Samples an `n_grid`-per-edge barycentric grid and polishes both extrema
/// with a compass search in `(u,v)`. Returns [`GeometryError::OnElement`] if a
/// sample point coincides with `r_p`.
pub fn h_hat_range(elem: &Element, r_p: &Vec3, n_grid: usize) -> Result<(f64, f64), GeometryError> {
    let n = n_grid.max(2) - 1;
    let r_floor = 1e-14 * elem.diameter();
    let mut lo = (f64::INFINITY, 0.0, 0.0);
    let mut hi = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..=n {
        for j in 0..=(n - i) {
            let (u, v) = (i as f64 / n as f64, j as f64 / n as f64);
            let x = h_hat(elem, r_p, u, v, r_floor)?;
            if x < lo.0 {
                lo = (x, u, v);
            }
            if x > hi.0 {
                hi = (x, u, v);
            }
        }
    }
    let step0 = 1.0 / n as f64;
    let min = compass(|u, v| h_hat(elem, r_p, u, v, r_floor).map(|x| -x), (-lo.0, lo.1, lo.2), step0)?;
    let max = compass(|u, v| h_hat(elem, r_p, u, v, r_floor), hi, step0)?;
    Ok((-min, max))
}

/// Maximize `f` over the reference triangle from a starting point.
fn compass<F>(f: F, start: (f64, f64, f64), step0: f64) -> Result<f64, GeometryError>
where
    F: Fn(f64, f64) -> Result<f64, GeometryError>,
{
    const DIRS: [(f64, f64); 6] = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, -1.0), (-1.0, 1.0)];
    let (mut best, mut u, mut v) = start;
    let mut step = step0;
    while step > 1e-10 {
        let mut moved = false;
        for (du, dv) in DIRS {
            let (nu, nv) = (u + step * du, v + step * dv);
            if !in_reference_triangle(nu, nv) {
                continue;
            }
            let (nu, nv) = clamp(nu, nv);
            let x = f(nu, nv)?;
            if x > best {
                (best, u, v) = (x, nu, nv);
                moved = true;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    Ok(best)
}
