use std::f64::consts::PI;

use crate::geometry::{in_reference_triangle, Vec3};

use super::QuadratureError;

/// Nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1D {
    /// `(node, weight)` pairs mapped to `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (mid + half * x, half * w))
    }
}

/// Nodes `(u, v)` and weights on the reference triangle; weights sum to 1/2.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule2D {
    pub nodes: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl Rule2D {
    pub fn iter(&self) -> impl Iterator<Item = ([f64; 2], f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// One polar sub-triangle: the origin and one edge of the surrogate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wedge {
    /// Edge index `i`: from vertex `i` to vertex `(i+1) % 3`.
    pub edge: usize,
    pub theta_start: f64,
    pub theta_end: f64,
    /// Distance from the origin to the edge line.
    pub d_perp: f64,
    /// Direction of the foot of the perpendicular.
    pub theta_n: f64,
}

/// Polar rule around `origin` on a flat surrogate triangle, mapped back to
/// the reference triangle. Weights include the radial Jacobian.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarRule {
    pub origin: [f64; 2],
    pub wedges: Vec<Wedge>,
    pub rule: Rule2D,
}

/// Gauss-Legendre rule with `n` points.
pub fn gauss_legendre(n: usize) -> Result<Rule1D, QuadratureError> {
    if !(1..=128).contains(&n) {
        return Err(QuadratureError::OrderOutOfRange(n));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(Rule1D { nodes, weights })
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let pm1 = if n == 0 { 0.0 } else { p0 };
    (p, n as f64 * (x * p - pm1) / (x * x - 1.0))
}

/// `order x order` Gauss-Legendre rule on the square collapsed onto the
/// reference triangle by `(u, v) = (x, y (1 - x))`.
///
/// Exact for polynomials of total degree `2 order - 2`.
pub fn triangle_rule(order: usize) -> Result<Rule2D, QuadratureError> {
    let g = gauss_legendre(order)?;
    let mut nodes = Vec::with_capacity(order * order);
    let mut weights = Vec::with_capacity(order * order);
    for (x, wx) in g.on(0.0, 1.0) {
        for (y, wy) in g.on(0.0, 1.0) {
            nodes.push([x, y * (1.0 - x)]);
            weights.push(wx * wy * (1.0 - x));
        }
    }
    Ok(Rule2D { nodes, weights })
}

/// Polar rule centred at the surrogate image of `origin`.
///
/// The flat triangle through `vertices` is split into the (up to three)
/// triangles spanned by the origin and each edge; each is integrated with
/// `order` Gauss-Legendre points in angle and in radius. The angular variable
/// is the position along the wedge's edge, which keeps polynomial integrands
/// (including the area) exact; the radial weights carry the factor `R`.
pub fn polar_rule(vertices: &[Vec3; 3], origin: [f64; 2], order: usize) -> Result<PolarRule, QuadratureError> {
    let [u0, v0] = origin;
    if !in_reference_triangle(u0, v0) || !u0.is_finite() || !v0.is_finite() {
        return Err(QuadratureError::OriginOutside { u: u0, v: v0 });
    }
    let g = gauss_legendre(order)?;

    // planar coordinates of the surrogate with P0 at the origin and P1 on the x axis
    let a = vertices[1] - vertices[0];
    let b = vertices[2] - vertices[0];
    let la = a.norm();
    let e1 = a / la;
    let bperp = b - e1 * b.dot(&e1);
    let lb = bperp.norm();
    if !(la > 0.0 && lb > 1e-14 * la) {
        return Err(QuadratureError::DegenerateSurrogate);
    }
    let p = [[0.0, 0.0], [la, 0.0], [b.dot(&e1), lb]];
    let area = 0.5 * la * lb;
    // plane point -> reference coordinates
    let to_ref = |x: f64, y: f64| {
        let v = y / lb;
        let u = (x - v * p[2][0]) / la;
        [u, v]
    };
    let o = [u0 * p[1][0] + v0 * p[2][0], v0 * p[2][1]];

    let mut wedges = Vec::new();
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for i in 0..3 {
        let pa = p[i];
        let pb = p[(i + 1) % 3];
        let (ax, ay) = (pa[0] - o[0], pa[1] - o[1]);
        let (bx, by) = (pb[0] - o[0], pb[1] - o[1]);
        let cross = ax * by - ay * bx;
        if 0.5 * cross <= 1e-14 * area {
            continue;
        }
        let theta_start = ay.atan2(ax);
        let sweep = cross.atan2(ax * bx + ay * by);
        let (ex, ey) = (pb[0] - pa[0], pb[1] - pa[1]);
        let le = ex.hypot(ey);
        // outward normal of the edge, seen from the origin
        let (nx, ny) = (ey / le, -ex / le);
        let d_perp = ax * nx + ay * ny;
        let theta_n = ny.atan2(nx);
        let wedge = Wedge { edge: i, theta_start, theta_end: theta_start + sweep, d_perp, theta_n };
        // the angle is parametrized by the position t along the edge, so the
        // sub-triangle is (s, t) -> O + s (A + t (B - A) - O) with Jacobian s * cross
        for (t, wt) in g.on(0.0, 1.0) {
            let (dx, dy) = (ax + t * ex, ay + t * ey);
            for (s, ws) in g.on(0.0, 1.0) {
                nodes.push(to_ref(o[0] + s * dx, o[1] + s * dy));
                weights.push(wt * ws * s * cross / (2.0 * area));
            }
        }
        wedges.push(wedge);
    }
    Ok(PolarRule { origin, wedges, rule: Rule2D { nodes, weights } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn monomial_tri(i: i32, j: i32) -> f64 {
        // int u^i v^j over the reference triangle = i! j! / (i + j + 2)!
        let f = |n: i32| (1..=n).map(|k| k as f64).product::<f64>();
        f(i) * f(j) / f(i + j + 2)
    }

    #[test]
    fn low_orders() {
        let g = gauss_legendre(1).unwrap();
        assert_eq!((g.nodes.clone(), g.weights.clone()), (vec![0.0], vec![2.0]));
        let g = gauss_legendre(2).unwrap();
        assert_relative_eq!(g.nodes[1], 0.5773502691896258, epsilon = 1e-15);
        assert_relative_eq!(g.nodes[0], -0.5773502691896258, epsilon = 1e-15);
        assert_relative_eq!(g.weights[0], 1.0, epsilon = 1e-15);
        assert!(gauss_legendre(0).is_err() && gauss_legendre(129).is_err());
    }

    #[test]
    fn exactness_and_symmetry() {
        for n in [3, 7, 20, 40, 128] {
            let g = gauss_legendre(n).unwrap();
            let s: f64 = g.weights.iter().sum();
            assert_relative_eq!(s, 2.0, epsilon = 1e-13);
            for i in 0..n {
                assert_eq!(g.nodes[i], -g.nodes[n - 1 - i]);
                assert!(g.weights[i] > 0.0);
            }
        }
        let g = gauss_legendre(20).unwrap();
        let odd: f64 = g.nodes.iter().zip(&g.weights).map(|(x, w)| w * x.powi(39)).sum();
        assert!(odd.abs() < 1e-16);
        let even: f64 = g.nodes.iter().zip(&g.weights).map(|(x, w)| w * x.powi(38)).sum();
        assert_relative_eq!(even, 2.0 / 39.0, max_relative = 1e-14);
    }

    #[test]
    fn triangle_monomials() {
        let t = triangle_rule(1).unwrap();
        assert_relative_eq!(t.weights.iter().sum::<f64>(), 0.5, epsilon = 1e-15);
        let t = triangle_rule(6).unwrap();
        for i in 0..=10 {
            for j in 0..=(10 - i) {
                let q: f64 = t.iter().map(|([u, v], w)| w * u.powi(i) * v.powi(j)).sum();
                assert_relative_eq!(q, monomial_tri(i, j), max_relative = 1e-13);
            }
        }
        assert_relative_eq!(monomial_tri(1, 0), 1.0 / 6.0);
        assert_relative_eq!(monomial_tri(1, 1), 1.0 / 24.0);
    }

    fn unit_vertices() -> [Vec3; 3] {
        [Vec3::zeros(), Vec3::x(), Vec3::y()]
    }

    #[test]
    fn polar_area_and_wedges() {
        let verts = [Vec3::new(0.1, 0.0, 0.2), Vec3::new(1.3, 0.2, 0.0), Vec3::new(0.2, 0.9, -0.1)];
        for (o, nw) in [([1.0 / 3.0, 1.0 / 3.0], 3), ([0.0, 0.0], 1), ([0.0, 1.0], 1), ([0.5, 0.0], 2), ([0.2, 0.3], 3)] {
            let pr = polar_rule(&verts, o, 12).unwrap();
            assert_eq!(pr.wedges.len(), nw, "{o:?}");
            assert_relative_eq!(pr.rule.weights.iter().sum::<f64>(), 0.5, epsilon = 1e-12);
            assert!(pr.rule.weights.iter().all(|&w| w > 0.0));
            assert!(pr.rule.nodes.iter().all(|&[u, v]| in_reference_triangle(u, v)));
        }
        assert!(polar_rule(&unit_vertices(), [0.8, 0.8], 4).is_err());
    }

    #[test]
    fn polar_polynomial_exactness() {
        let pr = polar_rule(&unit_vertices(), [0.2, 0.3], 10).unwrap();
        for i in 0..=5 {
            for j in 0..=(5 - i) {
                let q: f64 = pr.rule.iter().map(|([u, v], w)| w * u.powi(i) * v.powi(j)).sum();
                assert_relative_eq!(q, monomial_tri(i, j), max_relative = 1e-12);
            }
        }
    }
}
