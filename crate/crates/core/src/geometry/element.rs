//! Curved triangular elements parametrized over the reference triangle
//! `{0 <= u, 0 <= v, u + v <= 1}` with analytic first and second derivatives.

use nalgebra::{Matrix3, Vector3};

use super::GeometryError;

pub type Vec3 = Vector3<f64>;

/// Slack allowed when checking that a parameter point lies in the reference triangle.
const DOMAIN_SLACK: f64 = 1e-12;

/// A vector-valued quadratic polynomial patch
/// `r(u,v) = c0 + u c_u + v c_v + u^2 c_uu + u v c_uv + v^2 c_vv`.
///
/// The family is closed under affine reparametrization of `(u,v)`, which is
/// what subdivision needs. Graph patches `(u, v, f(u,v))` with quadratic `f`
/// are the main use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticPatch {
    pub c0: Vec3,
    pub cu: Vec3,
    pub cv: Vec3,
    pub cuu: Vec3,
    pub cuv: Vec3,
    pub cvv: Vec3,
}

impl QuadraticPatch {
    /// Graph of `f(u,v) = sigma ((u - 1/4)^2 + (v - 1/4)^2)`.
    pub fn paraboloid(sigma: f64) -> Self {
        // f = sigma (u^2 + v^2 - u/2 - v/2 + 1/8)
        Self {
            c0: Vec3::new(0.0, 0.0, sigma / 8.0),
            cu: Vec3::new(1.0, 0.0, -sigma / 2.0),
            cv: Vec3::new(0.0, 1.0, -sigma / 2.0),
            cuu: Vec3::new(0.0, 0.0, sigma),
            cuv: Vec3::zeros(),
            cvv: Vec3::new(0.0, 0.0, sigma),
        }
    }

    fn eval(&self, u: f64, v: f64) -> [Vec3; 6] {
        let r = self.c0 + self.cu * u + self.cv * v + self.cuu * (u * u) + self.cuv * (u * v) + self.cvv * (v * v);
        let ru = self.cu + self.cuu * (2.0 * u) + self.cuv * v;
        let rv = self.cv + self.cuv * u + self.cvv * (2.0 * v);
        [r, ru, rv, self.cuu * 2.0, self.cuv, self.cvv * 2.0]
    }

    /// Patch restricted to the image of the affine map `(u,v) -> p0 + u e1 + v e2`.
    fn compose_affine(&self, p0: [f64; 2], e1: [f64; 2], e2: [f64; 2]) -> Self {
        let [r, ru, rv, ruu, ruv, rvv] = self.eval(p0[0], p0[1]);
        let (a1, b1) = (e1[0], e1[1]);
        let (a2, b2) = (e2[0], e2[1]);
        Self {
            c0: r,
            cu: ru * a1 + rv * b1,
            cv: ru * a2 + rv * b2,
            cuu: (ruu * (a1 * a1) + ruv * (2.0 * a1 * b1) + rvv * (b1 * b1)) * 0.5,
            cuv: ruu * (a1 * a2) + ruv * (a1 * b2 + a2 * b1) + rvv * (b1 * b2),
            cvv: (ruu * (a2 * a2) + ruv * (2.0 * a2 * b2) + rvv * (b2 * b2)) * 0.5,
        }
    }
}

/// Geometric family of an element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElementKind {
    /// Chord triangle through three vertices.
    Flat { vertices: [Vec3; 3] },
    /// Quadratic polynomial patch, e.g. the paraboloid test elements.
    Quadratic(QuadraticPatch),
    /// Exact spherical triangle `r = s * w / |w|`, `w` the linear interpolant of
    /// the three (not necessarily unit-length) direction vectors.
    Spherical { radius: f64, vertices: [Vec3; 3] },
}

/// Differential geometry at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometrySample {
    pub r: Vec3,
    pub r_u: Vec3,
    pub r_v: Vec3,
    pub r_uu: Vec3,
    pub r_uv: Vec3,
    pub r_vv: Vec3,
    /// Unit normal `(r_u x r_v) / J`.
    pub n: Vec3,
    /// Surface Jacobian `|r_u x r_v|`.
    pub jac: f64,
}

/// A curved triangular boundary element.
///
/// `flipped` records whether the parametrization has been exchanged to
/// `r(v,u)`, which reverses the normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Element {
    pub kind: ElementKind,
    pub flipped: bool,
}

pub fn in_reference_triangle(u: f64, v: f64) -> bool {
    u >= -DOMAIN_SLACK && v >= -DOMAIN_SLACK && u + v <= 1.0 + DOMAIN_SLACK
}

impl Element {
    pub fn flat(v1: Vec3, v2: Vec3, v3: Vec3) -> Self {
        Self { kind: ElementKind::Flat { vertices: [v1, v2, v3] }, flipped: false }
    }

    pub fn quadratic(patch: QuadraticPatch) -> Self {
        Self { kind: ElementKind::Quadratic(patch), flipped: false }
    }

    /// The paraboloid graph patch with curvature parameter `sigma`
    /// (`sigma = -0.6` is "element 1", `sigma = 0.6` is "element 2").
    pub fn paraboloid(sigma: f64) -> Self {
        Self::quadratic(QuadraticPatch::paraboloid(sigma))
    }

    pub fn spherical(radius: f64, v1: Vec3, v2: Vec3, v3: Vec3) -> Self {
        Self { kind: ElementKind::Spherical { radius, vertices: [v1, v2, v3] }, flipped: false }
    }

    pub fn is_flat(&self) -> bool {
        matches!(self.kind, ElementKind::Flat { .. })
    }

    /// Geometry at `(u,v)` in the parametrization of this element, honoring `flipped`.
    pub fn sample(&self, u: f64, v: f64) -> Result<GeometrySample, GeometryError> {
        if !in_reference_triangle(u, v) || !u.is_finite() || !v.is_finite() {
            return Err(GeometryError::OutsideReferenceTriangle { u, v });
        }
        let s = if self.flipped {
            let s = sample_kind(&self.kind, v, u);
            GeometrySample { r_u: s.r_v, r_v: s.r_u, r_uu: s.r_vv, r_vv: s.r_uu, ..s }
        } else {
            sample_kind(&self.kind, u, v)
        };
        let c = s.r_u.cross(&s.r_v);
        let jac = c.norm();
        if !(jac > 0.0) {
            return Err(GeometryError::Degenerate { u, v });
        }
        Ok(GeometrySample { n: c / jac, jac, ..s })
    }

    /// Position only. Panics outside the reference triangle.
    pub fn point(&self, u: f64, v: f64) -> Vec3 {
        self.sample(u, v).expect("point outside reference triangle").r
    }

    /// The three corner points `r(0,0)`, `r(1,0)`, `r(0,1)`.
    pub fn vertices(&self) -> [Vec3; 3] {
        [self.point(0.0, 0.0), self.point(1.0, 0.0), self.point(0.0, 1.0)]
    }

    /// Maximum inter-vertex distance.
    pub fn diameter(&self) -> f64 {
        let [a, b, c] = self.vertices();
        (b - a).norm().max((c - b).norm()).max((a - c).norm())
    }

    /// Exchange `u` and `v`; reverses the normal.
    pub fn flip(&self) -> Self {
        Self { kind: self.kind, flipped: !self.flipped }
    }

    /// Uniform 1-to-4 subdivision at parameter-domain midpoints.
    ///
    /// Children keep the parent's orientation and their images tile the
    /// parent's image.
    pub fn subdivide(&self) -> [Element; 4] {
        // corner, corner, corner, centre; every child is positively oriented in (u,v)
        const CHILDREN: [[[f64; 2]; 3]; 4] = [
            [[0.0, 0.0], [0.5, 0.0], [0.0, 0.5]],
            [[0.5, 0.0], [1.0, 0.0], [0.5, 0.5]],
            [[0.0, 0.5], [0.5, 0.5], [0.0, 1.0]],
            [[0.5, 0.5], [0.0, 0.5], [0.5, 0.0]],
        ];
        CHILDREN.map(|[p0, p1, p2]| {
            let e1 = [p1[0] - p0[0], p1[1] - p0[1]];
            let e2 = [p2[0] - p0[0], p2[1] - p0[1]];
            let kind = match &self.kind {
                ElementKind::Flat { vertices } => {
                    let lin = |p: [f64; 2]| vertices[0] + (vertices[1] - vertices[0]) * p[0] + (vertices[2] - vertices[0]) * p[1];
                    ElementKind::Flat { vertices: [lin(p0), lin(p1), lin(p2)] }
                }
                ElementKind::Spherical { radius, vertices } => {
                    let lin = |p: [f64; 2]| vertices[0] + (vertices[1] - vertices[0]) * p[0] + (vertices[2] - vertices[0]) * p[1];
                    ElementKind::Spherical { radius: *radius, vertices: [lin(p0), lin(p1), lin(p2)] }
                }
                ElementKind::Quadratic(patch) => ElementKind::Quadratic(patch.compose_affine(p0, e1, e2)),
            };
            Element { kind, flipped: self.flipped }
        })
    }

    /// Rigidly move the element: `x -> rot * x + shift`. `rot` must be a rotation.
    pub fn transformed(&self, rot: &Matrix3<f64>, shift: &Vec3) -> Self {
        let kind = match &self.kind {
            ElementKind::Flat { vertices } => ElementKind::Flat { vertices: vertices.map(|v| rot * v + shift) },
            ElementKind::Quadratic(p) => ElementKind::Quadratic(QuadraticPatch {
                c0: rot * p.c0 + shift,
                cu: rot * p.cu,
                cv: rot * p.cv,
                cuu: rot * p.cuu,
                cuv: rot * p.cuv,
                cvv: rot * p.cvv,
            }),
            // a shifted sphere is no longer centred at the origin; re-express as
            // a quadratic is impossible, so only rotations are allowed here
            ElementKind::Spherical { radius, vertices } => {
                assert!(shift.norm() == 0.0, "spherical elements only support rotations");
                ElementKind::Spherical { radius: *radius, vertices: vertices.map(|v| rot * v) }
            }
        };
        Self { kind, flipped: self.flipped }
    }
}

fn sample_kind(kind: &ElementKind, u: f64, v: f64) -> GeometrySample {
    let z = Vec3::zeros();
    match kind {
        ElementKind::Flat { vertices } => {
            let e1 = vertices[1] - vertices[0];
            let e2 = vertices[2] - vertices[0];
            GeometrySample {
                r: vertices[0] + e1 * u + e2 * v,
                r_u: e1,
                r_v: e2,
                r_uu: z,
                r_uv: z,
                r_vv: z,
                n: z,
                jac: 0.0,
            }
        }
        ElementKind::Quadratic(patch) => {
            let [r, r_u, r_v, r_uu, r_uv, r_vv] = patch.eval(u, v);
            GeometrySample { r, r_u, r_v, r_uu, r_uv, r_vv, n: z, jac: 0.0 }
        }
        ElementKind::Spherical { radius, vertices } => {
            let wa = vertices[1] - vertices[0];
            let wb = vertices[2] - vertices[0];
            let w = vertices[0] + wa * u + wb * v;
            let len = w.norm();
            let wh = w / len;
            // derivative of the unit vector along a constant direction d
            let unit_d = |d: &Vec3| (d - wh * wh.dot(d)) / len;
            let wh_a = unit_d(&wa);
            let wh_b = unit_d(&wb);
            // d^2 (w/|w|) / (da db) for linear w
            let second = |d1: &Vec3, d1h: &Vec3, d2: &Vec3, d2h: &Vec3| {
                -(d2h * wh.dot(d1) + wh * d2h.dot(d1)) / len - d1h * (wh.dot(d2) / len)
            };
            GeometrySample {
                r: wh * *radius,
                r_u: wh_a * *radius,
                r_v: wh_b * *radius,
                r_uu: second(&wa, &wh_a, &wa, &wh_a) * *radius,
                r_uv: second(&wa, &wh_a, &wb, &wh_b) * *radius,
                r_vv: second(&wb, &wh_b, &wb, &wh_b) * *radius,
                n: z,
                jac: 0.0,
            }
        }
    }
}
