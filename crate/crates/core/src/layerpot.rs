//! Single- and double-layer potentials of one element with unit density.
//!
//! The proposed evaluator integrates the Stokes field `f` along the three
//! element edges and adds the curvature term over the element, which is
//! integrated with a polar rule centred at the point of the element closest
//! to `r_p`. Evaluation points on the inward side of the element are handled
//! by flipping the parametrization, and points that see both normal poles by
//! subdividing the element.
//!
//! Points close to an element edge are not treated specially; the Stokes
//! term itself becomes nearly singular there.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::geometry::{closest_point, frame_curvatures, h_hat_range, local_frame, Element, GeometryError, Vec3};
use crate::kernels::{decomposition_fields, integrand, Kernel, KernelError, LayerKind};
use crate::quadrature::{gauss_legendre, polar_rule, reference_integral_2d, triangle_rule, Adaptive, QuadratureError, Rule2D};

/// Stationarity tolerance used for all closest-point projections.
const CLOSEST_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurvatureMethod {
    Plain2D,
    Polar,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    pub order_contour: usize,
    pub order_curvature: usize,
    pub curvature_method: CurvatureMethod,
    /// Band around `h/r = -1` and `h/r = 1` that triggers subdivision.
    pub bundle_tol: f64,
    /// Distance, relative to the element diameter, classified as on-element.
    pub singular_tol: f64,
    pub max_subdivision_depth: usize,
    /// Samples per edge for the `h/r` range scan.
    pub hrange_grid: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            order_contour: 20,
            order_curvature: 20,
            curvature_method: CurvatureMethod::Polar,
            bundle_tol: 1e-3,
            singular_tol: 1e-10,
            max_subdivision_depth: 8,
            hrange_grid: 32,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<(), LayerPotError> {
        let bad = |msg: &str| Err(LayerPotError::InvalidConfig(msg.to_string()));
        if self.order_contour < 2 || self.order_curvature < 2 || self.order_contour > 128 || self.order_curvature > 128 {
            return bad("quadrature orders must lie in 2..=128");
        }
        for t in [self.bundle_tol, self.singular_tol] {
            if !(t > 0.0 && t < 0.1) {
                return bad("tolerances must lie in (0, 0.1)");
            }
        }
        if self.max_subdivision_depth > 8 {
            return bad("subdivision depth must be at most 8");
        }
        if self.hrange_grid < 2 {
            return bad("h/r grid needs at least 2 samples per edge");
        }
        Ok(())
    }
}

/// Which branches of the evaluation were taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EvalPath {
    pub flipped: bool,
    /// Number of subdivisions performed, including nested ones.
    pub subdivided: usize,
    pub singular: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub h_hat_min: f64,
    pub h_hat_max: f64,
    pub closest_uv: [f64; 2],
    pub closest_converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    pub path: EvalPath,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LayerPotError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("element still sees both normal poles after {depth} subdivisions (h/r in [{}, {}])", .diagnostics.h_hat_min, .diagnostics.h_hat_max)]
    TooCurved { depth: usize, diagnostics: Diagnostics },
    #[error("the reference integrator needs an evaluation point off the element")]
    OnElement,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// Contour integral of the Stokes field `f` over the element boundary,
/// traversed `(0,0) -> (1,0) -> (0,1) -> (0,0)` with `n` points per edge.
pub fn stokes_term(elem: &Element, kernel: Kernel, layer: LayerKind, r_p: &Vec3, n: usize) -> Result<Complex64, LayerPotError> {
    stokes_term_oriented(elem, kernel, layer, r_p, n, false)
}

/// Same contour integral; `reversed` traverses the boundary clockwise.
pub fn stokes_term_oriented(
    elem: &Element,
    kernel: Kernel,
    layer: LayerKind,
    r_p: &Vec3,
    n: usize,
    reversed: bool,
) -> Result<Complex64, LayerPotError> {
    let g = gauss_legendre(n)?;
    // start point and direction of each edge in (u,v)
    let edges: [([f64; 2], [f64; 2]); 3] = [([0.0, 0.0], [1.0, 0.0]), ([1.0, 0.0], [-1.0, 1.0]), ([0.0, 1.0], [0.0, -1.0])];
    let mut sum = Complex64::new(0.0, 0.0);
    for (o, e) in edges {
        for (t, w) in g.on(0.0, 1.0) {
            let u = (o[0] + t * e[0]).max(0.0);
            let v = (o[1] + t * e[1]).max(0.0);
            let s = elem.sample(u, v)?;
            let dl = s.r_u * e[0] + s.r_v * e[1];
            let f = decomposition_fields(kernel, layer, &local_frame(&s, r_p))?;
            sum += f.phi * (f.rho_tilde.dot(&dl) * w);
        }
    }
    Ok(if reversed { -sum } else { sum })
}

fn curvature_integrand(elem: &Element, kernel: Kernel, layer: LayerKind, r_p: &Vec3, u: f64, v: f64) -> Result<Complex64, LayerPotError> {
    let s = elem.sample(u, v)?;
    let frame = local_frame(&s, r_p);
    let f = decomposition_fields(kernel, layer, &frame)?;
    let (k_hat, k_tilde) = frame_curvatures(&s, &frame);
    Ok((f.c * k_tilde + f.d * k_hat) * (s.jac / (4.0 * PI)))
}

fn integrate(rule: &Rule2D, mut f: impl FnMut(f64, f64) -> Result<Complex64, LayerPotError>) -> Result<Complex64, LayerPotError> {
    let mut sum = Complex64::new(0.0, 0.0);
    for ([u, v], w) in rule.iter() {
        sum += f(u, v)? * w;
    }
    Ok(sum)
}

fn curvature_rule(elem: &Element, method: CurvatureMethod, origin: [f64; 2], order: usize) -> Result<Rule2D, LayerPotError> {
    Ok(match method {
        CurvatureMethod::Plain2D => triangle_rule(order)?,
        CurvatureMethod::Polar => polar_rule(&elem.vertices(), origin, order)?.rule,
    })
}

fn curvature_term_at(
    elem: &Element,
    kernel: Kernel,
    layer: LayerKind,
    r_p: &Vec3,
    origin: [f64; 2],
    method: CurvatureMethod,
    order: usize,
) -> Result<Complex64, LayerPotError> {
    if elem.is_flat() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let rule = curvature_rule(elem, method, origin, order)?;
    integrate(&rule, |u, v| curvature_integrand(elem, kernel, layer, r_p, u, v))
}

/// `(1/4pi) int (C kappa_N(rho_tilde) + D kappa_N(rho_hat)) dS`, with the polar
/// origin (if used) at the point of the element closest to `r_p`.
pub fn curvature_term(elem: &Element, kernel: Kernel, layer: LayerKind, r_p: &Vec3, config: &EvalConfig) -> Result<Complex64, LayerPotError> {
    let cp = closest_point(elem, r_p, CLOSEST_TOL);
    curvature_term_at(elem, kernel, layer, r_p, [cp.u, cp.v], config.curvature_method, config.order_curvature)
}

/// Stokes term plus curvature term on the element exactly as given: no
/// flipping, subdivision, or singular handling.
pub fn evaluate_decomposed(elem: &Element, kernel: Kernel, layer: LayerKind, r_p: &Vec3, config: &EvalConfig) -> Result<Complex64, LayerPotError> {
    Ok(stokes_term(elem, kernel, layer, r_p, config.order_contour)? + curvature_term(elem, kernel, layer, r_p, config)?)
}

/// Layer potential of the element with unit density at `r_p`, routed through
/// flipping and subdivision as needed.
///
/// For `r_p` on the element the double layer returns the principal value,
/// i.e. the one-sided limit from the normal side minus 1/2.
pub fn evaluate(elem: &Element, kernel: Kernel, layer: LayerKind, r_p: &Vec3, config: &EvalConfig) -> Result<EvalResult, LayerPotError> {
    config.validate()?;
    evaluate_rec(elem, kernel, layer, r_p, config, 0)
}

fn evaluate_rec(
    elem: &Element,
    kernel: Kernel,
    layer: LayerKind,
    r_p: &Vec3,
    config: &EvalConfig,
    depth: usize,
) -> Result<EvalResult, LayerPotError> {
    let cp = closest_point(elem, r_p, CLOSEST_TOL);
    let mut diagnostics = Diagnostics { h_hat_min: f64::NAN, h_hat_max: f64::NAN, closest_uv: [cp.u, cp.v], closest_converged: cp.converged };

    if cp.dist < config.singular_tol * elem.diameter() {
        let origin = [cp.u, cp.v];
        let mut value = stokes_term(elem, kernel, layer, r_p, config.order_contour)?
            + curvature_term_at(elem, kernel, layer, r_p, origin, CurvatureMethod::Polar, config.order_curvature)?;
        if layer == LayerKind::Double {
            // the excluded point carries half of the solid angle
            value -= 0.5;
        }
        let path = EvalPath { singular: true, ..EvalPath::default() };
        return Ok(EvalResult { value, path, diagnostics });
    }

    let (lo, hi) = h_hat_range(elem, r_p, config.hrange_grid)?;
    diagnostics.h_hat_min = lo;
    diagnostics.h_hat_max = hi;

    if lo <= -1.0 + config.bundle_tol && hi >= 1.0 - config.bundle_tol {
        if depth >= config.max_subdivision_depth {
            return Err(LayerPotError::TooCurved { depth, diagnostics });
        }
        let mut value = Complex64::new(0.0, 0.0);
        let mut path = EvalPath { subdivided: 1, ..EvalPath::default() };
        for child in elem.subdivide() {
            let r = evaluate_rec(&child, kernel, layer, r_p, config, depth + 1)?;
            value += r.value;
            path.flipped |= r.path.flipped;
            path.singular |= r.path.singular;
            path.subdivided += r.path.subdivided;
        }
        return Ok(EvalResult { value, path, diagnostics });
    }

    let flipped = (lo + 1.0).abs() < (hi - 1.0).abs();
    let (el, origin) = if flipped { (elem.flip(), [cp.v, cp.u]) } else { (*elem, [cp.u, cp.v]) };
    let mut value = stokes_term(&el, kernel, layer, r_p, config.order_contour)?
        + curvature_term_at(&el, kernel, layer, r_p, origin, config.curvature_method, config.order_curvature)?;
    if flipped && layer == LayerKind::Double {
        value = -value;
    }
    Ok(EvalResult { value, path: EvalPath { flipped, ..EvalPath::default() }, diagnostics })
}

fn direct(elem: &Element, kernel: Kernel, layer: LayerKind, r_p: &Vec3, rule: &Rule2D) -> Result<Complex64, LayerPotError> {
    integrate(rule, |u, v| {
        let s = elem.sample(u, v)?;
        Ok(integrand(kernel, layer, r_p, &s.r, &s.n)? * s.jac)
    })
}

/// Direct collapsed Gauss-Legendre quadrature of `G` or `dG/dn` ("GL2D").
pub fn evaluate_gl2d(elem: &Element, kernel: Kernel, layer: LayerKind, r_p: &Vec3, order: usize) -> Result<Complex64, LayerPotError> {
    direct(elem, kernel, layer, r_p, &triangle_rule(order)?)
}

/// Direct quadrature with the polar rule centred at the closest point.
pub fn evaluate_gl2d_polar(elem: &Element, kernel: Kernel, layer: LayerKind, r_p: &Vec3, order: usize) -> Result<Complex64, LayerPotError> {
    let cp = closest_point(elem, r_p, CLOSEST_TOL);
    direct(elem, kernel, layer, r_p, &polar_rule(&elem.vertices(), [cp.u, cp.v], order)?.rule)
}

/// Nested adaptive Gauss-Kronrod integration of `G` or `dG/dn` at tolerance `tol`.
pub fn evaluate_reference(elem: &Element, kernel: Kernel, layer: LayerKind, r_p: &Vec3, tol: f64) -> Result<Adaptive<Complex64>, LayerPotError> {
    let cp = closest_point(elem, r_p, CLOSEST_TOL);
    if cp.dist < 1e-10 * elem.diameter() {
        return Err(LayerPotError::OnElement);
    }
    Ok(reference_integral_2d(
        |u, v| {
            let s = elem.sample(u.clamp(0.0, 1.0), v.clamp(0.0, 1.0 - u.clamp(0.0, 1.0))).expect("node inside triangle");
            integrand(kernel, layer, r_p, &s.r, &s.n).expect("point off element") * s.jac
        },
        tol,
    ))
}
