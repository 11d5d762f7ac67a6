//! Green functions and the decomposition fields of the layer-potential integrands.
//!
//! For a source point `r_q` with normal `n_q` and an evaluation point `r_p`,
//! the integrand `G` (single layer) or `dG/dn_q` (double layer) is written as
//!
//! ```text
//! K = div_s m + (C kappa_N(rho_tilde) + D kappa_N(rho_hat)) / (4 pi)
//! ```
//!
//! with `m = phi rho_hat` tangent to the surface. Integrating the divergence
//! over an element gives the contour integral of `f = n x m = phi rho_tilde`.
//!
//! All fields are evaluated through `s_plus = r + h` and `r - h` in forms that
//! never subtract nearly equal quantities, so no series switch is needed as
//! `rho -> 0` or `k -> 0`.

use std::f64::consts::PI;

use nalgebra::Vector3;
use num_complex::Complex64;
use thiserror::Error;

use crate::geometry::{frame_curvatures, local_frame, Element, GeometryError, LocalFrame, Vec3};

/// Relative distance to the `h = -r` pole below which evaluation is refused.
pub const EPS_POLE: f64 = 1e-8;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    Laplace,
    /// Real wavenumber `k > 0`.
    Helmholtz(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LayerKind {
    Single,
    Double,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum KernelError {
    #[error("evaluation point coincides with the source point")]
    Singular,
    #[error("evaluation point is on the inward normal of the source point (h/r = {h_hat})")]
    InwardNormalBundle { h_hat: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// `f = phi rho_tilde` together with the curvature weights `C` and `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionFields {
    pub phi: Complex64,
    pub rho_hat: Vec3,
    pub rho_tilde: Vec3,
    pub c: Complex64,
    pub d: Complex64,
}

impl DecompositionFields {
    /// The Stokes field `f`.
    pub fn f_vec(&self) -> Vector3<Complex64> {
        self.rho_tilde.map(|x| self.phi * x)
    }

    /// The pseudo potential field `m` with `n x m = f`.
    pub fn m_vec(&self) -> Vector3<Complex64> {
        self.rho_hat.map(|x| self.phi * x)
    }
}

/// Signature of a decomposition-field provider; lets the verifiers run
/// against alternative (e.g. deliberately broken) implementations.
pub type FieldsFn = fn(Kernel, LayerKind, &LocalFrame) -> Result<DecompositionFields, KernelError>;

pub fn green(kernel: Kernel, r_p: &Vec3, r_q: &Vec3) -> Result<Complex64, KernelError> {
    let r = (r_q - r_p).norm();
    if r == 0.0 {
        return Err(KernelError::Singular);
    }
    Ok(match kernel {
        Kernel::Laplace => Complex64::new(1.0 / (4.0 * PI * r), 0.0),
        Kernel::Helmholtz(k) => Complex64::cis(k * r) / (4.0 * PI * r),
    })
}

/// `dG/dn_q`.
pub fn green_dn(kernel: Kernel, r_p: &Vec3, r_q: &Vec3, n_q: &Vec3) -> Result<Complex64, KernelError> {
    let d = r_p - r_q;
    let r = d.norm();
    if r == 0.0 {
        return Err(KernelError::Singular);
    }
    let h = n_q.dot(&d);
    let base = h / (4.0 * PI * r * r * r);
    Ok(match kernel {
        Kernel::Laplace => Complex64::new(base, 0.0),
        Kernel::Helmholtz(k) => Complex64::cis(k * r) * Complex64::new(1.0, -k * r) * base,
    })
}

/// `(e^{ix} - 1) / (ix)` for real `x`.
fn phi1(x: f64) -> Complex64 {
    if x.abs() < 1e-8 {
        Complex64::new(1.0 - x * x / 6.0, x / 2.0)
    } else {
        let s = (0.5 * x).sin();
        Complex64::new(x.sin() / x, 2.0 * s * s / x)
    }
}

pub fn decomposition_fields(kernel: Kernel, layer: LayerKind, frame: &LocalFrame) -> Result<DecompositionFields, KernelError> {
    let LocalFrame { r, h, rho, .. } = *frame;
    if r == 0.0 {
        return Err(KernelError::Singular);
    }
    // r + h and r - h without cancellation
    let s_plus = if h >= 0.0 { r + h } else { rho * rho / (r - h) };
    if s_plus <= EPS_POLE * r {
        return Err(KernelError::InwardNormalBundle { h_hat: h / r });
    }
    let delta = if h > 0.0 { rho * rho / s_plus } else { r - h };
    let q = rho / s_plus;
    let four_pi = 4.0 * PI;
    let (phi, c, d) = match (kernel, layer) {
        (Kernel::Laplace, LayerKind::Single) => (Complex64::from(q / four_pi), Complex64::from(h / s_plus), Complex64::from(r / s_plus)),
        (Kernel::Laplace, LayerKind::Double) => {
            (Complex64::from(q / (four_pi * r)), Complex64::from(h / (r * s_plus)), Complex64::from(1.0 / s_plus))
        }
        (Kernel::Helmholtz(k), LayerKind::Single) => {
            let e = Complex64::cis(k * h);
            let ep = e * phi1(k * delta);
            let c = ep * (h / s_plus);
            (ep * (q / four_pi), c, e - c)
        }
        (Kernel::Helmholtz(k), LayerKind::Double) => {
            let e = Complex64::cis(k * h);
            let p1 = phi1(k * delta);
            let w = e * (1.0 - I * (k * h) * p1);
            let c = w * (h / (r * s_plus));
            let d = e * ((1.0 + I * (k * r) * p1) / s_plus - I * k);
            (w * (q / (four_pi * r)), c, d)
        }
    };
    Ok(DecompositionFields { phi, rho_hat: frame.rho_hat, rho_tilde: frame.rho_tilde, c, d })
}

/// The pseudo potential field `m`, parallel to `rho_hat`.
pub fn pseudo_field(kernel: Kernel, layer: LayerKind, frame: &LocalFrame) -> Result<Vector3<Complex64>, KernelError> {
    decomposition_fields(kernel, layer, frame).map(|f| f.m_vec())
}

/// The layer-potential integrand at `r_q`: `G` or `dG/dn_q`.
pub fn integrand(kernel: Kernel, layer: LayerKind, r_p: &Vec3, r_q: &Vec3, n_q: &Vec3) -> Result<Complex64, KernelError> {
    match layer {
        LayerKind::Single => green(kernel, r_p, r_q),
        LayerKind::Double => green_dn(kernel, r_p, r_q, n_q),
    }
}

/// Residual of the pointwise decomposition at `r_q(u,v)`, with the surface
/// divergence of `m` taken by central differences of step `delta` in `(u,v)`.
pub fn decomposition_residual(
    elem: &Element,
    kernel: Kernel,
    layer: LayerKind,
    u: f64,
    v: f64,
    r_p: &Vec3,
    delta: f64,
) -> Result<f64, KernelError> {
    decomposition_residual_with(decomposition_fields, elem, kernel, layer, u, v, r_p, delta)
}

/// [`decomposition_residual`] with an explicit field provider.
#[allow(clippy::too_many_arguments)]
pub fn decomposition_residual_with(
    fields: FieldsFn,
    elem: &Element,
    kernel: Kernel,
    layer: LayerKind,
    u: f64,
    v: f64,
    r_p: &Vec3,
    delta: f64,
) -> Result<f64, KernelError> {
    let m_at = |u: f64, v: f64| -> Result<Vector3<Complex64>, KernelError> {
        let s = elem.sample(u, v)?;
        Ok(fields(kernel, layer, &local_frame(&s, r_p))?.m_vec())
    };
    let dm_du = (m_at(u + delta, v)? - m_at(u - delta, v)?) / Complex64::from(2.0 * delta);
    let dm_dv = (m_at(u, v + delta)? - m_at(u, v - delta)?) / Complex64::from(2.0 * delta);

    let s = elem.sample(u, v)?;
    let x = s.r_u.normalize();
    let y = s.n.cross(&x);
    let (ux, uy, vx, vy) = (s.r_u.dot(&x), s.r_u.dot(&y), s.r_v.dot(&x), s.r_v.dot(&y));
    let det = ux * vy - uy * vx;
    let dm_dx = (dm_du * Complex64::from(vy) - dm_dv * Complex64::from(uy)) / Complex64::from(det);
    let dm_dy = (dm_dv * Complex64::from(ux) - dm_du * Complex64::from(vx)) / Complex64::from(det);
    let cx = x.map(Complex64::from);
    let cy = y.map(Complex64::from);
    let div = cx.dot(&dm_dx) + cy.dot(&dm_dy);

    let frame = local_frame(&s, r_p);
    let flds = fields(kernel, layer, &frame)?;
    let (k_hat, k_tilde) = frame_curvatures(&s, &frame);
    let curv = (flds.c * k_tilde + flds.d * k_hat) / (4.0 * PI);
    let target = integrand(kernel, layer, r_p, &s.r, &s.n)?;
    Ok((div + curv - target).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn frame_at(h: f64, rho: f64) -> LocalFrame {
        let s = Element::flat(Vec3::zeros(), Vec3::x(), Vec3::y()).sample(0.0, 0.0).unwrap();
        local_frame(&s, &Vec3::new(-rho, 0.0, h))
    }

    #[test]
    fn green_values() {
        let g = green(Kernel::Laplace, &Vec3::zeros(), &Vec3::x()).unwrap();
        assert_relative_eq!(g.re, 0.079577471545948, epsilon = 1e-15);
        let g = green(Kernel::Helmholtz(2.0), &Vec3::zeros(), &Vec3::new(0.0, 0.5, 0.0)).unwrap();
        let want = Complex64::new(1f64.cos(), 1f64.sin()) / (2.0 * PI);
        assert_relative_eq!((g - want).norm(), 0.0, epsilon = 1e-15);
        let gl = green(Kernel::Laplace, &Vec3::zeros(), &Vec3::new(0.3, 0.4, 0.0)).unwrap();
        let gh = green(Kernel::Helmholtz(1e-8), &Vec3::zeros(), &Vec3::new(0.3, 0.4, 0.0)).unwrap();
        assert!((gh - gl).norm() < 1e-8 * gl.norm());
        assert!(matches!(green(Kernel::Laplace, &Vec3::x(), &Vec3::x()), Err(KernelError::Singular)));
    }

    #[test]
    fn green_dn_values() {
        let n = Vec3::z();
        assert_eq!(green_dn(Kernel::Laplace, &Vec3::x(), &Vec3::zeros(), &n).unwrap(), Complex64::from(0.0));
        let g = green_dn(Kernel::Laplace, &Vec3::z(), &Vec3::zeros(), &n).unwrap();
        assert_relative_eq!(g.re, 1.0 / (4.0 * PI), epsilon = 1e-15);
        let p = Vec3::new(0.3, -0.2, 0.7);
        let gl = green_dn(Kernel::Laplace, &p, &Vec3::zeros(), &n).unwrap();
        let gh = green_dn(Kernel::Helmholtz(1e-9), &p, &Vec3::zeros(), &n).unwrap();
        assert!((gh - gl).norm() < 1e-8 * gl.norm());
    }

    #[test]
    fn laplace_single_in_plane() {
        let f = decomposition_fields(Kernel::Laplace, LayerKind::Single, &frame_at(0.0, 0.7)).unwrap();
        assert_eq!(f.c, Complex64::from(0.0));
        assert_eq!(f.d, Complex64::from(1.0));
        assert_relative_eq!(f.phi.re, 0.7 / (4.0 * PI * 0.7), epsilon = 1e-16);
        let m = pseudo_field(Kernel::Laplace, LayerKind::Single, &frame_at(0.0, 0.7)).unwrap();
        assert_relative_eq!(m.map(|z| z.re), Vec3::x() / (4.0 * PI), epsilon = 1e-16);
    }

    #[test]
    fn helmholtz_single_small_rho_limit() {
        let k = 2.0;
        let h = 0.3;
        let f = decomposition_fields(Kernel::Helmholtz(k), LayerKind::Single, &frame_at(h, 1e-9)).unwrap();
        let half = Complex64::cis(k * h) / 2.0;
        assert!((f.c - half).norm() < 1e-12);
        assert!((f.d - half).norm() < 1e-12);
        // naive formula at a moderate offset
        let rho = 1e-4 * h;
        let fr = frame_at(h, rho);
        let f = decomposition_fields(Kernel::Helmholtz(k), LayerKind::Single, &fr).unwrap();
        let naive_phi = (Complex64::cis(k * fr.r) - Complex64::cis(k * h)) / (I * k * rho) / (4.0 * PI);
        assert!((f.phi - naive_phi).norm() < 1e-6 * f.phi.norm());
    }

    #[test]
    fn helmholtz_matches_laplace_for_small_k() {
        for layer in [LayerKind::Single, LayerKind::Double] {
            for (h, rho) in [(0.3, 0.4), (-0.2, 0.5), (0.0, 1.0), (0.5, 1e-6)] {
                let fr = frame_at(h, rho);
                let a = decomposition_fields(Kernel::Laplace, layer, &fr).unwrap();
                let b = decomposition_fields(Kernel::Helmholtz(1e-6), layer, &fr).unwrap();
                for (x, y) in [(a.phi, b.phi), (a.c, b.c), (a.d, b.d)] {
                    assert!((x - y).norm() <= 1e-5 * x.norm().max(1e-300) + 1e-12, "{layer:?} {h} {rho}: {x} {y}");
                }
            }
        }
    }

    #[test]
    fn pole_is_rejected() {
        let fr = frame_at(-1.0, 1e-10);
        assert!(matches!(
            decomposition_fields(Kernel::Laplace, LayerKind::Single, &fr),
            Err(KernelError::InwardNormalBundle { .. })
        ));
    }

    #[test]
    fn flat_residual_laplace_single() {
        let e = Element::flat(Vec3::zeros(), Vec3::x(), Vec3::y());
        let r = decomposition_residual(&e, Kernel::Laplace, LayerKind::Single, 0.3, 0.3, &Vec3::new(0.1, 0.2, 0.4), 1e-5).unwrap();
        assert!(r < 1e-9, "{r}");
    }
}
