//! Local frames around an evaluation point and normal curvatures.
//!
//! Sign convention for the normal curvature: `kappa_N(t) = II(t,t) / I(t,t)`
//! with `II` built from `r_uu . n`, `r_uv . n`, `r_vv . n`. A sphere with its
//! outward normal therefore has `kappa_N = -1/s`.

use super::element::{GeometrySample, Vec3};
use super::GeometryError;

/// Relative size below which the in-plane offset is treated as zero.
const RHO_TINY: f64 = 1e-12;

/// Geometry of a source point `r_q` relative to an evaluation point `r_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFrame {
    /// `|r_q - r_p|`
    pub r: f64,
    /// `n_q . (r_p - r_q)`
    pub h: f64,
    /// `r_q - r_p + h n_q`, the in-plane offset from the projection of `r_p`.
    pub rho_vec: Vec3,
    pub rho: f64,
    pub rho_hat: Vec3,
    /// `n_q x rho_hat`
    pub rho_tilde: Vec3,
    pub n: Vec3,
}

/// First and second fundamental form coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalForms {
    pub e_big: f64,
    pub f_big: f64,
    pub g_big: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

impl FundamentalForms {
    pub fn metric_det(&self) -> f64 {
        self.e_big * self.g_big - self.f_big * self.f_big
    }

    pub fn gaussian_curvature(&self) -> f64 {
        (self.e * self.g - self.f * self.f) / self.metric_det()
    }
}

pub fn local_frame(samp: &GeometrySample, r_p: &Vec3) -> LocalFrame {
    let d = samp.r - r_p;
    let r = d.norm();
    let n = samp.n;
    let h = -n.dot(&d);
    let rho_vec = d + n * h;
    let rho = rho_vec.norm();
    let scale = samp.r_u.norm().max(samp.r_v.norm());
    let rho_hat = if rho > RHO_TINY * scale {
        rho_vec / rho
    } else {
        // any tangent direction is admissible in the limit
        (samp.r_u - n * n.dot(&samp.r_u)).normalize()
    };
    LocalFrame { r, h, rho_vec, rho, rho_hat, rho_tilde: n.cross(&rho_hat), n }
}

pub fn fundamental_forms(samp: &GeometrySample) -> FundamentalForms {
    FundamentalForms {
        e_big: samp.r_u.dot(&samp.r_u),
        f_big: samp.r_u.dot(&samp.r_v),
        g_big: samp.r_v.dot(&samp.r_v),
        e: samp.r_uu.dot(&samp.n),
        f: samp.r_uv.dot(&samp.n),
        g: samp.r_vv.dot(&samp.n),
    }
}

/// `II(t,t)` for the unit tangent `t`, written through `t_perp = n x t`:
/// with `r_u . t_perp = |r_u| sin(theta_u)`, this is the angle form
/// `(G e sin^2 th_v + E g sin^2 th_u - 2 f |r_u||r_v| sin th_u sin th_v) / (EG - F^2)`.
/// Passing `t_perp = -rho_hat` for `t = rho_tilde` gives the cosine form.
fn curvature_along(samp: &GeometrySample, ff: &FundamentalForms, t_perp: &Vec3) -> f64 {
    let su = samp.r_u.dot(t_perp);
    let sv = samp.r_v.dot(t_perp);
    (ff.e * sv * sv + ff.g * su * su - 2.0 * ff.f * su * sv) / ff.metric_det()
}

/// Normal curvature of the surface in tangent direction `t`.
///
/// `t` is projected onto the tangent plane when it is tangent up to 1e-10;
/// otherwise the direction is rejected.
pub fn normal_curvature(samp: &GeometrySample, t: &Vec3) -> Result<f64, GeometryError> {
    let len = t.norm();
    if !(len > 0.0) {
        return Err(GeometryError::NotTangent);
    }
    let tn = t.dot(&samp.n) / len;
    if tn.abs() >= 1e-10 {
        return Err(GeometryError::NotTangent);
    }
    let t = (t - samp.n * t.dot(&samp.n)).normalize();
    let ff = fundamental_forms(samp);
    Ok(curvature_along(samp, &ff, &samp.n.cross(&t)))
}

/// `(kappa_N(rho_hat), kappa_N(rho_tilde))` for a frame at this sample.
pub fn frame_curvatures(samp: &GeometrySample, frame: &LocalFrame) -> (f64, f64) {
    let ff = fundamental_forms(samp);
    let k_hat = curvature_along(samp, &ff, &frame.rho_tilde);
    let k_tilde = curvature_along(samp, &ff, &frame.rho_hat);
    (k_hat, k_tilde)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Element;
    use approx::assert_relative_eq;

    fn flat_origin() -> GeometrySample {
        Element::flat(Vec3::zeros(), Vec3::x(), Vec3::y()).sample(0.0, 0.0).unwrap()
    }

    #[test]
    fn frame_above_point() {
        let f = local_frame(&flat_origin(), &Vec3::new(0.0, 0.0, 2.0));
        assert_eq!(f.h, 2.0);
        assert_eq!(f.rho, 0.0);
        assert_eq!(f.r, 2.0);
        assert_relative_eq!(f.rho_hat.dot(&f.n), 0.0);
        assert_relative_eq!(f.rho_tilde, f.n.cross(&f.rho_hat));
    }

    #[test]
    fn frame_in_plane() {
        let f = local_frame(&flat_origin(), &Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(f.h, 0.0);
        assert_eq!(f.rho, 1.0);
        assert_relative_eq!(f.rho_hat, Vec3::new(-1.0, 0.0, 0.0));
        assert_relative_eq!(f.rho_vec, Vec3::new(-1.0, 0.0, 0.0));
        assert_relative_eq!(f.rho_tilde, Vec3::new(0.0, -1.0, 0.0));
    }

    #[test]
    fn frame_below() {
        let s = Element::flat(Vec3::zeros(), Vec3::x(), Vec3::y()).sample(0.5, 0.0).unwrap();
        let f = local_frame(&s, &Vec3::new(0.0, 0.0, -1.0));
        assert_eq!(f.h, -1.0);
        assert_relative_eq!(f.r, 1.25f64.sqrt());
        assert_relative_eq!(f.r * f.r, f.rho * f.rho + f.h * f.h, max_relative = 1e-14);
    }

    #[test]
    fn fundamental_forms_of_flat_and_paraboloid() {
        let ff = fundamental_forms(&flat_origin());
        assert_eq!((ff.e_big, ff.f_big, ff.g_big, ff.e, ff.f, ff.g), (1.0, 0.0, 1.0, 0.0, 0.0, 0.0));
        let s = Element::paraboloid(0.6).sample(0.25, 0.25).unwrap();
        let ff = fundamental_forms(&s);
        assert_relative_eq!(ff.e, 1.2, epsilon = 1e-14);
        assert_relative_eq!(ff.g, 1.2, epsilon = 1e-14);
        assert_relative_eq!(ff.f, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn sphere_gaussian_curvature() {
        let s = Element::spherical(1.0, Vec3::x(), Vec3::y(), Vec3::z()).sample(0.2, 0.3).unwrap();
        let ff = fundamental_forms(&s);
        assert_relative_eq!(ff.e * ff.g - ff.f * ff.f, ff.metric_det(), max_relative = 1e-12);
        assert_relative_eq!(ff.gaussian_curvature(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn normal_curvature_cases() {
        let flat = flat_origin();
        assert_eq!(normal_curvature(&flat, &Vec3::new(0.3, 0.7, 0.0)).unwrap(), 0.0);
        let s = Element::spherical(2.0, Vec3::x(), Vec3::y(), Vec3::z()).sample(0.3, 0.3).unwrap();
        let t = s.r_u + s.r_v * 0.4;
        assert_relative_eq!(normal_curvature(&s, &t).unwrap(), -0.5, max_relative = 1e-12);
        let p = Element::paraboloid(0.6).sample(0.25, 0.25).unwrap();
        assert_relative_eq!(normal_curvature(&p, &Vec3::x()).unwrap(), 1.2, max_relative = 1e-12);
        assert!(matches!(normal_curvature(&flat, &Vec3::z()), Err(GeometryError::NotTangent)));
        assert!(normal_curvature(&flat, &Vec3::zeros()).is_err());
    }
}
