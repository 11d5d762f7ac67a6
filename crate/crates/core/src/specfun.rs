//! Legendre polynomials, spherical Bessel/Hankel functions and zonal
//! spherical harmonics.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SpecfunError {
    #[error("argument must be positive, got {0}")]
    NonPositiveArgument(f64),
    #[error("order {0} exceeds the supported maximum of 200")]
    OrderTooLarge(usize),
}

/// `P_n(x)` by the three-term recurrence.
pub fn legendre_p(n: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return 1.0;
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `P_0(x) .. P_n(x)`.
pub fn legendre_all(n: usize, x: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(n + 1);
    p.push(1.0);
    if n >= 1 {
        p.push(x);
    }
    for k in 1..n {
        let kf = k as f64;
        p.push(((2.0 * kf + 1.0) * x * p[k] - kf * p[k - 1]) / (kf + 1.0));
    }
    p
}

/// Orthonormal zonal harmonic `sqrt((2n+1)/(4 pi)) P_n(cos theta)`.
pub fn sph_harmonic_n0(n: usize, theta: f64) -> f64 {
    ((2 * n + 1) as f64 / (4.0 * PI)).sqrt() * legendre_p(n, theta.cos())
}

/// Spherical Bessel functions scaled to be `O(1)` for `n >> x`:
///
/// ```text
/// j_hat_n  =  j_n(x)  (2n+1)!! / x^n        y_hat_n  = -y_n(x)  x^{n+1} / (2n-1)!!
/// jd_hat_n =  j_n'(x) (2n+1)!! / x^n        yd_hat_n = -y_n'(x) x^{n+1} / (2n-1)!!
/// ```
///
/// with `(-1)!! = 1`. The scaled Wronskian is
/// `jd_hat y_hat - j_hat yd_hat = (2n+1)/x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledSphericalBessel {
    pub x: f64,
    pub j_hat: Vec<f64>,
    pub jd_hat: Vec<f64>,
    pub y_hat: Vec<f64>,
    pub yd_hat: Vec<f64>,
}

impl ScaledSphericalBessel {
    /// `x^{2n+1} / ((2n+1)!! (2n-1)!!)`, the ratio between the two scalings.
    pub fn epsilon(&self, n: usize) -> f64 {
        let mut e = self.x;
        for k in 1..=n {
            let kf = k as f64;
            e *= self.x * self.x / ((2.0 * kf + 1.0) * (2.0 * kf - 1.0));
        }
        e
    }
}

/// Scaled `j_n`, `y_n` and derivatives for `n = 0..=n_max`.
///
/// `j` comes from a downward (Miller) recurrence normalized by `j_0`, `y`
/// from the upward recurrence; both are stable in the scaled form.
pub fn sph_bessel_scaled(n_max: usize, x: f64) -> Result<ScaledSphericalBessel, SpecfunError> {
    if !(x > 0.0) {
        return Err(SpecfunError::NonPositiveArgument(x));
    }
    let top = n_max + 1;
    let start = top + 20.max(x.ceil() as usize) + (2.0 * x) as usize;
    // ĵ_{n-1} = ĵ_n - x² ĵ_{n+1} / ((2n+1)(2n+3))
    let mut j = vec![0.0; top + 1];
    let (mut jp1, mut jn) = (0.0, 1.0);
    let x2 = x * x;
    for n in (1..=start).rev() {
        let nf = n as f64;
        let jm1 = jn - x2 * jp1 / ((2.0 * nf + 1.0) * (2.0 * nf + 3.0));
        if n <= top {
            j[n] = jn;
        }
        jp1 = jn;
        jn = jm1;
        if jn.abs() > 1e250 {
            for v in j.iter_mut() {
                *v *= 1e-250;
            }
            jp1 *= 1e-250;
            jn *= 1e-250;
        }
    }
    j[0] = jn;
    let j0 = if x < 1e-4 { 1.0 - x2 / 6.0 + x2 * x2 / 120.0 } else { x.sin() / x };
    let scale = j0 / j[0];
    for v in j.iter_mut() {
        *v *= scale;
    }

    let mut y = vec![0.0; top + 1];
    y[0] = x.cos();
    if top >= 1 {
        y[1] = x.cos() + x * x.sin();
    }
    for n in 1..top {
        let nf = n as f64;
        y[n + 1] = y[n] - y[n - 1] * x2 / ((2.0 * nf + 1.0) * (2.0 * nf - 1.0));
    }

    let mut jd = vec![0.0; n_max + 1];
    let mut yd = vec![0.0; n_max + 1];
    for n in 0..=n_max {
        let nf = n as f64;
        jd[n] = nf * j[n] / x - x * j[n + 1] / (2.0 * nf + 3.0);
        yd[n] = if n == 0 { -y[1] / x } else { x * y[n - 1] / (2.0 * nf - 1.0) - (nf + 1.0) * y[n] / x };
    }
    j.truncate(n_max + 1);
    y.truncate(n_max + 1);
    Ok(ScaledSphericalBessel { x, j_hat: j, jd_hat: jd, y_hat: y, yd_hat: yd })
}

/// `j_n`, `h_n^{(1)} = j_n + i y_n` and derivatives at one argument.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalBesselPair {
    pub j: Vec<f64>,
    pub h1: Vec<Complex64>,
    pub jp: Vec<f64>,
    pub h1p: Vec<Complex64>,
}

/// Unscaled spherical Bessel and Hankel functions for `n = 0..=n_max`.
///
/// `y_n` grows like `(2n-1)!!/x^{n+1}` and overflows to infinity once
/// `n >> x`; use [`sph_bessel_scaled`] in that regime.
pub fn sph_bessel(n_max: usize, x: f64) -> Result<SphericalBesselPair, SpecfunError> {
    if n_max > 200 {
        return Err(SpecfunError::OrderTooLarge(n_max));
    }
    let s = sph_bessel_scaled(n_max, x)?;
    let mut t = 1.0; // x^n / (2n+1)!!
    let mut u = 1.0 / x; // (2n-1)!! / x^{n+1}
    let mut out = SphericalBesselPair { j: vec![], h1: vec![], jp: vec![], h1p: vec![] };
    for n in 0..=n_max {
        if n > 0 {
            let nf = n as f64;
            t *= x / (2.0 * nf + 1.0);
            u *= (2.0 * nf - 1.0) / x;
        }
        let (j, jp) = (s.j_hat[n] * t, s.jd_hat[n] * t);
        let (y, yp) = (-s.y_hat[n] * u, -s.yd_hat[n] * u);
        out.j.push(j);
        out.jp.push(jp);
        out.h1.push(Complex64::new(j, y));
        out.h1p.push(Complex64::new(jp, yp));
    }
    Ok(out)
}
