use std::f64::consts::PI;

use num_complex::Complex64;

use super::BemError;
use crate::geometry::Vec3;
use crate::specfun::{legendre_all, sph_bessel_scaled, ScaledSphericalBessel};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Acoustic field between concentric spheres `a < r < b`: the cap `theta < pi/2`
/// of the inner sphere vibrates radially with velocity `v0`, the outer wall is
/// rigid. Time dependence `e^{-i omega t}`, so `dp/dr = i k c q v0` on the cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityProblem {
    pub a: f64,
    pub b: f64,
    pub k: f64,
    pub v0: f64,
    pub c_s: f64,
    pub q: f64,
    /// Series truncation order.
    pub n_max: usize,
}

impl Default for CavityProblem {
    fn default() -> Self {
        Self { a: 0.5, b: 1.0, k: 2.0, v0: 1.0, c_s: 1.0, q: 1.0, n_max: 400 }
    }
}

/// Radial factors of each mode at one radius.
struct Radial {
    t: Vec<Complex64>,
    dt: Vec<Complex64>,
}

impl CavityProblem {
    pub fn validate(&self) -> Result<(), BemError> {
        if !(self.a > 0.0 && self.a < self.b && self.k > 0.0 && self.b.is_finite()) {
            return Err(BemError::InvalidProblem(format!("need 0 < a < b and k > 0 (a={}, b={}, k={})", self.a, self.b, self.k)));
        }
        Ok(())
    }

    /// `int_0^1 P_n(mu) d mu` times `sqrt((2n+1) pi)`: the zonal coefficients
    /// of the unit step `theta < pi/2` in the orthonormal harmonics.
    fn piston_coefficients(&self, n_max: usize) -> Vec<f64> {
        let p0 = legendre_all(n_max + 1, 0.0);
        (0..=n_max)
            .map(|n| {
                let integral = if n == 0 { 1.0 } else { (p0[n - 1] - p0[n + 1]) / (2 * n + 1) as f64 };
                ((2 * n + 1) as f64 * PI).sqrt() * integral
            })
            .collect()
    }

    /// Mode shapes normalized so that their radial derivative at `r = a`
    /// is `1/k`, scaled throughout to avoid overflow for `n >> kr`.
    fn radial(&self, r: f64, n_max: usize) -> Result<Radial, BemError> {
        let sa = sph_bessel_scaled(n_max, self.k * self.a)?;
        let sb = sph_bessel_scaled(n_max, self.k * self.b)?;
        let sr = sph_bessel_scaled(n_max, self.k * r)?;
        let hbar = |s: &ScaledSphericalBessel, n: usize, eps: f64| Complex64::new(eps * s.j_hat[n], -s.y_hat[n]);
        let hbar_d = |s: &ScaledSphericalBessel, n: usize, eps: f64| Complex64::new(eps * s.jd_hat[n], -s.yd_hat[n]);
        let mut t = Vec::with_capacity(n_max + 1);
        let mut dt = Vec::with_capacity(n_max + 1);
        let (mut eps_a, mut eps_b, mut eps_r) = (sa.x, sb.x, sr.x);
        for n in 0..=n_max {
            if n > 0 {
                let nf = n as f64;
                let f = 1.0 / ((2.0 * nf + 1.0) * (2.0 * nf - 1.0));
                eps_a *= sa.x * sa.x * f;
                eps_b *= sb.x * sb.x * f;
                eps_r *= sr.x * sr.x * f;
            }
            let rt = sb.jd_hat[n] / hbar_d(&sb, n, eps_b);
            let ab = (self.a / self.b).powi(2 * n as i32 + 1);
            let rb = (r / self.b).powi(2 * n as i32 + 1);
            let ar = (self.a / r).powi(n as i32 + 1);
            let den = ab * sa.jd_hat[n] - rt * hbar_d(&sa, n, eps_a);
            t.push(ar * (rb * sr.j_hat[n] - rt * hbar(&sr, n, eps_r)) / den);
            dt.push(ar * (rb * sr.jd_hat[n] - rt * hbar_d(&sr, n, eps_r)) / den);
        }
        Ok(Radial { t, dt })
    }

    fn check_radius(&self, r: f64) -> Result<(), BemError> {
        let slack = 1e-9 * self.b;
        if r < self.a - slack || r > self.b + slack {
            return Err(BemError::OutsideAnnulus { radius: r, a: self.a, b: self.b });
        }
        Ok(())
    }

    /// Pressure and radial derivative at `(r, theta)` summed to order `n_max`.
    pub fn series(&self, r: f64, theta: f64, n_max: usize) -> Result<(Complex64, Complex64), BemError> {
        self.validate()?;
        self.check_radius(r)?;
        let r = r.clamp(self.a, self.b);
        let rad = self.radial(r, n_max)?;
        let coef = self.piston_coefficients(n_max);
        let p = legendre_all(n_max, theta.cos());
        let scale = I * self.v0 * self.c_s * self.q;
        let (mut pr, mut dpr) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for n in 0..=n_max {
            if coef[n] == 0.0 {
                continue;
            }
            let y = ((2 * n + 1) as f64 / (4.0 * PI)).sqrt() * p[n];
            pr += rad.t[n] * (coef[n] * y);
            dpr += rad.dt[n] * (coef[n] * y);
        }
        Ok((scale * pr, scale * self.k * dpr))
    }

    pub fn pressure_at(&self, r: f64, theta: f64) -> Result<Complex64, BemError> {
        Ok(self.series(r, theta, self.n_max)?.0)
    }

    pub fn radial_derivative_at(&self, r: f64, theta: f64) -> Result<Complex64, BemError> {
        Ok(self.series(r, theta, self.n_max)?.1)
    }

    /// Analytic pressure at Cartesian points (the polar axis is `z`).
    pub fn analytic_pressure(&self, points: &[Vec3]) -> Result<Vec<Complex64>, BemError> {
        points
            .iter()
            .map(|x| {
                let r = x.norm();
                self.pressure_at(r, (x.z / r).clamp(-1.0, 1.0).acos())
            })
            .collect()
    }

    /// Size of the last retained nonzero mode at `(b, 0)` relative to the pressure there.
    pub fn tail_ratio(&self) -> Result<f64, BemError> {
        let full = self.series(self.b, 0.0, self.n_max)?.0;
        let coef = self.piston_coefficients(self.n_max);
        let last = (0..=self.n_max).rev().find(|&n| coef[n] != 0.0).unwrap_or(0);
        let prev = self.series(self.b, 0.0, last.saturating_sub(1))?.0;
        Ok((full - prev).norm() / full.norm())
    }

    /// Truncation guard: the last mode contributes below `1e-12` at `(b, 0)`.
    pub fn converged(&self) -> Result<bool, BemError> {
        Ok(self.tail_ratio()? < 1e-12)
    }
}
