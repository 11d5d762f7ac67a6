//! Quadrature rules: Gauss-Legendre on `[-1,1]`, collapsed tensor rules and
//! polar rules on the reference triangle, and an adaptive Gauss-Kronrod
//! integrator used as the reference oracle.

mod adaptive;
mod gauss;

pub use adaptive::{adaptive_gk, adaptive_gk_with, reference_integral_2d, Adaptive, Integrand};
pub use gauss::{gauss_legendre, polar_rule, triangle_rule, PolarRule, Rule1D, Rule2D, Wedge};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum QuadratureError {
    #[error("Gauss-Legendre order {0} is outside 1..=128")]
    OrderOutOfRange(usize),
    #[error("polar origin ({u}, {v}) is outside the reference triangle")]
    OriginOutside { u: f64, v: f64 },
    #[error("surrogate triangle is degenerate")]
    DegenerateSurrogate,
}
