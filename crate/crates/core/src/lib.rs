//! Layer potentials of the Laplace and Helmholtz equations over curved
//! triangular boundary elements.
//!
//! The integrand `G` (or `dG/dn`) over an element is split into the surface
//! divergence of a pseudo potential field plus a term weighted by the normal
//! curvatures of the element. The divergence part becomes a contour integral
//! over the element boundary, and the curvature part has a singularity one
//! order weaker than the original integrand.

// quadrature constants keep their published digits, and `!(x > 0.0)` is
// used deliberately so that NaN takes the rejecting branch
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod bem;
pub mod geometry;
pub mod kernels;
pub mod layerpot;
pub mod quadrature;
pub mod specfun;

pub use num_complex::Complex64;
