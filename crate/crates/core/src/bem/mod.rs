//! Collocation BEM for the interior Helmholtz problem between two concentric
//! spheres: a vibrating cap on the inner sphere, a rigid outer wall.

mod analytic;
mod assembly;
pub mod io;
mod mesh;

pub use analytic::CavityProblem;
pub use assembly::{
    assemble, assemble_double_layer, assemble_single_layer, condition_number_1, near_pairs, relative_l2_error, solve, DenseSystem, NearMethod, Solution,
};
pub use mesh::{cavity_mesh, icosphere, Mesh, MeshVariant};

use thiserror::Error;

use crate::layerpot::LayerPotError;
use crate::specfun::SpecfunError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BemError {
    #[error("entry ({row}, {col}): {source}")]
    Assembly { row: usize, col: usize, source: LayerPotError },
    #[error("point at radius {radius} lies outside the annulus [{a}, {b}]")]
    OutsideAnnulus { radius: f64, a: f64, b: f64 },
    #[error("invalid cavity parameters: {0}")]
    InvalidProblem(String),
    #[error("system matrix is numerically singular")]
    Singular,
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("reference vector has zero norm")]
    ZeroNorm,
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}
