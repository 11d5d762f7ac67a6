//! Curved triangular elements and their local differential geometry.

mod element;
mod frame;
mod search;

pub use element::{in_reference_triangle, Element, ElementKind, GeometrySample, QuadraticPatch, Vec3};
pub use frame::{fundamental_forms, local_frame, normal_curvature, frame_curvatures, FundamentalForms, LocalFrame};
pub use search::{closest_point, h_hat_range, ClosestPoint};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GeometryError {
    #[error("parameter point ({u}, {v}) is outside the reference triangle")]
    OutsideReferenceTriangle { u: f64, v: f64 },
    #[error("parametrization is degenerate at ({u}, {v})")]
    Degenerate { u: f64, v: f64 },
    #[error("direction is not tangent to the surface")]
    NotTangent,
    #[error("evaluation point lies on the element")]
    OnElement,
}
