//! Obstacles and ray queries.

mod body;
mod curve;
mod scene;
mod validate;

use nalgebra::DVector;

pub use body::{BodyKind, ConvexBody};
pub use curve::{Arc, ArcGeometry, CurveObstacle};
pub use scene::{ReferenceBall, Scene, SceneHit};
pub use validate::{ValidationReport, Violation, validate_scene};

/// Points and directions in `R^d`.
pub type Vector = DVector<f64>;

pub fn vector(xs: &[f64]) -> Vector {
    Vector::from_column_slice(xs)
}

/// Tolerance on `|<v, n>|` below which a hit is classified as grazing.
pub const TANGENCY_EPS: f64 = 1e-8;

/// Normalised quadratic discriminants within this band are treated as a
/// double root.
pub const DOUBLE_ROOT_BAND: f64 = 1e-14;

/// Largest `|phi|` accepted at a reported hit point.
pub const ROOT_TOL: f64 = 1e-9;

/// A ray meeting an obstacle boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct Hit {
    /// Ray parameter (distance along the unit direction).
    pub t: f64,
    pub point: Vector,
    /// Outward unit normal at `point`.
    pub normal: Vector,
    /// `<v, n>` for the incoming direction; non-positive for an entering ray.
    pub cos_incidence: f64,
    pub grazing: bool,
}
