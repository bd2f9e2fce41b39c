//! Bernstein–Bézier form on a single triangle.

pub mod geometry;
pub mod patch;

pub use geometry::{direction_coords, to_barycentric, BaryPoint, BaryVector, Point2, Triangle, Vector2};
pub use patch::{
    bernstein_eval, coefficient_count, derivative_patch, derivative_weights, eval_derivative, BezierPatch,
    MultiIndex,
};
