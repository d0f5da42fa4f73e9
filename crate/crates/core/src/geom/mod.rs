//! Primitive types, exact predicates and environment normalization.

mod env;
mod error;
mod point;
pub mod predicates;
mod ring;
pub(crate) use ring::candidate_pairs;

pub use env::{validate_and_normalize, Discarded, EpsilonConfig, PolygonalEnvironment};
pub use error::GeomError;
pub use point::{BBox, DirVector, Point};
pub use predicates::{orient, point_in_triangle, ray_segment_intersection, Orientation, TriangleHit};
pub use ring::Ring;
