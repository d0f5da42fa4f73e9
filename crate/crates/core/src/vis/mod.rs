//! Visibility queries by triangular expansion.

mod expand;
mod queries;
mod radial;
mod walk;

use crate::geom::Point;
use serde::Serialize;

pub use expand::visibility_region;
pub use queries::{shoot_ray, two_point_traversal, two_point_visible, visible_points, visible_vertices, SiteIndex, VisiblePoints};
pub use radial::{
    canonical_form, intersect_with_circle, sample_arc_edges, to_polygon, to_radial, EdgeKind, RadialError,
    RadialVertex, RadialVisibilityRegion, VertexKind,
};

/// Counters gathered during one query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VisQueryStats {
    pub triangles_traversed: usize,
    pub views_split: usize,
    pub boundary_edges_hit: usize,
}

/// A boundary edge seen through a restricted view. Restrictions are vertices
/// whose ray from the seed cuts the edge; `None` means the view reaches the
/// edge endpoint itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeSegment {
    pub edge: usize,
    /// Endpoint on the right as seen from the seed.
    pub a: usize,
    /// Endpoint on the left.
    pub b: usize,
    pub right: Option<usize>,
    pub left: Option<usize>,
    /// Expansion stopped here because the edge is farther than the range.
    pub pruned: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Element {
    /// The seed vertex itself, where the region touches the boundary.
    Node(usize),
    Segment(EdgeSegment),
    /// Far end of a view that collapsed onto a single ray.
    RayEnd { point: Point, kind: VertexKind },
}

/// Region boundary before intersections are computed, ccw around the seed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AbstractVisibilityRegion {
    pub seed: Point,
    pub seed_vertex: Option<usize>,
    pub radius: Option<f64>,
    pub elements: Vec<Element>,
}
