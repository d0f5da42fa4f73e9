//! One-stop facade: preprocessing plus every query type.

use crate::geom::{DirVector, EpsilonConfig, GeomError, Point, PolygonalEnvironment};
use crate::locate::{BucketGrid, LocateError, PointLocationResult};
use crate::mesh::{MeshError, TriMesh};
use crate::vis::{self, RadialError, RadialVisibilityRegion, SiteIndex, VisQueryStats, VisiblePoints};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum EngineError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Locate(#[from] LocateError),
    #[error(transparent)]
    Radial(#[from] RadialError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct EngineConfig {
    pub eps: EpsilonConfig,
    pub bucket_size: f64,
    /// Largest angle subtended by one chord when sampling arcs.
    pub arc_angle: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { eps: EpsilonConfig::default(), bucket_size: 1.0, arc_angle: std::f64::consts::PI / 180.0 }
    }
}

/// Polygon output of a region query.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionResult {
    /// Ccw boundary; may contain zero-width spikes.
    pub polygon: Vec<Point>,
    /// Region before arc sampling.
    pub radial: RadialVisibilityRegion,
    pub stats: VisQueryStats,
}

#[derive(Clone, Debug)]
pub struct VisEngine {
    env: PolygonalEnvironment,
    mesh: TriMesh,
    grid: BucketGrid,
    cfg: EngineConfig,
}

impl VisEngine {
    pub fn new(env: PolygonalEnvironment, cfg: EngineConfig) -> Result<VisEngine, EngineError> {
        let mesh = TriMesh::build(&env)?;
        let grid = BucketGrid::build(&mesh, cfg.bucket_size)?;
        Ok(VisEngine { env, mesh, grid, cfg })
    }

    pub fn env(&self) -> &PolygonalEnvironment {
        &self.env
    }

    pub fn mesh(&self) -> &TriMesh {
        &self.mesh
    }

    pub fn grid(&self) -> &BucketGrid {
        &self.grid
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    pub fn locate(&self, q: Point) -> Option<PointLocationResult> {
        self.grid.locate(&self.mesh, q, &self.cfg.eps)
    }

    /// Visibility region of `q` as a polygon; `None` if `q` is outside.
    pub fn visibility_region(&self, q: Point, d: Option<f64>) -> Result<Option<RegionResult>, EngineError> {
        let Some(pl) = self.locate(q) else { return Ok(None) };
        self.visibility_region_at(&pl, q, d).map(Some)
    }

    pub fn visibility_region_at(
        &self,
        pl: &PointLocationResult,
        q: Point,
        d: Option<f64>,
    ) -> Result<RegionResult, EngineError> {
        let (abs, stats) = vis::visibility_region(&self.mesh, pl, q, d);
        let mut radial = vis::to_radial(&self.mesh, &abs)?;
        if let Some(d) = d {
            radial = vis::intersect_with_circle(&radial, d)?;
        }
        let sampled = vis::sample_arc_edges(&radial, self.cfg.arc_angle)?;
        let polygon = vis::to_polygon(&sampled)?;
        Ok(RegionResult { polygon, radial, stats })
    }

    pub fn two_point_visible(&self, q: Point, p: Point, d: Option<f64>) -> Option<bool> {
        let pl = self.locate(q)?;
        Some(vis::two_point_visible(&self.mesh, &pl, q, p, d).0)
    }

    /// `None` if `q` is outside; `Some(None)` if the hit is beyond `d`.
    pub fn shoot_ray(&self, q: Point, u: DirVector, d: Option<f64>) -> Option<Option<Point>> {
        let pl = self.locate(q)?;
        Some(vis::shoot_ray(&self.mesh, &pl, q, u, d).0)
    }

    /// Mesh vertex ids visible from `q`.
    pub fn visible_vertices(&self, q: Point, filter: Option<&HashSet<usize>>, d: Option<f64>) -> Option<Vec<usize>> {
        let pl = self.locate(q)?;
        Some(vis::visible_vertices(&self.mesh, &pl, q, filter, d).0)
    }

    pub fn site_index(&self, sites: &[Point]) -> SiteIndex {
        SiteIndex::build(&self.mesh, &self.grid, &self.cfg.eps, sites)
    }

    pub fn visible_points(&self, q: Point, sites: &SiteIndex, d: Option<f64>) -> Option<VisiblePoints> {
        let pl = self.locate(q)?;
        Some(vis::visible_points(&self.mesh, &pl, q, sites, d).0)
    }
}
