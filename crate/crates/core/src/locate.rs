//! Bucketed point location with ε-relaxed fallback and vertex snapping.

use crate::geom::predicates::{min_edge_distance, point_in_triangle};
use crate::geom::{EpsilonConfig, Point, TriangleHit};
use crate::mesh::TriMesh;
use thiserror::Error;

/// Upper bound on the number of grid cells, to fail fast on unit mismatches.
const MAX_CELLS: usize = 1 << 28;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum LocateError {
    #[error("bucket size must be positive and finite, got {0}")]
    BadCellSize(f64),
    #[error("bucket grid would need {0} cells")]
    TooManyCells(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coincidence {
    Interior,
    OnEdge(usize),
    OnVertex(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointLocationResult {
    pub triangle: usize,
    pub coincidence: Coincidence,
    pub snapped_vertex: Option<usize>,
    pub eps1_used: Option<f64>,
}

/// Uniform grid over the mesh bounding box; each cell lists the triangles
/// whose closure meets it.
#[derive(Clone, Debug)]
pub struct BucketGrid {
    origin: Point,
    cell_size: f64,
    cols: usize,
    rows: usize,
    start: Vec<u32>,
    items: Vec<u32>,
}

impl BucketGrid {
    pub fn build(mesh: &TriMesh, cell_size: f64) -> Result<BucketGrid, LocateError> {
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(LocateError::BadCellSize(cell_size));
        }
        let bb = mesh.bbox();
        let cols = ((bb.width() / cell_size).ceil() as usize).max(1);
        let rows = ((bb.height() / cell_size).ceil() as usize).max(1);
        let n = cols.checked_mul(rows).unwrap_or(usize::MAX);
        if n > MAX_CELLS {
            return Err(LocateError::TooManyCells(n));
        }
        let mut grid = BucketGrid { origin: bb.min, cell_size, cols, rows, start: Vec::new(), items: Vec::new() };

        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for t in 0..mesh.num_triangles() {
            let c = mesh.corners(t);
            let (c0, r0) = grid.cell_of(Point::new(c[0].x.min(c[1].x).min(c[2].x), c[0].y.min(c[1].y).min(c[2].y)));
            let (c1, r1) = grid.cell_of(Point::new(c[0].x.max(c[1].x).max(c[2].x), c[0].y.max(c[1].y).max(c[2].y)));
            // Widen by one cell where the bbox lands close to a cell border.
            let (c0, r0) = (c0.saturating_sub(1), r0.saturating_sub(1));
            let (c1, r1) = ((c1 + 1).min(cols - 1), (r1 + 1).min(rows - 1));
            for r in r0..=r1 {
                for col in c0..=c1 {
                    if grid.cell_meets_triangle(col, r, &c) {
                        pairs.push(((r * cols + col) as u32, t as u32));
                    }
                }
            }
        }
        pairs.sort_unstable();
        grid.start = vec![0; n + 1];
        for &(cell, _) in &pairs {
            grid.start[cell as usize + 1] += 1;
        }
        for i in 0..n {
            grid.start[i + 1] += grid.start[i];
        }
        grid.items = pairs.into_iter().map(|(_, t)| t).collect();
        Ok(grid)
    }

    /// Separating-axis test against the cell grown by a relative margin.
    fn cell_meets_triangle(&self, col: usize, row: usize, c: &[Point; 3]) -> bool {
        let m = self.cell_size * 1e-7;
        let x0 = self.origin.x + col as f64 * self.cell_size - m;
        let y0 = self.origin.y + row as f64 * self.cell_size - m;
        let x1 = self.origin.x + (col + 1) as f64 * self.cell_size + m;
        let y1 = self.origin.y + (row + 1) as f64 * self.cell_size + m;
        let corners = [Point::new(x0, y0), Point::new(x1, y0), Point::new(x1, y1), Point::new(x0, y1)];
        for i in 0..3 {
            let (a, b) = (c[i], c[(i + 1) % 3]);
            let d = b - a;
            let len = d.norm();
            let slack = m * len;
            // Triangle is ccw; the cell is separated if all corners are right of an edge.
            if corners.iter().all(|&p| d.cross(p - a) < -slack) {
                return false;
            }
        }
        true
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn num_cells(&self) -> usize {
        self.cols * self.rows
    }

    /// Total number of (cell, triangle) registrations.
    pub fn num_entries(&self) -> usize {
        self.items.len()
    }

    /// Cell indices of `p`, clamped to the grid.
    pub fn cell_of(&self, p: Point) -> (usize, usize) {
        let fx = ((p.x - self.origin.x) / self.cell_size).floor();
        let fy = ((p.y - self.origin.y) / self.cell_size).floor();
        let clamp = |f: f64, n: usize| if f <= 0.0 || f.is_nan() { 0 } else { (f as usize).min(n - 1) };
        (clamp(fx, self.cols), clamp(fy, self.rows))
    }

    pub fn cell(&self, col: usize, row: usize) -> &[u32] {
        let i = row * self.cols + col;
        &self.items[self.start[i] as usize..self.start[i + 1] as usize]
    }

    /// Finds the triangle containing `q`, or `None` if `q` is outside the free space.
    pub fn locate(&self, mesh: &TriMesh, q: Point, cfg: &EpsilonConfig) -> Option<PointLocationResult> {
        if !q.is_finite() {
            return None;
        }
        let bb = mesh.bbox();
        let reach = cfg.max_eps1();
        if q.x < bb.min.x - reach || q.x > bb.max.x + reach || q.y < bb.min.y - reach || q.y > bb.max.y + reach {
            return None;
        }
        let (col, row) = self.cell_of(q);
        for &t in self.cell(col, row) {
            let t = t as usize;
            let hit = point_in_triangle(q, &mesh.corners(t), 0.0);
            if hit.is_hit() {
                return Some(finish(mesh, q, t, hit, None, cfg));
            }
        }

        let ring = 1.max((reach / self.cell_size).ceil() as usize);
        let mut cands: Vec<usize> = Vec::new();
        for r in row.saturating_sub(ring)..=(row + ring).min(self.rows - 1) {
            for c in col.saturating_sub(ring)..=(col + ring).min(self.cols - 1) {
                cands.extend(self.cell(c, r).iter().map(|&t| t as usize));
            }
        }
        cands.sort_unstable();
        cands.dedup();
        let dists: Vec<(f64, usize)> =
            cands.iter().map(|&t| (min_edge_distance(q, &mesh.corners(t)).0, t)).collect();
        for &eps in cfg.eps1() {
            let mut best: Option<(f64, usize)> = None;
            for &(d, t) in &dists {
                if d >= -eps && best.is_none_or(|(bd, _)| d > bd) {
                    best = Some((d, t));
                }
            }
            if let Some((_, t)) = best {
                let hit = point_in_triangle(q, &mesh.corners(t), eps);
                return Some(finish(mesh, q, t, hit, Some(eps), cfg));
            }
        }
        None
    }
}

fn finish(
    mesh: &TriMesh,
    q: Point,
    t: usize,
    hit: TriangleHit,
    eps1_used: Option<f64>,
    cfg: &EpsilonConfig,
) -> PointLocationResult {
    let tri = mesh.triangle(t);
    let coincidence = match hit {
        TriangleHit::OnVertex(k) => Coincidence::OnVertex(tri.v[k]),
        TriangleHit::OnEdge(k) => Coincidence::OnEdge(tri.e[k]),
        _ => Coincidence::Interior,
    };
    let mut snapped_vertex = None;
    let mut best = f64::INFINITY;
    for &v in &tri.v {
        let d = mesh.point(v).dist(q);
        if d <= cfg.eps2() && d < best {
            best = d;
            snapped_vertex = Some(v);
        }
    }
    PointLocationResult { triangle: t, coincidence, snapped_vertex, eps1_used }
}

/// Reference location by scanning every triangle; smallest accepting id wins.
pub fn locate_exhaustive(mesh: &TriMesh, q: Point) -> Option<usize> {
    (0..mesh.num_triangles()).find(|&t| point_in_triangle(q, &mesh.corners(t), 0.0).is_hit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{validate_and_normalize, Ring};

    fn square(s: f64) -> TriMesh {
        let r = Ring::from_vertices_unchecked(vec![
            Point::new(0., 0.),
            Point::new(s, 0.),
            Point::new(s, s),
            Point::new(0., s),
        ]);
        TriMesh::build(&validate_and_normalize(vec![r]).unwrap().0).unwrap()
    }

    #[test]
    fn unit_square_one_cell() {
        let m = square(1.0);
        let g = BucketGrid::build(&m, 1.0).unwrap();
        assert_eq!(g.num_cells(), 1);
        assert_eq!(g.cell(0, 0).len(), 2);
        assert!(BucketGrid::build(&m, 0.0).is_err());
        assert!(BucketGrid::build(&m, -1.0).is_err());
    }

    #[test]
    fn ten_square_cells() {
        let m = square(10.0);
        let g = BucketGrid::build(&m, 1.0).unwrap();
        assert_eq!(g.num_cells(), 100);
        for t in 0..m.num_triangles() {
            assert!((0..10).any(|r| (0..10).any(|c| g.cell(c, r).contains(&(t as u32)))));
        }
    }

    #[test]
    fn spec_examples() {
        let m = square(10.0);
        let g = BucketGrid::build(&m, 1.0).unwrap();
        let cfg = EpsilonConfig::default();
        let r = g.locate(&m, Point::new(5., 5.5), &cfg).unwrap();
        assert_eq!(Some(r.triangle), locate_exhaustive(&m, Point::new(5., 5.5)));
        assert_eq!(r.coincidence, Coincidence::Interior);
        assert_eq!(r.snapped_vertex, None);
        assert!(g.locate(&m, Point::new(-1., 5.), &cfg).is_none());
        let r = g.locate(&m, Point::new(0., 0.), &cfg).unwrap();
        let v0 = m.mesh_vertex(0);
        assert_eq!(r.coincidence, Coincidence::OnVertex(v0));
        assert_eq!(r.snapped_vertex, Some(v0));
        assert_eq!(r.eps1_used, None);
        let r = g.locate(&m, Point::new(1e-13, 1e-13), &cfg).unwrap();
        assert_eq!(r.snapped_vertex, Some(v0));
    }

    #[test]
    fn epsilon_fallback() {
        let m = square(10.0);
        let g = BucketGrid::build(&m, 1.0).unwrap();
        let q = Point::new(5.0, -1e-12);
        assert!(g.locate(&m, q, &EpsilonConfig::exact()).is_none());
        let r = g.locate(&m, q, &EpsilonConfig::default()).unwrap();
        assert_eq!(r.eps1_used, Some(1e-12));
        assert!(matches!(r.coincidence, Coincidence::OnEdge(_)));
        assert!(g.locate(&m, Point::new(5.0, -1e-8), &EpsilonConfig::default()).is_none());
    }
}
