//! Constrained Delaunay triangulation of the free space.

use crate::geom::{BBox, Point, PolygonalEnvironment};
use spade::{ConstrainedDelaunayTriangulation, Point2, Triangulation};
use std::collections::{HashMap, VecDeque};
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum MeshError {
    #[error("coordinate out of the triangulator's supported range: {0}")]
    Coordinate(String),
    #[error("constraint edges overlap or pass through a vertex")]
    BrokenConstraint,
    #[error("free space is not connected in the triangulation")]
    Disconnected,
    #[error("inside/outside labelling is inconsistent")]
    Inconsistent,
}

/// Triangle with ccw vertices. Edge `k` runs from `v[k]` to `v[(k+1)%3]` and
/// `nbr[k]` is the triangle across it, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Triangle {
    pub v: [usize; 3],
    pub nbr: [Option<usize>; 3],
    pub e: [usize; 3],
}

impl Triangle {
    /// Local index of mesh vertex `v`.
    pub fn local(&self, v: usize) -> Option<usize> {
        self.v.iter().position(|&x| x == v)
    }

    /// Local index of the edge shared with triangle `t`.
    pub fn edge_to(&self, t: usize) -> Option<usize> {
        self.nbr.iter().position(|&n| n == Some(t))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeshEdge {
    pub v: [usize; 2],
    pub tris: [Option<usize>; 2],
    pub boundary: bool,
}

/// One ccw run of triangles around a vertex, bounded by boundary edges unless
/// `closed`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wedge {
    pub triangles: Vec<usize>,
    pub closed: bool,
}

#[derive(Clone, Debug)]
pub struct TriMesh {
    points: Vec<Point>,
    triangles: Vec<Triangle>,
    edges: Vec<MeshEdge>,
    env_to_mesh: Vec<usize>,
    fans: Vec<Vec<Wedge>>,
    bbox: BBox,
}

impl TriMesh {
    pub fn build(env: &PolygonalEnvironment) -> Result<TriMesh, MeshError> {
        let mut index: HashMap<(u64, u64), usize> = HashMap::new();
        let mut points = Vec::new();
        let mut env_to_mesh = Vec::with_capacity(env.num_vertices());
        for &p in env.vertices() {
            let id = *index.entry(p.bits()).or_insert_with(|| {
                points.push(p);
                points.len() - 1
            });
            env_to_mesh.push(id);
        }
        let constraints: Vec<[usize; 2]> =
            env.edges().map(|(a, b)| [env_to_mesh[a], env_to_mesh[b]]).collect();

        let verts: Vec<Point2<f64>> = points.iter().map(|p| Point2::new(p.x, p.y)).collect();
        let mut conflict = false;
        let cdt: ConstrainedDelaunayTriangulation<Point2<f64>> =
            ConstrainedDelaunayTriangulation::try_bulk_load_cdt(verts, constraints.clone(), |_| conflict = true)
                .map_err(|e| MeshError::Coordinate(format!("{e:?}")))?;
        if conflict || cdt.num_vertices() != points.len() || cdt.num_constraints() != constraints.len() {
            return Err(MeshError::BrokenConstraint);
        }

        // Raw triangles and their adjacency through a directed-edge map.
        let raw: Vec<[usize; 3]> = cdt
            .inner_faces()
            .map(|f| f.vertices().map(|v| v.fix().index()))
            .collect();
        let mut half: HashMap<(usize, usize), usize> = HashMap::with_capacity(raw.len() * 3);
        for (t, tri) in raw.iter().enumerate() {
            for k in 0..3 {
                half.insert((tri[k], tri[(k + 1) % 3]), t);
            }
        }
        let is_constraint: std::collections::HashSet<(usize, usize)> =
            constraints.iter().map(|&[a, b]| (a.min(b), a.max(b))).collect();
        for &[a, b] in &constraints {
            if !half.contains_key(&(a, b)) && !half.contains_key(&(b, a)) {
                return Err(MeshError::BrokenConstraint);
            }
        }

        // Parity flood fill: crossing a constraint toggles inside/outside.
        let mut parity: Vec<Option<bool>> = vec![None; raw.len()];
        let mut queue = VecDeque::new();
        for (t, tri) in raw.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                if !half.contains_key(&(b, a)) {
                    let p = is_constraint.contains(&(a.min(b), a.max(b)));
                    match parity[t] {
                        None => {
                            parity[t] = Some(p);
                            queue.push_back(t);
                        }
                        Some(q) if q != p => return Err(MeshError::Inconsistent),
                        _ => {}
                    }
                }
            }
        }
        while let Some(t) = queue.pop_front() {
            let tri = raw[t];
            let pt = parity[t].unwrap();
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                if let Some(&u) = half.get(&(b, a)) {
                    let pu = pt ^ is_constraint.contains(&(a.min(b), a.max(b)));
                    match parity[u] {
                        None => {
                            parity[u] = Some(pu);
                            queue.push_back(u);
                        }
                        Some(q) if q != pu => return Err(MeshError::Inconsistent),
                        _ => {}
                    }
                }
            }
        }

        let mut new_id = vec![usize::MAX; raw.len()];
        let mut kept = Vec::new();
        for (t, p) in parity.iter().enumerate() {
            if *p == Some(true) {
                new_id[t] = kept.len();
                kept.push(raw[t]);
            }
        }

        let mut edges: Vec<MeshEdge> = Vec::new();
        let mut edge_id: HashMap<(usize, usize), usize> = HashMap::new();
        let mut triangles: Vec<Triangle> = Vec::with_capacity(kept.len());
        for (t, tri) in kept.iter().enumerate() {
            let mut nbr = [None; 3];
            let mut e = [0; 3];
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                let constraint = is_constraint.contains(&key);
                if !constraint {
                    match half.get(&(b, a)) {
                        Some(&u) if new_id[u] != usize::MAX => nbr[k] = Some(new_id[u]),
                        _ => return Err(MeshError::Inconsistent),
                    }
                }
                let id = *edge_id.entry(key).or_insert_with(|| {
                    edges.push(MeshEdge { v: [a, b], tris: [None, None], boundary: constraint });
                    edges.len() - 1
                });
                let slot = if edges[id].tris[0].is_none() { 0 } else { 1 };
                edges[id].tris[slot] = Some(t);
                e[k] = id;
            }
            triangles.push(Triangle { v: *tri, nbr, e });
        }

        let bbox = BBox::of_points(&points).expect("nonempty");
        let mut mesh = TriMesh { points, triangles, edges, env_to_mesh, fans: Vec::new(), bbox };
        mesh.fans = mesh.compute_fans();
        mesh.check_connected()?;
        Ok(mesh)
    }

    fn compute_fans(&self) -> Vec<Vec<Wedge>> {
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.points.len()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for &v in &tri.v {
                incident[v].push(t);
            }
        }
        let mut fans = vec![Vec::new(); self.points.len()];
        for (v, inc) in incident.iter().enumerate() {
            let mut used: HashMap<usize, bool> = inc.iter().map(|&t| (t, false)).collect();
            // Open chains start where the cw neighbour is missing.
            let mut starts: Vec<usize> = inc
                .iter()
                .copied()
                .filter(|&t| {
                    let tri = &self.triangles[t];
                    tri.nbr[tri.local(v).unwrap()].is_none()
                })
                .collect();
            starts.sort_unstable();
            for s in starts {
                let triangles = self.walk_ccw(v, s, &mut used);
                fans[v].push(Wedge { triangles, closed: false });
            }
            let mut rest: Vec<usize> = inc.clone();
            rest.sort_unstable();
            for s in rest {
                if !used[&s] {
                    let triangles = self.walk_ccw(v, s, &mut used);
                    fans[v].push(Wedge { triangles, closed: true });
                }
            }
        }
        fans
    }

    fn walk_ccw(&self, v: usize, start: usize, used: &mut HashMap<usize, bool>) -> Vec<usize> {
        let mut out = Vec::new();
        let mut t = start;
        loop {
            used.insert(t, true);
            out.push(t);
            let tri = &self.triangles[t];
            let k = tri.local(v).unwrap();
            match tri.nbr[(k + 2) % 3] {
                Some(n) if !used[&n] => t = n,
                _ => break,
            }
        }
        out
    }

    fn check_connected(&self) -> Result<(), MeshError> {
        if self.triangles.is_empty() {
            return Err(MeshError::Disconnected);
        }
        let mut seen = vec![false; self.triangles.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(t) = stack.pop() {
            for n in self.triangles[t].nbr.iter().flatten() {
                if !seen[*n] {
                    seen[*n] = true;
                    count += 1;
                    stack.push(*n);
                }
            }
        }
        if count == self.triangles.len() {
            Ok(())
        } else {
            Err(MeshError::Disconnected)
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, v: usize) -> Point {
        self.points[v]
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn triangle(&self, t: usize) -> &Triangle {
        &self.triangles[t]
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn corners(&self, t: usize) -> [Point; 3] {
        self.triangles[t].v.map(|v| self.points[v])
    }

    pub fn edges(&self) -> &[MeshEdge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &MeshEdge {
        &self.edges[e]
    }

    /// Mesh vertex for an environment vertex id.
    pub fn mesh_vertex(&self, env_vertex: usize) -> usize {
        self.env_to_mesh[env_vertex]
    }

    pub fn fans(&self, v: usize) -> &[Wedge] {
        &self.fans[v]
    }

    /// True if `v` lies on the boundary of the free space.
    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.fans[v].iter().any(|w| !w.closed)
    }

    pub fn bbox(&self) -> BBox {
        self.bbox
    }

    /// Edges opposite to `v` in each triangle of the wedge, in ccw order.
    pub fn outer_fan_edges(&self, v: usize, wedge: &Wedge) -> Vec<(usize, usize)> {
        wedge
            .triangles
            .iter()
            .map(|&t| {
                let tri = &self.triangles[t];
                let k = tri.local(v).unwrap();
                (t, (k + 1) % 3)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{validate_and_normalize, Ring};

    fn ring(pts: &[(f64, f64)]) -> Ring {
        Ring::from_vertices_unchecked(pts.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    fn env(rings: Vec<Ring>) -> PolygonalEnvironment {
        validate_and_normalize(rings).unwrap().0
    }

    #[test]
    fn square_with_hole_count() {
        let e = env(vec![
            ring(&[(0., 0.), (10., 0.), (10., 10.), (0., 10.)]),
            ring(&[(4., 4.), (6., 4.), (6., 6.), (4., 6.)]),
        ]);
        let m = TriMesh::build(&e).unwrap();
        assert_eq!(m.num_triangles(), 8 + 2 - 2);
        let area: f64 = (0..m.num_triangles())
            .map(|t| {
                let [a, b, c] = m.corners(t);
                (b - a).cross(c - a) / 2.0
            })
            .sum();
        assert_eq!(area, 96.0);
        for v in 0..8 {
            assert_eq!(m.fans(v).len(), 1);
            assert!(m.is_boundary_vertex(v));
        }
    }

    #[test]
    fn concave_polygon() {
        let e = env(vec![ring(&[(0., 0.), (4., 0.), (4., 4.), (2., 1.), (0., 4.)])]);
        let m = TriMesh::build(&e).unwrap();
        assert_eq!(m.num_triangles(), 3);
        assert_eq!(m.edges().iter().filter(|e| e.boundary).count(), 5);
    }

    #[test]
    fn touching_holes_split_fans() {
        let e = env(vec![
            ring(&[(0., 0.), (10., 0.), (10., 10.), (0., 10.)]),
            ring(&[(2., 2.), (4., 2.), (4., 4.), (2., 4.)]),
            ring(&[(4., 4.), (6., 4.), (6., 6.), (4., 6.)]),
        ]);
        let m = TriMesh::build(&e).unwrap();
        let v = m.mesh_vertex(6);
        assert_eq!(m.point(v), Point::new(4., 4.));
        assert_eq!(m.fans(v).len(), 2);
        assert_eq!(m.points().len(), 11);
    }
}
