//! Visibility graphs over vertex sites and point sites.
//!
//! Sites are indexed jointly: vertex sites first, then point sites, so the
//! merged graph over `Q = V ∪ P` can be compared against a pairwise scan.

use crate::engine::VisEngine;
use crate::geom::Point;
use crate::locate::PointLocationResult;
use crate::vis::{self, SiteIndex};
use rayon::prelude::*;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::{self, Write};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeTag {
    VV,
    PP,
    VP,
}

impl EdgeTag {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeTag::VV => "VV",
            EdgeTag::PP => "PP",
            EdgeTag::VP => "VP",
        }
    }
}

impl fmt::Display for EdgeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Undirected edge between joint site indices, `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphEdge {
    pub tag: EdgeTag,
    pub a: usize,
    pub b: usize,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex id {0} out of range")]
    BadVertex(usize),
    #[error("point site {0} coincides with a vertex site")]
    SiteOverlap(usize),
    #[error("graphs are built over different site sets")]
    SiteMismatch,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VisGraph {
    pub vertex_sites: Vec<usize>,
    pub point_sites: Vec<Point>,
    pub edges: BTreeSet<GraphEdge>,
    /// Point sites (by index into `point_sites`) that could not be located.
    pub unlocated: Vec<usize>,
}

impl VisGraph {
    pub fn num_sites(&self) -> usize {
        self.vertex_sites.len() + self.point_sites.len()
    }

    pub fn count(&self, tag: EdgeTag) -> usize {
        self.edges.iter().filter(|e| e.tag == tag).count()
    }

    /// Edges as `(a, b)` pairs, ignoring tags.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.edges.iter().map(|e| (e.a, e.b)).collect();
        v.sort_unstable();
        v
    }

    /// One `<tag> <a> <b>` line per edge, ordered by tag then indices.
    pub fn write_edges<W: Write>(&self, mut w: W) -> io::Result<()> {
        for e in &self.edges {
            writeln!(w, "{} {} {}", e.tag, e.a, e.b)?;
        }
        Ok(())
    }

    fn same_sites(&self, other: &VisGraph) -> bool {
        self.vertex_sites == other.vertex_sites
            && self.point_sites.len() == other.point_sites.len()
            && self.point_sites.iter().zip(&other.point_sites).all(|(a, b)| a.x.to_bits() == b.x.to_bits() && a.y.to_bits() == b.y.to_bits())
    }
}

fn edge(tag: EdgeTag, i: usize, j: usize) -> GraphEdge {
    GraphEdge { tag, a: i.min(j), b: i.max(j) }
}

struct Sites<'a> {
    engine: &'a VisEngine,
    vertices: Vec<usize>,
    points: Vec<Point>,
    /// Mesh vertex id to the vertex sites placed on it.
    by_mesh: HashMap<usize, Vec<usize>>,
    vertex_pl: Vec<PointLocationResult>,
    point_pl: Vec<Option<PointLocationResult>>,
}

impl<'a> Sites<'a> {
    fn new(engine: &'a VisEngine, vertices: &[usize], points: &[Point]) -> Result<Sites<'a>, GraphError> {
        let env = engine.env();
        let mesh = engine.mesh();
        let mut by_mesh: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut vertex_pl = Vec::with_capacity(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            if v >= env.num_vertices() {
                return Err(GraphError::BadVertex(v));
            }
            by_mesh.entry(mesh.mesh_vertex(v)).or_default().push(i);
            vertex_pl.push(engine.locate(env.vertex(v)).ok_or(GraphError::BadVertex(v))?);
        }
        let taken: Vec<Point> = vertices.iter().map(|&v| env.vertex(v)).collect();
        if let Some(i) = points.iter().position(|p| taken.contains(p)) {
            return Err(GraphError::SiteOverlap(i));
        }
        let point_pl = points.iter().map(|&p| engine.locate(p)).collect();
        Ok(Sites { engine, vertices: vertices.to_vec(), points: points.to_vec(), by_mesh, vertex_pl, point_pl })
    }

    fn mesh_filter(&self) -> HashSet<usize> {
        self.by_mesh.keys().copied().collect()
    }

    fn unlocated(&self) -> Vec<usize> {
        (0..self.points.len()).filter(|&i| self.point_pl[i].is_none()).collect()
    }

    fn graph(&self, edges: BTreeSet<GraphEdge>) -> VisGraph {
        VisGraph {
            vertex_sites: self.vertices.clone(),
            point_sites: self.points.clone(),
            edges,
            unlocated: self.unlocated(),
        }
    }

    /// Vertex sites visible from `q`.
    fn seen_vertices(&self, pl: &PointLocationResult, q: Point, filter: &HashSet<usize>, d: Option<f64>) -> Vec<usize> {
        let (mv, _) = vis::visible_vertices(self.engine.mesh(), pl, q, Some(filter), d);
        mv.iter().flat_map(|m| self.by_mesh[m].iter().copied()).collect()
    }

    /// Point sites visible from `q`.
    fn seen_points(&self, pl: &PointLocationResult, q: Point, index: &SiteIndex, d: Option<f64>) -> Vec<usize> {
        vis::visible_points(self.engine.mesh(), pl, q, index, d).0.visible
    }

    fn index(&self) -> SiteIndex {
        let located: Vec<_> = self.points.iter().copied().zip(self.point_pl.iter().cloned()).collect();
        SiteIndex::from_located(self.engine.mesh(), &located)
    }

    fn vv(&self, d: Option<f64>) -> BTreeSet<GraphEdge> {
        let filter = self.mesh_filter();
        let env = self.engine.env();
        let rows: Vec<Vec<usize>> = (0..self.vertices.len())
            .into_par_iter()
            .map(|i| self.seen_vertices(&self.vertex_pl[i], env.vertex(self.vertices[i]), &filter, d))
            .collect();
        let mut edges = BTreeSet::new();
        for (i, row) in rows.iter().enumerate() {
            for &j in row {
                if i < j {
                    edges.insert(edge(EdgeTag::VV, i, j));
                }
                debug_assert!(i == j || rows[j].contains(&i), "asymmetric vertex visibility {i} {j}");
            }
        }
        edges
    }

    fn pp(&self, d: Option<f64>) -> BTreeSet<GraphEdge> {
        let index = self.index();
        let nv = self.vertices.len();
        let rows: Vec<Vec<usize>> = (0..self.points.len())
            .into_par_iter()
            .map(|i| match &self.point_pl[i] {
                Some(pl) => self.seen_points(pl, self.points[i], &index, d),
                None => Vec::new(),
            })
            .collect();
        let mut edges = BTreeSet::new();
        for (i, row) in rows.iter().enumerate() {
            for &j in row {
                if i < j {
                    edges.insert(edge(EdgeTag::PP, nv + i, nv + j));
                }
                debug_assert!(i == j || rows[j].contains(&i), "asymmetric point visibility {i} {j}");
            }
        }
        edges
    }

    fn vp(&self, d: Option<f64>) -> BTreeSet<GraphEdge> {
        let filter = self.mesh_filter();
        let nv = self.vertices.len();
        let rows: Vec<Vec<usize>> = (0..self.points.len())
            .into_par_iter()
            .map(|i| match &self.point_pl[i] {
                Some(pl) => self.seen_vertices(pl, self.points[i], &filter, d),
                None => Vec::new(),
            })
            .collect();
        let edges: BTreeSet<GraphEdge> = rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&v| edge(EdgeTag::VP, v, nv + i)))
            .collect();
        if cfg!(debug_assertions) {
            let index = self.index();
            let env = self.engine.env();
            for (v, pl) in self.vertex_pl.iter().enumerate() {
                for p in self.seen_points(pl, env.vertex(self.vertices[v]), &index, d) {
                    debug_assert!(edges.contains(&edge(EdgeTag::VP, v, nv + p)), "asymmetric vertex-point visibility {v} {p}");
                }
            }
        }
        edges
    }
}

/// Edges between mutually visible vertex sites.
pub fn vertex_vertex_graph(engine: &VisEngine, vertices: &[usize], d: Option<f64>) -> Result<VisGraph, GraphError> {
    let s = Sites::new(engine, vertices, &[])?;
    Ok(s.graph(s.vv(d)))
}

/// Edges between mutually visible point sites. `vertices` only fixes the
/// joint indexing; unlocatable points are skipped and reported.
pub fn point_point_graph(
    engine: &VisEngine,
    vertices: &[usize],
    points: &[Point],
    d: Option<f64>,
) -> Result<VisGraph, GraphError> {
    let s = Sites::new(engine, vertices, points)?;
    Ok(s.graph(s.pp(d)))
}

/// Edges between a vertex site and a point site.
pub fn vertex_point_graph(
    engine: &VisEngine,
    vertices: &[usize],
    points: &[Point],
    d: Option<f64>,
) -> Result<VisGraph, GraphError> {
    let s = Sites::new(engine, vertices, points)?;
    Ok(s.graph(s.vp(d)))
}

/// Disjoint union of the three tagged graphs.
pub fn merge_graphs(vv: &VisGraph, pp: &VisGraph, vp: &VisGraph) -> Result<VisGraph, GraphError> {
    let parts = [(vv, EdgeTag::VV), (pp, EdgeTag::PP), (vp, EdgeTag::VP)];
    let base = parts.iter().map(|(g, _)| *g).max_by_key(|g| g.point_sites.len()).unwrap_or(vv);
    let mut out = VisGraph { edges: BTreeSet::new(), ..base.clone() };
    for (g, tag) in parts {
        if g.vertex_sites != out.vertex_sites {
            return Err(GraphError::SiteMismatch);
        }
        // a VV graph may be built without point sites
        if !(tag == EdgeTag::VV && g.point_sites.is_empty()) && !g.same_sites(&out) {
            return Err(GraphError::SiteMismatch);
        }
        if g.edges.iter().any(|e| e.tag != tag) {
            return Err(GraphError::SiteMismatch);
        }
        out.edges.extend(g.edges.iter().copied());
    }
    Ok(out)
}

/// All three subgraphs over `Q = V ∪ P`, merged.
pub fn visibility_graph(
    engine: &VisEngine,
    vertices: &[usize],
    points: &[Point],
    d: Option<f64>,
) -> Result<VisGraph, GraphError> {
    let s = Sites::new(engine, vertices, points)?;
    let mut edges = s.vv(d);
    edges.extend(s.pp(d));
    edges.extend(s.vp(d));
    Ok(s.graph(edges))
}
