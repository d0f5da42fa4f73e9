//! The six query-point sets: In, BB, Ver, NearV, Mid, NearM.

use super::rng::Stream;
use crate::geom::{Point, PolygonalEnvironment};
use crate::mesh::TriMesh;
use crate::oracle::Oracle;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QueryKind {
    In,
    BB,
    Ver,
    NearV,
    Mid,
    NearM,
}

impl QueryKind {
    pub const ALL: [QueryKind; 6] =
        [QueryKind::In, QueryKind::BB, QueryKind::Ver, QueryKind::NearV, QueryKind::Mid, QueryKind::NearM];

    pub fn as_str(self) -> &'static str {
        match self {
            QueryKind::In => "In",
            QueryKind::BB => "BB",
            QueryKind::Ver => "Ver",
            QueryKind::NearV => "NearV",
            QueryKind::Mid => "Mid",
            QueryKind::NearM => "NearM",
        }
    }
}

impl fmt::Display for QueryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QueryKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        QueryKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| format!("unknown query set kind {s:?}"))
    }
}

/// Where a query point came from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Provenance {
    Sampled,
    Vertex { id: usize, sigma: Option<f64> },
    Edge { id: usize, sigma: Option<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryPointSet {
    pub kind: QueryKind,
    pub seed: u64,
    pub points: Vec<Point>,
    pub provenance: Vec<Provenance>,
}

/// σ candidates 1e-15, 1e-14, …, 1e-1.
pub fn sigmas() -> Vec<f64> {
    (1..=15).rev().map(|k| format!("1e-{k}").parse().unwrap()).collect()
}

/// Generates all six sets. Each kind draws from its own stream of the seed,
/// so sets are independent of each other and of `count` order.
pub fn generate_query_sets(env: &PolygonalEnvironment, mesh: &TriMesh, count: usize, seed: u64) -> Vec<QueryPointSet> {
    QueryKind::ALL.iter().map(|&k| generate_query_set(env, mesh, k, count, seed)).collect()
}

pub fn generate_query_set(
    env: &PolygonalEnvironment,
    mesh: &TriMesh,
    kind: QueryKind,
    count: usize,
    seed: u64,
) -> QueryPointSet {
    let mut rng = Stream::new(seed, kind as u64);
    let bb = env.bbox();
    let sig = sigmas();
    let oracle = Oracle::new(env);
    let mut points = Vec::with_capacity(count);
    let mut provenance = Vec::with_capacity(count);
    let noisy = |rng: &mut Stream, p: Point| {
        let s = sig[rng.index(sig.len())];
        let (nx, ny) = (rng.normal(), rng.normal());
        (Point::new(p.x + s * nx, p.y + s * ny), s)
    };
    for _ in 0..count {
        let (p, prov) = match kind {
            QueryKind::In => loop {
                let p = Point::new(rng.range(bb.min.x, bb.max.x), rng.range(bb.min.y, bb.max.y));
                if oracle.contains(p) {
                    break (p, Provenance::Sampled);
                }
            },
            QueryKind::BB => {
                (Point::new(rng.range(bb.min.x, bb.max.x), rng.range(bb.min.y, bb.max.y)), Provenance::Sampled)
            }
            QueryKind::Ver | QueryKind::NearV => {
                let id = rng.index(env.num_vertices());
                let v = env.vertex(id);
                if kind == QueryKind::Ver {
                    (v, Provenance::Vertex { id, sigma: None })
                } else {
                    let (p, s) = noisy(&mut rng, v);
                    (p, Provenance::Vertex { id, sigma: Some(s) })
                }
            }
            QueryKind::Mid | QueryKind::NearM => {
                let id = rng.index(mesh.edges().len());
                let [a, b] = mesh.edge(id).v.map(|v| mesh.point(v));
                let m = Point::new((a.x + b.x) / 2.0, (a.y + b.y) / 2.0);
                if kind == QueryKind::Mid {
                    (m, Provenance::Edge { id, sigma: None })
                } else {
                    let (p, s) = noisy(&mut rng, m);
                    (p, Provenance::Edge { id, sigma: Some(s) })
                }
            }
        };
        points.push(p);
        provenance.push(prov);
    }
    QueryPointSet { kind, seed, points, provenance }
}
