use std::collections::BTreeSet;
use vistri::geom::validate_and_normalize;
use vistri::graph::{
    merge_graphs, point_point_graph, vertex_point_graph, vertex_vertex_graph, visibility_graph, EdgeTag, GraphError,
};
use vistri::harness::rng::Stream;
use vistri::harness::{random_map, MapParams};
use vistri::oracle::Oracle;
use vistri::{EngineConfig, Point, PolygonalEnvironment, Ring, VisEngine};

fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

fn ring(pts: &[(f64, f64)]) -> Ring {
    Ring::new(pts.iter().map(|&(x, y)| p(x, y)).collect()).unwrap()
}

fn engine(env: PolygonalEnvironment) -> VisEngine {
    VisEngine::new(env, EngineConfig::default()).unwrap()
}

fn square() -> VisEngine {
    engine(validate_and_normalize(vec![ring(&[(0., 0.), (10., 0.), (10., 10.), (0., 10.)])]).unwrap().0)
}

fn hole_map() -> VisEngine {
    engine(
        validate_and_normalize(vec![
            ring(&[(0., 0.), (10., 0.), (10., 10.), (0., 10.)]),
            ring(&[(4., 4.), (6., 4.), (6., 6.), (4., 6.)]),
        ])
        .unwrap()
        .0,
    )
}

#[test]
fn square_corners_complete() {
    let e = square();
    let g = vertex_vertex_graph(&e, &[0, 1, 2, 3], None).unwrap();
    assert_eq!(g.count(EdgeTag::VV), 6);
    let g0 = vertex_vertex_graph(&e, &[0, 1, 2, 3], Some(0.0)).unwrap();
    assert!(g0.edges.is_empty());
}

#[test]
fn hole_map_vertices_match_oracle() {
    let e = hole_map();
    let all: Vec<usize> = (0..8).collect();
    let g = vertex_vertex_graph(&e, &all, None).unwrap();
    let sites: Vec<Point> = all.iter().map(|&v| e.env().vertex(v)).collect();
    assert_eq!(g.pairs(), Oracle::new(e.env()).graph(&sites));
}

#[test]
fn point_point_examples() {
    let e = square();
    let g = point_point_graph(&e, &[], &[p(1., 1.), p(9., 9.), p(1., 9.)], None).unwrap();
    assert_eq!(g.count(EdgeTag::PP), 3);
    let h = hole_map();
    let g = point_point_graph(&h, &[], &[p(2., 5.), p(8., 5.)], None).unwrap();
    assert!(g.edges.is_empty());
    let g = point_point_graph(&h, &[], &[p(2., 5.), p(20., 5.)], None).unwrap();
    assert_eq!(g.unlocated, vec![1]);
}

#[test]
fn vertex_point_examples() {
    let e = square();
    let g = vertex_point_graph(&e, &[0, 1, 2, 3], &[p(5., 5.)], None).unwrap();
    assert_eq!(g.count(EdgeTag::VP), 4);
    assert_eq!(g.edges.len(), 4);

    let h = hole_map();
    let hole: Vec<usize> = (4..8).collect();
    let g = vertex_point_graph(&h, &hole, &[p(2., 5.)], None).unwrap();
    let seen: BTreeSet<(u64, u64)> =
        g.edges.iter().map(|e| h.env().vertex(hole[e.a])).map(|q| (q.x as u64, q.y as u64)).collect();
    assert_eq!(seen, BTreeSet::from([(4, 4), (4, 6)]));

    let g = vertex_point_graph(&h, &hole, &[], None).unwrap();
    assert!(g.edges.is_empty());
}

#[test]
fn merge_counts() {
    let e = square();
    let v = [0, 1, 2, 3];
    let pts = [p(5., 5.)];
    let vv = vertex_vertex_graph(&e, &v, None).unwrap();
    let pp = point_point_graph(&e, &v, &pts, None).unwrap();
    let vp = vertex_point_graph(&e, &v, &pts, None).unwrap();
    let m = merge_graphs(&vv, &pp, &vp).unwrap();
    assert_eq!(m.edges.len(), 10);
    assert_eq!(m, visibility_graph(&e, &v, &pts, None).unwrap());

    let other = vertex_point_graph(&e, &v, &[p(5., 6.)], None).unwrap();
    assert_eq!(merge_graphs(&vv, &pp, &other), Err(GraphError::SiteMismatch));
}

#[test]
fn rejects_bad_sites() {
    let e = square();
    assert_eq!(vertex_vertex_graph(&e, &[9], None), Err(GraphError::BadVertex(9)));
    assert_eq!(visibility_graph(&e, &[0], &[p(0., 0.)], None), Err(GraphError::SiteOverlap(0)));
}

#[test]
fn export_is_ordered() {
    let e = square();
    let g = visibility_graph(&e, &[0, 1], &[p(5., 5.)], None).unwrap();
    let mut out = Vec::new();
    g.write_edges(&mut out).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), "VV 0 1\nVP 0 2\nVP 1 2\n");
}

fn random_sites(env: &PolygonalEnvironment, seed: u64, nv: usize, np: usize) -> (Vec<usize>, Vec<Point>) {
    let mut s = Stream::new(seed, 7);
    let oracle = Oracle::new(env);
    let mut v: Vec<usize> = (0..nv).map(|_| s.index(env.num_vertices())).collect();
    v.sort_unstable();
    v.dedup();
    let b = env.bbox();
    let mut pts = Vec::new();
    while pts.len() < np {
        let mut q = p(s.range(b.min.x, b.max.x), s.range(b.min.y, b.max.y));
        if pts.len() % 2 == 0 {
            // grid points line up with vertices and with each other
            q = p((q.x * 4.0).round() / 4.0, (q.y * 4.0).round() / 4.0);
        }
        let on_vertex = v.iter().any(|&i| env.vertex(i) == q);
        if oracle.contains(q) && !on_vertex {
            pts.push(q);
        }
    }
    (v, pts)
}

#[test]
fn merged_graph_matches_oracle_on_random_maps() {
    for seed in 0..4u64 {
        let env = random_map(seed, &MapParams::desk(seed));
        let e = engine(env.clone());
        let (v, pts) = random_sites(&env, seed, 25, 20);
        let g = visibility_graph(&e, &v, &pts, None).unwrap();
        let sites: Vec<Point> = v.iter().map(|&i| env.vertex(i)).chain(pts.iter().copied()).collect();
        assert_eq!(g.pairs(), Oracle::new(&env).graph(&sites), "seed {seed}");
        assert_eq!(g.edges.len(), g.count(EdgeTag::VV) + g.count(EdgeTag::PP) + g.count(EdgeTag::VP));

        let small = visibility_graph(&e, &v, &pts, Some(20.0)).unwrap();
        assert!(small.edges.is_subset(&g.edges));
    }
}
