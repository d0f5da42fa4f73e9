use vistri::geom::predicates::signed_area;
use vistri::geom::validate_and_normalize;
use vistri::vis::{intersect_with_circle, sample_arc_edges, to_polygon, EdgeKind, VertexKind};
use vistri::{DirVector, EngineConfig, Point, Ring, VisEngine};

fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

fn ring(pts: &[(f64, f64)]) -> Ring {
    Ring::new(pts.iter().map(|&(x, y)| p(x, y)).collect()).unwrap()
}

fn square() -> VisEngine {
    let env = validate_and_normalize(vec![ring(&[(0., 0.), (10., 0.), (10., 10.), (0., 10.)])]).unwrap().0;
    VisEngine::new(env, EngineConfig::default()).unwrap()
}

fn hole_map() -> VisEngine {
    let env = validate_and_normalize(vec![
        ring(&[(0., 0.), (10., 0.), (10., 10.), (0., 10.)]),
        ring(&[(4., 4.), (6., 4.), (6., 6.), (4., 6.)]),
    ])
    .unwrap()
    .0;
    VisEngine::new(env, EngineConfig::default()).unwrap()
}

fn sorted(mut v: Vec<Point>) -> Vec<Point> {
    v.sort_by(|a, b| a.lex_cmp(b));
    v
}

#[test]
fn convex_square_fully_visible() {
    let e = square();
    let r = e.visibility_region(p(5., 5.), None).unwrap().unwrap();
    assert_eq!(sorted(r.polygon.clone()), vec![p(0., 0.), p(0., 10.), p(10., 0.), p(10., 10.)]);
    assert_eq!(signed_area(&r.polygon), 100.0);
    assert!(r.radial.edges.iter().all(|k| matches!(k, EdgeKind::OnBoundary(_))));
}

#[test]
fn hole_map_region_projections() {
    let e = hole_map();
    let r = e.visibility_region(p(2., 5.), None).unwrap().unwrap();
    let pts = &r.polygon;
    assert!(pts.contains(&p(10., 1.)), "{pts:?}");
    assert!(pts.contains(&p(10., 9.)), "{pts:?}");
    let n_int = r.radial.vertices.iter().filter(|v| matches!(v.kind, VertexKind::BoundaryIntersection(_))).count();
    assert_eq!(n_int, 2);
    // Square minus the shadow trapezoid (4,4),(10,1),(10,9),(4,6) and hole part.
    let shadow = signed_area(&[p(4., 4.), p(10., 1.), p(10., 9.), p(4., 6.)]);
    assert!((signed_area(pts) - (100.0 - shadow)).abs() < 1e-12);
    assert!(e.visibility_region(p(5., 5.), None).unwrap().is_none());
}

#[test]
fn circle_clipping() {
    let e = square();
    let r = e.visibility_region(p(5., 5.), Some(2.0)).unwrap().unwrap();
    assert_eq!(r.radial.vertices.len(), 1);
    assert_eq!(r.radial.edges, vec![EdgeKind::Arc]);
    assert_eq!(r.polygon.len(), 360);
    let a = signed_area(&r.polygon);
    let expect = 0.5 * 360.0 * 4.0 * (std::f64::consts::TAU / 360.0).sin();
    assert!((a - expect).abs() < 1e-9, "{a} {expect}");
    assert!((a - std::f64::consts::PI * 4.0).abs() / (std::f64::consts::PI * 4.0) < 6e-5);

    let r = e.visibility_region(p(5., 5.), Some(20.0)).unwrap().unwrap();
    assert!(!r.radial.has_arcs());
    assert_eq!(r.polygon.len(), 4);

    let h = hole_map();
    let r = h.visibility_region(p(2., 5.), Some(1.5)).unwrap().unwrap();
    assert_eq!(r.radial.edges, vec![EdgeKind::Arc]);
    assert!(intersect_with_circle(&r.radial, 0.0).is_err());
}

#[test]
fn quarter_arc_sampling() {
    let e = square();
    // Corner query: the disk is cut to a quarter.
    let r = e.visibility_region(p(0., 0.), Some(1.0)).unwrap().unwrap();
    assert_eq!(r.radial.edges.iter().filter(|k| **k == EdgeKind::Arc).count(), 1);
    let s = sample_arc_edges(&r.radial, std::f64::consts::PI / 180.0).unwrap();
    // Seed, two arc ends, 89 interior samples.
    assert_eq!(s.vertices.len(), 92);
    assert!(to_polygon(&r.radial).is_err());
    assert!(sample_arc_edges(&r.radial, 0.0).is_err());
}

#[test]
fn two_point_examples() {
    let e = square();
    assert_eq!(e.two_point_visible(p(1., 1.), p(9., 9.), None), Some(true));
    assert_eq!(e.two_point_visible(p(1., 1.), p(9., 9.), Some(5.0)), Some(false));
    let h = hole_map();
    assert_eq!(h.two_point_visible(p(2., 5.), p(8., 5.), None), Some(false));
    assert_eq!(h.two_point_visible(p(2., 5.), p(5., 2.), None), Some(true));
    // Grazing along the hole edge is visible.
    assert_eq!(h.two_point_visible(p(2., 4.), p(8., 4.), None), Some(true));
    assert_eq!(h.two_point_visible(p(4., 4.), p(6., 6.), None), Some(false));
}

#[test]
fn ray_examples() {
    let e = square();
    let d = |x, y| DirVector::new(x, y).unwrap();
    assert_eq!(e.shoot_ray(p(5., 5.), d(1., 0.), None), Some(Some(p(10., 5.))));
    assert_eq!(e.shoot_ray(p(5., 5.), d(1., 1.), None), Some(Some(p(10., 10.))));
    assert_eq!(e.shoot_ray(p(5., 5.), d(1., 0.), Some(3.0)), Some(None));
    let h = hole_map();
    assert_eq!(h.shoot_ray(p(2., 5.), d(1., 0.), None), Some(Some(p(4., 5.))));
}

#[test]
fn visible_vertex_examples() {
    let e = square();
    assert_eq!(e.visible_vertices(p(5., 5.), None, None).unwrap().len(), 4);
    assert!(e.visible_vertices(p(5., 5.), None, Some(1.0)).unwrap().is_empty());
    let h = hole_map();
    let got = sorted(h.visible_vertices(p(2., 5.), None, None).unwrap().into_iter().map(|v| h.mesh().point(v)).collect());
    let want = sorted(vec![p(0., 0.), p(0., 10.), p(10., 0.), p(10., 10.), p(4., 4.), p(4., 6.)]);
    assert_eq!(got, want);
}

#[test]
fn visible_point_examples() {
    let e = square();
    let s = e.site_index(&[p(1., 1.), p(9., 9.)]);
    assert_eq!(e.visible_points(p(5., 5.), &s, None).unwrap().visible, vec![0, 1]);
    let h = hole_map();
    let s = h.site_index(&[p(5., 2.), p(5., 8.), p(8., 5.), p(5., 5.)]);
    let r = h.visible_points(p(2., 5.), &s, None).unwrap();
    assert_eq!(r.visible, vec![0, 1]);
    assert_eq!(r.unlocated, vec![3]);
}
