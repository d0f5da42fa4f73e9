//! Areas of boolean combinations of polygons by vertical slab decomposition.

use crate::geom::predicates::{segments_cross_properly, signed_area};
use crate::geom::{candidate_pairs, Point};
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq)]
#[error("polygon {which} is self-intersecting (edges {edges:?})")]
pub struct NonSimple {
    pub which: usize,
    pub edges: (usize, usize),
}

struct Edge {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
    poly: usize,
    wind: i32,
}

impl Edge {
    fn y_at(&self, x: f64) -> f64 {
        if x == self.x0 {
            self.y0
        } else if x == self.x1 {
            self.y1
        } else {
            self.y0 + (self.y1 - self.y0) * ((x - self.x0) / (self.x1 - self.x0))
        }
    }
}

fn edges_of(poly: &[Point], id: usize, out: &mut Vec<Edge>) {
    let n = poly.len();
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        if p.x == q.x {
            continue;
        }
        let (l, r, wind) = if p.x < q.x { (p, q, 1) } else { (q, p, -1) };
        out.push(Edge { x0: l.x, y0: l.y, x1: r.x, y1: r.y, poly: id, wind });
    }
}

/// Area of the region where `op(inside A, inside B)` holds, using nonzero
/// winding for each polygon.
pub fn boolean_area(a: &[Point], b: &[Point], op: impl Fn(bool, bool) -> bool) -> f64 {
    let mut edges = Vec::new();
    edges_of(a, 0, &mut edges);
    edges_of(b, 1, &mut edges);
    let mut xs: Vec<f64> = a.iter().chain(b).map(|p| p.x).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    edges.sort_by(|e, f| e.x0.total_cmp(&f.x0));

    let mut total = 0.0;
    let mut next = 0;
    let mut active: Vec<usize> = Vec::new();
    let mut cuts = Vec::new();
    let mut ys: Vec<(f64, f64, f64, usize)> = Vec::new();
    for w in xs.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        while next < edges.len() && edges[next].x0 <= x0 {
            active.push(next);
            next += 1;
        }
        active.retain(|&i| edges[i].x1 > x0);
        if active.is_empty() {
            continue;
        }
        // Split the slab where edges cross inside it.
        cuts.clear();
        cuts.push(x0);
        for (k, &i) in active.iter().enumerate() {
            for &j in &active[k + 1..] {
                let (e, f) = (&edges[i], &edges[j]);
                let d0 = e.y_at(x0) - f.y_at(x0);
                let d1 = e.y_at(x1) - f.y_at(x1);
                if (d0 < 0.0 && d1 > 0.0) || (d0 > 0.0 && d1 < 0.0) {
                    let x = x0 + (x1 - x0) * (d0 / (d0 - d1));
                    if x > x0 && x < x1 {
                        cuts.push(x);
                    }
                }
            }
        }
        cuts.push(x1);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        for c in cuts.windows(2) {
            let (u0, u1) = (c[0], c[1]);
            let um = 0.5 * (u0 + u1);
            ys.clear();
            ys.extend(active.iter().map(|&i| (edges[i].y_at(um), edges[i].y_at(u0), edges[i].y_at(u1), i)));
            ys.sort_by(|p, q| p.0.total_cmp(&q.0));
            let mut wind = [0i32; 2];
            for k in 0..ys.len() {
                let e = &edges[ys[k].3];
                wind[e.poly] += e.wind;
                if k + 1 < ys.len() && op(wind[0] != 0, wind[1] != 0) {
                    let (lo, hi) = (&ys[k], &ys[k + 1]);
                    total += (u1 - u0) * ((hi.1 - lo.1) + (hi.2 - lo.2)) * 0.5;
                }
            }
        }
    }
    total
}

/// Checks that no two non-adjacent edges cross at a point interior to both;
/// collinear overlaps (zero-width spikes) are accepted.
pub fn check_simple(poly: &[Point], which: usize) -> Result<(), NonSimple> {
    let n = poly.len();
    let segs: Vec<(Point, Point)> = (0..n).map(|i| (poly[i], poly[(i + 1) % n])).collect();
    for (i, j) in candidate_pairs(&segs) {
        if j == i + 1 || (i == 0 && j == n - 1) {
            continue;
        }
        let ((a, b), (c, d)) = (segs[i], segs[j]);
        if segments_cross_properly(a, b, c, d) {
            return Err(NonSimple { which, edges: (i, j) });
        }
    }
    Ok(())
}

/// Area of the symmetric difference.
pub fn xor_area(a: &[Point], b: &[Point]) -> f64 {
    boolean_area(a, b, |x, y| x != y)
}

/// Same-output test: XOR area at most 1e-9 of the map area.
pub fn xor_area_same(a: &[Point], b: &[Point], map_area: f64) -> Result<bool, NonSimple> {
    check_simple(a, 0)?;
    check_simple(b, 1)?;
    Ok(xor_area(a, b) <= 1e-9 * map_area)
}

/// Shoelace area of a polygon (positive for ccw).
pub fn polygon_area(poly: &[Point]) -> f64 {
    signed_area(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Vec<Point> {
        vec![Point::new(x0, y0), Point::new(x1, y0), Point::new(x1, y1), Point::new(x0, y1)]
    }

    #[test]
    fn spec_examples() {
        let a = rect(0., 0., 1., 1.);
        assert_eq!(xor_area(&a, &a), 0.0);
        assert!(xor_area_same(&a, &a, 100.0).unwrap());
        let b = rect(0.5, 0., 1.5, 1.);
        assert!((xor_area(&a, &b) - 1.0).abs() < 1e-15);
        assert!(!xor_area_same(&a, &b, 100.0).unwrap());
        let c = rect(0., 0., 1., 1. + 1e-8);
        assert!(xor_area_same(&a, &c, 100.0).unwrap());
        assert!(!xor_area_same(&a, &rect(0., 0., 1., 1. + 2e-7), 100.0).unwrap());
    }

    #[test]
    fn crossing_triangles() {
        let a = vec![Point::new(0., 0.), Point::new(4., 0.), Point::new(2., 4.)];
        let b = vec![Point::new(0., 3.), Point::new(2., -1.), Point::new(4., 3.)];
        let inter = boolean_area(&a, &b, |x, y| x && y);
        let union = boolean_area(&a, &b, |x, y| x || y);
        assert!((union + inter - 8.0 - 8.0).abs() < 1e-12);
        assert!((xor_area(&a, &b) - (union - inter)).abs() < 1e-12);
        assert!((xor_area(&a, &b) - xor_area(&b, &a)).abs() < 1e-12);
    }

    #[test]
    fn antenna_is_area_neutral() {
        let a = rect(0., 0., 2., 2.);
        let spiked = vec![
            Point::new(0., 0.),
            Point::new(2., 0.),
            Point::new(2., 1.),
            Point::new(5., 1.),
            Point::new(2., 1.),
            Point::new(2., 2.),
            Point::new(0., 2.),
        ];
        assert!(check_simple(&spiked, 0).is_ok());
        assert_eq!(xor_area(&a, &spiked), 0.0);
        let bow = vec![Point::new(0., 0.), Point::new(2., 2.), Point::new(2., 0.), Point::new(0., 2.)];
        assert!(xor_area_same(&a, &bow, 100.0).is_err());
    }
}
