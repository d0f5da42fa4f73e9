use super::error::GeomError;
use super::point::Point;
use super::predicates::{on_segment_collinear, orient, orient_sign, signed_area, Orientation};
use serde::{Deserialize, Serialize};

/// A closed polygonal chain; the last vertex connects back to the first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ring {
    vertices: Vec<Point>,
}

impl Ring {
    /// Builds a ring and checks it is simple and free of repeated vertices and
    /// zero-area spikes. `index` is only used to label diagnostics.
    pub fn new(vertices: Vec<Point>) -> Result<Ring, GeomError> {
        Self::validated(vertices, 0)
    }

    pub(crate) fn validated(vertices: Vec<Point>, index: usize) -> Result<Ring, GeomError> {
        let ring = Ring { vertices };
        ring.check(index)?;
        Ok(ring)
    }

    /// Wraps vertices without validation.
    pub fn from_vertices_unchecked(vertices: Vec<Point>) -> Ring {
        Ring { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn into_vertices(self) -> Vec<Point> {
        self.vertices
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn is_ccw(&self) -> bool {
        self.signed_area() > 0.0
    }

    /// Same cycle, opposite orientation, first vertex kept in place.
    pub fn reversed(&self) -> Ring {
        let mut v = Vec::with_capacity(self.vertices.len());
        if let Some(first) = self.vertices.first() {
            v.push(*first);
            v.extend(self.vertices[1..].iter().rev());
        }
        Ring { vertices: v }
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    fn check(&self, ring: usize) -> Result<(), GeomError> {
        let v = &self.vertices;
        let n = v.len();
        if n < 3 {
            return Err(GeomError::TooFewVertices { ring, count: n });
        }
        if v.iter().any(|p| !p.is_finite()) {
            return Err(GeomError::NonFinite { ring });
        }
        for i in 0..n {
            let a = v[i];
            let b = v[(i + 1) % n];
            if a == b {
                return Err(GeomError::RepeatedVertex { ring, index: (i + 1) % n });
            }
        }
        for i in 0..n {
            let a = v[(i + n - 1) % n];
            let b = v[i];
            let c = v[(i + 1) % n];
            if orient(a, b, c) == Orientation::Collinear && (b - a).dot(c - b) < 0.0 {
                return Err(GeomError::Spike { ring, index: i });
            }
        }
        let segs: Vec<(Point, Point)> = self.edges().collect();
        for (i, j) in candidate_pairs(&segs) {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (a, b) = segs[i];
            let (c, d) = segs[j];
            if adjacent {
                continue;
            }
            if contact(a, b, c, d) != Contact::None {
                return Err(GeomError::SelfIntersecting { ring, edges: (i, j) });
            }
        }
        // Repeated vertices that are not consecutive make the ring touch itself.
        let mut sorted: Vec<(u64, u64)> = v.iter().map(|p| p.bits()).collect();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(GeomError::SelfIntersecting { ring, edges: (0, 0) });
        }
        Ok(())
    }
}

/// How two closed segments meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Contact {
    None,
    /// They share exactly one point, which is an endpoint of both.
    SharedEndpoint,
    /// Anything else: a crossing, an endpoint touching an interior, or overlap.
    Bad,
}

pub(crate) fn contact(a: Point, b: Point, c: Point, d: Point) -> Contact {
    let o1 = orient_sign(a, b, c);
    let o2 = orient_sign(a, b, d);
    let o3 = orient_sign(c, d, a);
    let o4 = orient_sign(c, d, b);
    if o1 * o2 > 0 || o3 * o4 > 0 {
        return Contact::None;
    }
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return Contact::Bad;
    }
    if o1 == 0 && o2 == 0 {
        // Collinear: count shared points.
        let c_in = on_segment_collinear(a, b, c);
        let d_in = on_segment_collinear(a, b, d);
        let a_in = on_segment_collinear(c, d, a);
        let b_in = on_segment_collinear(c, d, b);
        if !(c_in || d_in || a_in || b_in) {
            return Contact::None;
        }
        let shared = (a == c || a == d) as u8 + (b == c || b == d) as u8;
        // A single shared endpoint with the other endpoints on opposite sides.
        if shared == 1 {
            let s = if a == c || a == d { a } else { b };
            let other1 = if s == a { b } else { a };
            let other2 = if s == c { d } else { c };
            if (other1 - s).dot(other2 - s) < 0.0 {
                return Contact::SharedEndpoint;
            }
        }
        return Contact::Bad;
    }
    // Touching at one point; it must be an endpoint of both.
    let touch = if o1 == 0 && on_segment_collinear(a, b, c) {
        Some(c)
    } else if o2 == 0 && on_segment_collinear(a, b, d) {
        Some(d)
    } else if o3 == 0 && on_segment_collinear(c, d, a) {
        Some(a)
    } else if o4 == 0 && on_segment_collinear(c, d, b) {
        Some(b)
    } else {
        None
    };
    match touch {
        None => Contact::None,
        Some(p) if (p == a || p == b) && (p == c || p == d) => Contact::SharedEndpoint,
        Some(_) => Contact::Bad,
    }
}

/// Index pairs `(i, j)`, `i < j`, of segments whose bounding boxes overlap.
pub(crate) fn candidate_pairs(segs: &[(Point, Point)]) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..segs.len()).collect();
    let minx = |s: &(Point, Point)| s.0.x.min(s.1.x);
    order.sort_by(|&i, &j| minx(&segs[i]).total_cmp(&minx(&segs[j])));
    let mut out = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        let (a, b) = segs[i];
        let maxx = a.x.max(b.x);
        let (ylo, yhi) = (a.y.min(b.y), a.y.max(b.y));
        for &j in &order[k + 1..] {
            let (c, d) = segs[j];
            if c.x.min(d.x) > maxx {
                break;
            }
            if c.y.min(d.y) > yhi || c.y.max(d.y) < ylo {
                continue;
            }
            out.push((i.min(j), i.max(j)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(coords: &[(f64, f64)]) -> Result<Ring, GeomError> {
        Ring::new(coords.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    #[test]
    fn accepts_square() {
        let r = ring(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)]).unwrap();
        assert!(r.is_ccw());
        assert!(!r.reversed().is_ccw());
        assert_eq!(r.reversed().vertices()[0], Point::new(0., 0.));
    }

    #[test]
    fn rejects_degenerate_rings() {
        assert!(matches!(ring(&[(0., 0.), (1., 0.)]), Err(GeomError::TooFewVertices { .. })));
        assert!(matches!(
            ring(&[(0., 0.), (1., 0.), (1., 0.), (0., 1.)]),
            Err(GeomError::RepeatedVertex { .. })
        ));
        assert!(matches!(
            ring(&[(0., 0.), (2., 0.), (1., 0.), (0., 1.)]),
            Err(GeomError::Spike { .. })
        ));
        assert!(matches!(
            ring(&[(0., 0.), (1., 1.), (1., 0.), (0., 1.)]),
            Err(GeomError::SelfIntersecting { .. })
        ));
        assert!(matches!(ring(&[(0., 0.), (f64::NAN, 0.), (0., 1.)]), Err(GeomError::NonFinite { .. })));
    }

    #[test]
    fn rejects_self_touching() {
        // Vertex (1,1) touches the opposite edge's interior.
        let r = ring(&[(0., 0.), (2., 0.), (2., 2.), (1., 0.5), (0., 2.)]);
        assert!(r.is_ok());
        let r = ring(&[(0., 0.), (2., 0.), (2., 2.), (1., 0.), (0., 2.)]);
        assert!(r.is_err());
    }

    #[test]
    fn contact_kinds() {
        let p = Point::new;
        assert_eq!(contact(p(0., 0.), p(1., 0.), p(1., 0.), p(1., 1.)), Contact::SharedEndpoint);
        assert_eq!(contact(p(0., 0.), p(2., 0.), p(1., 0.), p(1., 1.)), Contact::Bad);
        assert_eq!(contact(p(0., 0.), p(2., 0.), p(1., 0.), p(3., 0.)), Contact::Bad);
        assert_eq!(contact(p(0., 0.), p(1., 0.), p(1., 0.), p(3., 0.)), Contact::SharedEndpoint);
        assert_eq!(contact(p(0., 0.), p(1., 0.), p(2., 0.), p(3., 0.)), Contact::None);
    }
}
