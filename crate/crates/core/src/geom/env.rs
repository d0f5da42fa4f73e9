use super::error::GeomError;
use super::point::{BBox, Point};
use super::predicates::{orient_sign, Orientation, orient};
use super::ring::{candidate_pairs, contact, Contact, Ring};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// A ring dropped during normalization, with the reason.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Discarded {
    OutsideOuter { ring: usize },
    InsideHole { ring: usize },
}

/// A connected polygonal region: one ccw outer ring and zero or more cw holes.
///
/// Vertex ids are dense: the outer ring's vertices come first, then each hole's
/// in order. Edge `i` runs from vertex `i` to its successor in the same ring.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonalEnvironment {
    outer: Ring,
    holes: Vec<Ring>,
    #[serde(skip)]
    derived: Derived,
}

#[derive(Clone, Debug, Default, PartialEq)]
struct Derived {
    vertices: Vec<Point>,
    ring_start: Vec<usize>,
    ring_of: Vec<usize>,
    bbox: Option<BBox>,
}

impl PolygonalEnvironment {
    fn assemble(outer: Ring, holes: Vec<Ring>) -> Self {
        let mut vertices = Vec::new();
        let mut ring_start = Vec::new();
        let mut ring_of = Vec::new();
        for (r, ring) in std::iter::once(&outer).chain(holes.iter()).enumerate() {
            ring_start.push(vertices.len());
            vertices.extend_from_slice(ring.vertices());
            ring_of.extend(std::iter::repeat_n(r, ring.len()));
        }
        ring_start.push(vertices.len());
        let bbox = BBox::of_points(outer.vertices());
        PolygonalEnvironment { outer, holes, derived: Derived { vertices, ring_start, ring_of, bbox } }
    }

    pub fn outer(&self) -> &Ring {
        &self.outer
    }

    pub fn holes(&self) -> &[Ring] {
        &self.holes
    }

    /// Outer ring followed by holes.
    pub fn rings(&self) -> impl Iterator<Item = &Ring> {
        std::iter::once(&self.outer).chain(self.holes.iter())
    }

    pub fn num_rings(&self) -> usize {
        1 + self.holes.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.derived.vertices.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.derived.vertices
    }

    pub fn vertex(&self, id: usize) -> Point {
        self.derived.vertices[id]
    }

    pub fn ring_of(&self, id: usize) -> usize {
        self.derived.ring_of[id]
    }

    pub fn ring_range(&self, ring: usize) -> std::ops::Range<usize> {
        self.derived.ring_start[ring]..self.derived.ring_start[ring + 1]
    }

    pub fn next_vertex(&self, id: usize) -> usize {
        let r = self.ring_range(self.ring_of(id));
        if id + 1 == r.end {
            r.start
        } else {
            id + 1
        }
    }

    pub fn prev_vertex(&self, id: usize) -> usize {
        let r = self.ring_range(self.ring_of(id));
        if id == r.start {
            r.end - 1
        } else {
            id - 1
        }
    }

    /// All boundary edges as vertex-id pairs, interior on the left.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.num_vertices()).map(move |i| (i, self.next_vertex(i)))
    }

    pub fn num_edges(&self) -> usize {
        self.num_vertices()
    }

    pub fn bbox(&self) -> BBox {
        self.derived.bbox.expect("environment has an outer ring")
    }

    /// Area of the outer ring minus the holes.
    pub fn area(&self) -> f64 {
        self.outer.signed_area().abs() - self.holes.iter().map(|h| h.signed_area().abs()).sum::<f64>()
    }

    /// Ids of all vertices located at the same point as `id` (including `id`).
    pub fn coincident_vertices(&self, id: usize) -> Vec<usize> {
        let p = self.vertex(id);
        (0..self.num_vertices()).filter(|&j| self.vertex(j) == p).collect()
    }

    /// Re-runs normalization; used after deserialization.
    pub fn from_rings(rings: Vec<Ring>) -> Result<(Self, Vec<Discarded>), GeomError> {
        validate_and_normalize(rings)
    }
}

/// Normalizes raw rings into an environment.
///
/// The largest ring by area becomes the outer boundary; rings inside it become
/// holes, while rings outside it or nested inside a hole are dropped and
/// reported. Orientation is fixed to ccw outer / cw holes.
pub fn validate_and_normalize(
    raw: Vec<Ring>,
) -> Result<(PolygonalEnvironment, Vec<Discarded>), GeomError> {
    if raw.is_empty() {
        return Err(GeomError::Empty);
    }
    let rings: Vec<Ring> = raw
        .into_iter()
        .enumerate()
        .map(|(i, r)| Ring::validated(r.into_vertices(), i))
        .collect::<Result<_, _>>()?;

    let outer_idx = rings
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.signed_area().abs().total_cmp(&b.1.signed_area().abs()).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i)
        .unwrap();
    let outer = normalized(&rings[outer_idx], true);

    let mut discarded = Vec::new();
    let mut candidates: Vec<usize> = Vec::new();
    for (i, ring) in rings.iter().enumerate() {
        if i == outer_idx {
            continue;
        }
        match relate(ring, &outer) {
            Relation::Crossing => return Err(GeomError::CrossesOuter { ring: i }),
            Relation::Inside => candidates.push(i),
            Relation::Outside => discarded.push(Discarded::OutsideOuter { ring: i }),
        }
    }

    // Holes may only touch at vertices; a candidate nested inside another is dropped.
    let mut nested = vec![false; rings.len()];
    for (k, &i) in candidates.iter().enumerate() {
        for &j in &candidates[k + 1..] {
            match relate(&rings[i], &rings[j]) {
                Relation::Crossing => return Err(GeomError::HolesOverlap { a: i, b: j }),
                Relation::Inside => nested[i] = true,
                Relation::Outside => {
                    if relate(&rings[j], &rings[i]) == Relation::Inside {
                        nested[j] = true;
                    }
                }
            }
        }
    }
    let mut holes = Vec::new();
    for &i in &candidates {
        if nested[i] {
            discarded.push(Discarded::InsideHole { ring: i });
        } else {
            holes.push(normalized(&rings[i], false));
        }
    }
    discarded.sort_by_key(|d| match d {
        Discarded::OutsideOuter { ring } | Discarded::InsideHole { ring } => *ring,
    });

    let env = PolygonalEnvironment::assemble(outer, holes);
    check_connected(&env)?;
    Ok((env, discarded))
}

fn normalized(ring: &Ring, ccw: bool) -> Ring {
    if ring.is_ccw() == ccw {
        ring.clone()
    } else {
        ring.reversed()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Relation {
    Inside,
    Outside,
    Crossing,
}

/// Where `ring` lies relative to the region bounded by `other`, allowing
/// contact at shared vertices only.
fn relate(ring: &Ring, other: &Ring) -> Relation {
    let a: Vec<(Point, Point)> = ring.edges().collect();
    let b: Vec<(Point, Point)> = other.edges().collect();
    let mut all = a.clone();
    all.extend_from_slice(&b);
    for (i, j) in candidate_pairs(&all) {
        if (i < a.len()) == (j < a.len()) {
            continue;
        }
        let (p, q) = all[i];
        let (r, s) = all[j];
        if contact(p, q, r, s) == Contact::Bad {
            return Relation::Crossing;
        }
    }
    let other_pts: HashMap<(u64, u64), usize> =
        other.vertices().iter().enumerate().map(|(i, p)| (p.bits(), i)).collect();
    let ov = other.vertices();
    let on = ov.len();
    let other_ccw = other.is_ccw();
    let mut verdict: Option<bool> = None;
    let rv = ring.vertices();
    let n = rv.len();
    for i in 0..n {
        let p = rv[i];
        let inside = match other_pts.get(&p.bits()) {
            None => point_in_ring_strict(p, other),
            Some(&k) => {
                // Shared vertex: classify both incident edges against the local wedge.
                let (prev, next) = (ov[(k + on - 1) % on], ov[(k + 1) % on]);
                let (prev, next) = if other_ccw { (prev, next) } else { (next, prev) };
                let mut side = None;
                for t in [rv[(i + n - 1) % n], rv[(i + 1) % n]] {
                    let s = strict_wedge_side(prev, p, next, t);
                    match (side, s) {
                        (_, None) => {}
                        (None, Some(v)) => side = Some(v),
                        (Some(a), Some(b)) if a != b => return Relation::Crossing,
                        _ => {}
                    }
                }
                match side {
                    Some(v) => v,
                    None => continue,
                }
            }
        };
        match verdict {
            None => verdict = Some(inside),
            Some(v) if v != inside => return Relation::Crossing,
            _ => {}
        }
    }
    match verdict {
        Some(true) => Relation::Inside,
        Some(false) => Relation::Outside,
        // Every vertex shared and every edge along the wedge boundary: same ring.
        None => Relation::Crossing,
    }
}

/// For a ccw ring with corner `prev -> w -> next`, is the direction toward
/// `t` strictly inside (`Some(true)`) or strictly outside (`Some(false)`) the
/// interior wedge? `None` when it runs along one of the wedge's edges.
fn strict_wedge_side(prev: Point, w: Point, next: Point, t: Point) -> Option<bool> {
    let s_next = orient_sign(w, next, t);
    let s_prev = orient_sign(w, t, prev);
    if (s_next == 0 && (t - w).dot(next - w) > 0.0) || (s_prev == 0 && (t - w).dot(prev - w) > 0.0) {
        return None;
    }
    let inside = match orient(prev, w, next) {
        Orientation::Ccw => s_next > 0 && s_prev > 0,
        Orientation::Cw => !(orient_sign(w, prev, t) >= 0 && orient_sign(w, t, next) >= 0),
        Orientation::Collinear => s_next > 0,
    };
    Some(inside)
}

/// Even-odd test for a point known not to lie on the ring.
pub(crate) fn point_in_ring_strict(p: Point, ring: &Ring) -> bool {
    let v = ring.vertices();
    let n = v.len();
    let mut inside = false;
    for i in 0..n {
        let a = v[i];
        let b = v[(i + 1) % n];
        if (a.y > p.y) != (b.y > p.y) {
            // Exact side test of p against a->b, oriented upward.
            let s = if b.y > a.y { orient_sign(a, b, p) } else { orient_sign(b, a, p) };
            if s > 0 {
                inside = !inside;
            }
        }
    }
    inside
}

/// Touching rings form a graph with one edge per contact (a star per shared
/// point); a cycle in it encloses part of the interior.
fn check_connected(env: &PolygonalEnvironment) -> Result<(), GeomError> {
    let mut at: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
    for id in 0..env.num_vertices() {
        at.entry(env.vertex(id).bits()).or_default().push(env.ring_of(id));
    }
    let mut parent: Vec<usize> = (0..env.num_rings()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut keys: Vec<_> = at.keys().copied().collect();
    keys.sort_unstable();
    for k in keys {
        let rings = &at[&k];
        for w in rings.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a == b {
                return Err(GeomError::Disconnected);
            }
            parent[a] = b;
        }
    }
    Ok(())
}

/// Sequence of ε₁ fallback values and the ε₂ snapping radius, in map units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonConfig {
    eps1: Vec<f64>,
    eps2: f64,
}

impl EpsilonConfig {
    pub fn new(eps1: Vec<f64>, eps2: f64) -> Result<Self, GeomError> {
        if eps1.iter().any(|e| !e.is_finite() || *e < 0.0) {
            return Err(GeomError::BadEpsilon("eps1 values must be finite and nonnegative".into()));
        }
        if eps1.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GeomError::BadEpsilon("eps1 must be strictly increasing".into()));
        }
        if !eps2.is_finite() || eps2 < 0.0 {
            return Err(GeomError::BadEpsilon("eps2 must be finite and nonnegative".into()));
        }
        Ok(EpsilonConfig { eps1, eps2 })
    }

    /// No fallback and no snapping: exact location only.
    pub fn exact() -> Self {
        EpsilonConfig { eps1: Vec::new(), eps2: 0.0 }
    }

    pub fn eps1(&self) -> &[f64] {
        &self.eps1
    }

    pub fn eps2(&self) -> f64 {
        self.eps2
    }

    pub fn max_eps1(&self) -> f64 {
        self.eps1.last().copied().unwrap_or(0.0)
    }
}

impl Default for EpsilonConfig {
    /// ε₁ = 1e-18, 1e-17, …, 1e-9 and ε₂ = 1e-12.
    fn default() -> Self {
        let eps1 = (9..=18).rev().map(|k| format!("1e-{k}").parse::<f64>().unwrap()).collect();
        EpsilonConfig { eps1, eps2: 1e-12 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(x0: f64, y0: f64, x1: f64, y1: f64) -> Ring {
        Ring::from_vertices_unchecked(vec![
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ])
    }

    #[test]
    fn single_square() {
        let (env, d) = validate_and_normalize(vec![sq(0., 0., 1., 1.)]).unwrap();
        assert_eq!(env.holes().len(), 0);
        assert!(d.is_empty());
        assert_eq!(env.num_vertices(), 4);
        assert_eq!(env.area(), 1.0);
    }

    #[test]
    fn orientation_normalized() {
        let outer_cw = sq(0., 0., 10., 10.).reversed();
        let hole_ccw = sq(4., 4., 6., 6.);
        let (env, _) = validate_and_normalize(vec![outer_cw, hole_ccw]).unwrap();
        assert!(env.outer().is_ccw());
        assert_eq!(env.holes().len(), 1);
        assert!(!env.holes()[0].is_ccw());
        assert_eq!(env.area(), 96.0);
    }

    #[test]
    fn disconnected_ring_discarded() {
        let (env, d) = validate_and_normalize(vec![
            sq(0., 0., 10., 10.),
            sq(4., 4., 6., 6.),
            sq(20., 20., 21., 21.),
        ])
        .unwrap();
        assert_eq!(env.holes().len(), 1);
        assert_eq!(d, vec![Discarded::OutsideOuter { ring: 2 }]);
    }

    #[test]
    fn ring_inside_hole_discarded() {
        let (env, d) = validate_and_normalize(vec![
            sq(0., 0., 10., 10.),
            sq(2., 2., 8., 8.),
            sq(4., 4., 6., 6.),
        ])
        .unwrap();
        assert_eq!(env.holes().len(), 1);
        assert_eq!(d, vec![Discarded::InsideHole { ring: 2 }]);
    }

    #[test]
    fn crossing_rings_rejected() {
        let e = validate_and_normalize(vec![sq(0., 0., 10., 10.), sq(8., 4., 12., 6.)]);
        assert_eq!(e.unwrap_err(), GeomError::CrossesOuter { ring: 1 });
        let e = validate_and_normalize(vec![sq(0., 0., 10., 10.), sq(2., 2., 5., 5.), sq(4., 4., 6., 6.)]);
        assert!(matches!(e.unwrap_err(), GeomError::HolesOverlap { .. }));
    }

    #[test]
    fn touching_holes_allowed() {
        let (env, _) =
            validate_and_normalize(vec![sq(0., 0., 10., 10.), sq(2., 2., 4., 4.), sq(4., 4., 6., 6.)]).unwrap();
        assert_eq!(env.holes().len(), 2);
        assert_eq!(env.coincident_vertices(env.num_vertices() - 4).len(), 2);
    }

    #[test]
    fn enclosing_touch_cycle_rejected() {
        // Two L-shaped holes touching at two points enclose the middle.
        let l1 = Ring::from_vertices_unchecked(
            [(2., 2.), (6., 2.), (6., 3.), (3., 3.), (3., 6.), (2., 6.)].iter().map(|&(x, y)| Point::new(x, y)).collect(),
        );
        let l2 = Ring::from_vertices_unchecked(
            [(6., 3.), (7., 3.), (7., 7.), (3., 7.), (3., 6.), (6., 6.)].iter().map(|&(x, y)| Point::new(x, y)).collect(),
        );
        let e = validate_and_normalize(vec![sq(0., 0., 10., 10.), l1, l2]);
        assert_eq!(e.unwrap_err(), GeomError::Disconnected);
    }

    #[test]
    fn normalization_is_idempotent() {
        let (env, _) = validate_and_normalize(vec![sq(0., 0., 10., 10.).reversed(), sq(4., 4., 6., 6.)]).unwrap();
        let rings: Vec<Ring> = env.rings().cloned().collect();
        let (env2, _) = validate_and_normalize(rings).unwrap();
        assert_eq!(env, env2);
    }

    #[test]
    fn default_epsilons() {
        let c = EpsilonConfig::default();
        assert_eq!(c.eps1().len(), 10);
        assert_eq!(c.eps1()[0], 1e-18);
        assert_eq!(c.max_eps1(), 1e-9);
        assert_eq!(c.eps2(), 1e-12);
        assert!(EpsilonConfig::new(vec![1e-9, 1e-10], 0.0).is_err());
    }
}
