//! Random test environments: a star-shaped outer boundary with small
//! star-shaped holes placed in distinct cells of a grid around the centre.

use super::rng::Stream;
use crate::geom::{validate_and_normalize, Point, PolygonalEnvironment, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct MapParams {
    pub outer_vertices: usize,
    pub holes: usize,
    /// Inclusive range of vertices per hole.
    pub hole_vertices: (usize, usize),
    /// Outer radius; the map spans roughly `[0, 2r]²`.
    pub radius: f64,
    /// Coordinates are rounded to multiples of this step.
    pub step: f64,
}

impl MapParams {
    /// Small maps for differential testing against the oracle.
    pub fn desk(rng_pick: u64) -> MapParams {
        let mut s = Stream::new(rng_pick, 0xdec);
        MapParams {
            outer_vertices: 12 + s.index(100),
            holes: s.index(6),
            hole_vertices: (3, 12),
            radius: 50.0,
            step: 0.25,
        }
    }

    /// A map with 2,000+ vertices and 64 holes.
    pub fn large() -> MapParams {
        MapParams { outer_vertices: 1000, holes: 64, hole_vertices: (16, 16), radius: 200.0, step: 1.0 / 16.0 }
    }
}

fn snap(x: f64, step: f64) -> f64 {
    (x / step).round() * step
}

fn star(rng: &mut Stream, c: Point, n: usize, rmin: f64, rmax: f64, step: f64) -> Vec<Point> {
    let mut pts: Vec<Point> = Vec::with_capacity(n);
    for i in 0..n {
        let th = std::f64::consts::TAU * (i as f64 + 0.8 * rng.uniform()) / n as f64;
        let r = rng.range(rmin, rmax);
        let p = Point::new(snap(c.x + r * th.cos(), step), snap(c.y + r * th.sin(), step));
        if pts.last() != Some(&p) && pts.first() != Some(&p) {
            pts.push(p);
        }
    }
    pts
}

/// Generates a valid environment; retries internally until validation
/// accepts every ring.
pub fn random_map(seed: u64, params: &MapParams) -> PolygonalEnvironment {
    for attempt in 0u64.. {
        let mut rng = Stream::new(seed, 1000 + attempt);
        let r = params.radius;
        let c = Point::new(r, r);
        let mut rings = vec![star(&mut rng, c, params.outer_vertices, 0.7 * r, r, params.step)];
        let g = (params.holes as f64).sqrt().ceil() as usize;
        let half = 0.34 * r;
        let cell = 2.0 * half / g.max(1) as f64;
        let mut cells: Vec<usize> = (0..g * g).collect();
        for i in (1..cells.len()).rev() {
            let j = rng.index(i + 1);
            cells.swap(i, j);
        }
        for &k in cells.iter().take(params.holes) {
            let (cx, cy) = ((k % g) as f64, (k / g) as f64);
            let hc = Point::new(c.x - half + (cx + 0.5) * cell, c.y - half + (cy + 0.5) * cell);
            let (lo, hi) = params.hole_vertices;
            let n = lo + rng.index(hi - lo + 1);
            rings.push(star(&mut rng, hc, n, 0.15 * cell, 0.4 * cell, params.step));
        }
        let rings: Result<Vec<Ring>, _> = rings.into_iter().enumerate().map(|(i, v)| Ring::validated(v, i)).collect();
        let Ok(rings) = rings else { continue };
        if let Ok((env, discarded)) = validate_and_normalize(rings) {
            if discarded.is_empty() && env.holes().len() == params.holes {
                return env;
            }
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        let p = MapParams::desk(3);
        let a = random_map(7, &p);
        let b = random_map(7, &p);
        assert_eq!(a, b);
        assert_eq!(a.holes().len(), p.holes);
    }

    #[test]
    fn large_map_size() {
        let e = random_map(1, &MapParams::large());
        assert!(e.num_vertices() >= 2000);
        assert!(e.holes().len() >= 50);
    }
}
