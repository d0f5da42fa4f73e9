//! Runtime-behaviour taxonomy for comparing an implementation to a reference.

use super::area::xor_area_same;
use crate::geom::{Point, PolygonalEnvironment};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Behavior {
    Crash,
    Inf,
    NoRef,
    Null,
    A0R1,
    A1R0,
    Same,
    Weak,
    Snap,
    Diff,
}

impl Behavior {
    pub const ALL: [Behavior; 10] = [
        Behavior::Crash,
        Behavior::Inf,
        Behavior::NoRef,
        Behavior::Null,
        Behavior::A0R1,
        Behavior::A1R0,
        Behavior::Same,
        Behavior::Weak,
        Behavior::Snap,
        Behavior::Diff,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Behavior::Crash => "Crash",
            Behavior::Inf => "Inf",
            Behavior::NoRef => "NoRef",
            Behavior::Null => "Null",
            Behavior::A0R1 => "A0R1",
            Behavior::A1R0 => "A1R0",
            Behavior::Same => "Same",
            Behavior::Weak => "Weak",
            Behavior::Snap => "Snap",
            Behavior::Diff => "Diff",
        }
    }
}

impl fmt::Display for Behavior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Behavior {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Behavior::ALL.into_iter().find(|b| b.as_str() == s).ok_or_else(|| format!("unknown behavior {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassifyContext {
    pub map_area: f64,
    pub snapped: bool,
    pub weakly_simple_query: bool,
    pub ref_available: bool,
}

/// Classifies one comparison. Crash and Inf are decided by the runner
/// before a comparison is possible.
pub fn classify(out_a: Option<&[Point]>, out_ref: Option<&[Point]>, ctx: &ClassifyContext) -> Behavior {
    if !ctx.ref_available {
        return Behavior::NoRef;
    }
    match (out_a, out_ref) {
        (None, None) => Behavior::Null,
        (None, Some(_)) => Behavior::A0R1,
        (Some(_), None) => Behavior::A1R0,
        (Some(a), Some(r)) => {
            if xor_area_same(a, r, ctx.map_area).unwrap_or(false) {
                Behavior::Same
            } else if ctx.weakly_simple_query {
                Behavior::Weak
            } else if ctx.snapped {
                Behavior::Snap
            } else {
                Behavior::Diff
            }
        }
    }
}

/// More than one pair of boundary edges meets at the point of vertex `id`.
pub fn detect_weakly_simple(env: &PolygonalEnvironment, id: usize) -> bool {
    is_weakly_simple_point(env, env.vertex(id))
}

/// `p` coincides with vertices of two or more rings.
pub fn is_weakly_simple_point(env: &PolygonalEnvironment, p: Point) -> bool {
    env.vertices().iter().filter(|&&v| v == p).count() >= 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(snapped: bool, weak: bool) -> ClassifyContext {
        ClassifyContext { map_area: 100.0, snapped, weakly_simple_query: weak, ref_available: true }
    }

    #[test]
    fn precedence() {
        let a = vec![Point::new(0., 0.), Point::new(1., 0.), Point::new(0., 1.)];
        let b = vec![Point::new(0., 0.), Point::new(2., 0.), Point::new(0., 2.)];
        assert_eq!(classify(None, None, &ctx(false, false)), Behavior::Null);
        assert_eq!(classify(None, Some(&a), &ctx(false, false)), Behavior::A0R1);
        assert_eq!(classify(Some(&a), None, &ctx(false, false)), Behavior::A1R0);
        assert_eq!(classify(Some(&a), Some(&a), &ctx(true, true)), Behavior::Same);
        assert_eq!(classify(Some(&a), Some(&b), &ctx(true, false)), Behavior::Snap);
        assert_eq!(classify(Some(&a), Some(&b), &ctx(true, true)), Behavior::Weak);
        assert_eq!(classify(Some(&a), Some(&b), &ctx(false, false)), Behavior::Diff);
        let mut c = ctx(false, false);
        c.ref_available = false;
        assert_eq!(classify(None, None, &c), Behavior::NoRef);
    }
}
