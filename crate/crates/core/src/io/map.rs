//! `MAP v1` text format and plain point lists.
//!
//! ```text
//! MAP v1
//! # comment
//! RING 4
//! 0 0
//! 10 0
//! 10 10
//! 0 10
//! ```
//!
//! Coordinates are written with the shortest decimal that parses back to the
//! same f64.

use crate::geom::{validate_and_normalize, Discarded, GeomError, Point, PolygonalEnvironment, Ring};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum MapError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("ring at line {line}: {source}")]
    Ring { line: usize, source: GeomError },
    #[error(transparent)]
    Geom(#[from] GeomError),
}

fn parse_err(line: usize, msg: impl Into<String>) -> MapError {
    MapError::Parse { line, msg: msg.into() }
}

/// Meaningful lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_point(line: usize, s: &str) -> Result<Point, MapError> {
    let mut it = s.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty());
    let mut coord = || -> Result<f64, MapError> {
        let t = it.next().ok_or_else(|| parse_err(line, "expected two coordinates"))?;
        let v: f64 = t.parse().map_err(|_| parse_err(line, format!("bad number `{t}`")))?;
        if !v.is_finite() {
            return Err(parse_err(line, format!("non-finite coordinate `{t}`")));
        }
        Ok(v)
    };
    let p = Point::new(coord()?, coord()?);
    if it.next().is_some() {
        return Err(parse_err(line, "trailing tokens"));
    }
    Ok(p)
}

/// Raw rings in file order, before normalization.
pub fn parse_rings(text: &str) -> Result<Vec<Ring>, MapError> {
    let mut it = lines(text).peekable();
    match it.next() {
        Some((_, "MAP v1")) => {}
        Some((n, l)) => return Err(parse_err(n, format!("expected `MAP v1`, found `{l}`"))),
        None => return Err(parse_err(1, "empty file")),
    }
    let mut rings = Vec::new();
    while let Some((n, l)) = it.next() {
        let count = l
            .strip_prefix("RING")
            .map(str::trim)
            .ok_or_else(|| parse_err(n, format!("expected `RING <count>`, found `{l}`")))?;
        let count: usize = count.parse().map_err(|_| parse_err(n, format!("bad ring count `{count}`")))?;
        let mut pts = Vec::with_capacity(count);
        while pts.len() < count {
            match it.peek() {
                Some((_, l)) if l.starts_with("RING") => break,
                Some(&(m, l)) => {
                    pts.push(parse_point(m, l)?);
                    it.next();
                }
                None => break,
            }
        }
        if pts.len() != count {
            return Err(parse_err(n, format!("ring declares {count} vertices, found {}", pts.len())));
        }
        rings.push(Ring::new(pts).map_err(|source| MapError::Ring { line: n, source })?);
    }
    Ok(rings)
}

pub fn parse_map(text: &str) -> Result<(PolygonalEnvironment, Vec<Discarded>), MapError> {
    Ok(validate_and_normalize(parse_rings(text)?)?)
}

pub fn load_map(path: impl AsRef<Path>) -> Result<(PolygonalEnvironment, Vec<Discarded>), MapError> {
    parse_map(&std::fs::read_to_string(path)?)
}

pub fn format_map(env: &PolygonalEnvironment) -> String {
    let mut s = String::from("MAP v1\n");
    for r in env.rings() {
        let _ = writeln!(s, "RING {}", r.len());
        for p in r.vertices() {
            let _ = writeln!(s, "{} {}", p.x, p.y);
        }
    }
    s
}

pub fn save_map(env: &PolygonalEnvironment, path: impl AsRef<Path>) -> Result<(), MapError> {
    Ok(std::fs::write(path, format_map(env))?)
}

/// One `x y` (or `x,y`) per line; `#` starts a comment.
pub fn parse_points(text: &str) -> Result<Vec<Point>, MapError> {
    lines(text).map(|(n, l)| parse_point(n, l)).collect()
}

pub fn load_points(path: impl AsRef<Path>) -> Result<Vec<Point>, MapError> {
    parse_points(&std::fs::read_to_string(path)?)
}

pub fn format_points(pts: &[Point]) -> String {
    pts.iter().fold(String::new(), |mut s, p| {
        let _ = writeln!(s, "{} {}", p.x, p.y);
        s
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_rings("MAP v1\nRING 3\n0 0\n1 x\n0 1\n").unwrap_err();
        assert!(matches!(e, MapError::Parse { line: 4, .. }), "{e}");
        let e = parse_rings("MAP v1\n# c\nRING 4\n0 0\n1 0\n1 1\n").unwrap_err();
        assert!(matches!(e, MapError::Parse { line: 3, .. }), "{e}");
        let e = parse_rings("MAP v1\nRING 3\n0 0\n1 inf\n0 1\n").unwrap_err();
        assert!(e.to_string().contains("non-finite"));
        assert!(matches!(parse_rings("MAP v2\n"), Err(MapError::Parse { line: 1, .. })));
    }

    #[test]
    fn points_accept_commas() {
        let p = parse_points("# sites\n1,2\n3 4.5\n").unwrap();
        assert_eq!(p, vec![Point::new(1., 2.), Point::new(3., 4.5)]);
    }
}
