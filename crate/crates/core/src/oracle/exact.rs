//! Exact sign computations on f64 inputs: a floating-point filter with a
//! rational fallback. Written separately from the engine's predicates.

use crate::geom::Point;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

const EPS: f64 = f64::EPSILON * 0.5;
/// Relative error bound for a 2x2 determinant of coordinate differences.
const DET_BOUND: f64 = (4.0 + 32.0 * EPS) * EPS;

/// A point with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoint {
    pub x: BigRational,
    pub y: BigRational,
}

impl RationalPoint {
    pub fn lift(p: Point) -> RationalPoint {
        RationalPoint { x: rat(p.x), y: rat(p.y) }
    }

    /// Nearest f64 point.
    pub fn to_point(&self) -> Point {
        Point::new(self.x.to_f64().unwrap_or(f64::NAN), self.y.to_f64().unwrap_or(f64::NAN))
    }
}

pub fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite coordinate")
}

/// Sign of (b - a) × (c - a).
pub fn orient(a: Point, b: Point, c: Point) -> i8 {
    let l = (b.x - a.x) * (c.y - a.y);
    let r = (b.y - a.y) * (c.x - a.x);
    filtered(l - r, l, r, || {
        let i = Lifted::new(&[a, b, c]);
        i.sign(|v| (&v[2] - &v[0]) * (&v[5] - &v[1]) - (&v[3] - &v[1]) * (&v[4] - &v[0]))
    })
}

/// Sign of (b - a) · (d - c).
pub fn dot_sign(a: Point, b: Point, c: Point, d: Point) -> i8 {
    let l = (b.x - a.x) * (d.x - c.x);
    let r = (b.y - a.y) * (d.y - c.y);
    filtered(l + r, l, r, || {
        let i = Lifted::new(&[a, b, c, d]);
        i.sign(|v| (&v[2] - &v[0]) * (&v[6] - &v[4]) + (&v[3] - &v[1]) * (&v[7] - &v[5]))
    })
}

fn filtered(s: f64, l: f64, r: f64, exact: impl FnOnce() -> i8) -> i8 {
    let bound = DET_BOUND * (l.abs() + r.abs());
    if s > bound {
        1
    } else if -s > bound {
        -1
    } else {
        exact()
    }
}

/// Coordinates as integers sharing one binary exponent, in i128 when the
/// degree-2 expressions above cannot overflow.
enum Lifted {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

impl Lifted {
    fn new(pts: &[Point]) -> Lifted {
        let dec: Vec<(i64, i32)> = pts.iter().flat_map(|p| [decode(p.x), decode(p.y)]).collect();
        let exp = common_exp(&dec);
        let small = dec.iter().all(|&(m, e)| m == 0 || (e - exp) < 64 && (m.unsigned_abs() as u128) << (e - exp) < 1 << 61);
        if small {
            Lifted::Small(dec.iter().map(|&(m, e)| if m == 0 { 0 } else { (m as i128) << (e - exp) }).collect())
        } else {
            Lifted::Big(dec.iter().map(|&(m, e)| lift(m, e, exp)).collect())
        }
    }

    fn sign(&self, f: impl Fn(&[Num]) -> Num) -> i8 {
        let v: Vec<Num> = match self {
            Lifted::Small(v) => v.iter().map(|&x| Num::S(x)).collect(),
            Lifted::Big(v) => v.iter().map(|x| Num::B(x.clone())).collect(),
        };
        f(&v).signum()
    }
}

/// Minimal integer arithmetic over either representation; mixing never
/// happens since one `Lifted` is all small or all big.
#[derive(Clone)]
enum Num {
    S(i128),
    B(BigInt),
}

impl Num {
    fn signum(&self) -> i8 {
        match self {
            Num::S(x) => x.signum() as i8,
            Num::B(x) => match x.sign() {
                num_bigint::Sign::Minus => -1,
                num_bigint::Sign::NoSign => 0,
                num_bigint::Sign::Plus => 1,
            },
        }
    }
}

macro_rules! num_op {
    ($tr:ident, $f:ident) => {
        impl std::ops::$tr<&Num> for &Num {
            type Output = Num;
            fn $f(self, o: &Num) -> Num {
                match (self, o) {
                    (Num::S(a), Num::S(b)) => Num::S(std::ops::$tr::$f(a, b)),
                    (Num::B(a), Num::B(b)) => Num::B(std::ops::$tr::$f(a, b)),
                    _ => unreachable!("mixed integer widths"),
                }
            }
        }
        impl std::ops::$tr<Num> for Num {
            type Output = Num;
            fn $f(self, o: Num) -> Num {
                std::ops::$tr::$f(&self, &o)
            }
        }
    };
}
num_op!(Add, add);
num_op!(Sub, sub);
num_op!(Mul, mul);

/// Is `p`, known collinear with `a b`, within the closed segment?
pub fn between(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Parameter λ of a point `o + λ·(t − o)` on a ray, stored as a fraction
/// with an f64 enclosure for quick comparisons.
#[derive(Clone, Debug)]
pub struct Param {
    lo: f64,
    hi: f64,
    num: Frac,
}

#[derive(Clone, Debug)]
enum Frac {
    /// λ = cross(c − o, e − c) / cross(t − o, e − c)
    Crossing { o: Point, t: Point, c: Point, e: Point },
    /// λ = (w − o)·(t − o) / |t − o|²
    Vertex { o: Point, t: Point, w: Point },
}

fn enclose(n: f64, en: f64, d: f64, ed: f64) -> (f64, f64) {
    if !(d.abs() > ed) || !n.is_finite() || !d.is_finite() {
        return (f64::NEG_INFINITY, f64::INFINITY);
    }
    let cands = [(n - en) / (d - ed), (n - en) / (d + ed), (n + en) / (d - ed), (n + en) / (d + ed)];
    let lo = cands.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = cands.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let pad = |x: f64| x.abs() * 4.0 * f64::EPSILON + f64::MIN_POSITIVE;
    (lo - pad(lo), hi + pad(hi))
}

impl Param {
    pub fn crossing(o: Point, t: Point, c: Point, e: Point) -> Param {
        let (ex, ey) = (e.x - c.x, e.y - c.y);
        let (l1, r1) = ((c.x - o.x) * ey, (c.y - o.y) * ex);
        let (l2, r2) = ((t.x - o.x) * ey, (t.y - o.y) * ex);
        let (lo, hi) = enclose(l1 - r1, DET_BOUND * (l1.abs() + r1.abs()), l2 - r2, DET_BOUND * (l2.abs() + r2.abs()));
        Param { lo, hi, num: Frac::Crossing { o, t, c, e } }
    }

    pub fn vertex(o: Point, t: Point, w: Point) -> Param {
        let (dx, dy) = (t.x - o.x, t.y - o.y);
        let (l1, r1) = ((w.x - o.x) * dx, (w.y - o.y) * dy);
        let (l2, r2) = (dx * dx, dy * dy);
        let (lo, hi) = enclose(l1 + r1, DET_BOUND * (l1.abs() + r1.abs()), l2 + r2, DET_BOUND * (l2 + r2));
        Param { lo, hi, num: Frac::Vertex { o, t, w } }
    }

    /// λ as an exact fraction `(num, den)` with `den > 0`, plus the common
    /// binary exponent of the lifted inputs.
    fn fraction(&self) -> (BigInt, BigInt, Scaled) {
        match self.num {
            Frac::Crossing { o, t, c, e } => {
                let s = Scaled::new(&[o, t, c, e]);
                let [o, t, c, e] = [s.get(0), s.get(1), s.get(2), s.get(3)];
                let ex = &e.0 - &c.0;
                let ey = &e.1 - &c.1;
                let n = (&c.0 - &o.0) * &ey - (&c.1 - &o.1) * &ex;
                let d = (&t.0 - &o.0) * &ey - (&t.1 - &o.1) * &ex;
                let (n, d) = if d.is_negative() { (-n, -d) } else { (n, d) };
                (n, d, s)
            }
            Frac::Vertex { o, t, w } => {
                let s = Scaled::new(&[o, t, w]);
                let [o, t, w] = [s.get(0), s.get(1), s.get(2)];
                let dx = &t.0 - &o.0;
                let dy = &t.1 - &o.1;
                let n = (&w.0 - &o.0) * &dx + (&w.1 - &o.1) * &dy;
                let d = &dx * &dx + &dy * &dy;
                (n, d, s)
            }
        }
    }

    pub fn exact(&self) -> BigRational {
        let (n, d, _) = self.fraction();
        BigRational::new(n, d)
    }

    pub fn cmp(&self, other: &Param) -> Ordering {
        if self.hi < other.lo {
            Ordering::Less
        } else if other.hi < self.lo {
            Ordering::Greater
        } else {
            let (n1, d1, _) = self.fraction();
            let (n2, d2, _) = other.fraction();
            (n1 * d2).cmp(&(n2 * d1))
        }
    }

    /// The point on the ray: exact when it is a vertex; a crossing is taken
    /// from the f64 interval when that is tight, otherwise rounded from the
    /// exact fraction.
    pub fn point(&self) -> Point {
        match self.num {
            Frac::Vertex { w, .. } => w,
            Frac::Crossing { o, t, c, e } if self.hi - self.lo <= 1e-14 * self.hi.abs() => {
                let l = 0.5 * (self.lo + self.hi);
                let p = Point::new(o.x + l * (t.x - o.x), o.y + l * (t.y - o.y));
                // keep the point on the blocking edge when it is axis-parallel
                Point::new(if c.x == e.x { c.x } else { p.x }, if c.y == e.y { c.y } else { p.y })
            }
            Frac::Crossing { .. } => {
                let (n, d, s) = self.fraction();
                let (o, t) = (s.get(0), s.get(1));
                let x = &o.0 * &d + (&t.0 - &o.0) * &n;
                let y = &o.1 * &d + (&t.1 - &o.1) * &n;
                Point::new(s.to_f64(x, d.clone()), s.to_f64(y, d))
            }
        }
    }
}

/// Points lifted to integers sharing one binary exponent: value = int · 2^exp.
struct Scaled {
    ints: Vec<(BigInt, BigInt)>,
    exp: i32,
}

/// `x = m · 2^e` with `m` odd (or zero).
fn decode(x: f64) -> (i64, i32) {
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let e = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    let (m, e) = if e == 0 { (frac, -1074) } else { (frac | (1i64 << 52), e - 1075) };
    if m == 0 {
        return (0, 0);
    }
    let z = m.trailing_zeros();
    (sign * (m >> z), e + z as i32)
}

fn common_exp(dec: &[(i64, i32)]) -> i32 {
    dec.iter().filter(|(m, _)| *m != 0).map(|&(_, e)| e).min().unwrap_or(0)
}

fn lift(m: i64, e: i32, exp: i32) -> BigInt {
    if m == 0 {
        BigInt::zero()
    } else {
        BigInt::from(m) << ((e - exp) as usize)
    }
}

impl Scaled {
    fn new(pts: &[Point]) -> Scaled {
        let dec: Vec<((i64, i32), (i64, i32))> = pts.iter().map(|p| (decode(p.x), decode(p.y))).collect();
        let exp = common_exp(&dec.iter().flat_map(|&(a, b)| [a, b]).collect::<Vec<_>>());
        let ints = dec.into_iter().map(|((mx, ex), (my, ey))| (lift(mx, ex, exp), lift(my, ey, exp))).collect();
        Scaled { ints, exp }
    }

    fn get(&self, i: usize) -> &(BigInt, BigInt) {
        &self.ints[i]
    }

    /// Correctly rounded `num / den · 2^exp`.
    fn to_f64(&self, num: BigInt, den: BigInt) -> f64 {
        let (num, den) = if self.exp >= 0 {
            (num << self.exp as usize, den)
        } else {
            (num, den << (-self.exp) as usize)
        };
        BigRational::new_raw(num, den).to_f64().unwrap_or(f64::NAN)
    }
}
