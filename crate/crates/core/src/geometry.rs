//! Exact integer plane geometry.

use std::cmp::Ordering;

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPoint {
    pub x: i64,
    pub y: i64,
}

impl GridPoint {
    pub const fn new(x: i64, y: i64) -> Self {
        GridPoint { x, y }
    }

    pub fn minus(self, o: GridPoint) -> (i64, i64) {
        (self.x - o.x, self.y - o.y)
    }
}

impl From<(i64, i64)> for GridPoint {
    fn from((x, y): (i64, i64)) -> Self {
        GridPoint { x, y }
    }
}

/// Twice the signed area of (a, b, c); positive when counterclockwise.
#[inline]
pub fn orient(a: GridPoint, b: GridPoint, c: GridPoint) -> i128 {
    let (bx, by) = ((b.x - a.x) as i128, (b.y - a.y) as i128);
    let (cx, cy) = ((c.x - a.x) as i128, (c.y - a.y) as i128);
    bx * cy - by * cx
}

#[inline]
pub fn cross(u: (i64, i64), v: (i64, i64)) -> i128 {
    u.0 as i128 * v.1 as i128 - u.1 as i128 * v.0 as i128
}

#[inline]
pub fn dot(u: (i64, i64), v: (i64, i64)) -> i128 {
    u.0 as i128 * v.0 as i128 + u.1 as i128 * v.1 as i128
}

/// Whether `p` lies on the closed segment `ab` (assumes collinearity checked).
#[inline]
fn within_box(a: GridPoint, b: GridPoint, p: GridPoint) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

#[inline]
pub fn on_segment(a: GridPoint, b: GridPoint, p: GridPoint) -> bool {
    orient(a, b, p) == 0 && within_box(a, b, p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Crossing {
    Disjoint,
    SharedEndpointOnly,
    ProperCrossing,
    /// An endpoint touches the other segment's interior, or the segments
    /// overlap collinearly.
    Improper,
}

pub type Segment = (GridPoint, GridPoint);

/// Classifies how two segments meet, using exact orientation tests.
pub fn segments_cross(s1: Segment, s2: Segment) -> Result<Crossing> {
    let (a, b) = s1;
    let (c, d) = s2;
    if a == b || c == d {
        return Err(Error::Degenerate("zero-length segment".into()));
    }
    let shared = [(a, b, c, d), (a, b, d, c), (b, a, c, d), (b, a, d, c)]
        .into_iter()
        .find(|(p, _, q, _)| p == q);
    if let Some((p, other1, _, other2)) = shared {
        if other1 == other2 {
            return Ok(Crossing::Improper);
        }
        // collinear and pointing the same way from p means overlap
        let u = other1.minus(p);
        let v = other2.minus(p);
        if cross(u, v) == 0 && dot(u, v) > 0 {
            return Ok(Crossing::Improper);
        }
        return Ok(Crossing::SharedEndpointOnly);
    }
    let o1 = orient(a, b, c).signum();
    let o2 = orient(a, b, d).signum();
    let o3 = orient(c, d, a).signum();
    let o4 = orient(c, d, b).signum();
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return Ok(Crossing::ProperCrossing);
    }
    if (o1 == 0 && within_box(a, b, c))
        || (o2 == 0 && within_box(a, b, d))
        || (o3 == 0 && within_box(c, d, a))
        || (o4 == 0 && within_box(c, d, b))
    {
        return Ok(Crossing::Improper);
    }
    Ok(Crossing::Disjoint)
}

/// Compares directions by angle in `[0, 2π)` measured counterclockwise from
/// the positive x axis. Zero vectors are not allowed.
pub fn angle_cmp(u: (i64, i64), v: (i64, i64)) -> Ordering {
    fn half(w: (i64, i64)) -> u8 {
        if w.1 > 0 || (w.1 == 0 && w.0 > 0) {
            0
        } else {
            1
        }
    }
    half(u).cmp(&half(v)).then_with(|| 0.cmp(&cross(u, v)))
}

/// Whether rotating counterclockwise from `a` meets `b` strictly before `c`.
/// Directions must be pairwise distinct in angle.
pub fn ccw_between(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> bool {
    // rotate frame so that a is angle 0: compare angles of b and c relative to a
    let rel = |w: (i64, i64)| -> (i128, i128) {
        (dot(a, w), cross(a, w))
    };
    let (bx, by) = rel(b);
    let (cx, cy) = rel(c);
    let half = |x: i128, y: i128| -> u8 {
        if y > 0 || (y == 0 && x > 0) {
            0
        } else {
            1
        }
    };
    let hb = half(bx, by);
    let hc = half(cx, cy);
    if hb != hc {
        return hb < hc;
    }
    // same half: b before c iff cross(b, c) > 0; use the original vectors
    cross(b, c) > 0
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Lattice points `(x, y)` with `x in 1..=a`, `y` in the upper half band
/// `floor(b/2)+1..=b` (or `1..=b`), and `gcd(x, y) = 1`.
pub fn coprime_point_set(a: i64, b: i64, half_band: bool) -> Vec<GridPoint> {
    assert!(a >= 1 && b >= 1);
    let ylo = if half_band { b / 2 + 1 } else { 1 };
    let mut out = Vec::new();
    for x in 1..=a {
        for y in ylo..=b {
            if gcd(x, y) == 1 {
                out.push(GridPoint::new(x, y));
            }
        }
    }
    out
}

/// Count of the half-band coprime set without materializing it.
pub fn coprime_count(a: i64, b: i64, half_band: bool) -> usize {
    let ylo = if half_band { b / 2 + 1 } else { 1 };
    (1..=a).map(|x| (ylo..=b).filter(|&y| gcd(x, y) == 1).count()).sum()
}
