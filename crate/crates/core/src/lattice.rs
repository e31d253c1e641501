//! Exact 2-D lattices: Gauss reduction, rational affine maps, convex
//! polygons, and extraction of large affine grids from convex sets.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geometry::GridPoint;

pub type Q = BigRational;
pub type QVec = [Q; 2];

/// Module-wide grid constant: `a * b * C_GRID >= |S ∩ Λ|`.
pub const C_GRID: usize = 64;

pub fn q(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

fn qv(x: i64, y: i64) -> QVec {
    [q(x), q(y)]
}

fn dot(a: &QVec, b: &QVec) -> Q {
    &a[0] * &b[0] + &a[1] * &b[1]
}

fn det(a: &QVec, b: &QVec) -> Q {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn sub(a: &QVec, b: &QVec) -> QVec {
    [&a[0] - &b[0], &a[1] - &b[1]]
}

fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    pub u: QVec,
    pub v: QVec,
}

impl LatticeBasis {
    pub fn new(u: QVec, v: QVec) -> Result<Self> {
        if det(&u, &v).is_zero() {
            return Err(Error::Degenerate("lattice basis has zero determinant".into()));
        }
        Ok(LatticeBasis { u, v })
    }

    pub fn integer(u: (i64, i64), v: (i64, i64)) -> Result<Self> {
        Self::new(qv(u.0, u.1), qv(v.0, v.1))
    }

    pub fn det(&self) -> Q {
        det(&self.u, &self.v)
    }

    /// Whether `2|u·v| <= min(u·u, v·v)`.
    pub fn is_reduced(&self) -> bool {
        let uv = dot(&self.u, &self.v).abs();
        let m = dot(&self.u, &self.u).min(dot(&self.v, &self.v));
        &uv + &uv <= m
    }
}

/// Lagrange–Gauss reduction. The result spans the same lattice, satisfies
/// the 60°–120° condition and has `|u| <= |v|` with `u` a shortest vector.
pub fn gauss_reduce(b: &LatticeBasis) -> Result<LatticeBasis> {
    let mut u = b.u.clone();
    let mut v = b.v.clone();
    if det(&u, &v).is_zero() {
        return Err(Error::Degenerate("lattice basis has zero determinant".into()));
    }
    let half = Q::new(BigInt::one(), BigInt::from(2));
    loop {
        if dot(&v, &v) < dot(&u, &u) {
            std::mem::swap(&mut u, &mut v);
        }
        let mu = (dot(&u, &v) / dot(&u, &u) + &half).floor();
        if mu.is_zero() {
            break;
        }
        v = [&v[0] - &mu * &u[0], &v[1] - &mu * &u[1]];
    }
    Ok(LatticeBasis { u, v })
}

/// `p -> M p + t` with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalAffineMap {
    pub m: [[Q; 2]; 2],
    pub t: QVec,
}

impl RationalAffineMap {
    pub fn new(m: [[Q; 2]; 2], t: QVec) -> Result<Self> {
        let f = RationalAffineMap { m, t };
        if f.det().is_zero() {
            return Err(Error::Degenerate("singular affine map".into()));
        }
        Ok(f)
    }

    /// Linear map with columns `u` and `v`.
    pub fn from_columns(u: &QVec, v: &QVec, t: QVec) -> Result<Self> {
        Self::new([[u[0].clone(), v[0].clone()], [u[1].clone(), v[1].clone()]], t)
    }

    pub fn det(&self) -> Q {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    pub fn apply(&self, p: &QVec) -> QVec {
        [
            &self.m[0][0] * &p[0] + &self.m[0][1] * &p[1] + &self.t[0],
            &self.m[1][0] * &p[0] + &self.m[1][1] * &p[1] + &self.t[1],
        ]
    }

    pub fn apply_linear(&self, p: &QVec) -> QVec {
        [&self.m[0][0] * &p[0] + &self.m[0][1] * &p[1], &self.m[1][0] * &p[0] + &self.m[1][1] * &p[1]]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &RationalAffineMap) -> RationalAffineMap {
        let a = &other.m;
        let b = &self.m;
        let m = [
            [&a[0][0] * &b[0][0] + &a[0][1] * &b[1][0], &a[0][0] * &b[0][1] + &a[0][1] * &b[1][1]],
            [&a[1][0] * &b[0][0] + &a[1][1] * &b[1][0], &a[1][0] * &b[0][1] + &a[1][1] * &b[1][1]],
        ];
        RationalAffineMap { m, t: other.apply(&self.t) }
    }

    pub fn inverse(&self) -> RationalAffineMap {
        let d = self.det();
        let m = [
            [&self.m[1][1] / &d, -&self.m[0][1] / &d],
            [-&self.m[1][0] / &d, &self.m[0][0] / &d],
        ];
        let lin = RationalAffineMap { m, t: [Q::zero(), Q::zero()] };
        let t = lin.apply(&self.t);
        RationalAffineMap { m: lin.m, t: [-&t[0], -&t[1]] }
    }
}

/// `{origin + i·u + j·v : 0 <= i < a, 0 <= j < b}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineGrid {
    pub origin: GridPoint,
    pub u: (i64, i64),
    pub v: (i64, i64),
    pub a: usize,
    pub b: usize,
}

impl AffineGrid {
    pub fn point(&self, i: i64, j: i64) -> GridPoint {
        GridPoint::new(self.origin.x + i * self.u.0 + j * self.v.0, self.origin.y + i * self.u.1 + j * self.v.1)
    }

    pub fn points(&self) -> Vec<GridPoint> {
        let mut out = Vec::with_capacity(self.a * self.b);
        for j in 0..self.b as i64 {
            for i in 0..self.a as i64 {
                out.push(self.point(i, j));
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        self.a * self.b
    }

    /// Same point set with the roles of `u` and `v` swapped.
    pub fn transposed(&self) -> AffineGrid {
        AffineGrid { origin: self.origin, u: self.v, v: self.u, a: self.b, b: self.a }
    }
}

/// Convex polygon, counterclockwise, no repeated or collinear vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexRegion {
    pub vertices: Vec<QVec>,
}

impl ConvexRegion {
    pub fn new(vertices: Vec<QVec>) -> Result<Self> {
        let k = vertices.len();
        if k < 3 {
            return Err(Error::Degenerate("polygon needs three vertices".into()));
        }
        for i in 0..k {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % k];
            let c = &vertices[(i + 2) % k];
            if !det(&sub(b, a), &sub(c, b)).is_positive() {
                return Err(Error::Degenerate("polygon is not strictly convex and counterclockwise".into()));
            }
        }
        Ok(ConvexRegion { vertices })
    }

    /// Convex hull of integer points; fails when the hull has no area.
    pub fn hull(points: &[(i64, i64)]) -> Result<Self> {
        let mut p: Vec<(i64, i64)> = points.to_vec();
        p.sort();
        p.dedup();
        let cr = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| {
            (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
        };
        let mut h: Vec<(i64, i64)> = Vec::new();
        for pass in 0..2 {
            let start = h.len();
            let it: Box<dyn Iterator<Item = &(i64, i64)>> =
                if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
            for &x in it {
                while h.len() >= start + 2 && cr(h[h.len() - 2], h[h.len() - 1], x) <= 0 {
                    h.pop();
                }
                h.push(x);
            }
            h.pop();
        }
        Self::new(h.into_iter().map(|(x, y)| qv(x, y)).collect())
    }

    pub fn contains(&self, p: &QVec) -> bool {
        let k = self.vertices.len();
        (0..k).all(|i| {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % k];
            !det(&sub(b, a), &sub(p, a)).is_negative()
        })
    }

    pub fn contains_point(&self, p: GridPoint) -> bool {
        self.contains(&qv(p.x, p.y))
    }

    /// Intersection with the half-plane `a·x + b·y >= c`; `None` when the
    /// result has no interior.
    pub fn clip(&self, a: &Q, b: &Q, c: &Q) -> Option<ConvexRegion> {
        let val = |p: &QVec| a * &p[0] + b * &p[1] - c;
        let k = self.vertices.len();
        let mut out: Vec<QVec> = Vec::new();
        for i in 0..k {
            let p = &self.vertices[i];
            let r = &self.vertices[(i + 1) % k];
            let (vp, vr) = (val(p), val(r));
            if !vp.is_negative() {
                out.push(p.clone());
            }
            if (vp.is_negative() && vr.is_positive()) || (vp.is_positive() && vr.is_negative()) {
                let t = &vp / (&vp - &vr);
                out.push([&p[0] + &t * (&r[0] - &p[0]), &p[1] + &t * (&r[1] - &p[1])]);
            }
        }
        Self::cleanup(out)
    }

    fn cleanup(mut pts: Vec<QVec>) -> Option<ConvexRegion> {
        pts.dedup();
        while pts.len() > 1 && pts.first() == pts.last() {
            pts.pop();
        }
        let mut changed = true;
        while changed && pts.len() >= 3 {
            changed = false;
            let k = pts.len();
            for i in 0..k {
                let a = &pts[(i + k - 1) % k];
                let b = &pts[i];
                let c = &pts[(i + 1) % k];
                if det(&sub(b, a), &sub(c, b)).is_zero() {
                    pts.remove(i);
                    changed = true;
                    break;
                }
            }
        }
        ConvexRegion::new(pts).ok()
    }

    pub fn map(&self, f: &RationalAffineMap) -> ConvexRegion {
        let mut vs: Vec<QVec> = self.vertices.iter().map(|p| f.apply(p)).collect();
        if f.det().is_negative() {
            vs.reverse();
        }
        ConvexRegion { vertices: vs }
    }

    /// Integer x-interval of the horizontal line `y = j`, if nonempty.
    /// Rows `(j, lo, hi)` of integer points; `None` past `cap` rows.
    fn rows(&self, cap: usize) -> Option<Vec<(i64, i64, i64)>> {
        let ymin = self.vertices.iter().map(|p| &p[1]).min()?.ceil().to_integer().to_i64()?;
        let ymax = self.vertices.iter().map(|p| &p[1]).max()?.floor().to_integer().to_i64()?;
        if ymax >= ymin && (ymax - ymin) as usize >= cap {
            return None;
        }
        let k = self.vertices.len();
        let edges: Vec<EdgeLine> = (0..k).filter_map(|i| EdgeLine::new(&self.vertices[i], &self.vertices[(i + 1) % k])).collect();
        let mut out = Vec::new();
        for j in ymin..=ymax {
            let mut lo: Option<i64> = None;
            let mut hi: Option<i64> = None;
            for e in edges.iter().filter(|e| e.j0 <= j && j <= e.j1) {
                let (c, f) = e.at(j)?;
                lo = Some(lo.map_or(c, |l| l.min(c)));
                hi = Some(hi.map_or(f, |h| h.max(f)));
            }
            if let (Some(lo), Some(hi)) = (lo, hi) {
                if lo <= hi {
                    out.push((j, lo, hi));
                }
            }
        }
        Some(out)
    }

    /// Integer points, enumerated row by row (test oracle helper).
    pub fn integer_points(&self) -> Vec<GridPoint> {
        let rows = self.rows(usize::MAX).unwrap_or_default();
        rows.into_iter().flat_map(|(j, lo, hi)| (lo..=hi).map(move |i| GridPoint::new(i, j))).collect()
    }
}

/// Polygon edge over integer rows `j0..=j1`.
struct EdgeLine {
    j0: i64,
    j1: i64,
    kind: EdgeKind,
}

enum EdgeKind {
    /// Horizontal edge: `(ceil, floor)` of its x extent.
    Flat(i64, i64),
    /// `x = (a·j + b) / d` with `d > 0`.
    Small(i128, i128, i128),
    Big(BigInt, BigInt, BigInt),
}

impl EdgeLine {
    fn new(p: &QVec, r: &QVec) -> Option<EdgeLine> {
        let (ylo, yhi) = if p[1] <= r[1] { (&p[1], &r[1]) } else { (&r[1], &p[1]) };
        let j0 = ylo.ceil().to_integer().to_i64()?;
        let j1 = yhi.floor().to_integer().to_i64()?;
        if j0 > j1 {
            return None;
        }
        if p[1] == r[1] {
            let (lo, hi) = if p[0] <= r[0] { (&p[0], &r[0]) } else { (&r[0], &p[0]) };
            let kind = EdgeKind::Flat(lo.ceil().to_integer().to_i64()?, hi.floor().to_integer().to_i64()?);
            return Some(EdgeLine { j0, j1, kind });
        }
        let slope = (&r[0] - &p[0]) / (&r[1] - &p[1]);
        let c0 = &p[0] - &p[1] * &slope;
        let d = slope.denom().lcm(c0.denom());
        let a = slope.numer() * (&d / slope.denom());
        let b = c0.numer() * (&d / c0.denom());
        let bound = j0.unsigned_abs().max(j1.unsigned_abs()) as u128;
        let kind = match (a.to_i128(), b.to_i128(), d.to_i128()) {
            (Some(sa), Some(sb), Some(sd))
                if bound < 1 << 40 && sa.unsigned_abs() < 1 << 80 && sb.unsigned_abs() < 1 << 120 =>
            {
                EdgeKind::Small(sa, sb, sd)
            }
            _ => EdgeKind::Big(a, b, d),
        };
        Some(EdgeLine { j0, j1, kind })
    }

    /// `(ceil(x), floor(x))` at row `j`.
    fn at(&self, j: i64) -> Option<(i64, i64)> {
        match &self.kind {
            EdgeKind::Flat(c, f) => Some((*c, *f)),
            EdgeKind::Small(a, b, d) => {
                let v = a * j as i128 + b;
                let c = -Integer::div_floor(&-v, d);
                Some((c.try_into().ok()?, Integer::div_floor(&v, d).try_into().ok()?))
            }
            EdgeKind::Big(a, b, d) => {
                let v = a * j + b;
                let c = -Integer::div_floor(&-&v, d);
                Some((c.to_i64()?, v.div_floor(d).to_i64()?))
            }
        }
    }
}

/// Largest `width × height` rectangle of consecutive rows whose common
/// interval is nonempty: `(area, first row index, rows, lo)`.
fn best_rectangle(rows: &[(i64, i64, i64)]) -> Option<(usize, usize, usize, i64)> {
    let mut best: Option<(usize, usize, usize, i64)> = None;
    for s in 0..rows.len() {
        let (mut lo, mut hi) = (rows[s].1, rows[s].2);
        for e in s..rows.len() {
            if e > s && rows[e].0 != rows[e - 1].0 + 1 {
                break;
            }
            lo = lo.max(rows[e].1);
            hi = hi.min(rows[e].2);
            if lo > hi {
                break;
            }
            let w = (hi - lo + 1) as usize;
            let h = e - s + 1;
            let area = w * h;
            if best.is_none_or(|b| area > b.0) {
                best = Some((area, s, h, lo));
            }
            if w * (rows.len() - s) <= best.unwrap().0 {
                break;
            }
        }
    }
    best
}

const ROW_CAP: usize = 1 << 16;

/// Finds an `a × b` affine grid of lattice points inside `s`, with
/// `a·b·C_GRID >= |s ∩ Λ|` on the property corpus. The region is fattened
/// along its diameter, the image lattice is Gauss-reduced, and the largest
/// rectangle of lattice rows is taken over a few nearby bases.
pub fn extract_affine_grid(s: &ConvexRegion, lattice: &LatticeBasis) -> Result<AffineGrid> {
    let bu = (to_i64(&lattice.u[0]), to_i64(&lattice.u[1]));
    let bv = (to_i64(&lattice.v[0]), to_i64(&lattice.v[1]));
    let (Some(b00), Some(b10), Some(b01), Some(b11)) = (bu.0, bu.1, bv.0, bv.1) else {
        return Err(Error::Precondition("lattice basis must be integral".into()));
    };
    let bmap = RationalAffineMap::from_columns(&lattice.u, &lattice.v, qv(0, 0))?;
    // region in lattice coordinates, where the lattice is Z^2
    let sc = s.map(&bmap.inverse());

    let mut candidates: Vec<((i64, i64), (i64, i64))> = Vec::new();
    if let Some((u, v)) = fattened_reduced_basis(&sc) {
        let add = |a: (i64, i64), b: (i64, i64)| (a.0 + b.0, a.1 + b.1);
        let neg = |a: (i64, i64)| (-a.0, -a.1);
        for (p, r) in [(u, v), (u, add(v, u)), (u, add(v, neg(u))), (v, add(u, v)), (v, add(u, neg(v)))] {
            candidates.push((p, r));
            candidates.push((r, p));
        }
    }
    candidates.extend([((1, 0), (0, 1)), ((0, 1), (1, 0))]);
    let mut best: Option<(usize, AffineGrid)> = None;
    let mut total: Option<usize> = None;
    for (p, r) in candidates {
        let m = RationalAffineMap::from_columns(&qv(p.0, p.1), &qv(r.0, r.1), qv(0, 0))?;
        let region = sc.map(&m.inverse());
        let Some(rows) = region.rows(ROW_CAP) else { continue };
        if total.is_none() {
            total = Some(rows.iter().map(|&(_, lo, hi)| (hi - lo + 1) as usize).sum());
        }
        let Some((area, s0, h, lo)) = best_rectangle(&rows) else { continue };
        if best.as_ref().is_none_or(|b| area > b.0) {
            let j0 = rows[s0].0;
            let width = area / h;
            // lattice coords of the corner, then world coords
            let c = (lo * p.0 + j0 * r.0, lo * p.1 + j0 * r.1);
            let world = |w: (i64, i64)| (w.0 * b00 + w.1 * b01, w.0 * b10 + w.1 * b11);
            let o = world(c);
            best = Some((
                area,
                AffineGrid { origin: GridPoint::new(o.0, o.1), u: world(p), v: world(r), a: width, b: h },
            ));
        }
    }
    match best {
        Some((_, g)) => Ok(g),
        None if total.is_none() => Err(Error::Precondition("region too thin for row enumeration".into())),
        None => Err(Error::Precondition("region holds no lattice point".into())),
    }
}

/// Reduced basis of Z^2 after stretching `s` to unit extent along its
/// diameter and the perpendicular direction.
fn fattened_reduced_basis(s: &ConvexRegion) -> Option<((i64, i64), (i64, i64))> {
    let vs = &s.vertices;
    let mut d: Option<(Q, QVec)> = None;
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            let w = sub(&vs[j], &vs[i]);
            let len = dot(&w, &w);
            if d.as_ref().is_none_or(|(l, _)| &len > l) {
                d = Some((len, w));
            }
        }
    }
    let (dd, dir) = d?;
    let perp = [-dir[1].clone(), dir[0].clone()];
    let proj: Vec<Q> = vs.iter().map(|p| dot(p, &perp)).collect();
    let width = proj.iter().max()? - proj.iter().min()?;
    if width.is_zero() {
        return None;
    }
    // rows of the fattening map: dir/|dir|^2 and perp/width
    let m = [
        [&dir[0] / &dd, &dir[1] / &dd],
        [&perp[0] / &width, &perp[1] / &width],
    ];
    let f = RationalAffineMap::new(m, qv(0, 0)).ok()?;
    let red = gauss_reduce(&LatticeBasis::new(f.apply_linear(&qv(1, 0)), f.apply_linear(&qv(0, 1))).ok()?).ok()?;
    let back = f.inverse();
    let u = back.apply_linear(&red.u);
    let v = back.apply_linear(&red.v);
    Some(((to_i64(&u[0])?, to_i64(&u[1])?), (to_i64(&v[0])?, to_i64(&v[1])?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ib(u: (i64, i64), v: (i64, i64)) -> LatticeBasis {
        LatticeBasis::integer(u, v).unwrap()
    }

    fn as_int(b: &LatticeBasis) -> ((i64, i64), (i64, i64)) {
        (
            (to_i64(&b.u[0]).unwrap(), to_i64(&b.u[1]).unwrap()),
            (to_i64(&b.v[0]).unwrap(), to_i64(&b.v[1]).unwrap()),
        )
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(as_int(&gauss_reduce(&ib((1, 0), (0, 1))).unwrap()), ((1, 0), (0, 1)));
        for input in [ib((5, 3), (2, 1)), ib((1, 0), (10, 1))] {
            let (u, v) = as_int(&gauss_reduce(&input).unwrap());
            assert_eq!(u.0.abs() + u.1.abs(), 1);
            assert_eq!(v.0.abs() + v.1.abs(), 1);
            assert_ne!(u.0.abs(), v.0.abs());
        }
        assert!(gauss_reduce(&LatticeBasis { u: qv(1, 2), v: qv(2, 4) }).is_err());
    }

    #[test]
    fn affine_map_roundtrip() {
        let f = RationalAffineMap::new([[q(2), q(1)], [Q::new(1.into(), 3.into()), q(-1)]], qv(5, -7)).unwrap();
        let p = qv(3, 11);
        assert_eq!(f.inverse().apply(&f.apply(&p)), p);
        assert_eq!(f.then(&f.inverse()).apply(&p), p);
    }

    fn rect(x0: i64, y0: i64, x1: i64, y1: i64) -> ConvexRegion {
        ConvexRegion::hull(&[(x0, y0), (x1, y0), (x1, y1), (x0, y1)]).unwrap()
    }

    #[test]
    fn rectangle_is_full_grid() {
        let g = extract_affine_grid(&rect(1, 1, 3, 2), &ib((1, 0), (0, 1))).unwrap();
        assert_eq!(g.size(), 6);
        let mut pts = g.points();
        pts.sort();
        let mut want: Vec<GridPoint> = (1..=3).flat_map(|x| (1..=2).map(move |y| GridPoint::new(x, y))).collect();
        want.sort();
        assert_eq!(pts, want);
    }

    #[test]
    fn sliver_gives_single_row() {
        // thin quadrilateral around the diagonal from (1,1) to (6,6)
        let s = ConvexRegion::new(vec![
            [q(1), Q::new(9.into(), 10.into())],
            [Q::new(61.into(), 10.into()), q(6)],
            [q(6), Q::new(61.into(), 10.into())],
            [Q::new(9.into(), 10.into()), q(1)],
        ])
        .unwrap();
        assert_eq!(s.integer_points().len(), 6);
        let g = extract_affine_grid(&s, &ib((1, 0), (0, 1))).unwrap();
        assert_eq!(g.size(), 6);
        assert_eq!(g.a.min(g.b), 1);
        for p in g.points() {
            assert_eq!(p.x, p.y);
        }
    }

    #[test]
    fn empty_region_rejected() {
        let s = ConvexRegion::new(vec![
            [Q::new(1.into(), 4.into()), Q::new(1.into(), 4.into())],
            [Q::new(3.into(), 4.into()), Q::new(1.into(), 4.into())],
            [Q::new(1.into(), 2.into()), Q::new(3.into(), 4.into())],
        ])
        .unwrap();
        assert!(extract_affine_grid(&s, &ib((1, 0), (0, 1))).is_err());
    }

    #[test]
    fn clip_halves_square() {
        let s = rect(0, 0, 4, 4);
        let c = s.clip(&q(1), &q(-1), &q(0)).unwrap();
        assert_eq!(c.integer_points().len(), 15);
        assert!(s.clip(&q(1), &q(0), &q(10)).is_none());
    }

    fn in_lattice(b: &LatticeBasis, p: (i64, i64)) -> bool {
        let m = RationalAffineMap::from_columns(&b.u, &b.v, qv(0, 0)).unwrap().inverse();
        let c = m.apply(&qv(p.0, p.1));
        c[0].is_integer() && c[1].is_integer()
    }

    /// Lattice points by scanning the bounding box.
    fn brute_points(s: &ConvexRegion, b: &LatticeBasis) -> Vec<(i64, i64)> {
        let xs: Vec<i64> = s.vertices.iter().map(|p| p[0].floor().to_integer().to_i64().unwrap()).collect();
        let ys: Vec<i64> = s.vertices.iter().map(|p| p[1].floor().to_integer().to_i64().unwrap()).collect();
        let mut out = Vec::new();
        for x in *xs.iter().min().unwrap()..=*xs.iter().max().unwrap() + 1 {
            for y in *ys.iter().min().unwrap()..=*ys.iter().max().unwrap() + 1 {
                if s.contains(&qv(x, y)) && in_lattice(b, (x, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    fn polygon() -> impl Strategy<Value = ConvexRegion> {
        proptest::collection::vec((-30i64..30, -30i64..30), 3..9)
            .prop_filter_map("flat hull", |pts| ConvexRegion::hull(&pts).ok())
    }

    fn basis() -> impl Strategy<Value = LatticeBasis> {
        ((-3i64..4, -3i64..4), (-3i64..4, -3i64..4))
            .prop_filter_map("singular", |(u, v)| LatticeBasis::integer(u, v).ok())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn grid_inside_and_large(s in polygon(), b in basis()) {
            let pts = brute_points(&s, &b);
            prop_assume!(pts.len() >= 10);
            let g = extract_affine_grid(&s, &b).unwrap();
            let gp = g.points();
            let mut uniq = gp.clone();
            uniq.sort();
            uniq.dedup();
            prop_assert_eq!(uniq.len(), gp.len());
            for p in &gp {
                prop_assert!(s.contains_point(*p));
                prop_assert!(in_lattice(&b, (p.x, p.y)));
            }
            prop_assert!(g.size() * C_GRID >= pts.len());
            prop_assert!(in_lattice(&b, g.u) && in_lattice(&b, g.v));
        }

        #[test]
        fn reduction_properties(u in (-40i64..40, -40i64..40), v in (-40i64..40, -40i64..40)) {
            prop_assume!(u.0 * v.1 - u.1 * v.0 != 0);
            let input = ib(u, v);
            let r = gauss_reduce(&input).unwrap();
            prop_assert!(r.is_reduced());
            let (ru, rv) = as_int(&r);
            prop_assert!(ru.0 * ru.0 + ru.1 * ru.1 <= rv.0 * rv.0 + rv.1 * rv.1);
            // same lattice both ways
            for w in [ru, rv] { prop_assert!(in_lattice(&input, w)); }
            for w in [u, v] { prop_assert!(in_lattice(&r, w)); }
            // shortest vector by bounded search over coefficients
            let mut best = i64::MAX;
            for i in -40i64..=40 {
                for j in -40i64..=40 {
                    if (i, j) != (0, 0) {
                        let w = (i * u.0 + j * v.0, i * u.1 + j * v.1);
                        best = best.min(w.0 * w.0 + w.1 * w.1);
                    }
                }
            }
            prop_assert_eq!(ru.0 * ru.0 + ru.1 * ru.1, best);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]
        #[test]
        fn rows_match_membership(s in polygon(), a in -5i64..6, b in -5i64..6, c in -40i64..40, d in 1i64..7) {
            prop_assume!((a, b) != (0, 0));
            let Some(s) = s.clip(&q(a), &q(b), &(q(c) / q(d))) else { return Ok(()) };
            let mut brute = Vec::new();
            for x in -30..=30 {
                for y in -30..=30 {
                    if s.contains_point(GridPoint::new(x, y)) {
                        brute.push(GridPoint::new(x, y));
                    }
                }
            }
            let mut got = s.integer_points();
            got.sort();
            brute.sort();
            prop_assert_eq!(got, brute);
        }
    }
}
