//! Drawers for trees of arbitrary degree.
//!
//! Internal layouts are built as [`Frag`]s in screen coordinates (y grows
//! downward) with the root at the top-left corner unless stated otherwise.
//! Point-set constructions work in ordinary coordinates (y up) and are
//! flipped when stored.

use std::collections::HashMap;

use crate::drawing::GridDrawing;
use crate::error::{Error, Result};
use crate::frag::Frag;
use crate::geometry::{coprime_point_set, cross, gcd, orient, GridPoint};
use crate::logs::{clog, isqrt};
use crate::tree::{NodeId, Tree};

pub type Meta = Vec<(String, String)>;

/// Initial value of the constant `c` in `B = ceil(c·ℓ·n/A)`.
pub const C_BAND: u64 = 4;
/// Certified envelope constant of the augmented-star bounds.
pub const C_STAR: f64 = 8.0;

// ---------------------------------------------------------------------------
// standard algorithm

/// Places the subtree at `v` by the standard algorithm with its root at
/// `(ox, oy)`; returns the height used. Width is exactly `size(v)`.
fn standard_place(tree: &Tree, v: NodeId, ox: i64, oy: i64, out: &mut Frag) -> i64 {
    let mut h = 1;
    let mut x = ox;
    let mut u = v;
    loop {
        out.put(u, x, oy);
        let heavy = tree.heavy_child(u);
        let mut cx = x + 1;
        for &c in tree.children(u) {
            if Some(c) != heavy {
                h = h.max(1 + standard_place(tree, c, cx, oy + 1, out));
                cx += tree.size(c) as i64;
            }
        }
        match heavy {
            Some(c) => {
                u = c;
                x = cx;
            }
            None => break,
        }
    }
    h
}

/// Standard drawing of the subtree at `v`, root at `(0, 0)`.
pub(crate) fn standard_frag(tree: &Tree, v: NodeId, transpose: bool) -> Frag {
    let mut f = Frag::new();
    standard_place(tree, v, 0, 0, &mut f);
    if transpose {
        f.transpose();
    }
    f
}

/// Upward drawing with `W <= n` and `H <= max(1, ceil(log2 n))`, root at the
/// top-left corner; the transposed variant swaps the two bounds.
pub fn draw_standard(tree: &Tree, transpose: bool) -> GridDrawing {
    let f = standard_frag(tree, tree.root(), transpose);
    GridDrawing::from_frag(tree, &f).expect("standard layout is complete")
}

// ---------------------------------------------------------------------------
// drawing on universal point sets

/// Parameters of the point-set recursion for one subtree.
struct PointTask {
    v: NodeId,
    pts: Vec<GridPoint>,
}

/// Draws the subtree at `v` upward on `points` (y up) so that no vertex
/// leaves the set. Requires `|points| >= (ℓ-1)·n - ℓ + 2` and no `ℓ` points
/// collinear. Returns `(node, point)` pairs.
pub fn draw_subtree_on_points(
    tree: &Tree,
    v: NodeId,
    points: &[GridPoint],
    ell: usize,
) -> Result<Vec<(NodeId, GridPoint)>> {
    if ell < 2 && tree.size(v) > 1 {
        return Err(Error::ParamOutOfRange(format!("ℓ={ell} must be at least 2")));
    }
    let mut out = Vec::with_capacity(tree.size(v));
    let mut stack = vec![PointTask { v, pts: points.to_vec() }];
    while let Some(PointTask { v, mut pts }) = stack.pop() {
        let n = tree.size(v);
        let need = ((ell.max(2) - 1) * n + 2).saturating_sub(ell.max(2)).max(1);
        if pts.len() < need {
            return Err(Error::Precondition(format!("{} points for a subtree of size {n}, need {need}", pts.len())));
        }
        // highest, then leftmost
        let top = (0..pts.len()).max_by(|&a, &b| pts[a].y.cmp(&pts[b].y).then(pts[b].x.cmp(&pts[a].x))).unwrap();
        let root = pts.swap_remove(top);
        out.push((v, root));
        if tree.children(v).is_empty() {
            continue;
        }
        let dirs: Vec<(i64, i64)> = pts.iter().map(|p| p.minus(root)).collect();
        let mut order: Vec<usize> = (0..pts.len()).collect();
        // counterclockwise from the left horizontal through straight down
        order.sort_by(|&a, &b| 0.cmp(&cross(dirs[a], dirs[b])).then(dist2(dirs[a]).cmp(&dist2(dirs[b]))));
        let mut groups: Vec<(usize, usize)> = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let mut j = i + 1;
            while j < order.len() && cross(dirs[order[i]], dirs[order[j]]) == 0 {
                j += 1;
            }
            if ell >= 2 && j - i > ell - 2 {
                return Err(Error::Precondition(format!("{ell} collinear points in the point set")));
            }
            groups.push((i, j));
            i = j;
        }
        let mut g = 0;
        for &c in tree.children(v) {
            let nc = tree.size(c);
            let lo = ((ell - 1) * nc + 2).saturating_sub(ell).max(1);
            let start = groups.get(g).map_or(order.len(), |x| x.0);
            let mut end = start;
            while end - start < lo {
                let Some(&(_, e)) = groups.get(g) else {
                    return Err(Error::Precondition("point set too small".into()));
                };
                end = e;
                g += 1;
            }
            stack.push(PointTask { v: c, pts: order[start..end].iter().map(|&k| pts[k]).collect() });
        }
    }
    Ok(out)
}

fn dist2(d: (i64, i64)) -> i128 {
    d.0 as i128 * d.0 as i128 + d.1 as i128 * d.1 as i128
}

/// Whole-tree wrapper: positions indexed by node id, on the given points.
pub fn draw_on_points(tree: &Tree, points: &[GridPoint], ell: usize) -> Result<Vec<GridPoint>> {
    let placed = draw_subtree_on_points(tree, tree.root(), points, ell)?;
    Ok(scatter(tree.len(), placed))
}

fn scatter(n: usize, placed: Vec<(NodeId, GridPoint)>) -> Vec<GridPoint> {
    let mut pos = vec![GridPoint::new(0, 0); n];
    for (v, p) in placed {
        pos[v] = p;
    }
    pos
}

// ---------------------------------------------------------------------------
// drawing on parallel segments

/// Parallel segments, each given by its usable points (y up).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentFamily {
    pub segments: Vec<Vec<GridPoint>>,
}

impl SegmentFamily {
    /// Checks collinearity within segments and parallelism across them,
    /// then orders each segment by decreasing y, then increasing x.
    pub fn new(mut segments: Vec<Vec<GridPoint>>) -> Result<Self> {
        let mut dir: Option<(i64, i64)> = None;
        for seg in &mut segments {
            seg.sort_by(|a, b| b.y.cmp(&a.y).then(a.x.cmp(&b.x)));
            seg.dedup();
            if seg.len() >= 2 {
                let d = seg[seg.len() - 1].minus(seg[0]);
                if seg.iter().any(|p| orient(seg[0], seg[seg.len() - 1], *p) != 0) {
                    return Err(Error::Precondition("segment points are not collinear".into()));
                }
                match dir {
                    Some(e) if cross(d, e) != 0 => {
                        return Err(Error::Precondition("segments are not parallel".into()))
                    }
                    _ => dir = Some(d),
                }
            }
        }
        Ok(SegmentFamily { segments })
    }

    /// Whether the y-projections of consecutive segments are disjoint and
    /// decreasing.
    pub fn horizontally_separated(&self) -> bool {
        self.segments.windows(2).all(|w| match (w[0].last(), w[1].first()) {
            (Some(a), Some(b)) => a.y > b.y,
            _ => true,
        })
    }
}

/// Maps row `i` of the standard drawing of the subtree at `v` onto segment
/// `i`, preserving the left-to-right order. Segments must be listed from
/// the highest line down.
pub fn draw_subtree_on_segments(tree: &Tree, v: NodeId, g: &SegmentFamily) -> Result<Vec<(NodeId, GridPoint)>> {
    let mut f = Frag::new();
    standard_place(tree, v, 0, 0, &mut f);
    let mut out = Vec::with_capacity(tree.size(v));
    for (u, x, y) in f.points() {
        let seg = g
            .segments
            .get(y as usize)
            .ok_or_else(|| Error::Precondition(format!("need more than {} segments", g.segments.len())))?;
        let p = seg
            .get(x as usize)
            .ok_or_else(|| Error::Precondition(format!("segment {y} has only {} points", seg.len())))?;
        out.push((u, *p));
    }
    Ok(out)
}

pub fn draw_on_segments(tree: &Tree, g: &SegmentFamily) -> Result<Vec<GridPoint>> {
    Ok(scatter(tree.len(), draw_subtree_on_segments(tree, tree.root(), g)?))
}

// ---------------------------------------------------------------------------
// augmented star

fn check_star(tree: &Tree, children: &[NodeId], a: usize, s: usize) -> Result<usize> {
    let n = 1 + children.iter().map(|&c| tree.size(c)).sum::<usize>();
    if s == 0 {
        return Err(Error::ParamOutOfRange("s must be positive".into()));
    }
    if a == 0 || a > n {
        return Err(Error::ParamOutOfRange(format!("A={a} must be in 1..={n}")));
    }
    if let Some(&c) = children.iter().find(|&&c| tree.size(c) > s) {
        return Err(Error::Precondition(format!("child subtree at {c} exceeds s={s}")));
    }
    Ok(n)
}

/// Half-band coprime points below the origin, with `c` doubled until the
/// set holds `need` points; sorted counterclockwise around the origin.
fn star_points(a: usize, ell: usize, n: usize, need: usize, meta: &mut Meta, full_band: bool) -> Vec<GridPoint> {
    let mut c = C_BAND;
    loop {
        let b = (c as u128 * ell as u128 * n as u128).div_ceil(a as u128) as i64;
        let mut pts: Vec<GridPoint> = if full_band {
            (1..=a as i64).flat_map(|x| (1..=b).map(move |y| GridPoint::new(x, -y))).collect()
        } else {
            coprime_point_set(a as i64, b, true).into_iter().map(|p| GridPoint::new(p.x, -p.y)).collect()
        };
        if pts.len() >= need {
            if c != C_BAND {
                meta.push(("band_c".into(), c.to_string()));
            }
            pts.sort_by(|p, q| 0.cmp(&cross((p.x, p.y), (q.x, q.y))).then(dist2((p.x, p.y)).cmp(&dist2((q.x, q.y)))));
            return pts;
        }
        c *= 2;
    }
}

/// Some line through at least `ell` of `pts`, with all of its points.
fn collinear_line(pts: &[GridPoint], ell: usize) -> Option<Vec<GridPoint>> {
    if ell > pts.len() {
        return None;
    }
    let x0 = pts.iter().map(|p| p.x).min()?;
    let x1 = pts.iter().map(|p| p.x).max()?;
    if ell as i64 > x1 - x0 + 1 && ell >= 2 {
        // only vertical lines can carry that many points
        let mut cols: HashMap<i64, Vec<usize>> = HashMap::new();
        for (i, p) in pts.iter().enumerate() {
            cols.entry(p.x).or_default().push(i);
        }
        let g = cols.into_values().filter(|g| g.len() >= ell).min_by_key(|g| g[0])?;
        return Some(g.into_iter().map(|i| pts[i]).collect());
    }
    for i in 0..pts.len() {
        let mut by_dir: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for j in i + 1..pts.len() {
            let (dx, dy) = pts[j].minus(pts[i]);
            let g = gcd(dx.abs(), dy.abs()).max(1);
            let (mut dx, mut dy) = (dx / g, dy / g);
            if dx < 0 || (dx == 0 && dy < 0) {
                dx = -dx;
                dy = -dy;
            }
            by_dir.entry((dx, dy)).or_default().push(j);
        }
        let best = by_dir.into_values().filter(|g| g.len() + 1 >= ell).min_by_key(|g| g[0]);
        if let Some(g) = best {
            let mut line = vec![pts[i]];
            line.extend(g.into_iter().map(|j| pts[j]));
            return Some(line);
        }
    }
    None
}

/// Scaled copies `L, 2L, .., tL` of the `n` points of `line` with the
/// smallest y-span; they form a horizontally separated family.
fn scaled_family(line: &[GridPoint], n: usize, t: usize) -> Result<SegmentFamily> {
    let mut line = line.to_vec();
    line.sort_by(|a, b| b.y.cmp(&a.y).then(a.x.cmp(&b.x)));
    let w = (0..=line.len() - n).min_by_key(|&i| line[i].y - line[i + n - 1].y).unwrap();
    let window = &line[w..w + n];
    let segs = (1..=t as i64).map(|k| window.iter().map(|p| GridPoint::new(k * p.x, k * p.y)).collect()).collect();
    let fam = SegmentFamily::new(segs)?;
    if !fam.horizontally_separated() {
        return Err(Error::Internal("scaled segment copies overlap vertically".into()));
    }
    Ok(fam)
}

/// Draws the subtree at `c` inside one sector of the star (y up).
fn place_sector(
    tree: &Tree,
    c: NodeId,
    sector: &[GridPoint],
    ell: usize,
    t: usize,
    out: &mut Vec<(NodeId, GridPoint)>,
) -> Result<()> {
    let nc = tree.size(c);
    if nc == 1 {
        let top = sector.iter().copied().max_by(|p, q| p.y.cmp(&q.y).then(q.x.cmp(&p.x))).unwrap();
        out.push((c, top));
        return Ok(());
    }
    match collinear_line(sector, ell) {
        Some(line) => out.extend(draw_subtree_on_segments(tree, c, &scaled_family(&line, nc, t)?)?),
        None => out.extend(draw_subtree_on_points(tree, c, sector, ell)?),
    }
    Ok(())
}

fn frag_from_math(placed: &[(NodeId, GridPoint)]) -> Frag {
    let mut f = Frag::new();
    for &(u, p) in placed {
        f.put(u, p.x, -p.y);
    }
    f
}

/// Augmented star on `v` and the given children (each of size `<= s`),
/// root at `(0, 0)` and alone in column 0.
pub(crate) fn star_frag(tree: &Tree, v: NodeId, children: &[NodeId], a: usize, s: usize, meta: &mut Meta) -> Result<Frag> {
    let n = check_star(tree, children, a, s)?;
    let t = clog(s);
    let ell = s * t;
    let pts = star_points(a, ell, n, ell * n, meta, false);
    let mut placed = vec![(v, GridPoint::new(0, 0))];
    let mut idx = 0;
    for &c in children {
        let m = ell * tree.size(c);
        place_sector(tree, c, &pts[idx..idx + m], ell, t, &mut placed)?;
        idx += m;
    }
    Ok(frag_from_math(&placed))
}

/// Upward drawing of a tree whose root's child subtrees have size `<= s`,
/// with width `O(A log s)` and height `O((n/A) s log² s)`; the root is the
/// only vertex on the left side of the box.
pub fn draw_augmented_star(tree: &Tree, a: usize, s: usize) -> Result<GridDrawing> {
    let mut meta = Meta::new();
    let r = tree.root();
    let f = star_frag(tree, r, tree.children(r), a, s, &mut meta)?;
    let mut d = GridDrawing::from_frag(tree, &f)?;
    d.meta = meta;
    Ok(d)
}

// ---------------------------------------------------------------------------
// general skeleton

/// Draws `v` with the given children below it: the largest child continues
/// on row 0, the others hang on row 1. `v` is at `(0, 0)`, alone in its
/// column.
fn standard_group(tree: &Tree, v: NodeId, kids: &[NodeId]) -> Frag {
    let mut f = Frag::new();
    f.put(v, 0, 0);
    let heavy = kids.iter().copied().fold(None, |b: Option<NodeId>, c| match b {
        Some(x) if tree.size(x) >= tree.size(c) => Some(x),
        _ => Some(c),
    });
    let mut cx = 1;
    for &c in kids {
        if Some(c) != heavy {
            standard_place(tree, c, cx, 1, &mut f);
            cx += tree.size(c) as i64;
        }
    }
    if let Some(c) = heavy {
        standard_place(tree, c, cx, 0, &mut f);
    }
    f
}

/// Step-2 drawer: `v` with the given small children, `v` at `(0, 0)` and the
/// only vertex in column 0.
pub(crate) type StarFn<'a> = dyn Fn(&Tree, NodeId, &[NodeId], &mut Meta) -> Result<Frag> + 'a;

/// The recursive layout around the `A`-skewed centroid, shared by the
/// upward and the bootstrapped drawers.
pub(crate) struct Skeleton<'a> {
    pub tree: &'a Tree,
    pub a: usize,
    pub s: usize,
    pub star: &'a StarFn<'a>,
}

impl Skeleton<'_> {
    /// Drawing of the subtree at `v` (size `>= A`) with its root at the
    /// top-left corner `(0, 0)`.
    pub fn draw(&self, v: NodeId, meta: &mut Meta) -> Result<Frag> {
        let t = self.tree;
        // the chain of centroid levels along v, v_{k+1}, ...
        let mut levels: Vec<(Vec<NodeId>, Option<NodeId>)> = Vec::new();
        let mut r = v;
        loop {
            let n = t.size(r);
            let a = self.a.min(n);
            let mut path = vec![r];
            let mut next = None;
            while let Some(c) = t.heavy_child(*path.last().unwrap()) {
                if t.size(c) > n - a {
                    path.push(c);
                } else {
                    next = Some(c).filter(|&c| t.size(c) > self.a);
                    break;
                }
            }
            levels.push((path, next));
            match next {
                Some(c) => r = c,
                None => break,
            }
        }
        let mut below: Option<Frag> = None;
        for (path, heavy) in levels.into_iter().rev() {
            below = Some(self.level(&path, heavy, below.take(), meta)?);
        }
        Ok(below.expect("at least one level"))
    }

    fn level(&self, path: &[NodeId], heavy: Option<NodeId>, below: Option<Frag>, meta: &mut Meta) -> Result<Frag> {
        let t = self.tree;
        let k = path.len() - 1;
        let vk = path[k];
        let mut small = Vec::new();
        let mut mid = Vec::new();
        let mut big = Vec::new();
        for &c in t.children(vk) {
            if Some(c) == heavy {
                continue;
            }
            let sz = t.size(c);
            if sz <= self.s {
                small.push(c);
            } else if sz <= self.a {
                mid.push(c);
            } else {
                big.push(c);
            }
        }
        let nsmall: usize = small.iter().map(|&c| t.size(c)).sum();
        let mut low = if small.is_empty() {
            Frag::single(vk)
        } else if nsmall <= self.a {
            standard_group(t, vk, &small)
        } else {
            (self.star)(t, vk, &small, meta)?
        };
        low.drop_anchors();
        let mut y = low.height();
        for &c in &mid {
            let mut f = standard_frag(t, c, false);
            f.move_to(1, y);
            y += f.height();
            low.merge(f);
        }
        for &c in &big {
            let mut f = self.draw(c, meta)?;
            f.move_to(1, y);
            y += f.height();
            low.merge(f);
        }
        if let Some(mut b) = below {
            b.move_to(0, y);
            low.merge(b);
        }
        if k == 0 {
            return Ok(low);
        }

        let mut up = Frag::new();
        let mut h1 = 1;
        if k == 1 {
            up.put(path[0], 0, 0);
            let mut cx = 1;
            for &c in t.children(path[0]) {
                if c != vk {
                    standard_place(t, c, cx, 1, &mut up);
                    cx += t.size(c) as i64;
                }
            }
            h1 = up.height();
            low.move_to(0, h1);
            low.merge(up);
            return Ok(low);
        }
        let mut x = 0;
        for i in 0..k - 1 {
            up.put(path[i], x, 0);
            let mut cx = x + 1;
            for &c in t.children(path[i]) {
                if c != path[i + 1] {
                    h1 = h1.max(1 + standard_place(t, c, cx, 1, &mut up));
                    cx += t.size(c) as i64;
                }
            }
            x = cx;
        }
        let last = path[k - 1];
        let others: Vec<NodeId> = t.children(last).iter().copied().filter(|&c| c != vk).collect();
        let r: i64 = others.iter().map(|&c| t.size(c) as i64).sum();
        let xcol = (x + r).max(low.width() - 1);
        let mut cursor = xcol - 1;
        for &c in &others {
            let mut f = standard_frag(t, c, false);
            f.mirror_x();
            f.move_top_right_to(cursor, 1);
            cursor -= f.width();
            h1 = h1.max(1 + f.height());
            up.merge(f);
        }
        up.put(last, xcol, 0);
        low.mirror_x();
        low.move_top_right_to(xcol, h1);
        low.merge(up);
        Ok(low)
    }
}

/// `s = max(1, floor(sqrt(A) / log A))`.
pub fn default_s(a: usize) -> usize {
    (isqrt(a) / clog(a)).max(1)
}

/// Upward drawing with width `O(A + log n)` and height
/// `O((n / sqrt A) log² A)`, root at the top-left corner.
pub fn draw_upward_general(tree: &Tree, a: usize) -> Result<GridDrawing> {
    let n = tree.len();
    if a == 0 || a > n {
        return Err(Error::ParamOutOfRange(format!("A={a} must be in 1..={n}")));
    }
    let s = default_s(a);
    let star = move |t: &Tree, v: NodeId, kids: &[NodeId], meta: &mut Meta| {
        let n1 = 1 + kids.iter().map(|&c| t.size(c)).sum::<usize>();
        let at = a.div_ceil(clog(s)).min(n1);
        star_frag(t, v, kids, at, s, meta)
    };
    let sk = Skeleton { tree, a, s, star: &star };
    let mut meta = vec![("A".to_string(), a.to_string()), ("s".to_string(), s.to_string())];
    let f = sk.draw(tree.root(), &mut meta)?;
    let mut d = GridDrawing::from_frag(tree, &f)?;
    d.meta = meta;
    Ok(d)
}

// ---------------------------------------------------------------------------
// bootstrapped general algorithm

/// `x^(1/j) · log^j x`, the height factor of the level-`j` drawer.
fn level_factor(j: usize, x: usize) -> f64 {
    (x as f64).powf(1.0 / j as f64) * (clog(x) as f64).powi(j as i32)
}

/// `s = ceil(A^(j/(j+1)) / log^j A)` for the level built over level `j`.
pub fn boot_s(a: usize, j: usize) -> usize {
    let v = (a as f64).powf(j as f64 / (j as f64 + 1.0)) / (clog(a) as f64).powi(j as i32);
    (v.ceil() as usize).max(1)
}

/// Bootstrap level used for budget `A` when none is requested.
pub fn auto_level(a: usize) -> usize {
    let la = clog(a) as f64;
    ((la / clog(clog(a)) as f64).sqrt().ceil() as usize).max(1)
}

/// Level-`j` general drawer: width about `budget`, root at the top-left.
fn general_level(tree: &Tree, v: NodeId, budget: usize, j: usize, meta: &mut Meta) -> Result<Frag> {
    let n = tree.size(v);
    if j <= 1 || n == 1 {
        return Ok(standard_frag(tree, v, true));
    }
    let a = budget.clamp(1, n);
    let s = boot_s(a, j - 1);
    let star = move |t: &Tree, v: NodeId, kids: &[NodeId], meta: &mut Meta| {
        let n1 = 1 + kids.iter().map(|&c| t.size(c)).sum::<usize>();
        let at = a.div_ceil(clog(s)).min(n1);
        boot_star_frag(t, v, kids, at, s, j - 1, meta)
    };
    Skeleton { tree, a, s, star: &star }.draw(v, meta)
}

fn bump(meta: &mut Meta, key: &str) {
    match meta.iter_mut().find(|(k, _)| k == key) {
        Some((_, v)) => *v = (v.parse::<u64>().unwrap_or(0) + 1).to_string(),
        None => meta.push((key.to_string(), "1".to_string())),
    }
}

/// Improved augmented star: sectors of the full coprime band, each holding
/// an affine grid in which the level-`j` drawer lays out its subtree.
pub(crate) fn boot_star_frag(
    tree: &Tree,
    v: NodeId,
    children: &[NodeId],
    a: usize,
    s: usize,
    j: usize,
    meta: &mut Meta,
) -> Result<Frag> {
    let n = check_star(tree, children, a, s)?;
    let t = clog(s);
    let ell = (level_factor(j, s).ceil() as usize).max(1);
    let mut c = C_BAND;
    for _ in 0..16 {
        let b = (c as u128 * ell as u128 * n as u128).div_ceil(a as u128) as i64;
        let mut pts: Vec<GridPoint> =
            coprime_point_set(a as i64, b, false).into_iter().map(|p| GridPoint::new(p.x, -p.y)).collect();
        if pts.len() >= ell * n {
            pts.sort_by(|p, q| 0.cmp(&cross((p.x, p.y), (q.x, q.y))));
            let mut placed = vec![(v, GridPoint::new(0, 0))];
            let mut idx = 0;
            let mut ok = true;
            for &ch in children {
                let m = ell * tree.size(ch);
                let sector = &pts[idx..idx + m];
                idx += m;
                if tree.size(ch) == 1 {
                    let top = sector.iter().copied().max_by(|p, q| p.y.cmp(&q.y).then(q.x.cmp(&p.x))).unwrap();
                    placed.push((ch, top));
                    continue;
                }
                match boot_sector(tree, ch, sector, a as i64, b, t, j, meta)? {
                    Some(pl) => placed.extend(pl),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                if c != C_BAND {
                    meta.push(("band_c".into(), c.to_string()));
                }
                return Ok(frag_from_math(&placed));
            }
        }
        c *= 2;
    }
    Err(Error::Internal("improved star found no placement after escalation".into()))
}

/// Lays out the subtree at `ch` inside the cone of `sector` clipped to the
/// box `[1, a] × [-b, -1]`; `None` when neither case applies.
#[allow(clippy::too_many_arguments)]
fn boot_sector(
    tree: &Tree,
    ch: NodeId,
    sector: &[GridPoint],
    a: i64,
    b: i64,
    t: usize,
    j: usize,
    meta: &mut Meta,
) -> Result<Option<Vec<(NodeId, GridPoint)>>> {
    use crate::lattice::{extract_affine_grid, q, ConvexRegion, LatticeBasis};
    let ni = tree.size(ch);
    let first = sector[0];
    let last = sector[sector.len() - 1];
    let region = ConvexRegion::hull(&[(1, -b), (a, -b), (a, -1), (1, -1)])
        .ok()
        .and_then(|r| r.clip(&q(-first.y), &q(first.x), &q(0)))
        .and_then(|r| r.clip(&q(last.y), &q(-last.x), &q(0)));
    let grid = region.and_then(|r| extract_affine_grid(&r, &LatticeBasis::integer((1, 0), (0, 1)).ok()?).ok());
    if let Some(g) = &grid {
        let g0 = clog(ni);
        for g in [g.clone(), g.transposed()] {
            let mut ap = ni.min(g.a);
            while ap >= g0 && ap >= 1 {
                let f = general_level(tree, ch, ap, j, meta)?;
                if f.width() as usize <= g.a && f.height() as usize <= g.b {
                    bump(meta, "grid_case");
                    return Ok(Some(map_into_grid(&f, &g)));
                }
                if ap == g0 {
                    break;
                }
                ap = (ap / 2).max(g0);
            }
        }
    }
    // a line with ni lattice points that misses the origin
    let mut line: Option<Vec<GridPoint>> = None;
    if let Some(g) = &grid {
        for g in [g.clone(), g.transposed()] {
            if g.a >= ni && line.is_none() {
                for row in 0..g.b as i64 {
                    let o = g.point(0, row);
                    if cross(g.u, (o.x, o.y)) != 0 {
                        line = Some((0..ni as i64).map(|i| g.point(i, row)).collect());
                        break;
                    }
                }
            }
        }
    }
    if line.is_none() && ni >= 2 {
        line = collinear_line(sector, ni);
    }
    let Some(line) = line else { return Ok(None) };
    let segs = (1..=t as i64)
        .map(|k| line.iter().take(ni).map(|p| GridPoint::new(k * p.x, k * p.y)).collect())
        .collect();
    bump(meta, "line_case");
    Ok(Some(draw_subtree_on_segments(tree, ch, &SegmentFamily::new(segs)?)?))
}

/// Maps a fragment whose root is its top-left corner onto the grid so that
/// the root lands on the grid corner with the largest y (then smallest x).
fn map_into_grid(f: &Frag, g: &crate::lattice::AffineGrid) -> Vec<(NodeId, GridPoint)> {
    let bb = f.bbox();
    let (la, lb) = (g.a as i64 - 1, g.b as i64 - 1);
    let corners = [(0, 0), (la, 0), (0, lb), (la, lb)];
    let &(ci, cj) = corners
        .iter()
        .max_by(|p, q| {
            let (pp, qq) = (g.point(p.0, p.1), g.point(q.0, q.1));
            pp.y.cmp(&qq.y).then(qq.x.cmp(&pp.x))
        })
        .unwrap();
    let di = if ci == 0 { 1 } else { -1 };
    let dj = if cj == 0 { 1 } else { -1 };
    f.points().map(|(u, x, y)| (u, g.point(ci + di * (x - bb.x0), cj + dj * (y - bb.y0)))).collect()
}

/// Non-upward drawing with width about `A` built by `j` levels of
/// bootstrapping over the transposed standard algorithm. Requires
/// `n >= A >= ceil(log2 n)`; `j = None` picks the level from `A`.
pub fn draw_general_bootstrap(tree: &Tree, a: usize, j: Option<usize>) -> Result<GridDrawing> {
    let n = tree.len();
    let lg = crate::logs::ceil_log2(n) as usize;
    if a > n || a < lg.max(1) {
        return Err(Error::ParamOutOfRange(format!("A={a} must be in {}..={n}", lg.max(1))));
    }
    let j = j.unwrap_or_else(|| auto_level(a));
    if j == 0 {
        return Err(Error::ParamOutOfRange("bootstrap level must be at least 1".into()));
    }
    let mut meta = vec![("A".to_string(), a.to_string()), ("j".to_string(), j.to_string())];
    let f = general_level(tree, tree.root(), a, j, &mut meta)?;
    let mut d = GridDrawing::from_frag(tree, &f)?;
    d.meta = meta;
    Ok(d)
}

/// Improved augmented star over the level-`j` drawer (not necessarily
/// upward); the root is the only vertex on the left side of the box.
pub fn draw_augmented_star_boot(tree: &Tree, a: usize, s: usize, j: usize) -> Result<GridDrawing> {
    let mut meta = Meta::new();
    let r = tree.root();
    let f = boot_star_frag(tree, r, tree.children(r), a, s, j.max(1), &mut meta)?;
    let mut d = GridDrawing::from_frag(tree, &f)?;
    d.meta = meta;
    Ok(d)
}
