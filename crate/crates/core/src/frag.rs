//! Partial drawings in screen coordinates (x grows right, y grows down).
//!
//! Points are kept in a local frame plus a pending signed-permutation
//! transform, so translating, reflecting or transposing a large fragment is
//! O(1). Merging moves the smaller point list into the larger one's frame.

use crate::tree::NodeId;

/// Signed permutation matrix plus translation: `p -> M p + t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Iso {
    m: [[i64; 2]; 2],
    t: [i64; 2],
}

impl Iso {
    const ID: Iso = Iso { m: [[1, 0], [0, 1]], t: [0, 0] };

    #[inline]
    fn apply(&self, x: i64, y: i64) -> (i64, i64) {
        (self.m[0][0] * x + self.m[0][1] * y + self.t[0], self.m[1][0] * x + self.m[1][1] * y + self.t[1])
    }

    /// `other ∘ self`
    fn then(&self, other: &Iso) -> Iso {
        let a = &other.m;
        let b = &self.m;
        let m = [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ];
        let (tx, ty) = other.apply(self.t[0], self.t[1]);
        Iso { m, t: [tx, ty] }
    }

    fn inverse(&self) -> Iso {
        // orthogonal: inverse is the transpose
        let m = [[self.m[0][0], self.m[1][0]], [self.m[0][1], self.m[1][1]]];
        let r = Iso { m, t: [0, 0] };
        let (tx, ty) = r.apply(self.t[0], self.t[1]);
        Iso { m, t: [-tx, -ty] }
    }
}

/// Axis-aligned bounding box, inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BBox {
    pub x0: i64,
    pub y0: i64,
    pub x1: i64,
    pub y1: i64,
}

impl BBox {
    pub fn width(&self) -> i64 {
        self.x1 - self.x0 + 1
    }
    pub fn height(&self) -> i64 {
        self.y1 - self.y0 + 1
    }
    fn union(&self, o: &BBox) -> BBox {
        BBox { x0: self.x0.min(o.x0), y0: self.y0.min(o.y0), x1: self.x1.max(o.x1), y1: self.y1.max(o.y1) }
    }
    fn map(&self, f: &Iso) -> BBox {
        let (ax, ay) = f.apply(self.x0, self.y0);
        let (bx, by) = f.apply(self.x1, self.y1);
        BBox { x0: ax.min(bx), y0: ay.min(by), x1: ax.max(bx), y1: ay.max(by) }
    }
}

#[derive(Debug, Clone)]
pub struct Frag {
    pts: Vec<(NodeId, i64, i64)>,
    tf: Iso,
    bbox: Option<BBox>,
    anchors: Vec<(NodeId, i64, i64)>,
}

impl Default for Frag {
    fn default() -> Self {
        Frag::new()
    }
}

impl Frag {
    pub fn new() -> Frag {
        Frag { pts: Vec::new(), tf: Iso::ID, bbox: None, anchors: Vec::new() }
    }

    /// One vertex at the origin, recorded as an anchor.
    pub fn single(v: NodeId) -> Frag {
        let mut f = Frag::new();
        f.put(v, 0, 0);
        f.anchor(v);
        f
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    pub fn bbox(&self) -> BBox {
        self.bbox.expect("bbox of empty fragment")
    }

    pub fn width(&self) -> i64 {
        self.bbox.map_or(0, |b| b.width())
    }

    pub fn height(&self) -> i64 {
        self.bbox.map_or(0, |b| b.height())
    }

    /// Places `v` at world coordinates `(x, y)`.
    pub fn put(&mut self, v: NodeId, x: i64, y: i64) {
        let (lx, ly) = self.tf.inverse().apply(x, y);
        self.pts.push((v, lx, ly));
        let b = BBox { x0: x, y0: y, x1: x, y1: y };
        self.bbox = Some(self.bbox.map_or(b, |o| o.union(&b)));
    }

    /// Places `v` and remembers its position for later lookup.
    pub fn put_anchor(&mut self, v: NodeId, x: i64, y: i64) {
        self.put(v, x, y);
        self.anchors.push((v, x, y));
    }

    /// Remembers the current position of an already placed node (linear scan).
    pub fn anchor(&mut self, v: NodeId) {
        if self.anchors.iter().any(|a| a.0 == v) {
            return;
        }
        let &(_, lx, ly) = self.pts.iter().find(|p| p.0 == v).expect("anchor on unplaced node");
        let (x, y) = self.tf.apply(lx, ly);
        self.anchors.push((v, x, y));
    }

    pub fn drop_anchors(&mut self) {
        self.anchors.clear();
    }

    /// World position of an anchored node.
    pub fn at(&self, v: NodeId) -> (i64, i64) {
        self.try_at(v).unwrap_or_else(|| panic!("node {v} is not anchored"))
    }

    pub fn try_at(&self, v: NodeId) -> Option<(i64, i64)> {
        self.anchors.iter().find(|a| a.0 == v).map(|a| (a.1, a.2))
    }

    fn compose(&mut self, g: Iso) {
        self.tf = self.tf.then(&g);
        self.bbox = self.bbox.map(|b| b.map(&g));
        for a in &mut self.anchors {
            let (x, y) = g.apply(a.1, a.2);
            a.1 = x;
            a.2 = y;
        }
    }

    pub fn translate(&mut self, dx: i64, dy: i64) {
        self.compose(Iso { m: [[1, 0], [0, 1]], t: [dx, dy] });
    }

    /// Moves the fragment so that its bounding box starts at `(x, y)`.
    pub fn move_to(&mut self, x: i64, y: i64) {
        let b = self.bbox();
        self.translate(x - b.x0, y - b.y0);
    }

    /// Moves the fragment so that its top-right corner lands on `(x, y)`.
    pub fn move_top_right_to(&mut self, x: i64, y: i64) {
        let b = self.bbox();
        self.translate(x - b.x1, y - b.y0);
    }

    /// Moves the fragment so that anchored node `v` lands on `(x, y)`.
    pub fn move_node_to(&mut self, v: NodeId, x: i64, y: i64) {
        let (cx, cy) = self.at(v);
        self.translate(x - cx, y - cy);
    }

    /// Left-right reflection inside the bounding box.
    pub fn mirror_x(&mut self) {
        let b = self.bbox();
        self.compose(Iso { m: [[-1, 0], [0, 1]], t: [b.x0 + b.x1, 0] });
    }

    /// Upside-down reflection inside the bounding box.
    pub fn mirror_y(&mut self) {
        let b = self.bbox();
        self.compose(Iso { m: [[1, 0], [0, -1]], t: [0, b.y0 + b.y1] });
    }

    /// Swaps x and y; the top-left corner stays the top-left corner.
    pub fn transpose(&mut self) {
        let b = self.bbox();
        self.compose(Iso { m: [[0, 1], [1, 0]], t: [0, 0] });
        // keep the box where it was anchored at its top-left
        let nb = self.bbox();
        self.translate(b.x0 - nb.x0, b.y0 - nb.y0);
    }

    /// Absorbs all points and anchors of `other` (already in world coords).
    pub fn merge(&mut self, mut other: Frag) {
        if other.pts.len() > self.pts.len() {
            std::mem::swap(self, &mut other);
            // anchors of both are kept; order is irrelevant
        }
        if other.pts.is_empty() {
            self.anchors.append(&mut other.anchors);
            return;
        }
        let back = self.tf.inverse();
        let fwd = other.tf.then(&back);
        self.pts.extend(other.pts.iter().map(|&(v, x, y)| {
            let (a, b) = fwd.apply(x, y);
            (v, a, b)
        }));
        self.bbox = match (self.bbox, other.bbox) {
            (Some(a), Some(b)) => Some(a.union(&b)),
            (a, b) => a.or(b),
        };
        self.anchors.append(&mut other.anchors);
    }

    /// World coordinates of every placed node.
    pub fn points(&self) -> impl Iterator<Item = (NodeId, i64, i64)> + '_ {
        self.pts.iter().map(move |&(v, x, y)| {
            let (a, b) = self.tf.apply(x, y);
            (v, a, b)
        })
    }

    /// Applies an arbitrary map to every point eagerly (used for the affine
    /// placements); resets the pending transform.
    pub fn map_points(&mut self, f: impl Fn(i64, i64) -> (i64, i64)) {
        let tf = self.tf;
        let mut bbox: Option<BBox> = None;
        for p in &mut self.pts {
            let (wx, wy) = tf.apply(p.1, p.2);
            let (x, y) = f(wx, wy);
            p.1 = x;
            p.2 = y;
            let b = BBox { x0: x, y0: y, x1: x, y1: y };
            bbox = Some(bbox.map_or(b, |o| o.union(&b)));
        }
        for a in &mut self.anchors {
            let (x, y) = f(a.1, a.2);
            a.1 = x;
            a.2 = y;
        }
        self.tf = Iso::ID;
        self.bbox = bbox;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(f: &Frag) -> Vec<(NodeId, i64, i64)> {
        let mut v: Vec<_> = f.points().collect();
        v.sort();
        v
    }

    #[test]
    fn transforms_compose() {
        let mut f = Frag::new();
        f.put_anchor(0, 0, 0);
        f.put(1, 3, 1);
        f.put(2, 1, 2);
        f.transpose();
        assert_eq!(sorted(&f), vec![(0, 0, 0), (1, 1, 3), (2, 2, 1)]);
        f.mirror_x();
        assert_eq!(f.at(0), (2, 0));
        f.mirror_y();
        assert_eq!(f.at(0), (2, 3));
        f.translate(5, -1);
        assert_eq!(sorted(&f), vec![(0, 7, 2), (1, 6, -1), (2, 5, 1)]);
        assert_eq!(f.bbox(), BBox { x0: 5, y0: -1, x1: 7, y1: 2 });
    }

    #[test]
    fn merge_keeps_world_coords() {
        let mut a = Frag::new();
        a.put(0, 0, 0);
        a.mirror_x();
        a.translate(2, 2);
        let mut b = Frag::new();
        for i in 1..5 {
            b.put(i, i as i64, 0);
        }
        b.transpose();
        b.put(9, -1, -1);
        let expect: Vec<_> = {
            let mut v: Vec<_> = a.points().chain(b.points()).collect();
            v.sort();
            v
        };
        a.merge(b);
        assert_eq!(sorted(&a), expect);
        a.put(10, 100, 100);
        assert!(sorted(&a).contains(&(10, 100, 100)));
        assert_eq!(a.bbox().x1, 100);
    }
}
