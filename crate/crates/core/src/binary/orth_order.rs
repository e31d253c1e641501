//! Orthogonal order-preserving drawings: width about `2^sqrt(2 log n)·sqrt(log n)`,
//! at least one node in every row.
//!
//! Contracts, screen coordinates (y down), parity `f` swapping all children:
//! * `E`: nothing lies right of the root in its row, and the order at the root
//!   holds for a parent edge arriving horizontally from the right.
//! * `V`: the root is in the rightmost column with nothing above it, and the
//!   order holds for a parent edge arriving from above. Such a root has its
//!   children to the left and below only, so every `V` drawing is an `E` drawing.

use crate::frag::Frag;
use crate::tree::{NodeId, Tree};

struct Ctx<'t> {
    t: &'t Tree,
}

/// `n / 2^sqrt(2 log2 n)`, at least 1.
pub(super) fn skew(n: usize) -> usize {
    let lg = (n.max(2) as f64).log2();
    let a = (n as f64 / (2.0 * lg).sqrt().exp2()).floor() as usize;
    a.clamp(1, n.max(1))
}

/// Hanging drawing with its root's position.
struct Hang {
    frag: Frag,
    rx: i64,
    ry: i64,
}

impl Hang {
    fn new(mut frag: Frag, root: NodeId) -> Hang {
        let (rx, ry) = frag.at(root);
        frag.drop_anchors();
        Hang { frag, rx, ry }
    }

    fn above(&self) -> i64 {
        self.ry - self.frag.bbox().y0
    }

    fn below(&self) -> i64 {
        self.frag.bbox().y1 - self.ry
    }

    fn width(&self) -> i64 {
        self.frag.width()
    }

    /// Puts the root on row `y` with the box ending at column `x`.
    fn right_at(mut self, x: i64, y: i64) -> Frag {
        let b = self.frag.bbox();
        self.frag.translate(x - b.x1, y - self.ry);
        self.frag
    }

    /// Puts the root on row `y` with the box starting at column `x`.
    fn left_at(mut self, x: i64, y: i64) -> Frag {
        let b = self.frag.bbox();
        self.frag.translate(x - b.x0, y - self.ry);
        self.frag
    }

    /// Puts the root in column `x` with the box starting at row `y`.
    fn top_at(mut self, x: i64, y: i64) -> Frag {
        let b = self.frag.bbox();
        self.frag.translate(x - self.rx, y - b.y0);
        self.frag
    }

    /// Puts the root in column `x` with the box ending at row `y`.
    fn bottom_at(mut self, x: i64, y: i64) -> Frag {
        let b = self.frag.bbox();
        self.frag.translate(x - self.rx, y - b.y1);
        self.frag
    }
}

/// Rows stacked top to bottom, one node of a vertical path per band.
struct Bands {
    out: Frag,
    top: i64,
    wl: i64,
    wr: i64,
}

impl Bands {
    fn new() -> Bands {
        Bands { out: Frag::new(), top: 0, wl: 0, wr: 0 }
    }

    /// Node `v` in column `x`, with an optional drawing hanging to its left
    /// (`E` contract) or right (mirrored `E` contract). Returns `v`'s row.
    fn band(&mut self, v: NodeId, x: i64, hang: Option<(Hang, bool)>) -> i64 {
        match hang {
            None => {
                let y = self.top;
                self.out.put(v, x, y);
                self.top += 1;
                y
            }
            Some((h, left)) => {
                let y = self.top + h.above();
                self.top = y + h.below() + 1;
                self.out.put(v, x, y);
                let f = if left {
                    self.wl = self.wl.max(h.width());
                    h.right_at(x - 1, y)
                } else {
                    self.wr = self.wr.max(h.width());
                    h.left_at(x + 1, y)
                };
                self.out.merge(f);
                y
            }
        }
    }

    /// A whole drawing as its own band.
    fn block(&mut self, f: Frag) {
        self.top += f.height();
        self.out.merge(f);
    }
}

impl<'t> Ctx<'t> {
    fn kids(&self, u: NodeId, f: bool) -> (Option<NodeId>, Option<NodeId>) {
        let (l, r) = self.t.binary_children(u).expect("sides validated");
        if f {
            (r, l)
        } else {
            (l, r)
        }
    }

    fn is_left(&self, u: NodeId, c: NodeId, f: bool) -> bool {
        self.kids(u, f).0 == Some(c)
    }

    fn other(&self, u: NodeId, c: NodeId) -> Option<NodeId> {
        self.t.children(u).iter().copied().find(|&x| x != c)
    }

    /// `V` drawing: the rightmost path runs down one column, every left child
    /// hangs to its left.
    fn v_frag(&self, u: NodeId, f: bool) -> Frag {
        let mut b = Bands::new();
        let mut cur = Some(u);
        while let Some(p) = cur {
            let (l, r) = self.kids(p, f);
            let hang = l.map(|l| (Hang::new(self.e_frag(l, f), l), true));
            b.band(p, 0, hang);
            cur = r;
        }
        let mut out = b.out;
        out.anchor(u);
        out
    }

    fn e_hang(&self, v: NodeId, f: bool, left: bool) -> (Hang, bool) {
        let frag = if left {
            self.e_frag(v, f)
        } else {
            let mut g = self.e_frag(v, !f);
            g.mirror_x();
            g
        };
        (Hang::new(frag, v), left)
    }

    /// `E` drawing.
    fn e_frag(&self, u: NodeId, f: bool) -> Frag {
        let t = self.t;
        let n = t.size(u);
        if n < 4 {
            return self.v_frag(u, f);
        }
        let info = t.heavy_path_and_centroid_at(u, skew(n)).expect("skew within range");
        let (path, k) = (&info.path, info.centroid_index);
        if self.is_left(path[0], path[1], f) {
            let mut g = self.e_frag(u, !f);
            g.mirror_y();
            return g;
        }
        let Some(j) = (2..=k).rev().find(|&i| self.is_left(path[i - 1], path[i], f)) else {
            return self.v_frag(u, f);
        };
        let (vj1, vj) = (path[j - 1], path[j]);
        let sj = self.other(vj1, vj);
        let mut b = Bands::new();
        // path nodes stacked in column 0; the hang goes to the left exactly
        // when the path continues through a right child
        let column = |b: &mut Bands, i: usize| -> i64 {
            let v = path[i];
            let left = !self.is_left(v, path[i + 1], f);
            b.band(v, 0, self.other(v, path[i + 1]).map(|h| self.e_hang(h, f, left)))
        };
        if j == 2 {
            column(&mut b, 0);
            let l = Hang::new(self.v_frag(vj, f), vj);
            let y = b.top + l.above();
            b.out.put(vj1, 0, y);
            b.block(l.right_at(-1, y));
            if let Some(s) = sj {
                let s = Hang::new(self.v_frag(s, f), s);
                let top = b.out.bbox().y1 + 1;
                b.block(s.top_at(0, top));
            }
        } else if !self.is_left(path[j - 2], vj1, f) {
            for i in 0..j - 2 {
                column(&mut b, i);
            }
            let s = sj.map(|s| {
                let mut g = self.v_frag(s, !f);
                g.mirror_y();
                Hang::new(g, s)
            });
            let c = b.wr.max(s.as_ref().map_or(0, |s| s.width())).max(1);
            if let Some(s) = s {
                let bottom = b.top + s.frag.height() - 1;
                b.block(s.bottom_at(c, bottom));
            }
            let v = path[j - 2];
            let hang = self.other(v, vj1).map(|h| self.e_hang(h, f, true));
            let y = b.band(v, 0, hang);
            b.out.put(vj1, c, y);
            let l = Hang::new(self.v_frag(vj, f), vj);
            let top = b.out.bbox().y1 + 1;
            b.out.merge(l.top_at(c, top));
        } else {
            let mut y = 0;
            for i in 0..=j - 2 {
                y = column(&mut b, i);
            }
            let c = -b.wl - 1;
            b.out.put(vj1, c, y);
            let mut g = self.v_frag(vj, f);
            g.mirror_x();
            g.mirror_y();
            let l = Hang::new(g, vj);
            let top = b.out.bbox().y0;
            b.out.merge(l.bottom_at(c, top - 1));
            if let Some(s) = sj {
                let mut g = self.v_frag(s, !f);
                g.mirror_x();
                let s = Hang::new(g, s);
                let bottom = b.out.bbox().y1;
                b.out.merge(s.top_at(c, bottom + 1));
            }
        }
        let mut out = b.out;
        out.anchor(u);
        out
    }
}

pub(super) fn frag(t: &Tree) -> Frag {
    Ctx { t }.e_frag(t.root(), false)
}
