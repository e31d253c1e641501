//! Order-preserving placements of the chain machinery.
//!
//! Every drawing is built for a tree whose children may be swapped at every
//! node (`flip`); reflecting a drawing made with the opposite `flip` gives a
//! valid drawing of the original tree. Rotations keep all orders.
//!
//! Contracts (screen coordinates, y down):
//! * row drawing and chain drawing: the first node is alone in the leftmost
//!   column; a chain with an excluded bottom node also has its last node alone
//!   in the rightmost column, with order correct for any next node to its right.
//! * tradeoff drawing: the root is in the leftmost column with nothing
//!   directly above it and all of its neighbours at angles in `[270°, 450°)`.

use super::{Chain, ChainAlgo, ChainDecomposition, ChainDrawing, Piece};
use crate::error::{Error, Result};
use crate::frag::Frag;
use crate::tree::{NodeId, Tree};

#[derive(Debug, Clone, Copy)]
struct Entry {
    above: i64,
    below: i64,
    next: Option<NodeId>,
    idx: u32,
}

/// Pareto fronts of the row drawings of every subtree: the heavy row may
/// continue through either child, the other child hangs on its forced side.
struct Ctx<'t> {
    t: &'t Tree,
    fronts: Vec<Vec<Entry>>,
    best: Vec<u32>,
}

fn rot_cw(f: &mut Frag) {
    f.transpose();
    f.mirror_x();
}

fn rot_ccw(f: &mut Frag) {
    f.transpose();
    f.mirror_y();
}

fn rot_half(f: &mut Frag) {
    f.mirror_x();
    f.mirror_y();
}

fn prune(mut es: Vec<Entry>) -> Vec<Entry> {
    es.sort_by_key(|e| (e.above, e.below));
    let mut out: Vec<Entry> = Vec::with_capacity(es.len());
    for e in es {
        if out.last().is_none_or(|l| e.below < l.below) {
            out.push(e);
        }
    }
    out
}

impl<'t> Ctx<'t> {
    fn new(t: &'t Tree) -> Result<Ctx<'t>> {
        for v in 0..t.len() {
            t.binary_children(v)?;
        }
        let n = t.len();
        let mut fronts: Vec<Vec<Entry>> = vec![Vec::new(); n];
        let mut best = vec![0u32; n];
        let mut height = vec![0i64; n];
        for &u in t.preorder().iter().rev() {
            let cs = t.children(u);
            let front = if cs.is_empty() {
                vec![Entry { above: 0, below: 0, next: None, idx: 0 }]
            } else {
                let mut es = Vec::new();
                for &p in cs {
                    let hang = cs.iter().copied().find(|&c| c != p);
                    for (i, e) in fronts[p].iter().enumerate() {
                        let (mut a, mut b) = (e.above, e.below);
                        if let Some(h) = hang {
                            if t.binary_children(u)?.0 == Some(h) {
                                b = b.max(height[h]);
                            } else {
                                a = a.max(height[h]);
                            }
                        }
                        es.push(Entry { above: a, below: b, next: Some(p), idx: i as u32 });
                    }
                }
                prune(es)
            };
            let (bi, be) = front.iter().enumerate().min_by_key(|(_, e)| e.above + e.below).expect("nonempty front");
            best[u] = bi as u32;
            height[u] = be.above + be.below + 1;
            fronts[u] = front;
        }
        Ok(Ctx { t, fronts, best })
    }

    /// Whether `c` is drawn below its parent `u`: the left child of the
    /// (possibly swapped) tree hangs below a row running to the right.
    fn below(&self, u: NodeId, c: NodeId, flip: bool) -> bool {
        let left = self.t.binary_children(u).map(|p| p.0 == Some(c)).unwrap_or(false);
        left != flip
    }

    fn hang_of(&self, u: NodeId, next: Option<NodeId>) -> Option<NodeId> {
        self.t.children(u).iter().copied().find(|&c| Some(c) != next)
    }

    /// Row drawing of the subtree at `u`, root anchored.
    fn row_frag(&self, u: NodeId, flip: bool) -> Frag {
        let mut items = Vec::new();
        let (mut v, mut idx) = (u, self.best[u] as usize);
        loop {
            let e = self.fronts[v][idx];
            let hang = self.hang_of(v, e.next).map(|h| (self.row_frag(h, flip), self.below(v, h, flip)));
            items.push((v, hang));
            match e.next {
                Some(p) => {
                    v = p;
                    idx = e.idx as usize;
                }
                None => break,
            }
        }
        row_layout(items, false)
    }

    fn mirrored_row(&self, u: NodeId, flip: bool) -> Frag {
        let mut f = self.row_frag(u, !flip);
        f.mirror_x();
        f
    }

    /// Whole subtree at `v` by the chain algorithm, root anchored.
    fn tree_frag(&self, v: NodeId, flip: bool, algo: &ChainAlgo) -> Result<Frag> {
        match algo.resolve(self.t.size(v)) {
            None => Ok(self.row_frag(v, flip)),
            Some((a, inner)) => self.improved(&Chain::whole(self.t, v), a, &inner, flip),
        }
    }

    /// Chain drawing with the first and last path nodes anchored.
    fn chain_frag(&self, ch: &Chain, algo: &ChainAlgo, flip: bool) -> Result<Frag> {
        let k = ch.path.len();
        if k == 1 && ch.bottom.is_some() && ch.hang(self.t, 0).is_some() {
            return Err(Error::Precondition("single-node chain with a hanging subtree".into()));
        }
        match algo.resolve(ch.size(self.t)) {
            None => {
                let items = (0..k)
                    .map(|i| {
                        let v = ch.path[i];
                        let hang = ch.hang(self.t, i).map(|h| {
                            let f = if i + 1 == k && ch.bottom.is_some() {
                                self.mirrored_row(h, flip)
                            } else {
                                self.row_frag(h, flip)
                            };
                            (f, self.below(v, h, flip))
                        });
                        (v, hang)
                    })
                    .collect();
                Ok(row_layout(items, ch.bottom.is_some()))
            }
            Some((a, inner)) => self.improved(ch, a, &inner, flip),
        }
    }

    fn improved(&self, ch: &Chain, a: usize, inner: &ChainAlgo, flip: bool) -> Result<Frag> {
        let t = self.t;
        let k = ch.path.len();
        let single = |i: usize| -> Result<OpItem> {
            let v = ch.path[i];
            let hang = match ch.hang(t, i) {
                Some(c) => {
                    let f = if t.size(c) + 1 >= a {
                        self.tradeoff(c, flip, a, inner)?
                    } else {
                        self.tree_frag(c, flip, inner)?
                    };
                    Some((c, f, self.below(v, c, flip)))
                }
                None => None,
            };
            Ok(OpItem::Single { v, hang })
        };
        let mut pieces = Vec::new();
        if k < 4 {
            pieces.extend((0..k).map(Piece::Single));
        } else {
            let weights: Vec<usize> = (0..k).map(|i| 1 + ch.hang(t, i).map_or(0, |c| t.size(c))).collect();
            let dec = ChainDecomposition::new(&weights, a);
            for (j, &p) in dec.pieces.iter().enumerate() {
                match p {
                    Piece::Block(0, l) if j == 0 => {
                        pieces.push(Piece::Single(0));
                        pieces.push(if l > 1 { Piece::Block(1, l) } else { Piece::Single(1) });
                    }
                    p => pieces.push(p),
                }
            }
            pieces.extend(dec.trailing.iter().map(|&i| Piece::Single(i)));
        }
        let mut items = Vec::with_capacity(pieces.len());
        for p in pieces {
            items.push(match p {
                Piece::Single(i) => single(i)?,
                Piece::Block(i, l) => {
                    let sub = Chain { path: ch.path[i..=l].to_vec(), bottom: Some(ch.path[l + 1]) };
                    let frag = self.chain_frag(&sub, inner, flip)?;
                    OpItem::Block { frag, entry: ch.path[i], exit: ch.path[l] }
                }
            });
        }
        Ok(assemble_line(items, ch.path[0], *ch.path.last().expect("nonempty chain")))
    }

    /// Tradeoff drawing of the subtree at `v`, root anchored.
    fn tradeoff(&self, v: NodeId, flip: bool, a: usize, algo: &ChainAlgo) -> Result<Frag> {
        let t = self.t;
        let mut levels: Vec<Level> = Vec::new();
        let mut cur = v;
        let mut fl = flip;
        let tail = loop {
            if t.size(cur) <= a {
                break Some(self.tree_frag(cur, fl, algo)?);
            }
            let info = t.heavy_path_and_centroid_at(cur, a)?;
            let (path, k) = (&info.path, info.centroid_index);
            let (mut c, last, kk) = if k >= 2 {
                let ch = Chain { path: path[..k].to_vec(), bottom: Some(path[k]) };
                (self.chain_frag(&ch, algo, fl)?, path[k - 1], k)
            } else {
                let mut c = Frag::new();
                c.put_anchor(cur, 0, 0);
                if let Some(h) = self.hang_of(cur, Some(path[1])) {
                    let mut f = if k == 1 { self.tree_frag(h, fl, algo)? } else { self.tradeoff(h, fl, a, algo)? };
                    f.drop_anchors();
                    let top = if self.below(cur, h, fl) { 1 } else { -f.height() };
                    f.move_to(1, top);
                    c.merge(f);
                }
                (c, cur, 1)
            };
            let b = c.bbox();
            c.translate(-b.x0, 0);
            let vk = path[kk];
            let heavy = path.get(kk + 1).copied();
            let sib = self.hang_of(vk, heavy).map(|s| -> Result<(Frag, bool)> {
                let left = self.below(vk, s, fl);
                let mut f = self.tradeoff(s, if left { !fl } else { fl }, a, algo)?;
                f.drop_anchors();
                if left {
                    f.mirror_x();
                } else {
                    rot_half(&mut f);
                }
                Ok((f, left))
            });
            let sib = sib.transpose()?;
            levels.push(Level { c, last, vk, sib });
            match heavy {
                Some(h) => {
                    cur = h;
                    fl = !fl;
                }
                None => break None,
            }
        };
        let mut d = tail;
        for lv in levels.into_iter().rev() {
            let Level { c, last, vk, sib } = lv;
            let cb = c.bbox();
            let (_, ly) = c.at(last);
            let ws = sib.as_ref().map_or(0, |s| s.0.width());
            let wh = d.as_ref().map_or(0, |f| f.width());
            let x = cb.width().max(ws).max(wh - 1);
            let mut out = c;
            out.put(vk, x, ly);
            let mut floor = cb.y1;
            if let Some((mut f, left)) = sib {
                if left {
                    f.move_top_right_to(x - 1, cb.y1 + 1);
                    floor = f.bbox().y1;
                } else {
                    let h = f.height();
                    f.move_top_right_to(x, cb.y0 - h);
                }
                out.merge(f);
            }
            if let Some(mut f) = d {
                f.drop_anchors();
                f.mirror_x();
                f.move_top_right_to(x, floor + 1);
                out.merge(f);
            }
            d = Some(out);
        }
        Ok(d.expect("at least one level or a tail"))
    }
}

struct Level {
    c: Frag,
    last: NodeId,
    vk: NodeId,
    sib: Option<(Frag, bool)>,
}

/// Path nodes along row 0 left to right; each hanging drawing (root alone
/// in its leftmost column) goes right after its node, below or above the
/// row. With `exit_right` the last hanging drawing must have its root alone
/// in its rightmost column and is placed before its node.
fn row_layout(items: Vec<(NodeId, Option<(Frag, bool)>)>, exit_right: bool) -> Frag {
    let k = items.len();
    let mut out = Frag::new();
    let mut x = 0;
    let first = items[0].0;
    let mut last = first;
    for (i, (v, hang)) in items.into_iter().enumerate() {
        last = v;
        let Some((mut f, below)) = hang else {
            out.put(v, x, 0);
            x += 1;
            continue;
        };
        f.drop_anchors();
        let (w, h) = (f.width(), f.height());
        let top = if below { 1 } else { -h };
        if exit_right && i + 1 == k {
            f.move_to(x, top);
            out.put(v, x + w, 0);
            x += w + 1;
        } else {
            out.put(v, x, 0);
            f.move_to(x + 1, top);
            x += w + 1;
        }
        out.merge(f);
    }
    out.anchor(first);
    out.anchor(last);
    out
}

enum OpItem {
    /// Node with the hanging subtree's root id, its tradeoff-contract drawing
    /// and whether it hangs below.
    Single { v: NodeId, hang: Option<(NodeId, Frag, bool)> },
    /// Chain drawing of a block with its entry and exit nodes anchored.
    Block { frag: Frag, entry: NodeId, exit: NodeId },
}

/// Pieces left to right, every connection a horizontal segment on the
/// current line. Hanging drawings are rotated so their root faces the line;
/// blocks are rotated to run down or up, whichever brings the line back
/// toward row 0.
fn assemble_line(items: Vec<OpItem>, first: NodeId, last: NodeId) -> Frag {
    let np = items.len();
    let mut out = Frag::new();
    let mut x = 0;
    let mut line = 0;
    for (i, it) in items.into_iter().enumerate() {
        match it {
            OpItem::Single { v, hang: None } => {
                out.put(v, x, line);
                x += 1;
            }
            OpItem::Single { v, hang: Some((c, mut f, below)) } => {
                if below {
                    rot_cw(&mut f);
                } else {
                    rot_ccw(&mut f);
                }
                let b = f.bbox();
                let (w, h) = (b.width(), b.height());
                let r = f.at(c).0 - b.x0;
                let top = if below { line + 1 } else { line - h };
                let (left, vx) = if i == 0 {
                    (x + 1, x)
                } else if i + 1 == np {
                    (x, x + w)
                } else {
                    (x, x + r)
                };
                f.drop_anchors();
                f.move_to(left, top);
                out.put(v, vx, line);
                out.merge(f);
                x = (left + w).max(vx + 1);
            }
            OpItem::Block { mut frag, entry, exit } => {
                if line <= 0 {
                    rot_cw(&mut frag);
                } else {
                    rot_ccw(&mut frag);
                }
                let b = frag.bbox();
                let (_, ey) = frag.at(entry);
                frag.translate(x - b.x0, line - ey);
                line = frag.at(exit).1;
                x += b.width();
                frag.drop_anchors();
                out.merge(frag);
            }
        }
    }
    out.anchor(first);
    out.anchor(last);
    out
}

pub(super) fn chain_drawing(t: &Tree, ch: &Chain, algo: &ChainAlgo) -> Result<ChainDrawing> {
    let ctx = Ctx::new(t)?;
    let f = ctx.chain_frag(ch, algo, false)?;
    Ok(ChainDrawing::from_frag(&f, ch.path[0], *ch.path.last().expect("nonempty chain")))
}

pub(super) fn tree_frag(t: &Tree, v: NodeId, algo: &ChainAlgo) -> Result<Frag> {
    Ctx::new(t)?.tree_frag(v, false, algo)
}

pub(super) fn tradeoff_frag(t: &Tree, v: NodeId, a: usize, algo: &ChainAlgo) -> Result<Frag> {
    Ctx::new(t)?.tradeoff(v, false, a, algo)
}
