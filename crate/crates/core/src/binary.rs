//! Drawers for binary trees built from chain algorithms.
//!
//! A chain from `v_0` to `v_k` is the subtree at `v_0` minus the subtree at
//! `v_k`. Layouts are assembled as [`Frag`]s in screen coordinates (y down).

use std::borrow::Cow;

use crate::drawing::GridDrawing;
use crate::error::{Error, Result};
use crate::frag::Frag;
use crate::geometry::GridPoint;
use crate::logs::{clog, iter_log, log_star};
use crate::tree::{ChainRef, NodeId, Tree};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dialect {
    Orthogonal,
    OrderPreserving,
}

/// A chain drawing algorithm: the base algorithm, an improvement of an
/// inner one with parameter `a`, or `level - 1` nested improvements whose
/// parameters are picked from the size of each chain they draw.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainAlgo {
    Base,
    Improved { a: usize, inner: Box<ChainAlgo> },
    Adaptive { level: usize },
}

impl ChainAlgo {
    pub fn improved(a: usize, inner: ChainAlgo) -> ChainAlgo {
        ChainAlgo::Improved { a: a.max(1), inner: Box::new(inner) }
    }

    pub fn level(&self) -> usize {
        match self {
            ChainAlgo::Base => 1,
            ChainAlgo::Improved { inner, .. } => 1 + inner.level(),
            ChainAlgo::Adaptive { level } => (*level).max(1),
        }
    }

    /// How a chain of size `m` is drawn: `None` for the base algorithm,
    /// otherwise the improvement parameter and the inner algorithm.
    fn resolve(&self, m: usize) -> Option<(usize, Cow<'_, ChainAlgo>)> {
        match self {
            ChainAlgo::Base => None,
            ChainAlgo::Improved { a, inner } => Some((*a, Cow::Borrowed(&**inner))),
            ChainAlgo::Adaptive { level } if *level <= 1 => None,
            ChainAlgo::Adaptive { level } => {
                Some((adaptive_a(*level, m), Cow::Owned(ChainAlgo::Adaptive { level: level - 1 })))
            }
        }
    }
}

/// Improvement parameter of adaptive level `j` on a chain of size `m`:
/// `ceil(log m · loglog m / log^(j) m)`, clamped to `1..=m`.
pub fn adaptive_a(j: usize, m: usize) -> usize {
    let (l1, l2) = (clog(m), iter_log(m, 2).max(1));
    (l1 * l2).div_ceil(iter_log(m, j).max(1)).clamp(1, m.max(1))
}

/// Chain drawing in y-up coordinates on `{1..W} x {1..H}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainDrawing {
    pub points: Vec<(NodeId, GridPoint)>,
    pub width: i64,
    pub height: i64,
    /// Position of `v_0`.
    pub anchor_top: GridPoint,
    /// Position of the parent of `v_k`.
    pub anchor_bottom: GridPoint,
}

impl ChainDrawing {
    fn from_frag(f: &Frag, top: NodeId, bottom: NodeId) -> ChainDrawing {
        let b = f.bbox();
        let points: Vec<(NodeId, GridPoint)> =
            f.points().map(|(v, x, y)| (v, GridPoint::new(x - b.x0 + 1, b.y1 - y + 1))).collect();
        let find = |u: NodeId| points.iter().find(|p| p.0 == u).expect("anchor placed").1;
        let (anchor_top, anchor_bottom) = (find(top), find(bottom));
        ChainDrawing { points, width: b.width(), height: b.height(), anchor_top, anchor_bottom }
    }
}

/// Partition of the path nodes `v_0 .. v_{k-4}` into singletons and maximal
/// blocks of total weight at most `a`, followed by three forced singletons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainDecomposition {
    pub pieces: Vec<Piece>,
    pub trailing: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Piece {
    Single(usize),
    /// Inclusive index range `i..=l` with `l > i`.
    Block(usize, usize),
}

impl ChainDecomposition {
    /// `weights[i]` is `n_i`, the size of the subtree hanging off `v_i` plus one.
    pub fn new(weights: &[usize], a: usize) -> ChainDecomposition {
        let k = weights.len();
        let head = k.saturating_sub(3);
        let mut pieces = Vec::new();
        let mut i = 0;
        while i < head {
            let mut l = i;
            let mut w = weights[i];
            while l + 1 < head && w + weights[l + 1] <= a {
                l += 1;
                w += weights[l];
            }
            pieces.push(if l > i { Piece::Block(i, l) } else { Piece::Single(i) });
            i = l + 1;
        }
        ChainDecomposition { pieces, trailing: (head..k).collect() }
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len() + self.trailing.len()
    }
}

// ---------------------------------------------------------------------------
// chains

/// Path `v_0 .. v_{k-1}` and the excluded node `v_k` (`None` for a chain
/// that runs to an artificial leaf below a leaf).
struct Chain {
    path: Vec<NodeId>,
    bottom: Option<NodeId>,
}

impl Chain {
    fn from_ref(t: &Tree, c: ChainRef) -> Chain {
        let mut path = c.path(t);
        let bottom = path.pop();
        Chain { path, bottom }
    }

    /// The whole subtree at `v`, viewed as a chain along its heavy path.
    fn whole(t: &Tree, v: NodeId) -> Chain {
        Chain { path: t.heavy_path_from(v), bottom: None }
    }

    /// Number of nodes of the chain.
    fn size(&self, t: &Tree) -> usize {
        t.size(self.path[0]) - self.bottom.map_or(0, |b| t.size(b))
    }

    fn next(&self, i: usize) -> Option<NodeId> {
        self.path.get(i + 1).copied().or(self.bottom)
    }

    /// Root of the subtree `T_i` hanging off `v_i`.
    fn hang(&self, t: &Tree, i: usize) -> Option<NodeId> {
        let next = self.next(i);
        t.children(self.path[i]).iter().copied().find(|&c| Some(c) != next)
    }
}

fn check_binary(t: &Tree) -> Result<()> {
    match (0..t.len()).find(|&v| t.children(v).len() > 2) {
        Some(v) => Err(Error::NotBinary(v)),
        None => Ok(()),
    }
}

/// Moves `f` so that the bottom-left corner of its box lands on `(x, y)`.
fn move_bottom_left_to(f: &mut Frag, x: i64, y: i64) {
    let b = f.bbox();
    f.translate(x - b.x0, y - b.y1);
}

fn flipped(mut f: Frag) -> Frag {
    f.mirror_y();
    f
}

// ---------------------------------------------------------------------------
// standard orthogonal drawing

/// Heavy path along row `oy`, light subtrees directly below their parent.
/// Returns the width used.
fn std_orth_place(t: &Tree, v: NodeId, ox: i64, oy: i64, out: &mut Frag) -> i64 {
    let mut x = ox;
    let mut u = v;
    loop {
        out.put(u, x, oy);
        let heavy = t.heavy_child(u);
        let light = t.children(u).iter().copied().find(|&c| Some(c) != heavy);
        let w = light.map_or(1, |c| std_orth_place(t, c, x, oy + 1, out));
        match heavy {
            Some(c) => {
                u = c;
                x += w;
            }
            None => return x + w - ox,
        }
    }
}

fn std_orth_frag(t: &Tree, v: NodeId) -> Frag {
    let mut f = Frag::new();
    std_orth_place(t, v, 0, 0, &mut f);
    f
}

/// Orthogonal drawing with `W <= n` and `H <= floor(log2 n) + 1`, root at
/// the top-left corner.
pub fn draw_standard_orthogonal(tree: &Tree) -> Result<GridDrawing> {
    check_binary(tree)?;
    GridDrawing::from_frag(tree, &std_orth_frag(tree, tree.root()))
}

// ---------------------------------------------------------------------------
// orthogonal assembly

enum Item {
    Single { v: NodeId, hang: Option<Frag> },
    /// Drawing of `v_i .. v_l` with `v_i` top-left and `v_l` top-right.
    Block { frag: Frag },
}

fn dims(f: &Option<Frag>) -> (i64, i64) {
    f.as_ref().map_or((0, 0), |f| (f.width(), f.height()))
}

/// Stacks the path vertically in column 0 with each hanging drawing to the
/// right of its node; the last one is flipped so the last node ends at the
/// bottom-left corner.
fn assemble_vertical(items: Vec<(NodeId, Option<Frag>)>) -> Result<Frag> {
    let k = items.len();
    let mut out = Frag::new();
    let mut y = 0;
    for (idx, (v, hang)) in items.into_iter().enumerate() {
        let (_, h) = dims(&hang);
        if idx + 1 < k {
            out.put(v, 0, y);
            if let Some(mut f) = hang {
                f.move_to(1, y);
                out.merge(f);
            }
            y += h.max(1);
        } else {
            if k == 1 && h > 1 {
                return Err(Error::Precondition("single-node chain with a tall hanging subtree".into()));
            }
            let yl = y + h.max(1) - 1;
            out.put(v, 0, yl);
            if let Some(f) = hang {
                let mut f = flipped(f);
                move_bottom_left_to(&mut f, 1, yl);
                out.merge(f);
            }
        }
    }
    Ok(out)
}

/// Top row of pieces running right, then a turn down at column `X` to the
/// bottom row where the last node sits at the bottom-left corner. The last
/// three items must be singletons.
fn assemble_u(mut items: Vec<Item>) -> Result<Frag> {
    let take = |it: Option<Item>| match it {
        Some(Item::Single { v, hang }) => Ok((v, hang)),
        _ => Err(Error::Internal("chain must end in three singletons".into())),
    };
    let (v1, t1) = take(items.pop())?;
    let (v2, t2) = take(items.pop())?;
    let (v3, t3) = take(items.pop())?;
    if items.is_empty() {
        return Err(Error::Internal("u-layout needs a top piece".into()));
    }
    let mut out = Frag::new();
    let mut x = 0;
    let mut maxrow = 0;
    for it in items {
        match it {
            Item::Single { v, hang } => {
                out.put(v, x, 0);
                let (w, h) = dims(&hang);
                if let Some(mut f) = hang {
                    f.move_to(x, 1);
                    out.merge(f);
                }
                maxrow = maxrow.max(h);
                x += w.max(1);
            }
            Item::Block { mut frag } => {
                let (w, h) = (frag.width(), frag.height());
                frag.move_to(x, 0);
                out.merge(frag);
                maxrow = maxrow.max(h - 1);
                x += w;
            }
        }
    }
    let (w1, h1) = dims(&t1);
    let (_, h2) = dims(&t2);
    let (_, h3) = dims(&t3);
    let cx = x.max(w1);
    let y = (maxrow + h1 + 1).max(h3 + h2 - 1).max(1);
    out.put(v3, cx, 0);
    if let Some(mut f) = t3 {
        f.move_to(cx + 1, 0);
        out.merge(f);
    }
    out.put(v2, cx, y);
    if let Some(f) = t2 {
        let mut f = flipped(f);
        move_bottom_left_to(&mut f, cx + 1, y);
        out.merge(f);
    }
    out.put(v1, 0, y);
    if let Some(f) = t1 {
        let mut f = flipped(f);
        move_bottom_left_to(&mut f, 0, y - 1);
        out.merge(f);
    }
    Ok(out)
}

fn assemble(items: Vec<Item>) -> Result<Frag> {
    if items.len() >= 4 {
        return assemble_u(items);
    }
    let singles = items
        .into_iter()
        .map(|it| match it {
            Item::Single { v, hang } => Ok((v, hang)),
            Item::Block { .. } => Err(Error::Internal("short chains hold singletons only".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    assemble_vertical(singles)
}

// ---------------------------------------------------------------------------
// chain algorithms

/// Orthogonal chain drawing: `v_0` at the top-left corner and `v_{k-1}` at
/// the bottom-left corner.
fn chain_frag(t: &Tree, ch: &Chain, algo: &ChainAlgo) -> Result<Frag> {
    match algo.resolve(ch.size(t)) {
        None => {
            let items = (0..ch.path.len())
                .map(|i| Item::Single { v: ch.path[i], hang: ch.hang(t, i).map(|c| std_orth_frag(t, c)) })
                .collect();
            assemble(items)
        }
        Some((a, inner)) => improved_frag(t, ch, a, &inner),
    }
}

/// The subtree at `v` drawn by a chain algorithm, root at the top-left.
fn tree_frag(t: &Tree, v: NodeId, algo: &ChainAlgo) -> Result<Frag> {
    chain_frag(t, &Chain::whole(t, v), algo)
}

/// `T_i` for the improved algorithm, transposed.
fn improved_hang(t: &Tree, c: NodeId, a: usize, inner: &ChainAlgo) -> Result<Frag> {
    let mut f = if t.size(c) + 1 >= a { tradeoff_frag(t, c, a, inner)? } else { tree_frag(t, c, inner)? };
    f.transpose();
    Ok(f)
}

fn improved_frag(t: &Tree, ch: &Chain, a: usize, inner: &ChainAlgo) -> Result<Frag> {
    let k = ch.path.len();
    let single = |i: usize| -> Result<Item> {
        let hang = ch.hang(t, i).map(|c| improved_hang(t, c, a, inner)).transpose()?;
        Ok(Item::Single { v: ch.path[i], hang })
    };
    if k < 4 {
        return assemble((0..k).map(single).collect::<Result<Vec<_>>>()?);
    }
    let weights: Vec<usize> = (0..k).map(|i| 1 + ch.hang(t, i).map_or(0, |c| t.size(c))).collect();
    let dec = ChainDecomposition::new(&weights, a);
    let mut items = Vec::with_capacity(dec.piece_count());
    for p in &dec.pieces {
        items.push(match *p {
            Piece::Single(i) => single(i)?,
            Piece::Block(i, l) => {
                let sub = Chain { path: ch.path[i..=l].to_vec(), bottom: Some(ch.path[l + 1]) };
                let mut frag = chain_frag(t, &sub, inner)?;
                frag.transpose();
                Item::Block { frag }
            }
        });
    }
    for &i in &dec.trailing {
        items.push(single(i)?);
    }
    assemble(items)
}

// ---------------------------------------------------------------------------
// general algorithm

/// Width-height tradeoff drawing of the subtree at `v`, root at the top-left.
fn tradeoff_frag(t: &Tree, v: NodeId, a: usize, algo: &ChainAlgo) -> Result<Frag> {
    let mut out = Frag::new();
    let mut cur = v;
    let mut y = 0;
    loop {
        let n = t.size(cur);
        if n <= a {
            let mut f = tree_frag(t, cur, algo)?;
            f.move_to(0, y);
            out.merge(f);
            return Ok(out);
        }
        let info = t.heavy_path_and_centroid_at(cur, a)?;
        let (path, k) = (&info.path, info.centroid_index);
        let yk = match k {
            0 => y,
            1 => {
                out.put(cur, 0, y);
                let sib = t.children(cur).iter().copied().find(|&c| c != path[1]);
                let h = match sib {
                    Some(c) => {
                        let mut f = tree_frag(t, c, algo)?;
                        f.move_to(1, y);
                        let h = f.height();
                        out.merge(f);
                        h
                    }
                    None => 1,
                };
                y + h
            }
            _ => {
                let ch = Chain { path: path[..k].to_vec(), bottom: Some(path[k]) };
                let mut f = chain_frag(t, &ch, algo)?;
                f.move_to(0, y);
                let h = f.height();
                out.merge(f);
                y + h
            }
        };
        let vk = path[k];
        out.put(vk, 0, yk);
        let Some(&heavy) = path.get(k + 1) else { return Ok(out) };
        y = yk + 1;
        if let Some(s) = t.children(vk).iter().copied().find(|&c| c != heavy) {
            let mut f = tradeoff_frag(t, s, a, algo)?;
            f.move_to(1, yk);
            y = yk + f.height();
            out.merge(f);
        }
        cur = heavy;
    }
}

// ---------------------------------------------------------------------------
// public drawers

fn chain_drawing(ch: &Chain, f: &Frag) -> ChainDrawing {
    ChainDrawing::from_frag(f, ch.path[0], *ch.path.last().expect("nonempty chain"))
}

/// Base chain algorithm: the hanging subtrees are drawn by the standard
/// orthogonal algorithm.
pub fn draw_chain_base(tree: &Tree, chain: ChainRef, dialect: Dialect) -> Result<ChainDrawing> {
    check_binary(tree)?;
    tree.chain(chain.top, chain.bottom)?;
    let ch = Chain::from_ref(tree, chain);
    match dialect {
        Dialect::Orthogonal => Ok(chain_drawing(&ch, &chain_frag(tree, &ch, &ChainAlgo::Base)?)),
        Dialect::OrderPreserving => op::chain_drawing(tree, &ch, &ChainAlgo::Base),
    }
}

/// Improved chain algorithm over `c0` with parameter `a`.
pub fn draw_chain_improved(
    tree: &Tree,
    chain: ChainRef,
    a: usize,
    c0: &ChainAlgo,
    dialect: Dialect,
) -> Result<ChainDrawing> {
    check_binary(tree)?;
    tree.chain(chain.top, chain.bottom)?;
    let n = chain.size(tree);
    if a == 0 || a > n {
        return Err(Error::ParamOutOfRange(format!("A={a} must be in 1..={n}")));
    }
    let ch = Chain::from_ref(tree, chain);
    let algo = ChainAlgo::improved(a, c0.clone());
    match dialect {
        Dialect::Orthogonal => Ok(chain_drawing(&ch, &chain_frag(tree, &ch, &algo)?)),
        Dialect::OrderPreserving => op::chain_drawing(tree, &ch, &algo),
    }
}

/// General algorithm: width about `W_0(a) + log n`, height about
/// `(n/a)·H_0(a)`, root on the left side at the top.
pub fn draw_binary_tradeoff(tree: &Tree, a: usize, c0: &ChainAlgo, dialect: Dialect) -> Result<GridDrawing> {
    check_binary(tree)?;
    let n = tree.len();
    if a == 0 || a > n {
        return Err(Error::ParamOutOfRange(format!("A={a} must be in 1..={n}")));
    }
    let f = match dialect {
        Dialect::Orthogonal => tradeoff_frag(tree, tree.root(), a, c0)?,
        Dialect::OrderPreserving => op::tradeoff_frag(tree, tree.root(), a, c0)?,
    };
    Ok(GridDrawing::from_frag(tree, &f)?.with_meta("A", a))
}

/// Nesting level used for a tree of size `n`: `max(2, log* n - 2)`.
pub fn default_level(n: usize) -> usize {
    log_star(n).saturating_sub(2).max(2)
}

/// Adaptive chain algorithm at the default level for `n`.
pub fn chain_algo_for(n: usize) -> ChainAlgo {
    ChainAlgo::Adaptive { level: default_level(n) }
}

/// The whole tree drawn as one chain down to an artificial leaf by `algo`.
pub fn draw_binary_with(tree: &Tree, algo: &ChainAlgo, dialect: Dialect) -> Result<GridDrawing> {
    check_binary(tree)?;
    let ch = Chain::whole(tree, tree.root());
    let f = match dialect {
        Dialect::Orthogonal => chain_frag(tree, &ch, algo)?,
        Dialect::OrderPreserving => op::tree_frag(tree, tree.root(), algo)?,
    };
    Ok(GridDrawing::from_frag(tree, &f)?.with_meta("levels", algo.level()))
}

fn whole_tree(tree: &Tree, dialect: Dialect) -> Result<GridDrawing> {
    draw_binary_with(tree, &chain_algo_for(tree.len()), dialect)
}

/// Orthogonal drawing with area `n·2^O(log* n)`.
pub fn draw_orthogonal_binary(tree: &Tree) -> Result<GridDrawing> {
    whole_tree(tree, Dialect::Orthogonal)
}

mod op;
mod orth_order;

/// Planar drawing keeping the left-right order of children, area
/// `n·2^O(log* n)`. Every only child must carry a side.
pub fn draw_order_preserving(tree: &Tree) -> Result<GridDrawing> {
    whole_tree(tree, Dialect::OrderPreserving)
}

/// Orthogonal drawing keeping the left-right order of children, with width
/// `O(2^sqrt(2 log n)·sqrt(log n))` and height at most `n`. A new edge may
/// enter the root horizontally from the right.
pub fn draw_orth_order(tree: &Tree) -> Result<GridDrawing> {
    check_binary(tree)?;
    for v in 0..tree.len() {
        tree.binary_children(v)?;
    }
    GridDrawing::from_frag(tree, &orth_order::frag(tree))
}
