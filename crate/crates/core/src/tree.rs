//! Rooted ordered trees: parsing, serialization, generation and the
//! heavy-path / skewed-centroid decomposition used by every drawer.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Which slot an only child occupies in the binary dialect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A rooted ordered tree with dense pre-order ids (root = 0).
#[derive(Clone, PartialEq, Eq)]
pub struct Tree {
    parent: Vec<Option<NodeId>>,
    children: Vec<Vec<NodeId>>,
    only_side: Vec<Option<Side>>,
    sizes: Vec<usize>,
}

impl Tree {
    /// Builds a tree from per-node child lists. Node 0 is the root; ids need
    /// not be in pre-order but every node must be reachable exactly once.
    pub fn from_children(children: Vec<Vec<NodeId>>) -> Result<Tree> {
        let n = children.len();
        Self::from_parts(children, vec![None; n])
    }

    pub(crate) fn from_parts(children: Vec<Vec<NodeId>>, only_side: Vec<Option<Side>>) -> Result<Tree> {
        let n = children.len();
        if n == 0 {
            return Err(Error::InvalidTree("empty tree".into()));
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        for (v, cs) in children.iter().enumerate() {
            for &c in cs {
                if c >= n || c == 0 || seen[c] {
                    return Err(Error::InvalidTree(format!("bad child id {c} under {v}")));
                }
                seen[c] = true;
                parent[c] = Some(v);
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidTree("unreachable node".into()));
        }
        let mut t = Tree { parent, children, only_side, sizes: vec![0; n] };
        // reachability from the root, and sizes in reverse pre-order
        let order = t.preorder();
        if order.len() != n {
            return Err(Error::InvalidTree("cycle or disconnected node".into()));
        }
        for &v in order.iter().rev() {
            t.sizes[v] = 1 + t.children[v].iter().map(|&c| t.sizes[c]).sum::<usize>();
        }
        for v in 0..n {
            if t.children[v].len() != 1 {
                t.only_side[v] = None;
            }
        }
        Ok(t)
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent[v]
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[v]
    }

    /// Cached size of the subtree rooted at `v`.
    pub fn size(&self, v: NodeId) -> usize {
        self.sizes[v]
    }

    pub fn max_children(&self) -> usize {
        self.children.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_binary(&self) -> bool {
        self.max_children() <= 2
    }

    /// Explicit side of an only child, when the binary dialect recorded one.
    pub fn only_child_side(&self, v: NodeId) -> Option<Side> {
        self.only_side[v]
    }

    /// Left and right child of `v` in the binary dialect. Two children are
    /// (left, right) in child order; an only child needs an explicit side.
    pub fn binary_children(&self, v: NodeId) -> Result<(Option<NodeId>, Option<NodeId>)> {
        match self.children[v].as_slice() {
            [] => Ok((None, None)),
            [c] => match self.only_side[v] {
                Some(Side::Left) => Ok((Some(*c), None)),
                Some(Side::Right) => Ok((None, Some(*c))),
                None => Err(Error::MissingSide(v)),
            },
            [l, r] => Ok((Some(*l), Some(*r))),
            _ => Err(Error::NotBinary(v)),
        }
    }

    /// Side of `v` relative to its parent (None for the root).
    pub fn side_of(&self, v: NodeId) -> Result<Option<Side>> {
        let Some(p) = self.parent[v] else { return Ok(None) };
        let (l, _) = self.binary_children(p)?;
        Ok(Some(if l == Some(v) { Side::Left } else { Side::Right }))
    }

    /// Copy of the tree where every only child without a recorded side is
    /// marked as a left child.
    pub fn with_default_sides(&self) -> Tree {
        let mut t = self.clone();
        for v in 0..t.len() {
            if t.children[v].len() == 1 && t.only_side[v].is_none() {
                t.only_side[v] = Some(Side::Left);
            }
        }
        t
    }

    /// Copy with every node's children reversed (and only-child sides flipped).
    pub fn mirrored(&self) -> Tree {
        let children = self.children.iter().map(|cs| cs.iter().rev().copied().collect()).collect();
        let sides = self.only_side.iter().map(|s| s.map(Side::flip)).collect();
        Tree::from_parts(children, sides).expect("mirror of a valid tree")
    }

    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children[v].iter().rev());
        }
        out
    }

    /// Subtree sizes of every node, indexed by id.
    pub fn subtree_sizes(&self) -> Vec<usize> {
        self.sizes.clone()
    }

    /// Child of `v` with the largest subtree; ties go to the first in child order.
    pub fn heavy_child(&self, v: NodeId) -> Option<NodeId> {
        let mut best: Option<NodeId> = None;
        for &c in &self.children[v] {
            if best.is_none_or(|b| self.sizes[c] > self.sizes[b]) {
                best = Some(c);
            }
        }
        best
    }

    /// Heavy path from `v` down to a leaf.
    pub fn heavy_path_from(&self, v: NodeId) -> Vec<NodeId> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(c) = self.heavy_child(cur) {
            path.push(c);
            cur = c;
        }
        path
    }

    /// Heavy path of the subtree at `v` together with its `a`-skewed centroid.
    pub fn heavy_path_and_centroid_at(&self, v: NodeId, a: usize) -> Result<HeavyPathInfo> {
        let n = self.sizes[v];
        if a == 0 || a > n {
            return Err(Error::ParamOutOfRange(format!("A={a} must be in 1..={n}")));
        }
        let path = self.heavy_path_from(v);
        let k = path.iter().rposition(|&u| self.sizes[u] > n - a).expect("root exceeds n-A");
        Ok(HeavyPathInfo { path, centroid_index: k })
    }

    pub fn heavy_path_and_centroid(&self, a: usize) -> Result<HeavyPathInfo> {
        self.heavy_path_and_centroid_at(0, a)
    }

    /// Whether `d` lies in the subtree of `a` (inclusive).
    pub fn is_descendant(&self, d: NodeId, a: NodeId) -> bool {
        let mut cur = Some(d);
        while let Some(u) = cur {
            if u == a {
                return true;
            }
            cur = self.parent[u];
        }
        false
    }

    pub fn chain(&self, top: NodeId, bottom: NodeId) -> Result<ChainRef> {
        if top == bottom || !self.is_descendant(bottom, top) {
            return Err(Error::InvalidChain { top, bottom });
        }
        Ok(ChainRef { top, bottom })
    }

    /// Parenthesized serialization; the binary dialect marker is emitted for
    /// only children with a recorded side.
    pub fn serialize(&self) -> String {
        let mut s = String::with_capacity(2 * self.len());
        // iterative to cope with deep paths
        enum Tok {
            Open(NodeId),
            Close,
            Comma,
        }
        let mut stack = vec![Tok::Open(0)];
        while let Some(t) = stack.pop() {
            match t {
                Tok::Close => s.push(')'),
                Tok::Comma => s.push(','),
                Tok::Open(v) => {
                    s.push('(');
                    stack.push(Tok::Close);
                    let cs = &self.children[v];
                    match (cs.len(), self.only_side[v]) {
                        (1, Some(Side::Left)) => {
                            stack.push(Tok::Comma);
                            stack.push(Tok::Open(cs[0]));
                        }
                        (1, Some(Side::Right)) => {
                            stack.push(Tok::Open(cs[0]));
                            stack.push(Tok::Comma);
                        }
                        _ => stack.extend(cs.iter().rev().map(|&c| Tok::Open(c))),
                    }
                }
            }
        }
        s
    }

    /// Parses the parenthesized format. Whitespace between tokens is ignored.
    pub fn parse(text: &str) -> Result<Tree> {
        struct Frame {
            id: NodeId,
            slots: Vec<Option<NodeId>>,
            commas: usize,
            cur_filled: bool,
        }
        let mut children: Vec<Vec<NodeId>> = Vec::new();
        let mut sides: Vec<Option<Side>> = Vec::new();
        let mut stack: Vec<Frame> = Vec::new();
        let mut done = false;
        for (off, ch) in text.char_indices() {
            if ch.is_whitespace() {
                continue;
            }
            if done {
                return Err(Error::Parse { offset: off, reason: "trailing characters after root".into() });
            }
            match ch {
                '(' => {
                    let id = children.len();
                    children.push(Vec::new());
                    sides.push(None);
                    if let Some(top) = stack.last_mut() {
                        if top.commas > 0 && top.cur_filled {
                            return Err(Error::Parse { offset: off, reason: "two children in one slot".into() });
                        }
                        top.slots.push(Some(id));
                        top.cur_filled = true;
                    }
                    stack.push(Frame { id, slots: Vec::new(), commas: 0, cur_filled: false });
                }
                ',' => {
                    let Some(top) = stack.last_mut() else {
                        return Err(Error::Parse { offset: off, reason: "comma outside a node".into() });
                    };
                    if top.commas == 0 && top.slots.len() > 1 {
                        return Err(Error::Parse { offset: off, reason: "comma after juxtaposed children".into() });
                    }
                    if !top.cur_filled {
                        top.slots.push(None);
                    }
                    top.commas += 1;
                    top.cur_filled = false;
                    if top.commas > 1 {
                        return Err(Error::Parse { offset: off, reason: "more than two binary slots".into() });
                    }
                }
                ')' => {
                    let Some(mut f) = stack.pop() else {
                        return Err(Error::Parse { offset: off, reason: "unbalanced ')'".into() });
                    };
                    if f.commas > 0 && !f.cur_filled {
                        f.slots.push(None);
                    }
                    if f.commas > 0 {
                        let filled: Vec<NodeId> = f.slots.iter().flatten().copied().collect();
                        if filled.len() == 1 {
                            sides[f.id] = Some(if f.slots[0].is_some() { Side::Left } else { Side::Right });
                        }
                        children[f.id] = filled;
                    } else {
                        children[f.id] = f.slots.iter().flatten().copied().collect();
                    }
                    if stack.is_empty() {
                        done = true;
                    }
                }
                _ => return Err(Error::Parse { offset: off, reason: format!("unexpected character {ch:?}") }),
            }
        }
        if !stack.is_empty() {
            return Err(Error::Parse { offset: text.len(), reason: "unbalanced '('".into() });
        }
        if children.is_empty() {
            return Err(Error::Parse { offset: 0, reason: "empty input".into() });
        }
        Tree::from_parts(children, sides)
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree({})", self.serialize())
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

impl FromStr for Tree {
    type Err = Error;
    fn from_str(s: &str) -> Result<Tree> {
        Tree::parse(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeavyPathInfo {
    pub path: Vec<NodeId>,
    pub centroid_index: usize,
}

impl HeavyPathInfo {
    pub fn centroid(&self) -> NodeId {
        self.path[self.centroid_index]
    }
}

/// Subtree at `top` minus the subtree at `bottom`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainRef {
    pub top: NodeId,
    pub bottom: NodeId,
}

impl ChainRef {
    pub fn size(&self, t: &Tree) -> usize {
        t.size(self.top) - t.size(self.bottom)
    }

    /// Path `top = v_0, ..., v_k = bottom`.
    pub fn path(&self, t: &Tree) -> Vec<NodeId> {
        let mut p = vec![self.bottom];
        let mut cur = self.bottom;
        while cur != self.top {
            cur = t.parent(cur).expect("bottom below top");
            p.push(cur);
        }
        p.reverse();
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeModel {
    Path,
    Star,
    Caterpillar,
    UniformAttachment,
    RandomBinary,
}

impl TreeModel {
    pub const ALL: [TreeModel; 5] = [
        TreeModel::Path,
        TreeModel::Star,
        TreeModel::Caterpillar,
        TreeModel::UniformAttachment,
        TreeModel::RandomBinary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TreeModel::Path => "path",
            TreeModel::Star => "star",
            TreeModel::Caterpillar => "caterpillar",
            TreeModel::UniformAttachment => "uniform-attachment",
            TreeModel::RandomBinary => "random-binary",
        }
    }
}

impl FromStr for TreeModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<TreeModel> {
        TreeModel::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::ParamOutOfRange(format!("unknown tree model {s:?}")))
    }
}

/// Relabels a parent-array tree into pre-order ids.
fn from_parent_list(parents: &[usize]) -> Tree {
    let n = parents.len() + 1;
    let mut children = vec![Vec::new(); n];
    for (i, &p) in parents.iter().enumerate() {
        children[p].push(i + 1);
    }
    relabel_preorder(&Tree::from_parts(children, vec![None; n]).expect("generated tree is valid"))
}

fn relabel_preorder(raw: &Tree) -> Tree {
    let n = raw.len();
    let order = raw.preorder();
    let mut id = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        id[old] = new;
    }
    let mut ch = vec![Vec::new(); n];
    let mut sd = vec![None; n];
    for old in 0..n {
        ch[id[old]] = raw.children(old).iter().map(|&c| id[c]).collect();
        sd[id[old]] = raw.only_child_side(old);
    }
    Tree::from_parts(ch, sd).expect("relabelled tree is valid")
}

/// Deterministic tree generator.
pub fn generate_tree(n: usize, model: TreeModel, seed: u64) -> Tree {
    assert!(n >= 1, "tree size must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (model as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let parents: Vec<usize> = match model {
        TreeModel::Path => (0..n - 1).collect(),
        TreeModel::Star => vec![0; n - 1],
        TreeModel::Caterpillar => {
            // spine of about half the nodes, legs hung uniformly on the spine
            let spine = n.div_ceil(2);
            let mut p: Vec<usize> = (0..spine - 1).collect();
            for _ in spine..n {
                p.push(rng.gen_range(0..spine));
            }
            p
        }
        TreeModel::UniformAttachment => (1..n).map(|i| rng.gen_range(0..i)).collect(),
        TreeModel::RandomBinary => return random_binary_from_slots(n, &mut rng),
    };
    from_parent_list(&parents)
}

/// Random binary tree where every node has a left and a right slot; the
/// side of each only child is recorded.
fn random_binary_from_slots(n: usize, rng: &mut ChaCha8Rng) -> Tree {
    let mut slots: Vec<[Option<usize>; 2]> = vec![[None, None]; n];
    let mut free: Vec<(usize, usize)> = vec![(0, 0), (0, 1)];
    for i in 1..n {
        let k = rng.gen_range(0..free.len());
        let (par, s) = free.swap_remove(k);
        slots[par][s] = Some(i);
        free.push((i, 0));
        free.push((i, 1));
    }
    let mut children = vec![Vec::new(); n];
    let mut sides = vec![None; n];
    for v in 0..n {
        match slots[v] {
            [Some(l), Some(r)] => children[v] = vec![l, r],
            [Some(l), None] => {
                children[v] = vec![l];
                sides[v] = Some(Side::Left);
            }
            [None, Some(r)] => {
                children[v] = vec![r];
                sides[v] = Some(Side::Right);
            }
            [None, None] => {}
        }
    }
    relabel_preorder(&Tree::from_parts(children, sides).expect("generated tree is valid"))
}
