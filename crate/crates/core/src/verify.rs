//! Exact certification of drawing properties.
//!
//! Planarity uses a sweep over vertices in lexicographic order with the
//! active edges kept in a treap; every adjacency created in the status is
//! tested with the exact pair classifier. [`planar_all_pairs`] is the
//! quadratic reference used in tests.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::drawing::GridDrawing;
use crate::error::{Error, Result};
use crate::geometry::{angle_cmp, ccw_between, orient, segments_cross, Crossing, GridPoint};
use crate::tree::{NodeId, Tree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Criteria {
    pub planar: bool,
    pub upward: bool,
    pub strictly_upward: bool,
    pub orthogonal: bool,
    pub order_preserving: bool,
}

impl Criteria {
    pub const PLANAR: Criteria =
        Criteria { planar: true, upward: false, strictly_upward: false, orthogonal: false, order_preserving: false };

    pub fn planar() -> Self {
        Self::PLANAR
    }
    pub fn upward(self) -> Self {
        Criteria { upward: true, ..self }
    }
    pub fn orthogonal(self) -> Self {
        Criteria { orthogonal: true, ..self }
    }
    pub fn order_preserving(self) -> Self {
        Criteria { order_preserving: true, ..self }
    }
    pub fn strictly_upward(self) -> Self {
        Criteria { strictly_upward: true, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Two edges given as (parent, child) pairs.
    EdgePair { e1: (NodeId, NodeId), e2: (NodeId, NodeId), reason: String },
    Edge { e: (NodeId, NodeId), reason: String },
    Node { v: NodeId, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub planar: bool,
    pub upward: bool,
    pub strictly_upward: bool,
    pub orthogonal: bool,
    pub order_preserving: bool,
    pub width: i64,
    pub height: i64,
    pub area: i128,
    pub first_violation: Option<Violation>,
}

impl VerifyReport {
    /// Whether every requested criterion holds.
    pub fn passes(&self, c: Criteria) -> bool {
        (!c.planar || self.planar)
            && (!c.upward || self.upward)
            && (!c.strictly_upward || self.strictly_upward)
            && (!c.orthogonal || self.orthogonal)
            && (!c.order_preserving || self.order_preserving)
    }

    /// Flat `key=value` block.
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "planar={}", self.planar);
        let _ = writeln!(s, "upward={}", self.upward);
        let _ = writeln!(s, "strictly_upward={}", self.strictly_upward);
        let _ = writeln!(s, "orthogonal={}", self.orthogonal);
        let _ = writeln!(s, "order_preserving={}", self.order_preserving);
        let _ = writeln!(s, "width={}", self.width);
        let _ = writeln!(s, "height={}", self.height);
        let _ = writeln!(s, "area={}", self.area);
        match &self.first_violation {
            None => {
                let _ = writeln!(s, "violation=none");
            }
            Some(v) => {
                let _ = writeln!(s, "violation={v:?}");
            }
        }
        s
    }
}

fn edge(tree: &Tree, v: NodeId) -> (NodeId, NodeId) {
    (tree.parent(v).expect("non-root"), v)
}

/// Verifies a drawing of `tree`. All flags are evaluated; the first
/// violation reported is the first failing requested criterion.
pub fn verify_drawing(tree: &Tree, d: &GridDrawing, criteria: Criteria) -> Result<VerifyReport> {
    let n = tree.len();
    if d.pos.len() != n {
        return Err(Error::Precondition(format!("drawing places {} of {n} nodes", d.pos.len())));
    }
    let mut seen = std::collections::HashMap::with_capacity(n);
    for (v, p) in d.pos.iter().enumerate() {
        if let Some(u) = seen.insert(*p, v) {
            return Err(Error::Precondition(format!("nodes {u} and {v} share point {p:?}")));
        }
    }
    let planar_v = planarity_violation(tree, &d.pos);
    let mut upward_v = None;
    let mut strict_v = None;
    let mut orth_v = None;
    for v in 1..n {
        let p = d.pos[tree.parent(v).expect("non-root")];
        let c = d.pos[v];
        if upward_v.is_none() && p.y < c.y {
            upward_v = Some(Violation::Edge { e: edge(tree, v), reason: "child above parent".into() });
        }
        if strict_v.is_none() && p.y <= c.y {
            strict_v = Some(Violation::Edge { e: edge(tree, v), reason: "child not strictly below".into() });
        }
        if orth_v.is_none() && p.x != c.x && p.y != c.y {
            orth_v = Some(Violation::Edge { e: edge(tree, v), reason: "edge not axis-parallel".into() });
        }
    }
    let order_v = order_violation(tree, &d.pos);
    let xs = d.pos.iter().map(|p| p.x);
    let ys = d.pos.iter().map(|p| p.y);
    let width = xs.clone().max().unwrap() - xs.min().unwrap() + 1;
    let height = ys.clone().max().unwrap() - ys.min().unwrap() + 1;
    let first_violation = [
        (criteria.planar, &planar_v),
        (criteria.upward, &upward_v),
        (criteria.strictly_upward, &strict_v),
        (criteria.orthogonal, &orth_v),
        (criteria.order_preserving, &order_v),
    ]
    .into_iter()
    .find_map(|(req, v)| if req { v.clone() } else { None });
    Ok(VerifyReport {
        planar: planar_v.is_none(),
        upward: upward_v.is_none(),
        strictly_upward: strict_v.is_none(),
        orthogonal: orth_v.is_none(),
        order_preserving: order_v.is_none(),
        width: d.width.max(width),
        height: d.height.max(height),
        area: d.width.max(width) as i128 * d.height.max(height) as i128,
        first_violation,
    })
}

/// Checks that at every node the parent and the children, in child order,
/// appear counterclockwise.
fn order_violation(tree: &Tree, pos: &[GridPoint]) -> Option<Violation> {
    for v in 0..tree.len() {
        let here = pos[v];
        let mut dirs: Vec<(i64, i64)> = Vec::new();
        if let Some(p) = tree.parent(v) {
            dirs.push(pos[p].minus(here));
        }
        dirs.extend(tree.children(v).iter().map(|&c| pos[c].minus(here)));
        if dirs.len() < 3 {
            continue;
        }
        for i in 1..dirs.len() - 1 {
            if !ccw_between(dirs[0], dirs[i], dirs[i + 1]) {
                return Some(Violation::Node { v, reason: "neighbours not in counterclockwise order".into() });
            }
        }
    }
    None
}

fn is_violation(c: Crossing) -> bool {
    matches!(c, Crossing::ProperCrossing | Crossing::Improper)
}

/// Quadratic reference: tests every pair of edges.
pub fn planar_all_pairs(tree: &Tree, pos: &[GridPoint]) -> Option<Violation> {
    let n = tree.len();
    for a in 1..n {
        let sa = (pos[tree.parent(a).unwrap()], pos[a]);
        for b in a + 1..n {
            let sb = (pos[tree.parent(b).unwrap()], pos[b]);
            if sa.0.x.max(sa.1.x) < sb.0.x.min(sb.1.x)
                || sb.0.x.max(sb.1.x) < sa.0.x.min(sa.1.x)
                || sa.0.y.max(sa.1.y) < sb.0.y.min(sb.1.y)
                || sb.0.y.max(sb.1.y) < sa.0.y.min(sa.1.y)
            {
                continue;
            }
            let c = segments_cross(sa, sb).expect("distinct endpoints");
            if is_violation(c) {
                return Some(Violation::EdgePair {
                    e1: edge(tree, a),
                    e2: edge(tree, b),
                    reason: format!("{c:?}"),
                });
            }
        }
    }
    None
}

/// Planarity of the straight-line drawing; `None` when planar.
pub fn planarity_violation(tree: &Tree, pos: &[GridPoint]) -> Option<Violation> {
    let n = tree.len();
    if n <= 2 {
        return None;
    }
    // adjacent edges overlapping collinearly
    for v in 0..n {
        let mut dirs: Vec<((i64, i64), NodeId)> = Vec::new();
        if let Some(p) = tree.parent(v) {
            dirs.push((pos[p].minus(pos[v]), v));
        }
        dirs.extend(tree.children(v).iter().map(|&c| (pos[c].minus(pos[v]), c)));
        dirs.sort_by(|a, b| angle_cmp(a.0, b.0));
        for w in dirs.windows(2) {
            if angle_cmp(w[0].0, w[1].0) == Ordering::Equal {
                return Some(Violation::EdgePair {
                    e1: edge(tree, w[0].1),
                    e2: edge(tree, w[1].1),
                    reason: "collinear overlap at shared vertex".into(),
                });
            }
        }
    }
    Sweep::new(tree, pos).run()
}

/// Edge `id` is the edge from `parent(id)` to `id`, oriented left to right.
struct Sweep<'a> {
    tree: &'a Tree,
    lo: Vec<GridPoint>,
    hi: Vec<GridPoint>,
    status: Treap,
    handle: Vec<usize>,
}

impl<'a> Sweep<'a> {
    fn new(tree: &'a Tree, pos: &[GridPoint]) -> Self {
        let n = tree.len();
        let mut lo = vec![GridPoint::new(0, 0); n];
        let mut hi = vec![GridPoint::new(0, 0); n];
        for v in 1..n {
            let a = pos[tree.parent(v).unwrap()];
            let b = pos[v];
            let (l, h) = if a < b { (a, b) } else { (b, a) };
            lo[v] = l;
            hi[v] = h;
        }
        Sweep { tree, lo, hi, status: Treap::new(n), handle: vec![usize::MAX; n] }
    }

    fn check(&self, a: usize, b: usize) -> Option<Violation> {
        let c = segments_cross((self.lo[a], self.hi[a]), (self.lo[b], self.hi[b])).expect("distinct endpoints");
        if is_violation(c) {
            Some(Violation::EdgePair { e1: edge(self.tree, a), e2: edge(self.tree, b), reason: format!("{c:?}") })
        } else {
            None
        }
    }

    fn run(mut self) -> Option<Violation> {
        let n = self.tree.len();
        // events: (point, is_insert, edge)
        let mut ev: Vec<(GridPoint, bool, usize)> = Vec::with_capacity(2 * n);
        for e in 1..n {
            ev.push((self.lo[e], true, e));
            ev.push((self.hi[e], false, e));
        }
        // removals before insertions at the same point
        ev.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        for &(p, insert, e) in &ev {
            if !insert {
                let h = self.handle[e];
                let (pr, su) = (self.status.pred(h), self.status.succ(h));
                self.status.remove(h);
                if let (Some(a), Some(b)) = (pr, su) {
                    if let Some(v) = self.check(self.status.key(a), self.status.key(b)) {
                        return Some(v);
                    }
                }
            } else {
                let lo = &self.lo;
                let hi = &self.hi;
                let mut tie: Option<usize> = None;
                let cmp = |t: usize| -> Ordering {
                    // position of new edge e relative to active edge t
                    let o = orient(lo[t], hi[t], p);
                    if o > 0 {
                        return Ordering::Greater;
                    }
                    if o < 0 {
                        return Ordering::Less;
                    }
                    if lo[t] == p {
                        let s = orient(p, hi[t], hi[e]);
                        if s > 0 {
                            return Ordering::Greater;
                        }
                        if s < 0 {
                            return Ordering::Less;
                        }
                    }
                    Ordering::Equal
                };
                match self.status.insert(e, cmp, &mut tie) {
                    Ok(h) => {
                        self.handle[e] = h;
                        for nb in [self.status.pred(h), self.status.succ(h)].into_iter().flatten() {
                            if let Some(v) = self.check(e, self.status.key(nb)) {
                                return Some(v);
                            }
                        }
                    }
                    Err(t) => {
                        return Some(self.check(e, t).unwrap_or_else(|| Violation::EdgePair {
                            e1: edge(self.tree, e),
                            e2: edge(self.tree, t),
                            reason: "vertex on edge".into(),
                        }));
                    }
                }
            }
        }
        None
    }
}

const NIL: usize = usize::MAX;

/// Order-statistics-free treap with parent links; ordering supplied by a
/// comparator at insertion time.
struct Treap {
    key: Vec<usize>,
    pri: Vec<u64>,
    l: Vec<usize>,
    r: Vec<usize>,
    p: Vec<usize>,
    root: usize,
    free: Vec<usize>,
    rng: u64,
}

impl Treap {
    fn new(cap: usize) -> Self {
        Treap {
            key: Vec::with_capacity(cap),
            pri: Vec::with_capacity(cap),
            l: Vec::with_capacity(cap),
            r: Vec::with_capacity(cap),
            p: Vec::with_capacity(cap),
            root: NIL,
            free: Vec::new(),
            rng: 0x2545_F491_4F6C_DD1D,
        }
    }

    fn key(&self, h: usize) -> usize {
        self.key[h]
    }

    fn next_pri(&mut self) -> u64 {
        // xorshift64*
        self.rng ^= self.rng >> 12;
        self.rng ^= self.rng << 25;
        self.rng ^= self.rng >> 27;
        self.rng.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Inserts `k`; `cmp(t)` orders the new key against existing key `t`.
    /// Returns the existing key on an `Equal` comparison.
    fn insert(&mut self, k: usize, mut cmp: impl FnMut(usize) -> Ordering, _tie: &mut Option<usize>) -> std::result::Result<usize, usize> {
        let mut parent = NIL;
        let mut cur = self.root;
        let mut go_left = false;
        while cur != NIL {
            match cmp(self.key[cur]) {
                Ordering::Less => {
                    parent = cur;
                    go_left = true;
                    cur = self.l[cur];
                }
                Ordering::Greater => {
                    parent = cur;
                    go_left = false;
                    cur = self.r[cur];
                }
                Ordering::Equal => return Err(self.key[cur]),
            }
        }
        let pri = self.next_pri();
        let h = if let Some(h) = self.free.pop() {
            self.key[h] = k;
            self.pri[h] = pri;
            self.l[h] = NIL;
            self.r[h] = NIL;
            self.p[h] = parent;
            h
        } else {
            self.key.push(k);
            self.pri.push(pri);
            self.l.push(NIL);
            self.r.push(NIL);
            self.p.push(parent);
            self.key.len() - 1
        };
        if parent == NIL {
            self.root = h;
        } else if go_left {
            self.l[parent] = h;
        } else {
            self.r[parent] = h;
        }
        while self.p[h] != NIL && self.pri[self.p[h]] < self.pri[h] {
            self.rotate_up(h);
        }
        Ok(h)
    }

    fn rotate_up(&mut self, x: usize) {
        let y = self.p[x];
        let g = self.p[y];
        if self.l[y] == x {
            let b = self.r[x];
            self.l[y] = b;
            if b != NIL {
                self.p[b] = y;
            }
            self.r[x] = y;
        } else {
            let b = self.l[x];
            self.r[y] = b;
            if b != NIL {
                self.p[b] = y;
            }
            self.l[x] = y;
        }
        self.p[y] = x;
        self.p[x] = g;
        if g == NIL {
            self.root = x;
        } else if self.l[g] == y {
            self.l[g] = x;
        } else {
            self.r[g] = x;
        }
    }

    fn remove(&mut self, h: usize) {
        // rotate down until a leaf
        loop {
            let (a, b) = (self.l[h], self.r[h]);
            if a == NIL && b == NIL {
                break;
            }
            let c = if a == NIL {
                b
            } else if b == NIL || self.pri[a] > self.pri[b] {
                a
            } else {
                b
            };
            self.rotate_up(c);
        }
        let par = self.p[h];
        if par == NIL {
            self.root = NIL;
        } else if self.l[par] == h {
            self.l[par] = NIL;
        } else {
            self.r[par] = NIL;
        }
        self.free.push(h);
    }

    fn pred(&self, h: usize) -> Option<usize> {
        let mut x = h;
        if self.l[x] != NIL {
            x = self.l[x];
            while self.r[x] != NIL {
                x = self.r[x];
            }
            return Some(x);
        }
        while self.p[x] != NIL && self.l[self.p[x]] == x {
            x = self.p[x];
        }
        let p = self.p[x];
        (p != NIL).then_some(p)
    }

    fn succ(&self, h: usize) -> Option<usize> {
        let mut x = h;
        if self.r[x] != NIL {
            x = self.r[x];
            while self.l[x] != NIL {
                x = self.l[x];
            }
            return Some(x);
        }
        while self.p[x] != NIL && self.r[self.p[x]] == x {
            x = self.p[x];
        }
        let p = self.p[x];
        (p != NIL).then_some(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{generate_tree, TreeModel};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn drawing(pos: Vec<(i64, i64)>) -> GridDrawing {
        let pos: Vec<GridPoint> = pos.into_iter().map(GridPoint::from).collect();
        let w = pos.iter().map(|p| p.x).max().unwrap() - pos.iter().map(|p| p.x).min().unwrap() + 1;
        let h = pos.iter().map(|p| p.y).max().unwrap() - pos.iter().map(|p| p.y).min().unwrap() + 1;
        GridDrawing { pos, width: w, height: h, meta: vec![] }
    }

    #[test]
    fn crossing_pair_reported() {
        // root 0 with two paths 0-1-2 and 0-3-4 where 1-2 crosses 3-4
        let t = Tree::parse("((())(()))").unwrap();
        let d = drawing(vec![(1, 5), (0, 3), (2, 1), (2, 3), (0, 1)]);
        let r = verify_drawing(&t, &d, Criteria::planar()).unwrap();
        assert!(!r.planar);
        match r.first_violation {
            Some(Violation::EdgePair { e1, e2, .. }) => {
                let mut es = [e1, e2];
                es.sort();
                assert_eq!(es, [(1, 2), (3, 4)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn area_accounting() {
        // a 4 x 5 box
        let t = Tree::parse("(()())").unwrap();
        let d = drawing(vec![(1, 5), (1, 1), (4, 5)]);
        let r = verify_drawing(&t, &d, Criteria::planar().orthogonal()).unwrap();
        assert_eq!((r.width, r.height, r.area), (4, 5, 20));
        assert!(r.planar && r.orthogonal && r.upward && !r.strictly_upward);
        assert!(r.first_violation.is_none());
    }

    #[test]
    fn duplicate_placement_rejected() {
        let t = Tree::parse("(())").unwrap();
        assert!(verify_drawing(&t, &drawing(vec![(1, 1), (1, 1)]), Criteria::planar()).is_err());
    }

    #[test]
    fn order_check() {
        // root with parent above: use a node with parent, left, right
        let t = Tree::parse("((()()))").unwrap();
        // node 1 at origin, parent above, left child to the lower-left, right to lower-right
        let good = drawing(vec![(0, 1), (0, 0), (-1, -1), (1, -1)]);
        assert!(verify_drawing(&t, &good, Criteria::planar()).unwrap().order_preserving);
        let bad = drawing(vec![(0, 1), (0, 0), (1, -1), (-1, -1)]);
        let r = verify_drawing(&t, &bad, Criteria::planar().order_preserving()).unwrap();
        assert!(!r.order_preserving);
        assert!(matches!(r.first_violation, Some(Violation::Node { v: 1, .. })));
    }

    fn random_positions(n: usize, span: i64, seed: u64) -> Vec<GridPoint> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        while out.len() < n {
            let p = GridPoint::new(rng.gen_range(0..span), rng.gen_range(0..span));
            if seen.insert(p) {
                out.push(p);
            }
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]
        #[test]
        fn sweep_agrees_with_all_pairs(n in 2usize..9, span in 2i64..6, seed in 0u64..1_000_000, model in 0usize..5) {
            let span = span.max((n as f64).sqrt().ceil() as i64);
            let t = generate_tree(n, TreeModel::ALL[model], seed);
            let pos = random_positions(n, span, seed);
            let fast = planarity_violation(&t, &pos).is_none();
            let slow = planar_all_pairs(&t, &pos).is_none();
            prop_assert_eq!(fast, slow);
        }
    }
}
