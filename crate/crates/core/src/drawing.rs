//! Final grid drawings: every node on a point of `{1..W} x {1..H}`, y up.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::frag::Frag;
use crate::geometry::GridPoint;
use crate::tree::{NodeId, Tree};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridDrawing {
    pub pos: Vec<GridPoint>,
    pub width: i64,
    pub height: i64,
    /// Free-form notes from the drawer, e.g. escalated constants.
    pub meta: Vec<(String, String)>,
}

impl GridDrawing {
    pub fn area(&self) -> i128 {
        self.width as i128 * self.height as i128
    }

    pub fn at(&self, v: NodeId) -> GridPoint {
        self.pos[v]
    }

    /// Converts a screen-coordinate fragment (y down) holding exactly the
    /// nodes of `tree` into a normalized y-up drawing.
    pub fn from_frag(tree: &Tree, frag: &Frag) -> Result<GridDrawing> {
        let n = tree.len();
        let b = frag.bbox();
        let mut pos: Vec<Option<GridPoint>> = vec![None; n];
        for (v, x, y) in frag.points() {
            if v >= n {
                return Err(Error::Internal(format!("placed unknown node {v}")));
            }
            if pos[v].is_some() {
                return Err(Error::Internal(format!("node {v} placed twice")));
            }
            pos[v] = Some(GridPoint::new(x - b.x0 + 1, b.y1 - y + 1));
        }
        let pos = pos
            .into_iter()
            .enumerate()
            .map(|(v, p)| p.ok_or_else(|| Error::Internal(format!("node {v} not placed"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(GridDrawing { pos, width: b.width(), height: b.height(), meta: Vec::new() })
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    /// `node_id<TAB>x<TAB>y` lines after a header.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("node_id\tx\ty\n");
        for (v, p) in self.pos.iter().enumerate() {
            let _ = writeln!(s, "{v}\t{}\t{}", p.x, p.y);
        }
        s
    }

    /// `parent<TAB>child` lines.
    pub fn edges_tsv(tree: &Tree) -> String {
        let mut s = String::from("parent\tchild\n");
        for v in 1..tree.len() {
            let _ = writeln!(s, "{}\t{v}", tree.parent(v).expect("non-root"));
        }
        s
    }

    /// SVG rendering: 8 px per grid unit, y flipped so up renders up.
    pub fn to_svg(&self, tree: &Tree) -> String {
        const CELL: i64 = 8;
        let w = (self.width + 1) * CELL;
        let h = (self.height + 1) * CELL;
        let sx = |p: GridPoint| p.x * CELL;
        let sy = |p: GridPoint| (self.height + 1 - p.y) * CELL;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
        );
        let _ = writeln!(s, r#"<g stroke="black" stroke-width="1" fill="none">"#);
        for v in 1..tree.len() {
            let a = self.pos[tree.parent(v).expect("non-root")];
            let b = self.pos[v];
            let _ = writeln!(s, r#"<path d="M{} {} L{} {}"/>"#, sx(a), sy(a), sx(b), sy(b));
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(s, r#"<g fill="black">"#);
        for p in &self.pos {
            let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="2"/>"#, sx(*p), sy(*p));
        }
        let _ = writeln!(s, "</g>\n</svg>");
        s
    }
}
