//! Grid drawings of rooted trees with small area.
//!
//! The crate provides drawers for arbitrary trees (upward and non-upward)
//! and for binary trees (orthogonal, order-preserving, and both), an exact
//! integer verifier for the produced drawings, and a benchmark harness that
//! measures area against the known asymptotic envelopes.

pub mod arbitrary;
pub mod bench;
pub mod binary;
pub mod drawing;
pub mod error;
pub mod frag;
pub mod geometry;
pub mod lattice;
pub mod logs;
pub mod tree;
pub mod verify;

pub use drawing::GridDrawing;
pub use error::{Error, Result};
pub use tree::{generate_tree, ChainRef, HeavyPathInfo, NodeId, Side, Tree, TreeModel};
pub use verify::{verify_drawing, Criteria, VerifyReport};
