use thiserror::Error;

use crate::tree::NodeId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at byte {offset}: {reason}")]
    Parse { offset: usize, reason: String },
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("node {0} has more than two children")]
    NotBinary(NodeId),
    #[error("only child of node {0} has no left/right designation")]
    MissingSide(NodeId),
    #[error("invalid chain from {top} to {bottom}")]
    InvalidChain { top: NodeId, bottom: NodeId },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("drawing error: {0}")]
    Drawing(String),
    #[error("internal invariant breached: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
