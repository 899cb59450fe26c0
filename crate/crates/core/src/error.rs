use crate::node::NodeId;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("node depth would exceed the cap of {}", crate::node::MAX_DEPTH)]
    DepthOverflow,
    #[error("the root node has no parent")]
    RootHasNoParent,
    #[error("rays agree beyond the depth cap {cap}")]
    CommonPrefixExceedsCap { cap: u32 },
    #[error("node {0} is not an external node of the tree")]
    NotExternal(NodeId),
    #[error("node {0} is not in the tree")]
    NotInTree(NodeId),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate key {0}")]
    DuplicateKey(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("input too large: {what} = {got}, limit {limit}")]
    TooLarge {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("insufficient samples: {got} < {need}")]
    InsufficientSamples { got: usize, need: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
