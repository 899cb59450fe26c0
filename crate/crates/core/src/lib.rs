//! Random binary search trees, their limit tree, and tree functionals.
//!
//! The finite side lives in [`tree`] and [`chains`]; the limit side in
//! [`limit`]; [`functionals`] connects the two and [`oracles`] holds
//! brute-force references used to check both.

pub mod chains;
pub mod error;
pub mod functionals;
pub mod limit;
pub mod node;
pub mod oracles;
pub mod quad;
pub mod rng;
pub mod scalar;
pub mod tree;

pub use chains::{BstBuilder, ConstSplit, DrivingMeasure};
pub use error::{Error, Result};
pub use limit::{EtaCoupling, LimitTree, SplitField, Truncation};
pub use node::{NodeId, Point, Ray, MAX_DEPTH};
pub use rng::RngStream;
pub use scalar::Scalar;
pub use tree::BinaryTree;

/// Floating-point scalar used by simulations.
pub type Real = f64;
/// Exact scalar used by identity checks.
pub type Exact = num_rational::BigRational;
