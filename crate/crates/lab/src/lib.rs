//! Experiment runner, CSV/manifest output and SVG rendering on top of
//! `bst-limit`.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
pub mod pi;
pub mod render;
pub mod suites;

pub use config::{ExperimentConfig, ExperimentKind, Outputs};
pub use error::{LabError, Result};
pub use experiments::{execute, run, RunOutput};
pub use output::{Criterion, Row, RunManifest};
