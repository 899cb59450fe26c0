//! CSV rows and run manifests.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{LabError, Result};

pub const CSV_HEADER: &str = "experiment,replicate,n,quantity,node_or_ray,value";

/// Which replicate a row belongs to; aggregates are written as `all`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Replicate {
    Index(u64),
    All,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub experiment: &'static str,
    pub replicate: Replicate,
    pub n: Option<usize>,
    pub quantity: String,
    pub node_or_ray: String,
    pub value: f64,
}

impl Row {
    pub fn new(
        experiment: &'static str,
        replicate: Replicate,
        n: Option<usize>,
        quantity: impl Into<String>,
        value: f64,
    ) -> Self {
        Self {
            experiment,
            replicate,
            n,
            quantity: quantity.into(),
            node_or_ray: String::new(),
            value,
        }
    }

    pub fn at(mut self, node_or_ray: impl Into<String>) -> Self {
        self.node_or_ray = node_or_ray.into();
        self
    }
}

/// Renders rows with shortest round-trip float formatting, so equal values
/// always produce equal bytes.
pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::with_capacity(64 * rows.len() + CSV_HEADER.len() + 1);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let rep = match r.replicate {
            Replicate::Index(i) => i.to_string(),
            Replicate::All => "all".to_string(),
        };
        let n = r.n.map(|n| n.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.experiment, rep, n, r.quantity, r.node_or_ray, r.value
        );
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Criterion {
    pub name: String,
    pub passed: bool,
    pub statistic: f64,
    pub threshold: String,
}

impl Criterion {
    pub fn new(name: impl Into<String>, passed: bool, statistic: f64, threshold: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            statistic,
            threshold: threshold.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub config: ExperimentConfig,
    pub artifact_version: &'static str,
    pub mixer: &'static str,
    pub wall_time_seconds: f64,
    pub rows: usize,
    pub passed: bool,
    pub criteria: Vec<Criterion>,
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| LabError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let rows = vec![
            Row::new("constants", Replicate::All, None, "rho0", 1.25),
            Row::new("ipl-limit", Replicate::Index(3), Some(1000), "gap", 0.1).at("e"),
        ];
        assert_eq!(
            to_csv(&rows),
            "experiment,replicate,n,quantity,node_or_ray,value\n\
             constants,all,,rho0,,1.25\n\
             ipl-limit,3,1000,gap,e,0.1\n"
        );
    }
}
