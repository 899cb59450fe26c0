//! Declarative experiment descriptions.

use std::path::{Path, PathBuf};

use bst_limit::oracles::MAX_ENUMERATION;
use bst_limit::MAX_DEPTH;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

pub const SCHEMA: &str = "bst-lab/experiment-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    ShapeLaw,
    IplLimit,
    WienerLimit,
    MsilLimit,
    Phase,
    Constants,
    TiltedLaw,
    DstConditional,
    HeightFill,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 9] = [
        ExperimentKind::ShapeLaw,
        ExperimentKind::IplLimit,
        ExperimentKind::WienerLimit,
        ExperimentKind::MsilLimit,
        ExperimentKind::Phase,
        ExperimentKind::Constants,
        ExperimentKind::TiltedLaw,
        ExperimentKind::DstConditional,
        ExperimentKind::HeightFill,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::ShapeLaw => "shape-law",
            ExperimentKind::IplLimit => "ipl-limit",
            ExperimentKind::WienerLimit => "wiener-limit",
            ExperimentKind::MsilLimit => "msil-limit",
            ExperimentKind::Phase => "phase",
            ExperimentKind::Constants => "constants",
            ExperimentKind::TiltedLaw => "tilted-law",
            ExperimentKind::DstConditional => "dst-conditional",
            ExperimentKind::HeightFill => "height-fill",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub csv: PathBuf,
    pub manifest: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: String,
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub n_values: Vec<usize>,
    #[serde(default = "one")]
    pub replicates: u64,
    pub master_seed: u64,
    #[serde(default = "default_depth")]
    pub truncation_depth: u32,
    #[serde(default = "default_cutoff")]
    pub mass_cutoff: f64,
    #[serde(default)]
    pub rho: Vec<f64>,
    #[serde(default)]
    pub z: Vec<f64>,
    #[serde(default)]
    pub alpha: Vec<f64>,
    #[serde(default = "default_grid")]
    pub ray_grid: usize,
    /// Worker threads; 0 uses every available core.
    #[serde(default)]
    pub workers: usize,
    pub outputs: Outputs,
}

fn one() -> u64 {
    1
}

fn default_depth() -> u32 {
    bst_limit::Truncation::DEFAULT_DEPTH
}

fn default_cutoff() -> f64 {
    bst_limit::Truncation::DEFAULT_CUTOFF
}

fn default_grid() -> usize {
    256
}

fn bad(msg: impl Into<String>) -> LabError {
    LabError::Config(msg.into())
}

impl ExperimentConfig {
    /// A config with every optional field at its default.
    pub fn new(experiment: ExperimentKind, master_seed: u64, outputs: Outputs) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            experiment,
            n_values: Vec::new(),
            replicates: 1,
            master_seed,
            truncation_depth: default_depth(),
            mass_cutoff: default_cutoff(),
            rho: Vec::new(),
            z: Vec::new(),
            alpha: Vec::new(),
            ray_grid: default_grid(),
            workers: 0,
            outputs,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config; relative output paths resolve against the config's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        let mut cfg = Self::from_json(&text)?;
        if let Some(dir) = path.parent() {
            for p in [&mut cfg.outputs.csv, &mut cfg.outputs.manifest] {
                if p.is_relative() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        use ExperimentKind::*;
        if self.schema != SCHEMA {
            return Err(bad(format!("schema must be {SCHEMA:?}, got {:?}", self.schema)));
        }
        if self.replicates == 0 {
            return Err(bad("replicates must be at least 1"));
        }
        if self.n_values.contains(&0) {
            return Err(bad("sizes in n_values must be at least 1"));
        }
        if self.truncation_depth > MAX_DEPTH {
            return Err(bad(format!("truncation_depth must be at most {MAX_DEPTH}")));
        }
        if !(self.mass_cutoff >= 0.0 && self.mass_cutoff < 1.0) {
            return Err(bad("mass_cutoff must lie in [0, 1)"));
        }
        if self.rho.iter().any(|r| !(*r >= 1.0 && r.is_finite())) {
            return Err(bad("every rho must be at least 1"));
        }
        if self.z.iter().any(|z| !(*z > 0.0 && z.is_finite())) {
            return Err(bad("every z must be positive"));
        }
        if self.alpha.iter().any(|a| !(*a > 0.0 && *a < 1.0)) {
            return Err(bad("every alpha must lie in (0, 1)"));
        }
        if !self.ray_grid.is_power_of_two() {
            return Err(bad("ray_grid must be a power of two"));
        }
        let needs_n = matches!(
            self.experiment,
            ShapeLaw | IplLimit | WienerLimit | MsilLimit | DstConditional | HeightFill
        );
        if needs_n && self.n_values.is_empty() {
            return Err(bad(format!("{} needs n_values", self.experiment.name())));
        }
        match self.experiment {
            ShapeLaw if self.n_values.iter().any(|&n| n > MAX_ENUMERATION) => {
                Err(bad(format!("shape-law sizes must be at most {MAX_ENUMERATION}")))
            }
            TiltedLaw if self.z.is_empty() => Err(bad("tilted-law needs z")),
            Phase if self.rho.is_empty() && self.alpha.is_empty() => {
                Err(bad("phase needs rho or alpha"))
            }
            Phase if self.truncation_depth < 2 => Err(bad("phase needs truncation_depth >= 2")),
            _ => Ok(()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "schema": "bst-lab/experiment-v1",
        "experiment": "shape-law",
        "n_values": [3],
        "replicates": 10,
        "master_seed": 1,
        "outputs": {"csv": "a.csv", "manifest": "a.json"}
    }"#;

    #[test]
    fn parses_with_defaults() {
        let c = ExperimentConfig::from_json(MINIMAL).unwrap();
        assert_eq!(c.truncation_depth, 40);
        assert_eq!(c.ray_grid, 256);
        assert_eq!(c.experiment, ExperimentKind::ShapeLaw);
    }

    #[test]
    fn unknown_keys_are_errors() {
        let text = MINIMAL.replace("\"replicates\"", "\"replicatez\": 3, \"replicates\"");
        assert!(matches!(ExperimentConfig::from_json(&text), Err(LabError::Config(_))));
    }

    #[test]
    fn domain_checks() {
        for (from, to) in [
            ("\"n_values\": [3]", "\"n_values\": [9]"),
            ("\"replicates\": 10", "\"replicates\": 0"),
            ("experiment-v1", "experiment-v0"),
            ("\"master_seed\": 1", "\"master_seed\": 1, \"ray_grid\": 100"),
            ("\"master_seed\": 1", "\"master_seed\": 1, \"rho\": [0.5]"),
        ] {
            assert!(ExperimentConfig::from_json(&MINIMAL.replace(from, to)).is_err(), "{to}");
        }
    }
}
