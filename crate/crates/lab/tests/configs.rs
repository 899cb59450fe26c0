use std::path::PathBuf;

use bst_lab::{ExperimentConfig, ExperimentKind};

fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs")
}

#[test]
fn every_experiment_has_a_valid_pinned_config() {
    for kind in ExperimentKind::ALL {
        let path = configs_dir().join(format!("{}.json", kind.name()));
        let cfg = ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(cfg.experiment, kind);
        cfg.validate().unwrap();
        assert!(cfg.outputs.csv.is_absolute());
    }
}

#[test]
fn config_round_trips_through_json() {
    let path = configs_dir().join("phase.json");
    let cfg = ExperimentConfig::load(&path).unwrap();
    let again = ExperimentConfig::from_json(&cfg.to_json()).unwrap();
    assert_eq!(cfg, again);
}

#[test]
fn ladder_configs_use_the_full_size_ladder() {
    for kind in [ExperimentKind::IplLimit, ExperimentKind::WienerLimit, ExperimentKind::MsilLimit] {
        let cfg = ExperimentConfig::load(&configs_dir().join(format!("{}.json", kind.name()))).unwrap();
        assert_eq!(cfg.n_values, vec![1_000, 10_000, 100_000]);
        assert_eq!(cfg.replicates, 20);
        assert_eq!(cfg.truncation_depth, 40);
    }
}
