use std::path::Path;
use std::process::{Command, Output};

fn bstlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bstlab"))
        .args(args)
        .output()
        .expect("spawn bstlab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn simulate_then_functionals_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("x.txt");
    let t = t.to_str().unwrap();
    for chain in [&["bst"][..], &["dst", "--split-const", "0.3"], &["tilted", "--z", "0.7"]] {
        let mut args = vec!["simulate"];
        args.extend_from_slice(chain);
        args.extend(["--n", "40", "--seed", "9", "--out", t]);
        assert!(bstlab(&args).status.success());
        let o = bstlab(&["functionals", "--in", t, "--all"]);
        assert!(o.status.success());
        let text = stdout(&o);
        assert!(text.starts_with("n\t40\n"), "{text}");
        assert!(text.contains("jabbour_martingale(z=0.5)\t1\n"), "{text}");
    }
}

#[test]
fn simulate_is_seed_deterministic() {
    let a = bstlab(&["simulate", "bst", "--n", "100", "--seed", "4"]);
    let b = bstlab(&["simulate", "bst", "--n", "100", "--seed", "4"]);
    let c = bstlab(&["simulate", "bst", "--n", "100", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn oracle_wiener_agrees_with_formula() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("x.txt");
    let t = t.to_str().unwrap();
    bstlab(&["simulate", "bst", "--n", "60", "--seed", "2", "--out", t]);
    let line = stdout(&bstlab(&["oracle", "wiener", "--in", t]));
    let v: Vec<&str> = line.trim().split('\t').collect();
    assert_eq!(v[0], v[1]);
}

#[test]
fn oracle_shapes_lists_catalan_many() {
    let o = bstlab(&["oracle", "shapes", "--n", "4"]);
    assert_eq!(stdout(&o).lines().count(), 14);
}

#[test]
fn limit_constants_prints_threshold() {
    let text = stdout(&bstlab(&["limit", "constants"]));
    let rho0: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("rho0\t"))
        .unwrap()
        .parse()
        .unwrap();
    assert!((rho0 - 1.26107).abs() < 1e-5);
}

#[test]
fn experiment_writes_outputs_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(
        &cfg,
        r#"{"schema": "bst-lab/experiment-v1", "experiment": "constants", "master_seed": 1,
            "outputs": {"csv": "out/c.csv", "manifest": "out/c.json"}}"#,
    )
    .unwrap();
    let o = bstlab(&["experiment", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS\t")));
    let csv = std::fs::read_to_string(dir.path().join("out/c.csv")).unwrap();
    assert!(csv.lines().count() > 1);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/c.json")).unwrap()).unwrap();
    assert_eq!(manifest["passed"], true);
    assert_eq!(manifest["config"]["experiment"], "constants");
}

#[test]
fn failing_criterion_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    // Too few replicates for the phase criteria to separate.
    std::fs::write(
        &cfg,
        r#"{"schema": "bst-lab/experiment-v1", "experiment": "phase", "master_seed": 1,
            "replicates": 1, "truncation_depth": 4, "rho": [1.4], "alpha": [],
            "outputs": {"csv": "c.csv", "manifest": "m.json"}}"#,
    )
    .unwrap();
    let o = bstlab(&["experiment", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"schema": "bst-lab/experiment-v1", "bogus": 1}"#).unwrap();
    assert_eq!(bstlab(&["experiment", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    let missing = Path::new("/definitely/not/here.json");
    assert_eq!(
        bstlab(&["experiment", "--config", missing.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        bstlab(&["simulate", "dst", "--n", "5", "--split-const", "1.5"]).status.code(),
        Some(2)
    );
}

#[test]
fn render_commands_write_svg() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("x.txt");
    let ts = t.to_str().unwrap();
    bstlab(&["simulate", "bst", "--n", "30", "--seed", "1", "--out", ts]);
    let tree = dir.path().join("tree.svg");
    let sil = dir.path().join("sil.svg");
    assert!(bstlab(&["render", "tree", "--in", ts, "--out", tree.to_str().unwrap()]).status.success());
    assert!(bstlab(&["render", "silhouette", "--in", ts, "--grid", "64", "--out", sil.to_str().unwrap()])
        .status
        .success());
    for p in [tree, sil] {
        let svg = std::fs::read_to_string(p).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
    let o = bstlab(&["render", "pi-demo", "--out-dir", dir.path().join("pi").to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 6);
}
