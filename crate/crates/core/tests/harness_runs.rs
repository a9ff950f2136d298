use std::path::{Path, PathBuf};

use rnifs::harness::{self, ExperimentConfig, Outputs};
use rnifs::Error;

fn bundled_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn bundled() -> Vec<ExperimentConfig> {
    harness::config_files(&bundled_dir()).unwrap().iter().map(|p| harness::load_config(p).unwrap()).collect()
}

fn small(name: &str, maps: &[&str], probs: &[f64], seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        name: name.into(),
        map_ids: maps.iter().map(|s| s.to_string()).collect(),
        probs: Some(probs.to_vec()),
        dirichlet_alphas: None,
        iterations: 20_000,
        burn_in: 100,
        seed,
        x0: [0.1, 0.1],
        outputs: Outputs::default(),
    }
}

#[test]
fn bundled_configs_encode_the_eight_experiments() {
    let q = 0.25;
    let want: [(&str, &[&str], &[f64], usize, usize); 8] = [
        ("branching_structure", &["f2", "f5", "f8"], &[0.5, 0.3, 0.2], 100_000, 1_000),
        ("chaotic_explosion", &["f4", "f6", "f9", "f11"], &[q, q, q, q], 100_000, 1_000),
        ("concentric_energy", &["f1", "f10", "f12"], &[0.3, 0.3, 0.4], 100_000, 1_000),
        ("disruptive_mixture", &["f6", "f9", "f10"], &[0.6, 0.2, 0.2], 100_000, 1_000),
        ("high_freq_disturbance", &["f11", "f12"], &[0.5, 0.5], 100_000, 1_000),
        ("spiral_rotation", &["f3", "f7", "f11"], &[0.4, 0.3, 0.3], 100_000, 1_000),
        ("ultra_res_analysis", &["f4", "f5", "f8"], &[0.3, 0.4, 0.3], 300_000, 5_000),
        ("webbed_structure", &["f3", "f5", "f7", "f8"], &[q, q, q, q], 100_000, 1_000),
    ];
    let cfgs = bundled();
    assert_eq!(cfgs.len(), 8);
    for (cfg, (name, maps, probs, m, t)) in cfgs.iter().zip(want) {
        assert_eq!(cfg.name, name);
        assert_eq!(cfg.map_ids, maps);
        assert_eq!(cfg.probs.as_deref(), Some(probs));
        assert!(cfg.dirichlet_alphas.is_none());
        assert_eq!((cfg.iterations, cfg.burn_in), (m, t));
        assert_eq!(cfg.x0, [0.1, 0.1]);
    }
}

#[test]
fn configs_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for cfg in bundled() {
        let path = dir.path().join(format!("{}.json", cfg.name));
        cfg.write(&path).unwrap();
        assert_eq!(harness::load_config(&path).unwrap(), cfg);
    }
    let mut dirichlet = small("d", &["f11", "f12"], &[0.5, 0.5], 3);
    dirichlet.probs = None;
    dirichlet.dirichlet_alphas = Some(vec![2.0, 0.5]);
    let path = dir.path().join("d.json");
    dirichlet.write(&path).unwrap();
    assert_eq!(harness::load_config(&path).unwrap(), dirichlet);
}

#[test]
fn parse_errors_carry_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"name\": \"x\",\n  \"seed\": oops\n}\n").unwrap();
    match harness::load_config(&path) {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 11)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn rerun_is_byte_identical() {
    let cfg = small("rerun", &["f11", "f12"], &[0.5, 0.5], 9);
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let ra = harness::run_experiment(&cfg, a.path()).unwrap();
    let rb = harness::run_experiment(&cfg, b.path()).unwrap();
    assert_eq!(ra.config_digest, rb.config_digest);
    for file in ["points.csv", "density.ppm", "scatter.ppm", "boxcount.csv", "dimension.json", "stability.json"] {
        let read = |d: &Path| std::fs::read(d.join("rerun").join(file)).unwrap();
        assert_eq!(read(a.path()), read(b.path()), "{file}");
    }
    assert_eq!(ra.n_points, 19_900);
    assert_eq!(ra.dimension_estimates.len(), 3);

    let mut other = cfg.clone();
    other.seed = 10;
    assert_ne!(other.digest(), cfg.digest());
}

#[test]
fn outputs_flags_limit_artifacts() {
    let mut cfg = small("lean", &["sier1", "sier2", "sier3"], &[0.25, 0.25, 0.5], 1);
    cfg.outputs = Outputs::box_only();
    let dir = tempfile::tempdir().unwrap();
    let r = harness::run_experiment(&cfg, dir.path()).unwrap();
    let names: Vec<String> =
        r.artifact_paths.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
    assert_eq!(names, ["boxcount.csv", "loglog.csv", "dimension.json"]);
    assert!(r.stability.is_none());
}

fn write_configs(dir: &Path, cfgs: &[ExperimentConfig]) {
    for cfg in cfgs {
        cfg.write(&dir.join(format!("{}.json", cfg.name))).unwrap();
    }
}

#[test]
fn suite_records_failures_and_continues() {
    let cfg_dir = tempfile::tempdir().unwrap();
    let mut cfgs: Vec<ExperimentConfig> = (0..7)
        .map(|i| {
            let mut c = small(&format!("ok{i}"), &["f11", "f12"], &[0.5, 0.5], i);
            c.outputs = Outputs::box_only();
            c
        })
        .collect();
    // f7's sinh term blows up from a far start
    let mut bad = small("zz_diverges", &["f7"], &[1.0], 0);
    bad.x0 = [8.0, 0.0];
    cfgs.push(bad);
    write_configs(cfg_dir.path(), &cfgs);

    let out = tempfile::tempdir().unwrap();
    let summary = harness::run_suite(cfg_dir.path(), out.path(), None).unwrap();
    assert_eq!(summary.rows.len(), 8);
    assert_eq!(summary.failures(), 1);
    let csv = std::fs::read_to_string(out.path().join("summary.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], harness::SUMMARY_HEADER);
    assert_eq!(lines.len(), 9);
    assert!(lines[8].starts_with("zz_diverges,,,,FAILED: orbit diverged"), "{}", lines[8]);
}

#[test]
fn suite_is_deterministic_apart_from_timing() {
    let cfg_dir = tempfile::tempdir().unwrap();
    write_configs(
        cfg_dir.path(),
        &[small("a", &["f11", "f12"], &[0.5, 0.5], 1), small("b", &["f3", "f7", "f11"], &[0.4, 0.3, 0.3], 2)],
    );
    let strip = |csv: String| -> Vec<String> {
        csv.lines().map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect()
    };
    let runs: Vec<Vec<String>> = (0..2)
        .map(|_| {
            let out = tempfile::tempdir().unwrap();
            harness::run_suite(cfg_dir.path(), out.path(), None).unwrap();
            strip(std::fs::read_to_string(out.path().join("summary.csv")).unwrap())
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn empty_directory_gives_header_only() {
    let (cfg_dir, out) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let summary = harness::run_suite(cfg_dir.path(), out.path(), None).unwrap();
    assert!(summary.rows.is_empty());
    let csv = std::fs::read_to_string(out.path().join("summary.csv")).unwrap();
    assert_eq!(csv, format!("{}\n", harness::SUMMARY_HEADER));
}

#[test]
fn unreadable_config_becomes_a_failure_row() {
    let (cfg_dir, out) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    std::fs::write(cfg_dir.path().join("broken.json"), "{ not json").unwrap();
    let summary = harness::run_suite(cfg_dir.path(), out.path(), None).unwrap();
    assert_eq!(summary.rows.len(), 1);
    assert_eq!(summary.rows[0].name, "broken");
    assert!(summary.rows[0].is_failure());
}
