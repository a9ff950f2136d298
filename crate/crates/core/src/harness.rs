//! Config-driven experiments.
//!
//! One JSON file describes one experiment; [`run_experiment`] writes its
//! artifacts into `<out>/<name>/`:
//!
//! ```text
//! points.csv      x,y orbit after burn-in
//! density.ppm     log-scaled 512×512 histogram
//! scatter.ppm     800×800 point raster
//! boxcount.csv    epsilon,count
//! loglog.csv      log_inv_eps,log_count,fit_line
//! entropy.csv     epsilon,entropy
//! correlation.csv radius,correlation
//! dimension.json  {box, information, correlation} estimates
//! stability.json  StabilityReport
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dimension::{self, DimensionEstimate};
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::maps;
use crate::render;
use crate::rng::Xoshiro256pp;
use crate::stability::{self, StabilityReport};
use crate::system::{self, PointCloud, ProbabilityVector, RnifsSystem};

pub const DENSITY_SIZE: usize = 512;
pub const SCATTER_SIZE: usize = 800;
/// Cap on the orbit length used for the Lyapunov estimate.
pub const STABILITY_STEPS: usize = 100_000;

/// Keeps Dirichlet draws off the orbit's random stream.
const DIRICHLET_STREAM: u64 = 0x5851_f42d_4c95_7f2d;

fn default_iterations() -> usize {
    system::DEFAULT_ITERATIONS
}

fn default_burn_in() -> usize {
    system::DEFAULT_BURN_IN
}

fn default_x0() -> [f64; 2] {
    [system::DEFAULT_X0.x, system::DEFAULT_X0.y]
}

fn yes() -> bool {
    true
}

/// Which artifacts and analyses an experiment produces. All on by default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default = "yes")]
    pub points: bool,
    #[serde(default = "yes")]
    pub density: bool,
    #[serde(default = "yes")]
    pub scatter: bool,
    #[serde(default = "yes")]
    pub boxdim: bool,
    #[serde(default = "yes")]
    pub infodim: bool,
    #[serde(default = "yes")]
    pub corrdim: bool,
    #[serde(default = "yes")]
    pub stability: bool,
}

impl Default for Outputs {
    fn default() -> Self {
        Outputs { points: true, density: true, scatter: true, boxdim: true, infodim: true, corrdim: true, stability: true }
    }
}

impl Outputs {
    /// Only the box-counting estimate; no files besides `dimension.json`.
    pub fn box_only() -> Self {
        Outputs { points: false, density: false, scatter: false, boxdim: true, infodim: false, corrdim: false, stability: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub map_ids: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dirichlet_alphas: Option<Vec<f64>>,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default = "default_burn_in")]
    pub burn_in: usize,
    pub seed: u64,
    #[serde(default = "default_x0")]
    pub x0: [f64; 2],
    #[serde(default)]
    pub outputs: Outputs,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::Validation(format!("{}: {msg}", self.name)));
        if self.name.is_empty() || self.name.contains(['/', '\\']) || self.name == "." || self.name == ".." {
            return invalid(format!("name `{}` is not a plain directory name", self.name));
        }
        if self.map_ids.is_empty() {
            return invalid("map_ids is empty".into());
        }
        if let Some(id) = self.map_ids.iter().find(|id| maps::lookup(id).is_err()) {
            return invalid(format!("unknown map `{id}`"));
        }
        let weights = match (&self.probs, &self.dirichlet_alphas) {
            (Some(p), None) => {
                if let Err(e) = ProbabilityVector::new(p.clone()) {
                    return invalid(e.to_string());
                }
                p
            }
            (None, Some(a)) => {
                if let Some(v) = a.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
                    return invalid(format!("dirichlet alpha {v} must be positive"));
                }
                a
            }
            _ => return invalid("exactly one of `probs` and `dirichlet_alphas` must be given".into()),
        };
        if weights.len() != self.map_ids.len() {
            return invalid(format!("{} maps but {} weights", self.map_ids.len(), weights.len()));
        }
        if self.iterations <= self.burn_in {
            return invalid(format!("iterations ({}) must exceed burn_in ({})", self.iterations, self.burn_in));
        }
        if !self.x0.iter().all(|v| v.is_finite()) {
            return invalid("x0 must be finite".into());
        }
        Ok(())
    }

    pub fn x0(&self) -> Point2 {
        Point2::new(self.x0[0], self.x0[1])
    }

    /// Explicit weights, or a Dirichlet draw determined by the seed.
    pub fn probabilities(&self) -> Result<ProbabilityVector> {
        match (&self.probs, &self.dirichlet_alphas) {
            (Some(p), _) => ProbabilityVector::new(p.clone()),
            (None, Some(a)) => {
                let mut rng = Xoshiro256pp::seed_from_u64(self.seed ^ DIRICHLET_STREAM);
                system::dirichlet_probabilities(a, &mut rng)
            }
            (None, None) => Err(Error::Validation(format!("{}: no probabilities", self.name))),
        }
    }

    pub fn system(&self) -> Result<RnifsSystem> {
        self.validate()?;
        let maps = self.map_ids.iter().map(|id| maps::lookup(id)).collect::<Result<Vec<_>>>()?;
        RnifsSystem::new(maps, self.probabilities()?)
    }

    /// SHA-256 (first 16 bytes, hex) of the canonical JSON encoding.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        hex::encode(&Sha256::digest(canonical.as_bytes())[..16])
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = self.to_json();
        text.push('\n');
        render::write_text(path, &text)
    }
}

pub fn parse_config(text: &str, origin: &Path) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    parse_config(&text, path)
}

/// Estimates keyed by estimator name (`box`, `information`, `correlation`).
pub type Estimates = BTreeMap<String, DimensionEstimate>;

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentResult {
    pub name: String,
    pub config_digest: String,
    pub n_points: usize,
    pub dimension_estimates: Estimates,
    pub stability: Option<StabilityReport>,
    pub artifact_paths: Vec<PathBuf>,
    pub wall_time: f64,
}

impl ExperimentResult {
    pub fn box_dimension(&self) -> Option<&DimensionEstimate> {
        self.dimension_estimates.get("box")
    }
}

/// Run one experiment, writing requested artifacts under `out_dir/<name>/`.
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: &Path) -> Result<ExperimentResult> {
    let start = Instant::now();
    let sys = cfg.system()?;
    let cloud = system::generate_orbit(&sys, cfg.x0(), cfg.iterations, cfg.burn_in, cfg.seed)?;
    let dir = out_dir.join(&cfg.name);
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(dir.display().to_string(), e))?;

    let mut artifacts = Vec::new();
    let mut emit = |file: &str| {
        let p = dir.join(file);
        artifacts.push(p.clone());
        p
    };
    let pts = cloud.points();
    let o = cfg.outputs;

    if o.points {
        cloud.write_csv(&emit("points.csv"))?;
    }
    if o.density {
        let grid = render::density_grid(pts, DENSITY_SIZE, DENSITY_SIZE)?;
        render::write_density_image(&grid, &emit("density.ppm"))?;
    }
    if o.scatter {
        render::write_scatter_image(pts, SCATTER_SIZE, SCATTER_SIZE, &emit("scatter.ppm"))?;
    }

    let mut estimates = Estimates::new();
    if o.boxdim {
        let series = dimension::box_counts(pts, dimension::DEFAULT_LEVELS)?;
        series.write_csv(&emit("boxcount.csv"))?;
        let fit = dimension::fit_dimension(&series)?;
        render::write_loglog_csv(&series, &fit, &emit("loglog.csv"))?;
        estimates.insert("box".into(), fit);
    }
    if o.infodim {
        dimension::entropy_series(pts, dimension::DEFAULT_LEVELS)?.write_csv(&emit("entropy.csv"))?;
        estimates.insert("information".into(), dimension::information_dimension(pts, dimension::DEFAULT_LEVELS)?);
    }
    if o.corrdim {
        let radii = dimension::default_radii(pts, dimension::DEFAULT_RADII);
        dimension::correlation_series(pts, &radii, dimension::DEFAULT_MAX_PAIRS, cfg.seed)?
            .write_csv(&emit("correlation.csv"))?;
        estimates.insert(
            "correlation".into(),
            dimension::correlation_dimension(pts, &radii, dimension::DEFAULT_MAX_PAIRS, cfg.seed)?,
        );
    }
    if !estimates.is_empty() {
        let text = serde_json::to_string_pretty(&estimates).expect("estimates serialize") + "\n";
        render::write_text(&emit("dimension.json"), &text)?;
    }

    let stability = if o.stability {
        let report = stability_on(cfg, &sys, pts)?;
        report.write_json(&emit("stability.json"))?;
        Some(report)
    } else {
        None
    };

    Ok(ExperimentResult {
        name: cfg.name.clone(),
        config_digest: cfg.digest(),
        n_points: cloud.len(),
        dimension_estimates: estimates,
        stability,
        artifact_paths: artifacts,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

fn stability_on(cfg: &ExperimentConfig, sys: &RnifsSystem, pts: &[Point2]) -> Result<StabilityReport> {
    let window = render::render_window(pts)?;
    let steps = (cfg.iterations - cfg.burn_in).clamp(100, STABILITY_STEPS);
    stability::stability_report_from(sys, cfg.x0(), &window, steps, cfg.seed)
}

/// Stability report for a config, with Lipschitz data taken over the
/// window of its orbit.
pub fn config_stability(cfg: &ExperimentConfig) -> Result<StabilityReport> {
    let sys = cfg.system()?;
    let cloud = system::generate_orbit(&sys, cfg.x0(), cfg.iterations, cfg.burn_in, cfg.seed)?;
    stability_on(cfg, &sys, cloud.points())
}

/// Box, information and correlation estimates of an arbitrary cloud.
pub fn estimate_all(points: &[Point2], seed: u64) -> Result<Estimates> {
    let radii = dimension::default_radii(points, dimension::DEFAULT_RADII);
    let mut out = Estimates::new();
    out.insert("box".into(), dimension::box_dimension(points, dimension::DEFAULT_LEVELS)?);
    out.insert("information".into(), dimension::information_dimension(points, dimension::DEFAULT_LEVELS)?);
    out.insert(
        "correlation".into(),
        dimension::correlation_dimension(points, &radii, dimension::DEFAULT_MAX_PAIRS, seed)?,
    );
    Ok(out)
}

/// One line of the suite summary.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteRow {
    pub name: String,
    pub outcome: std::result::Result<SuiteRowData, String>,
    pub wall_time: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteRowData {
    pub box_dim: Option<f64>,
    pub r_squared: Option<f64>,
    pub lyapunov: Option<f64>,
    pub verdict: Option<String>,
}

impl SuiteRow {
    fn from_result(name: String, res: Result<ExperimentResult>, wall_time: f64) -> Self {
        let outcome = match res {
            Ok(r) => Ok(SuiteRowData {
                box_dim: r.box_dimension().map(|d| d.value),
                r_squared: r.box_dimension().map(|d| d.r_squared),
                lyapunov: r.stability.as_ref().map(|s| s.lyapunov_estimate),
                verdict: r.stability.as_ref().map(|s| s.verdict.to_string()),
            }),
            Err(e) => Err(e.to_string()),
        };
        SuiteRow { name, outcome, wall_time }
    }

    pub fn is_failure(&self) -> bool {
        self.outcome.is_err()
    }

    /// CSV line; failures leave the numeric columns empty and put
    /// `FAILED: <reason>` in the verdict column.
    pub fn csv_line(&self) -> String {
        let opt = |v: Option<f64>| v.map(|v| format!("{v:.6}")).unwrap_or_default();
        let (box_dim, r2, lyap, verdict) = match &self.outcome {
            Ok(d) => (opt(d.box_dim), opt(d.r_squared), opt(d.lyapunov), d.verdict.clone().unwrap_or_default()),
            Err(msg) => (String::new(), String::new(), String::new(), format!("FAILED: {}", msg.replace([',', '\n'], ";"))),
        };
        format!("{},{box_dim},{r2},{lyap},{verdict},{:.3}", self.name, self.wall_time)
    }
}

pub const SUMMARY_HEADER: &str = "name,box_dim,r_squared,lyapunov,verdict,wall_time";

#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub rows: Vec<SuiteRow>,
}

impl SuiteSummary {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(SUMMARY_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.csv_line());
            s.push('\n');
        }
        s
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.is_failure()).count()
    }
}

/// Config files (`*.json`) in `dir`, sorted by file name.
pub fn config_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir.display().to_string(), e))?.path();
        if path.is_file() && path.extension().is_some_and(|x| x == "json") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// Run already-loaded configs concurrently; rows keep input order.
pub fn run_configs(configs: &[ExperimentConfig], out_dir: &Path) -> Vec<SuiteRow> {
    configs
        .par_iter()
        .map(|cfg| {
            let start = Instant::now();
            let res = run_experiment(cfg, out_dir);
            SuiteRow::from_result(cfg.name.clone(), res, start.elapsed().as_secs_f64())
        })
        .collect()
}

/// Run every config in `config_dir` and write `out_dir/summary.csv`.
///
/// Per-experiment failures (parse, validation, divergence) become failure
/// rows; only writing the summary itself can fail.
pub fn run_suite(config_dir: &Path, out_dir: &Path, seed_override: Option<u64>) -> Result<SuiteSummary> {
    let files = config_files(config_dir)?;
    let rows: Vec<SuiteRow> = files
        .par_iter()
        .map(|path| {
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let start = Instant::now();
            match load_config(path) {
                Ok(mut cfg) => {
                    if let Some(seed) = seed_override {
                        cfg.seed = seed;
                    }
                    let res = run_experiment(&cfg, out_dir);
                    SuiteRow::from_result(cfg.name, res, start.elapsed().as_secs_f64())
                }
                Err(e) => SuiteRow::from_result(stem, Err(e), start.elapsed().as_secs_f64()),
            }
        })
        .collect();
    let summary = SuiteSummary { rows };
    let path = out_dir.join("summary.csv");
    render::write_text(&path, &summary.to_csv())?;
    Ok(summary)
}

pub const CASE_STUDY_ITERATIONS: usize = 100_000;
pub const CASE_STUDY_BURN_IN: usize = 100;
pub const CASE_STUDY_SEED: u64 = 42;

#[derive(Debug, Clone, Serialize)]
pub struct CaseStudyReport {
    pub seed: u64,
    pub classical_dim: f64,
    pub extended_dim: f64,
    pub delta: f64,
    pub classical: DimensionEstimate,
    pub extended: DimensionEstimate,
}

/// Classical Sierpiński chaos game versus the same maps plus `sier_nl`,
/// each `10^5` steps with 100 discarded. Writes both arms' images and
/// box-count data plus `report.json` into `out_dir/case_study/`.
pub fn case_study(out_dir: &Path, seed: u64) -> Result<CaseStudyReport> {
    let dir = out_dir.join("case_study");
    let arms = [("classical", RnifsSystem::sierpinski()), ("extended", RnifsSystem::sierpinski_nonlinear())];
    let clouds = arms
        .iter()
        .map(|(_, sys)| {
            system::generate_orbit(sys, system::DEFAULT_X0, CASE_STUDY_ITERATIONS, CASE_STUDY_BURN_IN, seed)
        })
        .collect::<Result<Vec<PointCloud>>>()?;

    let mut fits = Vec::new();
    for ((label, _), cloud) in arms.iter().zip(&clouds) {
        let pts = cloud.points();
        let grid = render::density_grid(pts, DENSITY_SIZE, DENSITY_SIZE)?;
        render::write_density_image(&grid, &dir.join(format!("{label}_density.ppm")))?;
        render::write_scatter_image(pts, SCATTER_SIZE, SCATTER_SIZE, &dir.join(format!("{label}_scatter.ppm")))?;
        let series = dimension::box_counts(pts, dimension::DEFAULT_LEVELS)?;
        series.write_csv(&dir.join(format!("{label}_boxcount.csv")))?;
        let fit = dimension::fit_dimension(&series)?;
        render::write_loglog_csv(&series, &fit, &dir.join(format!("{label}_loglog.csv")))?;
        fits.push(fit);
    }
    render::write_side_by_side(
        clouds[0].points(),
        clouds[1].points(),
        SCATTER_SIZE,
        &dir.join("comparison.ppm"),
    )?;

    let extended = fits.pop().expect("two arms");
    let classical = fits.pop().expect("two arms");
    let report = CaseStudyReport {
        seed,
        classical_dim: classical.value,
        extended_dim: extended.value,
        delta: extended.value - classical.value,
        classical,
        extended,
    };
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    render::write_text(&dir.join("report.json"), &text)?;
    Ok(report)
}
