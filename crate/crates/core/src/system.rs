//! Random IFS instances and seeded chaos-game orbits.
//!
//! An orbit iterates `x_{n+1} = f_{ω_n}(x_n)` with `ω_n` drawn i.i.d. from
//! the system's probability vector. `M` steps are taken and the first `T`
//! are discarded as burn-in, so a [`PointCloud`] always holds `M − T` points.

use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::csvio;
use crate::error::{Error, Result};
use crate::geometry::{Point2, Window};
use crate::maps::{self, MapDescriptor};
use crate::rng::Xoshiro256pp;

/// Tolerance on `|Σp − 1|`.
pub const PROB_SUM_TOL: f64 = 1e-12;

/// Iterates with a coordinate beyond this magnitude abort the orbit.
pub const DIVERGENCE_RADIUS: f64 = 100.0;

pub const DEFAULT_X0: Point2 = Point2::new(0.1, 0.1);
pub const DEFAULT_ITERATIONS: usize = 100_000;
pub const DEFAULT_BURN_IN: usize = 1_000;

/// Strictly positive weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityVector {
    p: Vec<f64>,
    #[serde(skip)]
    cumulative: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidProbabilities("empty vector".into()));
        }
        if let Some((i, v)) = p.iter().enumerate().find(|(_, v)| !(**v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidProbabilities(format!("entry {i} is {v}, must be > 0")));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidProbabilities(format!("entries sum to {sum}")));
        }
        let cumulative = p
            .iter()
            .scan(0.0, |acc, v| {
                *acc += v;
                Some(*acc)
            })
            .collect();
        Ok(ProbabilityVector { p, cumulative })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidProbabilities("empty vector".into()));
        }
        ProbabilityVector::new(vec![1.0 / n as f64; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// Inverse-CDF draw. Falls through to the last index when rounding
    /// leaves the cumulative sum just below the uniform draw.
    #[inline]
    pub fn sample(&self, rng: &mut Xoshiro256pp) -> usize {
        let u = rng.next_f64();
        self.cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.p.len() - 1)
    }
}

pub fn sample_index(probs: &ProbabilityVector, rng: &mut Xoshiro256pp) -> usize {
    probs.sample(rng)
}

/// Normalised Gamma(αᵢ, 1) variates (Marsaglia–Tsang).
pub fn dirichlet_probabilities(alphas: &[f64], rng: &mut Xoshiro256pp) -> Result<ProbabilityVector> {
    if alphas.is_empty() {
        return Err(Error::InvalidAlphas("no concentration parameters".into()));
    }
    if let Some(a) = alphas.iter().find(|a| !(**a > 0.0) || !a.is_finite()) {
        return Err(Error::InvalidAlphas(format!("{a} is not a positive finite number")));
    }
    loop {
        let draws: Vec<f64> = alphas.iter().map(|&a| rng.gamma(a)).collect();
        let total: f64 = draws.iter().sum();
        // all-underflow draws are possible for tiny alphas; redraw
        if total > 0.0 && draws.iter().all(|d| *d > 0.0) {
            let mut p: Vec<f64> = draws.iter().map(|d| d / total).collect();
            // absorb the rounding residue so the sum check is exact to 1 ulp
            let residue = 1.0 - p.iter().sum::<f64>();
            let imax = (0..p.len()).max_by(|&i, &j| p[i].total_cmp(&p[j])).unwrap_or(0);
            p[imax] += residue;
            return ProbabilityVector::new(p);
        }
    }
}

/// A finite family of maps with selection probabilities.
#[derive(Debug, Clone)]
pub struct RnifsSystem {
    maps: Vec<MapDescriptor>,
    probs: ProbabilityVector,
}

impl RnifsSystem {
    pub fn new(maps: Vec<MapDescriptor>, probs: ProbabilityVector) -> Result<Self> {
        if maps.is_empty() || maps.len() != probs.len() {
            return Err(Error::LengthMismatch { maps: maps.len(), probs: probs.len() });
        }
        Ok(RnifsSystem { maps, probs })
    }

    /// Build from registry ids and raw weights.
    pub fn from_ids(ids: &[&str], probs: &[f64]) -> Result<Self> {
        let maps = ids.iter().map(|id| maps::lookup(id)).collect::<Result<Vec<_>>>()?;
        if maps.len() != probs.len() {
            return Err(Error::LengthMismatch { maps: maps.len(), probs: probs.len() });
        }
        RnifsSystem::new(maps, ProbabilityVector::new(probs.to_vec())?)
    }

    /// Classical Sierpiński chaos game: `sier1..sier3`, each with probability 1/3.
    pub fn sierpinski() -> Self {
        RnifsSystem::from_ids(&["sier1", "sier2", "sier3"], &[1.0 / 3.0; 3]).expect("registry maps")
    }

    /// Sierpiński maps plus `sier_nl`, each with probability 1/4.
    pub fn sierpinski_nonlinear() -> Self {
        RnifsSystem::from_ids(&["sier1", "sier2", "sier3", "sier_nl"], &[0.25; 4]).expect("registry maps")
    }

    pub fn maps(&self) -> &[MapDescriptor] {
        &self.maps
    }

    pub fn probs(&self) -> &ProbabilityVector {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn map_ids(&self) -> Vec<&str> {
        self.maps.iter().map(|m| m.id()).collect()
    }

    /// Digest of everything that determines an orbit.
    pub fn orbit_digest(&self, x0: Point2, total: usize, burn_in: usize, seed: u64) -> String {
        let mut h = Sha256::new();
        for (m, p) in self.maps.iter().zip(self.probs.as_slice()) {
            h.update(m.id().as_bytes());
            h.update(b"=");
            h.update(m.formula().as_bytes());
            h.update(p.to_bits().to_le_bytes());
            h.update(b";");
        }
        for v in [x0.x.to_bits(), x0.y.to_bits(), total as u64, burn_in as u64, seed] {
            h.update(v.to_le_bytes());
        }
        hex::encode(&h.finalize()[..16])
    }
}

/// Outcome of [`validate`]: hard checks passed, plus advisory contraction data.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub n_maps: usize,
    pub probability_sum: f64,
    pub window: Window,
    pub lipschitz_estimates: Vec<f64>,
    /// Σ pᵢ ŝᵢ; below one means the system contracts on average over `window`.
    pub mean_factor: f64,
}

impl ValidationReport {
    pub fn contractive_on_average(&self) -> bool {
        self.mean_factor < 1.0
    }
}

/// Window used by [`validate`] for the advisory Lipschitz estimates.
pub const VALIDATION_WINDOW: Window = Window::square(-2.0, 2.0);

pub fn validate(sys: &RnifsSystem) -> Result<ValidationReport> {
    validate_on(sys, &VALIDATION_WINDOW, 2_000, 0)
}

pub fn validate_on(sys: &RnifsSystem, window: &Window, n_pairs: usize, seed: u64) -> Result<ValidationReport> {
    if sys.maps.len() != sys.probs.len() {
        return Err(Error::LengthMismatch { maps: sys.maps.len(), probs: sys.probs.len() });
    }
    // re-run the constructor check so hand-assembled vectors are covered too
    ProbabilityVector::new(sys.probs.p.clone())?;
    let lipschitz_estimates = sys
        .maps
        .iter()
        .enumerate()
        .map(|(i, m)| maps::estimate_lipschitz(m, window, n_pairs, seed.wrapping_add(i as u64)))
        .collect::<Result<Vec<_>>>()?;
    let mean_factor = lipschitz_estimates
        .iter()
        .zip(sys.probs.as_slice())
        .map(|(s, p)| s * p)
        .sum();
    Ok(ValidationReport {
        n_maps: sys.maps.len(),
        probability_sum: sys.probs.as_slice().iter().sum(),
        window: *window,
        lipschitz_estimates,
        mean_factor,
    })
}

/// An orbit sample with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<Point2>,
    seed: u64,
    config_digest: String,
    burn_in: usize,
    total_iterations: usize,
}

impl PointCloud {
    /// Wrap externally produced points (no burn-in, unknown seed).
    pub fn from_points(points: Vec<Point2>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite point {p:?}")));
        }
        Ok(PointCloud {
            total_iterations: points.len(),
            points,
            seed: 0,
            config_digest: "external".into(),
            burn_in: 0,
        })
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Point2> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn config_digest(&self) -> &str {
        &self.config_digest
    }

    pub fn burn_in(&self) -> usize {
        self.burn_in
    }

    pub fn total_iterations(&self) -> usize {
        self.total_iterations
    }

    /// `x,y` CSV, one point per line in iteration order.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_points_csv(&self.points, path)
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        PointCloud::from_points(read_points_csv(path)?)
    }
}

impl AsRef<[Point2]> for PointCloud {
    fn as_ref(&self) -> &[Point2] {
        &self.points
    }
}

pub fn write_points_csv(points: &[Point2], path: &Path) -> Result<()> {
    csvio::write_rows(
        path,
        "x,y",
        points.iter().map(|p| format!("{},{}", csvio::fmt_f64(p.x), csvio::fmt_f64(p.y))),
    )
}

pub fn read_points_csv(path: &Path) -> Result<Vec<Point2>> {
    Ok(csvio::read_numeric(path, &["x", "y"])?
        .into_iter()
        .map(|r| Point2::new(r[0], r[1]))
        .collect())
}

/// Run the chaos game: `total` steps from `x0`, the first `burn_in` discarded.
pub fn generate_orbit(sys: &RnifsSystem, x0: Point2, total: usize, burn_in: usize, seed: u64) -> Result<PointCloud> {
    if total <= burn_in {
        return Err(Error::InvalidArgument(format!(
            "total iterations ({total}) must exceed burn-in ({burn_in})"
        )));
    }
    if !x0.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite initial point {x0:?}")));
    }
    let mut rng = Xoshiro256pp::seed_from_u64(seed);
    let mut points = Vec::with_capacity(total - burn_in);
    let mut x = x0;
    for step in 0..total {
        let i = sys.probs.sample(&mut rng);
        x = sys.maps[i].apply(x);
        if !(x.x.abs() <= DIVERGENCE_RADIUS && x.y.abs() <= DIVERGENCE_RADIUS) {
            return Err(Error::Diverged { step: step + 1 });
        }
        if step >= burn_in {
            points.push(x);
        }
    }
    Ok(PointCloud {
        points,
        seed,
        config_digest: sys.orbit_digest(x0, total, burn_in, seed),
        burn_in,
        total_iterations: total,
    })
}
