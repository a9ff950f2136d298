//! Fractal-dimension estimators for planar point sets.
//!
//! Box-counting and information dimension share a dyadic grid anchored at
//! the data's bounding-box minimum: `ε_k = L / 2^k` with `L` the longer
//! bounding-box side. Fits are restricted to scales where the occupied-box
//! count `N(ε)` lies in `[10, n/10]`, which drops both the coarse scales
//! (a handful of boxes) and the saturated fine scales (one point per box).
//!
//! A cloud with zero extent (every point identical) has dimension 0 for all
//! three estimators.

use std::path::Path;

use serde::{Serialize, Serializer};

use crate::csvio;
use crate::error::{Error, Result};
use crate::geometry::{Point2, Window};
use crate::rng::Xoshiro256pp;
use crate::system::ProbabilityVector;

/// Lower bound on `N(ε)` for a scale to enter a fit.
pub const MIN_WINDOW_COUNT: usize = 10;
/// Upper bound on `N(ε)` as a fraction of the point count.
pub const MAX_WINDOW_FRACTION: f64 = 0.1;
pub const MIN_SCALES: usize = 3;
/// Levels beyond this would overflow the packed cell keys.
pub const MAX_LEVELS: usize = 30;

pub const DEFAULT_LEVELS: usize = 16;
pub const DEFAULT_MAX_PAIRS: usize = 2_000_000;
pub const DEFAULT_RADII: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Estimator {
    Box,
    Information,
    Correlation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimensionEstimate {
    pub value: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `(ε_min, ε_max)` (or radii) of the scales used in the fit.
    pub scale_window: (f64, f64),
    pub estimator: Estimator,
    pub n_scales: usize,
}

impl Serialize for DimensionEstimate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DimensionEstimate", 6)?;
        st.serialize_field("estimator", &self.estimator)?;
        st.serialize_field("value", &self.value)?;
        st.serialize_field("r_squared", &self.r_squared)?;
        st.serialize_field("window", &[self.scale_window.0, self.scale_window.1])?;
        st.serialize_field("intercept", &self.intercept)?;
        st.serialize_field("n_scales", &self.n_scales)?;
        st.end()
    }
}

impl DimensionEstimate {
    fn zero(estimator: Estimator, window: (f64, f64), n_scales: usize) -> Self {
        DimensionEstimate { value: 0.0, intercept: 0.0, r_squared: 1.0, scale_window: window, estimator, n_scales }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("estimate serializes")
    }
}

/// Ordinary least squares `y ≈ intercept + slope·x`; returns (slope, intercept, R²).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r2 = if syy > 0.0 { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 1.0 };
    (slope, intercept, r2)
}

/// Finest-level integer cell coordinates; coarser levels are right shifts.
struct DyadicGrid {
    cells: Vec<(u32, u32)>,
    side: f64,
    levels: usize,
}

impl DyadicGrid {
    fn new(points: &[Point2], levels: usize) -> Result<Self> {
        let bounds = Window::bounding(points).ok_or(Error::EmptyCloud)?;
        if !(MIN_SCALES..=MAX_LEVELS).contains(&levels) {
            return Err(Error::InvalidArgument(format!("levels must be in 3..={MAX_LEVELS}, got {levels}")));
        }
        let mut side = bounds.width().max(bounds.height());
        if side <= 0.0 {
            side = 1.0;
        }
        let top = (1u64 << levels) as f64;
        let last = (1u32 << levels) - 1;
        let cell = |v: f64, lo: f64| (((v - lo) / side * top).floor() as u64).min(last as u64) as u32;
        let cells = points.iter().map(|p| (cell(p.x, bounds.x_min), cell(p.y, bounds.y_min))).collect();
        Ok(DyadicGrid { cells, side, levels })
    }

    fn epsilon(&self, k: usize) -> f64 {
        self.side / (1u64 << k) as f64
    }

    /// Sorted packed cell keys at level `k` (1-based).
    fn keys(&self, k: usize) -> Vec<u64> {
        let shift = self.levels - k;
        let mut keys: Vec<u64> = self
            .cells
            .iter()
            .map(|&(ix, iy)| ((ix >> shift) as u64) << 32 | (iy >> shift) as u64)
            .collect();
        keys.sort_unstable();
        keys
    }
}

/// Occupied-box counts at dyadic scales.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxCountSeries {
    /// Strictly decreasing.
    pub epsilons: Vec<f64>,
    pub counts: Vec<usize>,
    pub n_points: usize,
}

impl BoxCountSeries {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        csvio::write_rows(
            path,
            "epsilon,count",
            self.epsilons.iter().zip(&self.counts).map(|(e, c)| format!("{},{c}", csvio::fmt_f64(*e))),
        )
    }

    fn in_window(&self, count: usize) -> bool {
        count >= MIN_WINDOW_COUNT && count as f64 <= MAX_WINDOW_FRACTION * self.n_points as f64
    }
}

/// Count occupied boxes at `ε_k = L / 2^k`, `k = 1..=levels`.
pub fn box_counts(points: &[Point2], levels: usize) -> Result<BoxCountSeries> {
    let grid = DyadicGrid::new(points, levels)?;
    let mut epsilons = Vec::with_capacity(levels);
    let mut counts = Vec::with_capacity(levels);
    for k in 1..=levels {
        let mut keys = grid.keys(k);
        keys.dedup();
        epsilons.push(grid.epsilon(k));
        counts.push(keys.len());
    }
    Ok(BoxCountSeries { epsilons, counts, n_points: points.len() })
}

/// Slope of `ln N(ε)` against `ln(1/ε)` over the saturation-guarded window.
pub fn fit_dimension(series: &BoxCountSeries) -> Result<DimensionEstimate> {
    let full = (
        series.epsilons.last().copied().unwrap_or(0.0),
        series.epsilons.first().copied().unwrap_or(0.0),
    );
    if series.counts.iter().all(|&c| c == 1) {
        return Ok(DimensionEstimate::zero(Estimator::Box, full, series.counts.len()));
    }
    let (xs, ys, eps): (Vec<f64>, Vec<f64>, Vec<f64>) = series
        .epsilons
        .iter()
        .zip(&series.counts)
        .filter(|(_, c)| series.in_window(**c))
        .map(|(e, c)| ((1.0 / e).ln(), (*c as f64).ln(), *e))
        .fold((vec![], vec![], vec![]), |mut acc, (x, y, e)| {
            acc.0.push(x);
            acc.1.push(y);
            acc.2.push(e);
            acc
        });
    if xs.len() < MIN_SCALES {
        return Err(Error::InsufficientScales { found: xs.len() });
    }
    let (value, intercept, r_squared) = linear_fit(&xs, &ys);
    Ok(DimensionEstimate {
        value,
        intercept,
        r_squared,
        scale_window: (eps[eps.len() - 1], eps[0]),
        estimator: Estimator::Box,
        n_scales: xs.len(),
    })
}

/// `fit_dimension(box_counts(points, levels))`.
pub fn box_dimension(points: &[Point2], levels: usize) -> Result<DimensionEstimate> {
    fit_dimension(&box_counts(points, levels)?)
}

/// Which orientation of the similarity-dimension ratio to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundForm {
    /// `(Σ pᵢ ln pᵢ) / (Σ pᵢ ln sᵢ)`: gives ln 3 / ln 2 for the Sierpiński
    /// triangle and reduces to `ln N / ln(1/s)` for equal weights and ratios.
    #[default]
    Standard,
    /// `(Σ pᵢ ln sᵢ) / (Σ pᵢ ln pᵢ)`, the reciprocal. It evaluates to
    /// ln 2 / ln 3 ≈ 0.631 on the Sierpiński triangle and is kept only for
    /// comparison against sources that print the ratio this way up.
    Inverted,
}

/// Similarity-dimension bound for a self-similar measure with weights
/// `probs` and contraction ratios `ratios` (open set condition assumed).
pub fn similarity_bound(probs: &ProbabilityVector, ratios: &[f64], form: BoundForm) -> Result<f64> {
    let p = probs.as_slice();
    if p.len() != ratios.len() {
        return Err(Error::DomainError(format!("{} weights but {} ratios", p.len(), ratios.len())));
    }
    if let Some(s) = ratios.iter().find(|s| !(**s > 0.0 && **s < 1.0)) {
        return Err(Error::DomainError(format!("ratio {s} outside (0, 1)")));
    }
    let entropy: f64 = p.iter().map(|&pi| pi * pi.ln()).sum();
    let log_ratio: f64 = p.iter().zip(ratios).map(|(&pi, &si)| pi * si.ln()).sum();
    match form {
        // + 0.0 turns the -0.0 of a zero-entropy system into 0
        BoundForm::Standard => Ok(entropy / log_ratio + 0.0),
        BoundForm::Inverted if entropy == 0.0 => {
            Err(Error::DomainError("zero entropy: the inverted ratio is undefined".into()))
        }
        BoundForm::Inverted => Ok(log_ratio / entropy),
    }
}

/// Shannon entropy of the occupied-cell frequencies at dyadic scales.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropySeries {
    pub epsilons: Vec<f64>,
    /// Nats.
    pub entropies: Vec<f64>,
    pub counts: Vec<usize>,
    pub n_points: usize,
}

impl EntropySeries {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        csvio::write_rows(
            path,
            "epsilon,entropy",
            self.epsilons
                .iter()
                .zip(&self.entropies)
                .map(|(e, h)| format!("{},{}", csvio::fmt_f64(*e), csvio::fmt_f64(*h))),
        )
    }
}

pub fn entropy_series(points: &[Point2], levels: usize) -> Result<EntropySeries> {
    let grid = DyadicGrid::new(points, levels)?;
    let n = points.len() as f64;
    let mut series = EntropySeries {
        epsilons: Vec::with_capacity(levels),
        entropies: Vec::with_capacity(levels),
        counts: Vec::with_capacity(levels),
        n_points: points.len(),
    };
    for k in 1..=levels {
        let keys = grid.keys(k);
        let (mut h, mut occupied) = (0.0, 0usize);
        for run in keys.chunk_by(|a, b| a == b) {
            let q = run.len() as f64 / n;
            h -= q * q.ln();
            occupied += 1;
        }
        series.epsilons.push(grid.epsilon(k));
        series.entropies.push(h.max(0.0));
        series.counts.push(occupied);
    }
    Ok(series)
}

/// Slope of `H(ε)` against `ln(1/ε)` over the box-count window.
pub fn information_dimension(points: &[Point2], levels: usize) -> Result<DimensionEstimate> {
    if points.len() < 100 {
        return Err(Error::InvalidArgument(format!("need at least 100 points, got {}", points.len())));
    }
    let s = entropy_series(points, levels)?;
    if s.counts.iter().all(|&c| c == 1) {
        return Ok(DimensionEstimate::zero(
            Estimator::Information,
            (s.epsilons[levels - 1], s.epsilons[0]),
            levels,
        ));
    }
    let upper = MAX_WINDOW_FRACTION * s.n_points as f64;
    let idx: Vec<usize> = (0..levels)
        .filter(|&k| s.counts[k] >= MIN_WINDOW_COUNT && s.counts[k] as f64 <= upper)
        .collect();
    if idx.len() < MIN_SCALES {
        return Err(Error::InsufficientScales { found: idx.len() });
    }
    let xs: Vec<f64> = idx.iter().map(|&k| (1.0 / s.epsilons[k]).ln()).collect();
    let ys: Vec<f64> = idx.iter().map(|&k| s.entropies[k]).collect();
    let (value, intercept, r_squared) = linear_fit(&xs, &ys);
    Ok(DimensionEstimate {
        value,
        intercept,
        r_squared,
        scale_window: (s.epsilons[*idx.last().unwrap()], s.epsilons[idx[0]]),
        estimator: Estimator::Information,
        n_scales: idx.len(),
    })
}

/// Correlation integral `C(r)` at each radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationSeries {
    pub radii: Vec<f64>,
    pub correlation: Vec<f64>,
    /// Number of point pairs behind each `C(r)`.
    pub n_pairs: usize,
}

impl CorrelationSeries {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        csvio::write_rows(
            path,
            "radius,correlation",
            self.radii
                .iter()
                .zip(&self.correlation)
                .map(|(r, c)| format!("{},{}", csvio::fmt_f64(*r), csvio::fmt_f64(*c))),
        )
    }
}

/// `count` log-spaced radii from the bounding-box diagonal down to
/// `1e-4` of it.
pub fn default_radii(points: &[Point2], count: usize) -> Vec<f64> {
    let diag = Window::bounding(points).map(|w| w.width().hypot(w.height())).unwrap_or(0.0);
    let diag = if diag > 0.0 { diag } else { 1.0 };
    let count = count.max(2);
    (0..count)
        .map(|i| diag * 10f64.powf(-4.0 * i as f64 / (count - 1) as f64))
        .collect()
}

/// Pairwise distances: all pairs when there are at most `max_pairs` of
/// them, otherwise `max_pairs` uniformly drawn pairs `i ≠ j`.
fn sampled_distances(points: &[Point2], max_pairs: usize, seed: u64) -> Vec<f64> {
    let n = points.len();
    let all = n * (n - 1) / 2;
    let mut d = if all <= max_pairs {
        let mut d = Vec::with_capacity(all);
        for i in 0..n {
            for j in i + 1..n {
                d.push(points[i].distance(points[j]));
            }
        }
        d
    } else {
        let mut rng = Xoshiro256pp::seed_from_u64(seed);
        (0..max_pairs)
            .map(|_| {
                let i = rng.below(n as u64) as usize;
                let mut j = rng.below(n as u64 - 1) as usize;
                if j >= i {
                    j += 1;
                }
                points[i].distance(points[j])
            })
            .collect()
    };
    d.sort_unstable_by(f64::total_cmp);
    d
}

/// Fraction of sampled pairs closer than each radius.
pub fn correlation_series(points: &[Point2], radii: &[f64], max_pairs: usize, seed: u64) -> Result<CorrelationSeries> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument("need at least two points".into()));
    }
    if max_pairs == 0 {
        return Err(Error::InvalidArgument("max_pairs must be at least 1".into()));
    }
    if radii.iter().any(|r| !(*r > 0.0)) || radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("radii must be positive and strictly decreasing".into()));
    }
    let d = sampled_distances(points, max_pairs, seed);
    let total = d.len() as f64;
    let correlation = radii.iter().map(|&r| d.partition_point(|&x| x < r) as f64 / total).collect();
    Ok(CorrelationSeries { radii: radii.to_vec(), correlation, n_pairs: d.len() })
}

/// Grassberger–Procaccia: slope of `ln C(r)` against `ln r` over radii
/// with `100 / pairs ≤ C(r) ≤ 0.1`.
pub fn correlation_dimension(points: &[Point2], radii: &[f64], max_pairs: usize, seed: u64) -> Result<DimensionEstimate> {
    if points.len() < 100 {
        return Err(Error::InvalidArgument(format!("need at least 100 points, got {}", points.len())));
    }
    let bounds = Window::bounding(points).ok_or(Error::EmptyCloud)?;
    if bounds.width() == 0.0 && bounds.height() == 0.0 {
        let full = (radii.last().copied().unwrap_or(0.0), radii.first().copied().unwrap_or(0.0));
        return Ok(DimensionEstimate::zero(Estimator::Correlation, full, radii.len()));
    }
    let s = correlation_series(points, radii, max_pairs, seed)?;
    let lower = 100.0 / s.n_pairs as f64;
    let idx: Vec<usize> = (0..radii.len())
        .filter(|&k| s.correlation[k] >= lower && s.correlation[k] <= 0.1 && s.correlation[k] > 0.0)
        .collect();
    if idx.len() < MIN_SCALES {
        return Err(Error::InsufficientScales { found: idx.len() });
    }
    let xs: Vec<f64> = idx.iter().map(|&k| radii[k].ln()).collect();
    let ys: Vec<f64> = idx.iter().map(|&k| s.correlation[k].ln()).collect();
    let (value, intercept, r_squared) = linear_fit(&xs, &ys);
    Ok(DimensionEstimate {
        value,
        intercept,
        r_squared,
        scale_window: (radii[*idx.last().unwrap()], radii[idx[0]]),
        estimator: Estimator::Correlation,
        n_scales: idx.len(),
    })
}

/// Data for a log-log regression plot, in the orientation of its fit.
pub trait LogLogSeries {
    /// `(x, y)` pairs; `x` is `ln(1/ε)` for grid estimators, `ln r` for correlation.
    fn loglog_points(&self) -> Vec<(f64, f64)>;
}

impl LogLogSeries for BoxCountSeries {
    fn loglog_points(&self) -> Vec<(f64, f64)> {
        self.epsilons
            .iter()
            .zip(&self.counts)
            .map(|(e, c)| ((1.0 / e).ln(), (*c as f64).ln()))
            .collect()
    }
}

impl LogLogSeries for EntropySeries {
    fn loglog_points(&self) -> Vec<(f64, f64)> {
        self.epsilons.iter().zip(&self.entropies).map(|(e, h)| ((1.0 / e).ln(), *h)).collect()
    }
}

impl LogLogSeries for CorrelationSeries {
    fn loglog_points(&self) -> Vec<(f64, f64)> {
        self.radii
            .iter()
            .zip(&self.correlation)
            .filter(|(_, c)| **c > 0.0)
            .map(|(r, c)| (r.ln(), c.ln()))
            .collect()
    }
}
