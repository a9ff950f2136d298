//! Finite weighted measures on the plane and the Hutchinson operator
//! `W(μ) = Σ pᵢ · (fᵢ # μ)` acting on them.
//!
//! Distances between iterates use the Wasserstein-1 metric with Euclidean
//! ground cost: exactly for small supports, otherwise through the sliced
//! estimator (an average of one-dimensional W1 over random directions).

pub mod transport;

use std::path::Path;

use serde::Serialize;

use crate::csvio;
use crate::error::{Error, Result};
use crate::geometry::{Point2, Window};
use crate::maps::{self, MapDescriptor};
use crate::rng::Xoshiro256pp;
use crate::system::RnifsSystem;

/// Tolerance on `|Σ weights − 1|`.
pub const MASS_TOL: f64 = 1e-9;

/// Largest combined support the exact solver accepts for unequal weights.
pub const EXACT_TRANSPORT_LIMIT: usize = 512;

/// Largest per-side support the assignment solver accepts for equal-size
/// uniform measures.
pub const EXACT_ASSIGNMENT_LIMIT: usize = 1024;

/// Support size at which [`hutchinson_step`] resamples by default.
pub const DEFAULT_CAP: usize = 4096;

pub const DEFAULT_PROJECTIONS: usize = 128;

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    support: Vec<Point2>,
    weights: Vec<f64>,
}

impl EmpiricalMeasure {
    pub fn new(support: Vec<Point2>, weights: Vec<f64>) -> Result<Self> {
        if support.len() != weights.len() {
            return Err(Error::InvalidArgument(format!(
                "{} atoms but {} weights",
                support.len(),
                weights.len()
            )));
        }
        if support.is_empty() {
            return Err(Error::InvalidArgument("measure has no atoms".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidArgument(format!("invalid weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidArgument(format!("weights sum to {total}")));
        }
        if let Some(p) = support.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite atom {p:?}")));
        }
        Ok(EmpiricalMeasure { support, weights })
    }

    pub fn dirac(p: Point2) -> Self {
        EmpiricalMeasure { support: vec![p], weights: vec![1.0] }
    }

    /// Equal weights on the given atoms.
    pub fn uniform(support: Vec<Point2>) -> Result<Self> {
        let n = support.len();
        EmpiricalMeasure::new(support, vec![1.0 / n as f64; n])
    }

    pub fn support(&self) -> &[Point2] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    fn is_uniform(&self) -> bool {
        let w = 1.0 / self.weights.len() as f64;
        self.weights.iter().all(|v| (v - w).abs() <= 1e-12 * w.max(1e-300) + 1e-15)
    }

    /// `x,y,weight` CSV.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        csvio::write_rows(
            path,
            "x,y,weight",
            self.support.iter().zip(&self.weights).map(|(p, w)| {
                format!("{},{},{}", csvio::fmt_f64(p.x), csvio::fmt_f64(p.y), csvio::fmt_f64(*w))
            }),
        )
    }
}

/// Image measure `m # μ`: atoms mapped pointwise, weights unchanged.
pub fn pushforward(mu: &EmpiricalMeasure, m: &MapDescriptor) -> Result<EmpiricalMeasure> {
    let support = mu.support.iter().map(|&p| m.eval(p)).collect::<Result<Vec<_>>>()?;
    Ok(EmpiricalMeasure { support, weights: mu.weights.clone() })
}

/// One application of the Hutchinson operator.
///
/// The exact mixture has `N · |support|` atoms (map-major order, weights
/// `pᵢ · wⱼ`). When that exceeds `cap` it is reduced to `cap` equally
/// weighted atoms by systematic resampling. `cap = None` never resamples.
pub fn hutchinson_step(
    sys: &RnifsSystem,
    mu: &EmpiricalMeasure,
    cap: Option<usize>,
    rng: &mut Xoshiro256pp,
) -> Result<EmpiricalMeasure> {
    if cap == Some(0) {
        return Err(Error::InvalidCap);
    }
    let n = sys.len() * mu.len();
    let mut support = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (m, &p) in sys.maps().iter().zip(sys.probs().as_slice()) {
        for (&x, &w) in mu.support.iter().zip(&mu.weights) {
            support.push(m.eval(x)?);
            weights.push(p * w);
        }
    }
    let exact = EmpiricalMeasure { support, weights };
    match cap {
        Some(cap) if exact.len() > cap => Ok(systematic_resample(&exact, cap, rng)),
        _ => Ok(exact),
    }
}

/// `k` equally weighted atoms chosen at the stratified positions
/// `(u + j) / k` of the cumulative weight, `u ~ U[0,1)`.
///
/// Atoms are visited in a random order. Hutchinson mixtures are laid out
/// map-major, so a fixed order would make the stride pick the same
/// innermost map every time.
pub fn systematic_resample(mu: &EmpiricalMeasure, k: usize, rng: &mut Xoshiro256pp) -> EmpiricalMeasure {
    let mut order: Vec<usize> = (0..mu.len()).collect();
    rng.shuffle(&mut order);
    let total = mu.total_mass();
    let u = rng.next_f64();
    let mut support = Vec::with_capacity(k);
    let mut cum = mu.weights[order[0]] / total;
    let mut i = 0;
    for j in 0..k {
        let target = (u + j as f64) / k as f64;
        while cum <= target && i + 1 < mu.len() {
            i += 1;
            cum += mu.weights[order[i]] / total;
        }
        support.push(mu.support[order[i]]);
    }
    EmpiricalMeasure { support, weights: vec![1.0 / k as f64; k] }
}

fn cost_matrix(a: &[Point2], b: &[Point2]) -> Vec<f64> {
    a.iter().flat_map(|p| b.iter().map(move |q| p.distance(*q))).collect()
}

/// Whether [`wasserstein1_exact`] accepts this pair.
pub fn exact_solver_applies(mu: &EmpiricalMeasure, nu: &EmpiricalMeasure) -> bool {
    (mu.len() == nu.len() && mu.len() <= EXACT_ASSIGNMENT_LIMIT && mu.is_uniform() && nu.is_uniform())
        || mu.len() + nu.len() <= EXACT_TRANSPORT_LIMIT
}

/// Exact W1 with Euclidean ground cost.
///
/// Equal-size uniform measures reduce to a minimum-cost assignment (up to
/// [`EXACT_ASSIGNMENT_LIMIT`] atoms per side). Otherwise a dense
/// transportation problem is solved, limited to [`EXACT_TRANSPORT_LIMIT`]
/// combined atoms; larger inputs need [`wasserstein1_sliced`].
pub fn wasserstein1_exact(mu: &EmpiricalMeasure, nu: &EmpiricalMeasure) -> Result<f64> {
    let n = mu.len();
    if n == nu.len() && n <= EXACT_ASSIGNMENT_LIMIT && mu.is_uniform() && nu.is_uniform() {
        let cost = cost_matrix(&mu.support, &nu.support);
        let assignment = transport::min_cost_assignment(&cost, n);
        let total: f64 = assignment.iter().enumerate().map(|(i, &j)| cost[i * n + j]).sum();
        return Ok(total / n as f64);
    }
    let atoms = mu.len() + nu.len();
    if atoms > EXACT_TRANSPORT_LIMIT {
        return Err(Error::SupportTooLarge { atoms, limit: EXACT_TRANSPORT_LIMIT });
    }
    let cost = cost_matrix(&mu.support, &nu.support);
    Ok(transport::transport_cost(&mu.weights, &nu.weights, &cost))
}

/// W1 between two weighted samples on the real line: `∫ |F − G|`.
pub fn wasserstein1_line(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.0.total_cmp(&y.0));
    b.sort_by(|x, y| x.0.total_cmp(&y.0));
    let (mut i, mut j) = (0, 0);
    let (mut fa, mut fb) = (0.0f64, 0.0f64);
    let mut total = 0.0;
    let mut prev: Option<f64> = None;
    while i < a.len() || j < b.len() {
        let x = match (a.get(i), b.get(j)) {
            (Some(p), Some(q)) => p.0.min(q.0),
            (Some(p), None) => p.0,
            (None, Some(q)) => q.0,
            (None, None) => unreachable!(),
        };
        if let Some(px) = prev {
            total += (fa - fb).abs() * (x - px);
        }
        while i < a.len() && a[i].0 == x {
            fa += a[i].1;
            i += 1;
        }
        while j < b.len() && b[j].0 == x {
            fb += b[j].1;
            j += 1;
        }
        prev = Some(x);
    }
    total
}

/// Sliced W1: mean one-dimensional W1 of the projections onto
/// `n_projections` uniformly random unit directions.
pub fn wasserstein1_sliced(
    mu: &EmpiricalMeasure,
    nu: &EmpiricalMeasure,
    n_projections: usize,
    rng: &mut Xoshiro256pp,
) -> Result<f64> {
    if n_projections == 0 {
        return Err(Error::InvalidArgument("n_projections must be at least 1".into()));
    }
    let project = |m: &EmpiricalMeasure, dir: Point2| -> Vec<(f64, f64)> {
        m.support.iter().zip(&m.weights).map(|(p, w)| (p.dot(dir), *w)).collect()
    };
    let mut total = 0.0;
    for _ in 0..n_projections {
        let theta = std::f64::consts::PI * rng.next_f64();
        let dir = Point2::new(theta.cos(), theta.sin());
        total += wasserstein1_line(&project(mu, dir), &project(nu, dir));
    }
    Ok(total / n_projections as f64)
}

/// Exact W1 when the solver accepts the pair, otherwise sliced.
/// The flag reports which was used.
pub fn wasserstein1_auto(
    mu: &EmpiricalMeasure,
    nu: &EmpiricalMeasure,
    rng: &mut Xoshiro256pp,
) -> Result<(f64, bool)> {
    if exact_solver_applies(mu, nu) {
        Ok((wasserstein1_exact(mu, nu)?, true))
    } else {
        Ok((wasserstein1_sliced(mu, nu, DEFAULT_PROJECTIONS, rng)?, false))
    }
}

/// Distances between successive Hutchinson iterates.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ConvergenceTrace {
    /// `step_distances[k] = W1(μ_{k+1}, μ_k)`.
    pub step_distances: Vec<f64>,
    /// `ratios[k] = step_distances[k + 1] / step_distances[k]`.
    pub ratios: Vec<f64>,
    /// Whether each distance came from the exact solver.
    pub exact: Vec<bool>,
    /// Σ pᵢ ŝᵢ over the window spanned by the initial measure.
    pub theoretical_factor: f64,
}

impl ConvergenceTrace {
    fn push(&mut self, d: f64, exact: bool) {
        if let Some(&prev) = self.step_distances.last() {
            self.ratios.push(if prev > 0.0 { d / prev } else { f64::NAN });
        }
        self.step_distances.push(d);
        self.exact.push(exact);
    }

    /// `step,distance,ratio` CSV; the first row has an empty ratio.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        csvio::write_rows(
            path,
            "step,distance,ratio",
            self.step_distances.iter().enumerate().map(|(k, d)| {
                let ratio = k.checked_sub(1).map(|r| csvio::fmt_f64(self.ratios[r])).unwrap_or_default();
                format!("{},{},{}", k + 1, csvio::fmt_f64(*d), ratio)
            }),
        )
    }
}

/// Σ pᵢ ŝᵢ with ŝᵢ estimated over the bounding box of `mu0`, padded by at
/// least 0.5 per side so a Dirac still gets a proper window.
fn trace_factor(sys: &RnifsSystem, mu0: &EmpiricalMeasure) -> Result<f64> {
    let window = Window::bounding(mu0.support()).expect("non-empty measure").padded(0.1, 0.5);
    let mut factor = 0.0;
    for (i, (m, p)) in sys.maps().iter().zip(sys.probs().as_slice()).enumerate() {
        factor += p * maps::estimate_lipschitz(m, &window, 1_000, i as u64)?;
    }
    Ok(factor)
}

/// Iterate the Hutchinson operator from `mu0` until two successive iterates
/// are closer than `tol` in W1.
///
/// Gives up after `max_steps` with [`Error::NoConvergence`], which carries
/// the trace for inspection.
pub fn iterate_to_invariance(
    sys: &RnifsSystem,
    mu0: &EmpiricalMeasure,
    tol: f64,
    max_steps: usize,
    cap: Option<usize>,
    rng: &mut Xoshiro256pp,
) -> Result<(EmpiricalMeasure, ConvergenceTrace)> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let mut trace = ConvergenceTrace { theoretical_factor: trace_factor(sys, mu0)?, ..Default::default() };
    let mut current = mu0.clone();
    for _ in 0..max_steps {
        let next = hutchinson_step(sys, &current, cap, rng)?;
        let (d, exact) = wasserstein1_auto(&next, &current, rng)?;
        trace.push(d, exact);
        current = next;
        if d < tol {
            return Ok((current, trace));
        }
    }
    Err(Error::NoConvergence { max_steps, trace: Box::new(trace) })
}
