//! Average-contraction diagnostics.
//!
//! Two estimators: the orbit average of `ln ‖Df_ω(x)‖` (a Lyapunov-type
//! exponent, spectral norm) and the mean Lipschitz factor `Σ pᵢ ŝᵢ`. A
//! negative exponent and a factor below one both indicate the system
//! contracts on average.

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Point2, Window};
use crate::maps;
use crate::rng::Xoshiro256pp;
use crate::system::{RnifsSystem, DIVERGENCE_RADIUS};

/// Orbit steps discarded before [`lyapunov_exponent`] starts averaging.
pub const LYAPUNOV_BURN_IN: usize = 1_000;

/// Resolution of the worst-point grid in [`stability_report`].
pub const GRID_SIDE: usize = 32;

/// Samples per map for the Lipschitz estimates in [`stability_report`].
pub const LIPSCHITZ_SAMPLES: usize = 2_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    ContractiveOnAverage,
    Indeterminate,
    ExpansiveOnAverage,
}

impl Verdict {
    /// Two-standard-error rule on the exponent estimate.
    pub fn classify(estimate: f64, std_error: f64) -> Verdict {
        if estimate + 2.0 * std_error < 0.0 {
            Verdict::ContractiveOnAverage
        } else if estimate - 2.0 * std_error > 0.0 {
            Verdict::ExpansiveOnAverage
        } else {
            Verdict::Indeterminate
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ContractiveOnAverage => "ContractiveOnAverage",
            Verdict::Indeterminate => "Indeterminate",
            Verdict::ExpansiveOnAverage => "ExpansiveOnAverage",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LyapunovEstimate {
    /// Nats per iteration.
    pub estimate: f64,
    pub std_error: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub lyapunov_estimate: f64,
    pub std_error: f64,
    pub mean_contraction_factor: f64,
    pub per_map_lipschitz: Vec<f64>,
    /// Largest single-step expectation `Σ pᵢ ln ‖Dfᵢ(x)‖` over a grid on the window.
    pub worst_grid_expectation: f64,
    pub verdict: Verdict,
}

impl StabilityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let mut text = self.to_json();
        text.push('\n');
        crate::render::write_text(path, &text)
    }
}

/// Average `ln ‖Df_{ωₖ}(xₖ)‖` over `n` orbit steps after [`LYAPUNOV_BURN_IN`].
///
/// Uses Welford accumulation so a constant sequence yields its value with
/// zero variance.
pub fn lyapunov_exponent(sys: &RnifsSystem, x0: Point2, n: usize, seed: u64) -> Result<LyapunovEstimate> {
    if n < 100 {
        return Err(Error::InvalidArgument(format!("need at least 100 steps, got {n}")));
    }
    let mut rng = Xoshiro256pp::seed_from_u64(seed);
    let mut x = x0;
    let (mut mean, mut m2) = (0.0f64, 0.0f64);
    for step in 0..LYAPUNOV_BURN_IN + n {
        let i = sys.probs().sample(&mut rng);
        let map = &sys.maps()[i];
        if step >= LYAPUNOV_BURN_IN {
            let norm = map.jacobian(x)?.spectral_norm();
            if norm == 0.0 {
                return Err(Error::LogOfZero { step: step + 1 });
            }
            let v = norm.ln();
            let k = (step - LYAPUNOV_BURN_IN + 1) as f64;
            let delta = v - mean;
            mean += delta / k;
            m2 += delta * (v - mean);
        }
        x = map.apply(x);
        if !(x.x.abs() <= DIVERGENCE_RADIUS && x.y.abs() <= DIVERGENCE_RADIUS) {
            return Err(Error::Diverged { step: step + 1 });
        }
    }
    let variance = if n > 1 { m2 / (n - 1) as f64 } else { 0.0 };
    Ok(LyapunovEstimate { estimate: mean, std_error: (variance / n as f64).sqrt(), n })
}

/// Per-map Lipschitz estimates over `window`, seeded `seed + i`.
pub fn per_map_lipschitz(sys: &RnifsSystem, window: &Window, n_samples: usize, seed: u64) -> Result<Vec<f64>> {
    sys.maps()
        .iter()
        .enumerate()
        .map(|(i, m)| maps::estimate_lipschitz(m, window, n_samples, seed.wrapping_add(i as u64)))
        .collect()
}

/// `Σ pᵢ ŝᵢ`, each `ŝᵢ` an empirical Lipschitz constant over `window`.
pub fn mean_contraction_factor(sys: &RnifsSystem, window: &Window, n_samples: usize, seed: u64) -> Result<f64> {
    let s = per_map_lipschitz(sys, window, n_samples, seed)?;
    Ok(weighted_factor(sys.probs().as_slice(), &s))
}

pub fn weighted_factor(probs: &[f64], lipschitz: &[f64]) -> f64 {
    probs.iter().zip(lipschitz).map(|(p, s)| p * s).sum()
}

/// Max over a `GRID_SIDE²` grid of cell centres of `Σ pᵢ ln ‖Dfᵢ(x)‖`.
pub fn worst_grid_expectation(sys: &RnifsSystem, window: &Window) -> Result<f64> {
    let mut worst = f64::NEG_INFINITY;
    for gy in 0..GRID_SIDE {
        for gx in 0..GRID_SIDE {
            let x = window.lerp((gx as f64 + 0.5) / GRID_SIDE as f64, (gy as f64 + 0.5) / GRID_SIDE as f64);
            let mut e = 0.0;
            for (m, p) in sys.maps().iter().zip(sys.probs().as_slice()) {
                e += p * m.jacobian(x)?.spectral_norm().ln();
            }
            worst = worst.max(e);
        }
    }
    Ok(worst)
}

/// Lyapunov estimate from `x0 = (0.1, 0.1)` plus Lipschitz data on `window`.
pub fn stability_report(sys: &RnifsSystem, window: &Window, orbit_length: usize, seed: u64) -> Result<StabilityReport> {
    stability_report_from(sys, crate::system::DEFAULT_X0, window, orbit_length, seed)
}

/// [`stability_report`] with an explicit orbit start. Systems that expand on
/// average leave the divergence guard from a generic start, so their exponent
/// can only be measured from a bounded orbit (e.g. a common fixed point).
pub fn stability_report_from(
    sys: &RnifsSystem,
    x0: Point2,
    window: &Window,
    orbit_length: usize,
    seed: u64,
) -> Result<StabilityReport> {
    let lyap = lyapunov_exponent(sys, x0, orbit_length, seed)?;
    let per_map = per_map_lipschitz(sys, window, LIPSCHITZ_SAMPLES, seed)?;
    Ok(StabilityReport {
        lyapunov_estimate: lyap.estimate,
        std_error: lyap.std_error,
        mean_contraction_factor: weighted_factor(sys.probs().as_slice(), &per_map),
        per_map_lipschitz: per_map,
        worst_grid_expectation: worst_grid_expectation(sys, window)?,
        verdict: Verdict::classify(lyap.estimate, lyap.std_error),
    })
}
