//! Random nonlinear iterated function systems.
//!
//! A system is a finite list of planar maps plus a probability vector. The
//! crate runs the chaos game on such systems, pushes measures through the
//! Hutchinson operator and tracks their Wasserstein-1 distances, estimates
//! the top Lyapunov exponent, measures box, information and correlation
//! dimensions of the resulting point clouds, and renders them.
//!
//! ```
//! use rnifs::{dimension, system};
//!
//! let sys = system::RnifsSystem::sierpinski();
//! let cloud = system::generate_orbit(&sys, system::DEFAULT_X0, 20_000, 100, 7).unwrap();
//! let d = dimension::box_dimension(cloud.points(), dimension::DEFAULT_LEVELS).unwrap();
//! assert!((d.value - 1.585).abs() < 0.1);
//! ```

mod csvio;
pub mod dimension;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod maps;
pub mod measures;
pub mod render;
pub mod rng;
pub mod stability;
pub mod system;

pub use dimension::{DimensionEstimate, Estimator};
pub use error::{Error, Result};
pub use geometry::{Mat2, Point2, Window};
pub use harness::{ExperimentConfig, ExperimentResult};
pub use maps::MapDescriptor;
pub use measures::EmpiricalMeasure;
pub use rng::Xoshiro256pp;
pub use stability::{StabilityReport, Verdict};
pub use system::{PointCloud, ProbabilityVector, RnifsSystem};
