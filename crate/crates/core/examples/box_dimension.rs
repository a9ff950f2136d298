//! Box, information and correlation dimensions of a Sierpiński orbit, with
//! the similarity bound for comparison.

use rnifs::dimension::{self, BoundForm};
use rnifs::system::{generate_orbit, RnifsSystem, DEFAULT_X0};

fn main() -> rnifs::Result<()> {
    let sys = RnifsSystem::sierpinski();
    let cloud = generate_orbit(&sys, DEFAULT_X0, 100_000, 100, 7)?;
    let pts = cloud.points();

    let series = dimension::box_counts(pts, dimension::DEFAULT_LEVELS)?;
    for (eps, n) in series.epsilons.iter().zip(&series.counts).take(10) {
        println!("eps {eps:>10.3e}  N {n}");
    }
    let radii = dimension::default_radii(pts, dimension::DEFAULT_RADII);
    let estimates = [
        dimension::fit_dimension(&series)?,
        dimension::information_dimension(pts, dimension::DEFAULT_LEVELS)?,
        dimension::correlation_dimension(pts, &radii, dimension::DEFAULT_MAX_PAIRS, 7)?,
    ];
    for e in &estimates {
        println!("{:?}: {:.4} over {} scales, R² {:.4}", e.estimator, e.value, e.n_scales, e.r_squared);
    }
    let bound = dimension::similarity_bound(sys.probs(), &[0.5; 3], BoundForm::Standard)?;
    println!("similarity bound {bound:.4}");
    Ok(())
}
