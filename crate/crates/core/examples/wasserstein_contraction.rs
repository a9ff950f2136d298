//! Push a Dirac through the Hutchinson operator and watch successive W1
//! distances shrink.

use rnifs::measures::{self, EmpiricalMeasure};
use rnifs::system::RnifsSystem;
use rnifs::{Point2, Xoshiro256pp};

fn main() -> rnifs::Result<()> {
    let mut rng = Xoshiro256pp::seed_from_u64(1);
    let start = EmpiricalMeasure::dirac(Point2::new(0.0, 0.0));

    for (label, sys) in [("sierpinski", RnifsSystem::sierpinski()), ("extended", RnifsSystem::sierpinski_nonlinear())] {
        println!("{label}");
        match measures::iterate_to_invariance(&sys, &start, 1e-3, 30, Some(measures::DEFAULT_CAP), &mut rng) {
            Ok((mu, trace)) => {
                for (k, d) in trace.step_distances.iter().enumerate() {
                    let how = if trace.exact[k] { "exact" } else { "sliced" };
                    println!("  step {:>2}  W1 {d:.6}  ({how})", k + 1);
                }
                println!("  {} atoms, factor bound {:.3}", mu.len(), trace.theoretical_factor);
            }
            Err(e) => println!("  {e}"),
        }
    }
    Ok(())
}
