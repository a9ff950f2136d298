//! Stability reports for the bundled systems' reference cases.

use rnifs::stability;
use rnifs::system::RnifsSystem;
use rnifs::Window;

fn main() -> rnifs::Result<()> {
    let unit = Window::square(0.0, 1.0);
    let cases = [
        ("sierpinski", RnifsSystem::sierpinski()),
        ("extended", RnifsSystem::sierpinski_nonlinear()),
        ("spiral", RnifsSystem::from_ids(&["f3", "f7", "f11"], &[0.4, 0.3, 0.3])?),
    ];
    for (name, sys) in cases {
        let r = stability::stability_report(&sys, &unit, 100_000, 3)?;
        println!(
            "{name:10} λ = {:+.4} ± {:.4}  {}  (Σpᵢsᵢ {:.3}, grid max {:+.3})",
            r.lyapunov_estimate, r.std_error, r.verdict, r.mean_contraction_factor, r.worst_grid_expectation
        );
    }
    Ok(())
}
