//! Classical Sierpiński triangle against the same maps plus the nonlinear
//! fourth map. Writes images and box-count data under `case_study_out/`.

use std::path::Path;

fn main() -> rnifs::Result<()> {
    let seed = std::env::args().nth(1).map_or(42, |s| s.parse().expect("integer seed"));
    let r = rnifs::harness::case_study(Path::new("case_study_out"), seed)?;
    println!("classical  {:.4}  (R² {:.4})", r.classical_dim, r.classical.r_squared);
    println!("extended   {:.4}  (R² {:.4})", r.extended_dim, r.extended.r_squared);
    println!("delta      {:+.4}", r.delta);
    Ok(())
}
