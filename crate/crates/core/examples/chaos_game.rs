//! Run the chaos game on a registry system and dump the orbit.
//!
//! cargo run --release --example chaos_game -- f3,f7,f11 0.4,0.3,0.3 out.csv

use rnifs::system::{self, RnifsSystem};
use std::path::PathBuf;

fn main() -> rnifs::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let ids: Vec<&str> = args.first().map_or("sier1,sier2,sier3", String::as_str).split(',').collect();
    let probs: Vec<f64> = match args.get(1) {
        Some(p) => p.split(',').map(|v| v.parse().expect("numeric probability")).collect(),
        None => vec![1.0 / ids.len() as f64; ids.len()],
    };
    let out = PathBuf::from(args.get(2).map_or("orbit.csv", String::as_str));

    let sys = RnifsSystem::from_ids(&ids, &probs)?;
    let report = system::validate(&sys)?;
    println!("Lipschitz estimates on [-2,2]^2: {:?}", report.lipschitz_estimates);
    println!("mean factor {:.3} (contractive on average: {})", report.mean_factor, report.contractive_on_average());

    let cloud = system::generate_orbit(&sys, system::DEFAULT_X0, 100_000, 1_000, 42)?;
    cloud.write_csv(&out)?;
    println!("{} points -> {}", cloud.len(), out.display());
    Ok(())
}
