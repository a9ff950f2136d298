//! Random probability vectors from a Dirichlet prior, and an experiment
//! config that draws its weights that way.

use rnifs::harness::ExperimentConfig;
use rnifs::system::dirichlet_probabilities;
use rnifs::Xoshiro256pp;

fn main() -> rnifs::Result<()> {
    let mut rng = Xoshiro256pp::seed_from_u64(11);
    for alphas in [[1.0, 1.0, 1.0], [0.2, 0.2, 0.2], [50.0, 20.0, 10.0]] {
        let p = dirichlet_probabilities(&alphas, &mut rng)?;
        println!("{alphas:?} -> {:.3?}", p.as_slice());
    }

    let cfg: ExperimentConfig = serde_json::from_str(
        r#"{"name": "dirichlet_demo", "map_ids": ["f3", "f7", "f11"],
            "dirichlet_alphas": [2.0, 2.0, 2.0], "seed": 4}"#,
    )
    .expect("valid json");
    cfg.validate()?;
    println!("config draws {:.3?}", cfg.probabilities()?.as_slice());
    Ok(())
}
