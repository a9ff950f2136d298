use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rnifs::harness::{self, ExperimentConfig};
use rnifs::{maps, system, Result};

#[derive(Parser)]
#[command(name = "rnifs", version, about = "Random nonlinear IFS experiments")]
struct Cli {
    /// Override the seed of every config (and of pair sampling for `dims`).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Print nothing on success.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Show the map registry.
    ListMaps,
    /// Run one experiment config.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every config in a directory and write summary.csv.
    Suite {
        config_dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Classical versus extended Sierpiński comparison.
    CaseStudy {
        #[arg(long)]
        out: PathBuf,
    },
    /// Dimension estimates of an x,y CSV point cloud.
    Dims { points: PathBuf },
    /// Lyapunov and Lipschitz stability report for a config.
    Stability { config: PathBuf },
}

fn load(path: &Path, seed: Option<u64>) -> Result<ExperimentConfig> {
    let mut cfg = harness::load_config(path)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn run(cli: Cli) -> Result<()> {
    // Write errors (e.g. a closed pipe) are ignored.
    let say = |s: String| {
        if !cli.quiet {
            let _ = writeln!(std::io::stdout().lock(), "{s}");
        }
    };
    match &cli.command {
        Command::ListMaps => {
            for m in maps::registry() {
                say(format!("{:8} {:42} {}", m.id(), m.formula(), m.description()));
            }
        }
        Command::Run { config, out } => {
            let cfg = load(config, cli.seed)?;
            let r = harness::run_experiment(&cfg, out)?;
            for (name, est) in &r.dimension_estimates {
                say(format!("{name:12} {:.4}  (R² {:.4})", est.value, est.r_squared));
            }
            if let Some(s) = &r.stability {
                say(format!("lyapunov     {:.4} ± {:.4}  {}", s.lyapunov_estimate, s.std_error, s.verdict));
            }
            say(format!("{} artifacts in {:.2} s", r.artifact_paths.len(), r.wall_time));
        }
        Command::Suite { config_dir, out } => {
            let summary = harness::run_suite(config_dir, out, cli.seed)?;
            say(summary.to_csv().trim_end().to_string());
            if summary.failures() > 0 {
                eprintln!("{} of {} experiments failed", summary.failures(), summary.rows.len());
            }
        }
        Command::CaseStudy { out } => {
            let r = harness::case_study(out, cli.seed.unwrap_or(harness::CASE_STUDY_SEED))?;
            say(format!(
                "classical {:.4}  extended {:.4}  delta {:+.4}",
                r.classical_dim, r.extended_dim, r.delta
            ));
        }
        Command::Dims { points } => {
            let pts = system::read_points_csv(points)?;
            let est = harness::estimate_all(&pts, cli.seed.unwrap_or(0))?;
            say(json(&est));
        }
        Command::Stability { config } => {
            let cfg = load(config, cli.seed)?;
            say(harness::config_stability(&cfg)?.to_json());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
