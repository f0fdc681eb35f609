use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rbnk_experiment::{
    presets, report, run_dynamics, run_evolution_sweep, significance_report, ExperimentConfig, Kind,
};

#[derive(Parser)]
#[command(name = "rbnk", version, about = "Run dynamic RBNK experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Changed-fraction profiles of random networks.
    Dynamics(RunArgs),
    /// Hillclimbing sweep over (B, K) cells.
    Evolve(RunArgs),
    /// Welch tests between two evolve output directories.
    Report {
        a: PathBuf,
        b: PathBuf,
        /// Where to write significance.csv.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// List the bundled presets.
    Presets,
}

#[derive(Args)]
struct RunArgs {
    /// Config file.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Bundled config, see `rbnk presets`.
    #[arg(long)]
    preset: Option<String>,
    /// Master seed; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    /// Worker threads; defaults to the available cores.
    #[arg(long)]
    workers: Option<usize>,
    /// Override a config key, e.g. `--set generations=1000`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

impl RunArgs {
    fn load(&self, kind: Kind) -> Result<(ExperimentConfig, usize)> {
        let text = match (&self.config, &self.preset) {
            (Some(path), _) => std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?,
            (None, Some(name)) => presets::get(name)
                .ok_or_else(|| {
                    anyhow!(
                        "unknown preset `{name}` (available: {})",
                        presets::names().collect::<Vec<_>>().join(", ")
                    )
                })?
                .to_string(),
            (None, None) => bail!("one of --config or --preset is required"),
        };
        let mut cfg = ExperimentConfig::parse(&text)?;
        cfg.apply_overrides(&self.overrides)?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if cfg.kind != kind {
            bail!("this config is for the other subcommand (kind mismatch)");
        }
        let workers = self
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        Ok((cfg, workers))
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Dynamics(args) => {
            let (cfg, workers) = args.load(Kind::Dynamics)?;
            run_dynamics(&cfg, &args.out, workers)?;
        }
        Command::Evolve(args) => {
            let (cfg, workers) = args.load(Kind::Evolve)?;
            run_evolution_sweep(&cfg, &args.out, workers)?;
        }
        Command::Report { a, b, out } => {
            let rows = significance_report(&a, &b)?;
            std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            report::write_report(&rows, &Path::new(&out).join("significance.csv"))?;
        }
        Command::Presets => {
            for name in presets::names() {
                println!("{name}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
