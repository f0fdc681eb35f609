//! Experiment harness for dynamic RBNK networks: configuration files,
//! replicated runs on a worker pool, CSV output and significance reports.

pub mod config;
pub mod dynamics;
pub mod output;
pub mod presets;
pub mod report;
pub mod sweep;

pub use config::{ExperimentConfig, Kind, ScheduleKind};
pub use dynamics::{run_dynamics, simulate_dynamics, DynamicsCell};
pub use report::{significance_report, write_report, CellComparison};
pub use sweep::{run_evolution_sweep, simulate_sweep, CellResult, Replicate};

/// A rayon pool with `workers` threads (at least one).
pub fn pool(workers: usize) -> anyhow::Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()?)
}
