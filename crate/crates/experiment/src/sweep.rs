//! Replicated hillclimbs over a grid of (B, K) cells.
//!
//! Seeds derive as master → cell (b, k) → landscape → replicate. Landscapes
//! depend only on the master seed, the cell and the landscape index, so runs
//! of different variants with one master seed see identical landscapes.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use rbnk_core::rng::{derive_seed, rng_from_seed, stream};
use rbnk_core::{
    generate_landscape, hillclimb, median, ClimbSetup, EvalConfig, NkLandscape, RbnConfig,
    RunRecord, Summary,
};

use crate::config::{ExperimentConfig, Kind};
use crate::output::{create_dir, sha256_hex, write_csv, write_file, CSV_SCHEMA};
use crate::pool;

pub const SUMMARY_HEADER: &[&str] = &[
    "b",
    "k",
    "count",
    "fitness_mean",
    "fitness_sd",
    "fitness_min",
    "fitness_max",
    "fitness_median",
    "dynamic_pct_mean",
    "dynamic_pct_sd",
    "dynamic_pct_min",
    "dynamic_pct_max",
    "dynamic_pct_median",
];
pub const FINALS_HEADER: &[&str] = &[
    "b",
    "k",
    "landscape",
    "run",
    "seed",
    "final_fitness",
    "final_dynamic_pct",
    "accepted",
];
pub const TRACE_HEADER: &[&str] = &["generation", "fitness", "dynamic_fraction"];

/// Every landscape carries a pair so that arms differing only in schedule
/// share their files; stationary runs use the first of each pair.
pub const LANDSCAPES_PER_PAIR: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct LandscapeSet {
    pub seed: u64,
    pub pair: Vec<NkLandscape>,
    pub eval: EvalConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Replicate {
    pub landscape: usize,
    pub run: usize,
    pub record: RunRecord,
}

impl Replicate {
    pub fn final_dynamic_pct(&self) -> f64 {
        100.0 * self.record.final_dynamic_fraction
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub b: usize,
    pub k: usize,
    pub landscapes: Vec<LandscapeSet>,
    /// Ordered by landscape, then run.
    pub replicates: Vec<Replicate>,
}

impl CellResult {
    pub fn label(&self) -> String {
        format!("b{}_k{}", self.b, self.k)
    }

    pub fn final_fitness(&self) -> Vec<f64> {
        self.replicates
            .iter()
            .map(|r| r.record.final_fitness)
            .collect()
    }

    pub fn final_dynamic_pct(&self) -> Vec<f64> {
        self.replicates
            .iter()
            .map(Replicate::final_dynamic_pct)
            .collect()
    }
}

fn landscape_set(
    cfg: &ExperimentConfig,
    cell_seed: u64,
    k: usize,
    index: usize,
) -> Result<LandscapeSet> {
    let seed = derive_seed(cell_seed, &[stream::LANDSCAPE, index as u64]);
    let pair = (0..LANDSCAPES_PER_PAIR)
        .map(|p| generate_landscape(cfg.n, k, derive_seed(seed, &[stream::LANDSCAPE, p as u64])))
        .collect::<rbnk_core::error::Result<_>>()?;
    let mut rng = rng_from_seed(derive_seed(seed, &[stream::TRAIT_NODES, cfg.r as u64]));
    let eval = EvalConfig::with_random_traits(cfg.t, cfg.r, cfg.n, cfg.n, &mut rng)?;
    Ok(LandscapeSet { seed, pair, eval })
}

/// Runs every replicate of every cell; results come back in cell order.
pub fn simulate_sweep(cfg: &ExperimentConfig, workers: usize) -> Result<Vec<CellResult>> {
    if cfg.kind != Kind::Evolve {
        bail!("config kind is not evolve");
    }
    cfg.validate()?;
    let schedule = cfg.schedule.build(cfg.n, cfg.t);
    let phases = schedule.phases.len();

    let mut cells = Vec::new();
    for &b in &cfg.b {
        for &k in &cfg.k {
            let cell_seed = derive_seed(cfg.seed, &[b as u64, k as u64]);
            let landscapes = (0..cfg.landscapes_per_config)
                .map(|l| landscape_set(cfg, cell_seed, k, l))
                .collect::<Result<Vec<_>>>()
                .with_context(|| format!("cell b = {b}, k = {k}"))?;
            cells.push(CellResult {
                b,
                k,
                landscapes,
                replicates: Vec::new(),
            });
        }
    }

    let jobs: Vec<(usize, usize, usize)> = (0..cells.len())
        .flat_map(|c| {
            (0..cfg.landscapes_per_config)
                .flat_map(move |l| (0..cfg.runs_per_landscape).map(move |r| (c, l, r)))
        })
        .collect();
    let records: Vec<RunRecord> = pool(workers)?.install(|| {
        jobs.par_iter()
            .map(|&(c, l, r)| {
                let cell = &cells[c];
                let set = &cell.landscapes[l];
                let setup = ClimbSetup {
                    rbn: RbnConfig::new(cfg.r, cell.b)?,
                    variant: &cfg.variant,
                    eval: &set.eval,
                    schedule: &schedule,
                    landscapes: &set.pair[..phases],
                    trace_every: cfg.trace_every,
                };
                let seed = derive_seed(set.seed, &[stream::REPLICATE, r as u64]);
                hillclimb(&setup, seed)
                    .with_context(|| format!("cell {}, landscape {l}, run {r}", cell.label()))
            })
            .collect::<Result<_>>()
    })?;

    for (&(c, l, r), record) in jobs.iter().zip(records) {
        cells[c].replicates.push(Replicate {
            landscape: l,
            run: r,
            record,
        });
    }
    Ok(cells)
}

fn summary_row(cell: &CellResult) -> Result<Vec<String>> {
    let fit = cell.final_fitness();
    let dynp = cell.final_dynamic_pct();
    let (f, d) = (Summary::from_samples(&fit)?, Summary::from_samples(&dynp)?);
    Ok(vec![
        cell.b.to_string(),
        cell.k.to_string(),
        f.count.to_string(),
        f.mean.to_string(),
        f.sd.to_string(),
        f.min.to_string(),
        f.max.to_string(),
        median(&fit)?.to_string(),
        d.mean.to_string(),
        d.sd.to_string(),
        d.min.to_string(),
        d.max.to_string(),
        median(&dynp)?.to_string(),
    ])
}

pub fn write_sweep(cfg: &ExperimentConfig, cells: &[CellResult], out: &Path) -> Result<()> {
    create_dir(out)?;
    let landscape_dir = out.join("landscapes");
    let genome_dir = out.join("genomes");
    create_dir(&landscape_dir)?;
    create_dir(&genome_dir)?;

    let mut meta = String::new();
    writeln!(meta, "csv_schema = {CSV_SCHEMA}")?;
    meta.push_str(&cfg.to_text());
    writeln!(
        meta,
        "pairing = landscapes and trait nodes depend only on (seed, b, k, landscape index, r); \
         arms run with the same seed are paired"
    )?;

    let mut summary = Vec::new();
    let mut finals = Vec::new();
    for cell in cells {
        let label = cell.label();
        summary.push(summary_row(cell)?);
        for (l, set) in cell.landscapes.iter().enumerate() {
            for (p, land) in set.pair.iter().enumerate() {
                let text = land.to_text();
                let name = format!("{label}_l{l}_p{p}.txt");
                writeln!(
                    meta,
                    "landscape {name} sha256 {}",
                    sha256_hex(text.as_bytes())
                )?;
                write_file(&landscape_dir.join(&name), &text)?;
            }
            let nodes: Vec<String> = set.eval.trait_nodes.iter().map(usize::to_string).collect();
            writeln!(meta, "trait_nodes {label}_l{l} {}", nodes.join(","))?;
        }
        for (rep, r) in cell.replicates.iter().enumerate() {
            finals.push(vec![
                cell.b.to_string(),
                cell.k.to_string(),
                r.landscape.to_string(),
                r.run.to_string(),
                r.record.seed.to_string(),
                r.record.final_fitness.to_string(),
                r.final_dynamic_pct().to_string(),
                r.record.accepted.to_string(),
            ]);
            let trace: Vec<Vec<String>> = r
                .record
                .trace
                .iter()
                .map(|p| {
                    vec![
                        p.generation.to_string(),
                        p.fitness.to_string(),
                        p.dynamic_fraction.to_string(),
                    ]
                })
                .collect();
            write_csv(
                &out.join(format!("trace_{label}_{rep}.csv")),
                TRACE_HEADER,
                &trace,
            )?;
            write_file(
                &genome_dir.join(format!("genome_{label}_{rep}.txt")),
                &r.record.final_genome.to_text(),
            )?;
        }
    }
    write_csv(&out.join("summary.csv"), SUMMARY_HEADER, &summary)?;
    write_csv(&out.join("finals.csv"), FINALS_HEADER, &finals)?;
    write_file(&out.join("meta.txt"), &meta)
}

/// Simulates and writes an evolution sweep.
pub fn run_evolution_sweep(
    cfg: &ExperimentConfig,
    out: &Path,
    workers: usize,
) -> Result<Vec<CellResult>> {
    let cells = simulate_sweep(cfg, workers)?;
    write_sweep(cfg, &cells, out)?;
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ScheduleKind;

    fn small() -> ExperimentConfig {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_overrides(&[
            "r=24",
            "n=4",
            "b=1,2",
            "k=0,1",
            "landscapes_per_config=2",
            "runs_per_landscape=2",
            "generations=30",
            "trace_every=10",
        ])
        .unwrap();
        cfg
    }

    #[test]
    fn replicate_layout() {
        let cells = simulate_sweep(&small(), 2).unwrap();
        assert_eq!(cells.len(), 4);
        for cell in &cells {
            let order: Vec<_> = cell
                .replicates
                .iter()
                .map(|r| (r.landscape, r.run))
                .collect();
            assert_eq!(order, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
            assert!(cell.replicates.iter().all(|r| r.record.trace.len() == 4));
        }
    }

    #[test]
    fn arms_share_landscapes() {
        let a = simulate_sweep(&small(), 1).unwrap();
        let mut cfg = small();
        cfg.schedule = ScheduleKind::Nonstationary;
        cfg.apply_overrides(&["table_inheritance=rerandomize"])
            .unwrap();
        let b = simulate_sweep(&cfg, 1).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.landscapes, y.landscapes);
        }
    }

    #[test]
    fn workers_do_not_change_results() {
        assert_eq!(
            simulate_sweep(&small(), 1).unwrap(),
            simulate_sweep(&small(), 3).unwrap()
        );
    }

    #[test]
    fn zero_generations_records_initial_genome() {
        let mut cfg = small();
        cfg.apply_overrides(&["generations=0"]).unwrap();
        for cell in simulate_sweep(&cfg, 1).unwrap() {
            for r in &cell.replicates {
                assert_eq!(r.record.trace.len(), 1);
                assert_eq!(r.record.accepted, 0);
            }
        }
    }
}
