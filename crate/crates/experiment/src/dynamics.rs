//! Changed-fraction profiles of random networks with a share of dynamic nodes.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use rbnk_core::rng::{derive_seed, rng_from_seed, stream};
use rbnk_core::{dynamics_profile, DynamismSpec, LiveNetwork, Network, RbnConfig, Summary};

use crate::config::{ExperimentConfig, Kind};
use crate::output::{create_dir, write_csv, write_file, CSV_SCHEMA};
use crate::pool;

pub const SUMMARY_HEADER: &[&str] = &["b", "dynamic_pct", "networks", "mean", "sd", "min", "max"];
pub const PROFILE_HEADER: &[&str] = &["b", "dynamic_pct", "cycle", "mean", "min", "max"];
pub const FINALS_HEADER: &[&str] = &[
    "b",
    "dynamic_pct",
    "network",
    "seed",
    "final_changed_fraction",
];

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsCell {
    pub b: usize,
    pub dynamic_pct: f64,
    pub seeds: Vec<u64>,
    /// Changed fraction at every cycle, one series per network.
    pub profiles: Vec<Vec<f64>>,
}

impl DynamicsCell {
    /// Changed fraction at the last cycle, per network.
    pub fn finals(&self) -> Vec<f64> {
        self.profiles
            .iter()
            .map(|p| *p.last().expect("cycles >= 2"))
            .collect()
    }
}

fn cell_seed(master: u64, b: usize, pct: f64) -> u64 {
    derive_seed(master, &[stream::DYNAMICS, b as u64, pct.to_bits()])
}

fn one_network(cfg: &ExperimentConfig, b: usize, pct: f64, seed: u64) -> Result<Vec<f64>> {
    let config = RbnConfig::new(cfg.r, b)?;
    let mut rng = rng_from_seed(seed);
    let net = Network::random(&config, &mut rng)?;
    let dynamism = DynamismSpec::with_dynamic_fraction(
        &config,
        pct / 100.0,
        cfg.variant.dynamism_mode,
        cfg.variant.addressing,
        &mut rng,
    )?;
    let live = LiveNetwork::new(
        &net.functions,
        &dynamism,
        net.topology.clone(),
        net.start.clone(),
    )?;
    Ok(dynamics_profile(live, cfg.cycles)?.series)
}

/// Simulates every (b, dynamic_pct) cell.
pub fn simulate_dynamics(cfg: &ExperimentConfig, workers: usize) -> Result<Vec<DynamicsCell>> {
    if cfg.kind != Kind::Dynamics {
        bail!("config kind is not dynamics");
    }
    cfg.validate()?;
    let mut jobs = Vec::new();
    for &b in &cfg.b {
        for &pct in &cfg.dynamic_pct {
            let cell = cell_seed(cfg.seed, b, pct);
            for i in 0..cfg.networks {
                jobs.push((b, pct, derive_seed(cell, &[stream::NETWORK, i as u64])));
            }
        }
    }
    let profiles: Vec<Vec<f64>> = pool(workers)?.install(|| {
        jobs.par_iter()
            .map(|&(b, pct, seed)| {
                one_network(cfg, b, pct, seed)
                    .with_context(|| format!("b = {b}, dynamic_pct = {pct}, seed {seed}"))
            })
            .collect::<Result<_>>()
    })?;

    let mut cells = Vec::new();
    for (chunk, jobs) in profiles.chunks(cfg.networks).zip(jobs.chunks(cfg.networks)) {
        cells.push(DynamicsCell {
            b: jobs[0].0,
            dynamic_pct: jobs[0].1,
            seeds: jobs.iter().map(|j| j.2).collect(),
            profiles: chunk.to_vec(),
        });
    }
    Ok(cells)
}

pub fn write_dynamics(cfg: &ExperimentConfig, cells: &[DynamicsCell], out: &Path) -> Result<()> {
    create_dir(out)?;
    let mut summary = Vec::new();
    let mut profile = Vec::new();
    let mut finals = Vec::new();
    for cell in cells {
        let (b, pct) = (cell.b.to_string(), cell.dynamic_pct.to_string());
        let last = cell.finals();
        let s = Summary::from_samples(&last)?;
        summary.push(vec![
            b.clone(),
            pct.clone(),
            s.count.to_string(),
            s.mean.to_string(),
            s.sd.to_string(),
            s.min.to_string(),
            s.max.to_string(),
        ]);
        for cycle in 0..cfg.cycles {
            let at: Vec<f64> = cell.profiles.iter().map(|p| p[cycle]).collect();
            let s = Summary::from_samples(&at)?;
            profile.push(vec![
                b.clone(),
                pct.clone(),
                (cycle + 1).to_string(),
                s.mean.to_string(),
                s.min.to_string(),
                s.max.to_string(),
            ]);
        }
        for (i, (seed, value)) in cell.seeds.iter().zip(&last).enumerate() {
            finals.push(vec![
                b.clone(),
                pct.clone(),
                i.to_string(),
                seed.to_string(),
                value.to_string(),
            ]);
        }
    }
    write_csv(&out.join("summary.csv"), SUMMARY_HEADER, &summary)?;
    write_csv(&out.join("profile.csv"), PROFILE_HEADER, &profile)?;
    write_csv(&out.join("finals.csv"), FINALS_HEADER, &finals)?;

    let mut meta = String::new();
    writeln!(meta, "csv_schema = {CSV_SCHEMA}")?;
    meta.push_str(&cfg.to_text());
    write_file(&out.join("meta.txt"), &meta)
}

/// Simulates and writes a dynamics experiment.
pub fn run_dynamics(
    cfg: &ExperimentConfig,
    out: &Path,
    workers: usize,
) -> Result<Vec<DynamicsCell>> {
    let cells = simulate_dynamics(cfg, workers)?;
    write_dynamics(cfg, &cells, out)?;
    Ok(cells)
}
