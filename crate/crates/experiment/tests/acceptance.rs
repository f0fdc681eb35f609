//! End-to-end acceptance checks, one test per criterion.
//!
//! Each test writes a single `criterion N: PASS|FAIL ...` line straight to
//! stderr (bypassing libtest's capture) before asserting, so the full list
//! shows up in the test log whatever the outcome.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::sync::OnceLock;
use std::time::Instant;

use rand::Rng;
use rbnk_core::rng::rng_from_seed;
use rbnk_core::{generate_landscape, median, welch_t_test, NkLandscape, TraitVector};
use rbnk_experiment::{
    presets, run_dynamics, run_evolution_sweep, simulate_dynamics, simulate_sweep, ExperimentConfig,
};

fn report(criterion: u32, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(
        std::io::stderr(),
        "\ncriterion {criterion}: {verdict} {detail}"
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn preset(name: &str, overrides: &[&str]) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::parse(presets::get(name).unwrap()).unwrap();
    cfg.apply_overrides(overrides).unwrap();
    cfg
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

// ---------------------------------------------------------------------------
// Network dynamics

#[test]
fn criterion_01_baseline_regimes() {
    let cfg = preset("baseline-dynamics", &["b=1,2,3"]);
    let start = Instant::now();
    let cells = simulate_dynamics(&cfg, workers()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let m: Vec<f64> = cells.iter().map(|c| mean(&c.finals())).collect();
    let pass = m[0] < m[1] && m[1] < m[2] && m[0] < 0.05 && m[2] > 0.15 && secs <= 10.0;
    report(
        1,
        pass,
        format!(
            "mean final changed fraction B=1 {:.4}, B=2 {:.4}, B=3 {:.4}; {secs:.2}s",
            m[0], m[1], m[2]
        ),
    );
}

#[test]
fn criterion_02_dynamism_and_dynamics() {
    let cfg = preset("dynamism-dynamics", &["b=1,3,4", "dynamic_pct=0,50,100"]);
    let start = Instant::now();
    let cells = simulate_dynamics(&cfg, workers()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let finals: BTreeMap<(usize, u64), Vec<f64>> = cells
        .iter()
        .map(|c| ((c.b, c.dynamic_pct as u64), c.finals()))
        .collect();
    let p3 = welch_t_test(&finals[&(3, 50)], &finals[&(3, 0)]).unwrap().p;
    let p4 = welch_t_test(&finals[&(4, 50)], &finals[&(4, 0)]).unwrap().p;
    let (b1_0, b1_100) = (mean(&finals[&(1, 0)]), mean(&finals[&(1, 100)]));
    let pass = p3 >= 0.05 && p4 >= 0.05 && b1_100 > b1_0 && secs <= 30.0;
    report(
        2,
        pass,
        format!(
            "p(B=3, 50% vs 0%) {p3:.4}, p(B=4) {p4:.4}; B=1 mean 0% {b1_0:.4} -> 100% {b1_100:.4}; {secs:.2}s"
        ),
    );
}

// ---------------------------------------------------------------------------
// Evolution arms at B=2, K=2, R=100 (other sizes where stated), paired
// landscapes, 10 landscapes x 2 runs. The dynamism-selection checks run
// 20,000 generations; the variant comparisons, which state no length, use
// the full 50,000-generation protocol.

const SHORT: &str = "generations=20000";
const FULL_LENGTH: &str = "generations=50000";

struct Arm {
    fitness: Vec<f64>,
    dynamic_pct: Vec<f64>,
    seconds: f64,
}

fn run_arm(name: &str, extra: &[&str]) -> Arm {
    let mut overrides = vec![
        "b=2",
        "k=2",
        "landscapes_per_config=10",
        "runs_per_landscape=2",
    ];
    overrides.extend_from_slice(extra);
    let cfg = preset(name, &overrides);
    let start = Instant::now();
    let cells = simulate_sweep(&cfg, workers()).unwrap();
    Arm {
        fitness: cells[0].final_fitness(),
        dynamic_pct: cells[0].final_dynamic_pct(),
        seconds: start.elapsed().as_secs_f64(),
    }
}

macro_rules! arm {
    ($fn:ident, $preset:literal $(, $extra:expr)*) => {
        fn $fn() -> &'static Arm {
            static CELL: OnceLock<Arm> = OnceLock::new();
            CELL.get_or_init(|| run_arm($preset, &[$($extra),*]))
        }
    };
}

arm!(stationary, "stationary", SHORT);
arm!(nonstationary, "nonstationary", SHORT);
arm!(size_r50, "size-r50", SHORT);
arm!(size_r200, "size-r200", SHORT);
arm!(nonstationary_long, "nonstationary", FULL_LENGTH);
arm!(rerandomized, "rerandomize-tables", FULL_LENGTH);
arm!(inherited, "inherit-structure", FULL_LENGTH);
arm!(full, "full-dynamism", FULL_LENGTH);

fn describe(arm: &Arm) -> String {
    format!(
        "median dyn% {:.2}, mean dyn% {:.2}, mean fitness {:.4}",
        median(&arm.dynamic_pct).unwrap(),
        mean(&arm.dynamic_pct),
        mean(&arm.fitness)
    )
}

#[test]
fn criterion_03_stationary_selects_against_dynamism() {
    let arm = stationary();
    let med = median(&arm.dynamic_pct).unwrap();
    // The time limit is stated for four workers; scale it to the cores present.
    let limit = 600.0 * 4.0 / workers().min(4) as f64;
    let pass = med < 1.0 && arm.seconds <= limit;
    report(
        3,
        pass,
        format!(
            "{}; {:.1}s with {} worker(s)",
            describe(arm),
            arm.seconds,
            workers()
        ),
    );
}

#[test]
fn criterion_04_nonstationary_selects_for_dynamism() {
    let (ns, st) = (nonstationary(), stationary());
    let med = median(&ns.dynamic_pct).unwrap();
    let w = welch_t_test(&ns.dynamic_pct, &st.dynamic_pct);
    let (p, greater) = match w {
        Ok(w) => (w.p, w.t > 0.0),
        Err(_) => (1.0, false),
    };
    let pass = (2.0..=10.0).contains(&med) && greater && p < 0.05;
    report(
        4,
        pass,
        format!("nonstationary {}; vs stationary p {p:.4}", describe(ns)),
    );
}

#[test]
fn criterion_05_size_scaling() {
    let m: Vec<f64> = [size_r50(), nonstationary(), size_r200()]
        .iter()
        .map(|a| median(&a.dynamic_pct).unwrap())
        .collect();
    let means: Vec<f64> = [size_r50(), nonstationary(), size_r200()]
        .iter()
        .map(|a| mean(&a.dynamic_pct))
        .collect();
    let pass = m[0] < m[1] && m[1] < m[2];
    report(
        5,
        pass,
        format!(
            "median dyn% R=50 {:.2}, R=100 {:.2}, R=200 {:.2} (means {:.2}, {:.2}, {:.2})",
            m[0], m[1], m[2], means[0], means[1], means[2]
        ),
    );
}

#[test]
fn criterion_06_table_inheritance_matters() {
    let (re, inh) = (rerandomized(), nonstationary_long());
    let w = welch_t_test(&re.fitness, &inh.fitness).unwrap();
    let pass = w.t < 0.0 && w.p < 0.05;
    report(
        6,
        pass,
        format!(
            "mean fitness rerandomize {:.4} vs inherit {:.4}, p {:.4}",
            mean(&re.fitness),
            mean(&inh.fitness),
            w.p
        ),
    );
}

#[test]
fn criterion_07_inherited_structure_equivalent() {
    let (a, b) = (inherited(), nonstationary_long());
    let p = welch_t_test(&a.fitness, &b.fitness).unwrap().p;
    report(
        7,
        p >= 0.05,
        format!(
            "mean fitness inherit_final {:.4} vs genome_restart {:.4}, p {p:.4}",
            mean(&a.fitness),
            mean(&b.fitness)
        ),
    );
}

#[test]
fn criterion_08_full_dynamism() {
    let (f, inh, ns) = (full(), inherited(), nonstationary_long());
    let p_inh = welch_t_test(&f.fitness, &inh.fitness).unwrap().p;
    let p_ns = welch_t_test(&f.fitness, &ns.fitness).unwrap().p;
    let (dyn_full, dyn_ns) = (mean(&f.dynamic_pct), mean(&ns.dynamic_pct));
    let pass = p_inh >= 0.05 && p_ns >= 0.05 && dyn_full >= dyn_ns;
    report(
        8,
        pass,
        format!(
            "fitness p vs inherit_final {p_inh:.4}, vs genome_restart {p_ns:.4}; mean dyn% full {dyn_full:.2} vs standard {dyn_ns:.2}"
        ),
    );
}

// ---------------------------------------------------------------------------
// Landscapes, determinism and the t-test

/// Fitness by direct table lookup, written independently of the library.
fn oracle_fitness(land: &NkLandscape, bits: &[bool]) -> f64 {
    let mut total = 0.0;
    for i in 0..bits.len() {
        let mut index = bits[i] as usize;
        for &j in &land.links()[i] {
            index = index * 2 + bits[j] as usize;
        }
        total += land.tables()[i][index];
    }
    total / bits.len() as f64
}

fn bits_of(v: usize, n: usize) -> Vec<bool> {
    (0..n).map(|i| (v >> (n - 1 - i)) & 1 == 1).collect()
}

#[test]
fn criterion_09_nk_oracle() {
    let start = Instant::now();
    let mut rng = rng_from_seed(9);
    let mut worst: f64 = 0.0;
    let mut multimodal_k0 = 0;
    let mut k0_count = 0;
    for i in 0..200u64 {
        let n = rng.random_range(1..=8);
        // the second hundred are all K = 0
        let k = if i < 100 { rng.random_range(0..n) } else { 0 };
        let land = generate_landscape(n, k, 1000 + i).unwrap();
        let values: Vec<f64> = (0..1usize << n)
            .map(|v| {
                let bits = bits_of(v, n);
                let got = land.fitness(&TraitVector::new(bits.clone())).unwrap();
                worst = worst.max((got - oracle_fitness(&land, &bits)).abs());
                got
            })
            .collect();
        if k == 0 {
            k0_count += 1;
            let optima = (0..values.len())
                .filter(|&v| (0..n).all(|b| values[v ^ (1 << b)] <= values[v]))
                .count();
            if optima != 1 {
                multimodal_k0 += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst <= 1e-12 && multimodal_k0 == 0 && secs <= 5.0;
    report(
        9,
        pass,
        format!("max |fitness - oracle| {worst:e}; {multimodal_k0} of {k0_count} K=0 landscapes multimodal; {secs:.2}s"),
    );
}

fn dir_contents(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path
                    .strip_prefix(root)
                    .unwrap()
                    .to_string_lossy()
                    .into_owned();
                files.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    files
}

#[test]
fn criterion_10_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    let mut mismatched = Vec::new();
    let names: Vec<&str> = presets::names().collect();
    for name in &names {
        let text = presets::get(name).unwrap();
        let mut cfg = ExperimentConfig::parse(text).unwrap();
        let outs = [
            tmp.path().join(format!("{name}-a")),
            tmp.path().join(format!("{name}-b")),
        ];
        for (i, out) in outs.iter().enumerate() {
            if text.contains("kind = dynamics") {
                cfg.apply_overrides(&["networks=4", "cycles=10", "b=1,2"])
                    .unwrap();
                run_dynamics(&cfg, out, 1 + 2 * i).unwrap();
            } else {
                cfg.apply_overrides(&[
                    "b=1,2",
                    "k=1",
                    "landscapes_per_config=2",
                    "runs_per_landscape=2",
                    "generations=60",
                    "trace_every=20",
                ])
                .unwrap();
                run_evolution_sweep(&cfg, out, 1 + 2 * i).unwrap();
            }
        }
        let (a, b) = (dir_contents(&outs[0]), dir_contents(&outs[1]));
        if a.is_empty() || a != b {
            mismatched.push(*name);
        }
    }
    report(
        10,
        mismatched.is_empty(),
        format!(
            "{} presets run twice (1 vs 3 workers), differing: {mismatched:?}",
            names.len()
        ),
    );
}

#[test]
fn criterion_11_welch_accuracy() {
    let text = include_str!("../../core/tests/data/welch_reference.txt");
    let lines: Vec<&str> = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .collect();
    let values = |line: &str| -> Vec<f64> {
        line.split_whitespace()
            .skip(1)
            .map(|v| v.parse().unwrap())
            .collect()
    };
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for block in lines.chunks(3) {
        let p = welch_t_test(&values(block[0]), &values(block[1]))
            .unwrap()
            .p;
        worst = worst.max((p - values(block[2])[2]).abs());
        pairs += 1;
    }
    report(
        11,
        pairs == 50 && worst <= 1e-6,
        format!("{pairs} sample pairs, max |p - reference| {worst:e}"),
    );
}
