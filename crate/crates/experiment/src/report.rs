//! Welch comparisons of two evolution output directories, cell by cell.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use rbnk_core::error::Error;
use rbnk_core::{welch_t_test, WelchTest};

use crate::output::write_csv;

pub const ALPHA: f64 = 0.05;

pub const REPORT_HEADER: &[&str] = &[
    "b",
    "k",
    "n_a",
    "n_b",
    "paired",
    "fitness_mean_a",
    "fitness_mean_b",
    "fitness_t",
    "fitness_p",
    "fitness_significant",
    "dynamic_pct_mean_a",
    "dynamic_pct_mean_b",
    "dynamic_pct_t",
    "dynamic_pct_p",
    "dynamic_pct_significant",
];

/// Final values of one arm, keyed by (b, k).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ArmSamples {
    pub fitness: Vec<f64>,
    pub dynamic_pct: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellComparison {
    pub b: usize,
    pub k: usize,
    pub n_a: usize,
    pub n_b: usize,
    /// Both arms list identical landscape checksums for this cell.
    pub paired: bool,
    pub fitness_means: (f64, f64),
    pub fitness: Option<WelchTest>,
    pub dynamic_pct_means: (f64, f64),
    pub dynamic_pct: Option<WelchTest>,
}

/// Welch test where two identical constant samples count as no difference
/// (p = 1) and undersized samples give `None`.
pub fn compare(a: &[f64], b: &[f64]) -> Result<Option<WelchTest>> {
    match welch_t_test(a, b) {
        Ok(w) => Ok(Some(w)),
        Err(Error::Undefined(_)) if a.len() >= 2 && b.len() >= 2 => Ok(Some(WelchTest {
            t: 0.0,
            df: (a.len() + b.len() - 2) as f64,
            p: 1.0,
        })),
        Err(Error::Undefined(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub fn read_finals(dir: &Path) -> Result<BTreeMap<(usize, usize), ArmSamples>> {
    let path = dir.join("finals.csv");
    let mut reader =
        csv::Reader::from_path(&path).with_context(|| format!("opening {}", path.display()))?;
    let headers = reader.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| anyhow!("{}: missing column `{name}`", path.display()))
    };
    let (cb, ck, cf, cd) = (
        col("b")?,
        col("k")?,
        col("final_fitness")?,
        col("final_dynamic_pct")?,
    );
    let mut arms: BTreeMap<(usize, usize), ArmSamples> = BTreeMap::new();
    for (line, row) in reader.records().enumerate() {
        let row = row?;
        let field = |i: usize| row.get(i).unwrap_or("");
        let parse_err =
            |e: &dyn std::fmt::Display| anyhow!("{} row {}: {e}", path.display(), line + 2);
        let b: usize = field(cb).parse().map_err(|e| parse_err(&e))?;
        let k: usize = field(ck).parse().map_err(|e| parse_err(&e))?;
        let arm = arms.entry((b, k)).or_default();
        arm.fitness
            .push(field(cf).parse().map_err(|e| parse_err(&e))?);
        arm.dynamic_pct
            .push(field(cd).parse().map_err(|e| parse_err(&e))?);
    }
    Ok(arms)
}

/// Landscape checksum lines from `meta.txt`, grouped by cell label.
fn read_checksums(dir: &Path) -> Result<BTreeMap<String, Vec<String>>> {
    let path = dir.join("meta.txt");
    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let mut sums: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for line in text.lines().filter(|l| l.starts_with("landscape ")) {
        let name = line.split_whitespace().nth(1).unwrap_or("");
        let cell = name.split("_l").next().unwrap_or("").to_string();
        sums.entry(cell).or_default().push(line.to_string());
    }
    Ok(sums)
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Compares every (b, k) cell present in both directories.
pub fn significance_report(dir_a: &Path, dir_b: &Path) -> Result<Vec<CellComparison>> {
    let (a, b) = (read_finals(dir_a)?, read_finals(dir_b)?);
    let (sums_a, sums_b) = (read_checksums(dir_a)?, read_checksums(dir_b)?);
    let mut rows = Vec::new();
    for (&(cb, ck), xa) in &a {
        let Some(xb) = b.get(&(cb, ck)) else { continue };
        let label = format!("b{cb}_k{ck}");
        let paired =
            matches!((sums_a.get(&label), sums_b.get(&label)), (Some(x), Some(y)) if x == y);
        rows.push(CellComparison {
            b: cb,
            k: ck,
            n_a: xa.fitness.len(),
            n_b: xb.fitness.len(),
            paired,
            fitness_means: (mean(&xa.fitness), mean(&xb.fitness)),
            fitness: compare(&xa.fitness, &xb.fitness)?,
            dynamic_pct_means: (mean(&xa.dynamic_pct), mean(&xb.dynamic_pct)),
            dynamic_pct: compare(&xa.dynamic_pct, &xb.dynamic_pct)?,
        });
    }
    if rows.is_empty() {
        bail!(
            "{} and {} share no (b, k) cells",
            dir_a.display(),
            dir_b.display()
        );
    }
    Ok(rows)
}

fn test_fields(w: &Option<WelchTest>) -> [String; 3] {
    match w {
        Some(w) => [w.t.to_string(), w.p.to_string(), (w.p < ALPHA).to_string()],
        None => ["NA".into(), "NA".into(), "false".into()],
    }
}

pub fn write_report(rows: &[CellComparison], path: &Path) -> Result<()> {
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut row = vec![
                r.b.to_string(),
                r.k.to_string(),
                r.n_a.to_string(),
                r.n_b.to_string(),
                r.paired.to_string(),
                r.fitness_means.0.to_string(),
                r.fitness_means.1.to_string(),
            ];
            row.extend(test_fields(&r.fitness));
            row.push(r.dynamic_pct_means.0.to_string());
            row.push(r.dynamic_pct_means.1.to_string());
            row.extend(test_fields(&r.dynamic_pct));
            row
        })
        .collect();
    write_csv(path, REPORT_HEADER, &table)
}
