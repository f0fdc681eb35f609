//! Flat `key = value` experiment configuration.
//!
//! Blank lines and `#` comments are ignored. List-valued keys take
//! comma-separated values. Every key has a default, and unknown or repeated
//! keys are rejected.

use std::fmt::Write as _;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use rbnk_core::{
    Addressing, DynamismMode, EnvironmentSchedule, FunctionMutation, Inheritance, MutationSet,
    TableInheritance, VariantConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Dynamics,
    Evolve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    /// One landscape, all-zero inputs.
    Stationary,
    /// Half the lifecycle on each of two landscapes, inputs all 0 then all 1.
    Nonstationary,
}

impl ScheduleKind {
    pub fn build(self, inputs: usize, lifecycle: usize) -> EnvironmentSchedule {
        match self {
            ScheduleKind::Stationary => EnvironmentSchedule::stationary(inputs, lifecycle),
            ScheduleKind::Nonstationary => EnvironmentSchedule::switching(inputs, lifecycle),
        }
    }
}

fn parse_kind(s: &str) -> Result<Kind> {
    match s {
        "dynamics" => Ok(Kind::Dynamics),
        "evolve" => Ok(Kind::Evolve),
        _ => bail!("unknown kind `{s}` (expected dynamics or evolve)"),
    }
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Dynamics => "dynamics",
        Kind::Evolve => "evolve",
    }
}

fn parse_schedule(s: &str) -> Result<ScheduleKind> {
    match s {
        "stationary" => Ok(ScheduleKind::Stationary),
        "nonstationary" => Ok(ScheduleKind::Nonstationary),
        _ => bail!("unknown schedule `{s}` (expected stationary or nonstationary)"),
    }
}

fn schedule_name(s: ScheduleKind) -> &'static str {
    match s {
        ScheduleKind::Stationary => "stationary",
        ScheduleKind::Nonstationary => "nonstationary",
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: Kind,
    /// Network size `R`.
    pub r: usize,
    /// Trait and input count `N`.
    pub n: usize,
    /// Lifecycle length `T`.
    pub t: usize,
    pub b: Vec<usize>,
    pub k: Vec<usize>,
    /// Percentages of nodes forced dynamic (dynamics runs).
    pub dynamic_pct: Vec<f64>,
    /// Random networks per dynamics cell.
    pub networks: usize,
    /// Update cycles per dynamics profile.
    pub cycles: usize,
    pub landscapes_per_config: usize,
    pub runs_per_landscape: usize,
    pub schedule: ScheduleKind,
    pub variant: VariantConfig,
    pub trace_every: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kind: Kind::Evolve,
            r: 100,
            n: 10,
            t: 100,
            b: vec![2],
            k: vec![2],
            dynamic_pct: vec![0.0],
            networks: 100,
            cycles: 100,
            landscapes_per_config: 10,
            runs_per_landscape: 10,
            schedule: ScheduleKind::Stationary,
            variant: VariantConfig::default(),
            trace_every: 50,
            seed: 1,
        }
    }
}

pub const KEYS: &[&str] = &[
    "kind",
    "r",
    "n",
    "t",
    "b",
    "k",
    "dynamic_pct",
    "networks",
    "cycles",
    "landscapes_per_config",
    "runs_per_landscape",
    "generations",
    "schedule",
    "inheritance",
    "table_inheritance",
    "dynamism_mode",
    "mutation_set",
    "addressing",
    "function_mutation",
    "p_dynamic_init",
    "trace_every",
    "seed",
];

fn scalar<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| anyhow!("{key}: cannot parse `{value}`: {e}"))
}

fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    value.split(',').map(|v| scalar(key, v.trim())).collect()
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen = Vec::new();
        for (number, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`", number + 1))?;
            let key = key.trim();
            if seen.contains(&key) {
                bail!("line {}: `{key}` set twice", number + 1);
            }
            seen.push(key);
            cfg.set(key, value.trim())
                .with_context(|| format!("line {}", number + 1))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Sets one key from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = &mut self.variant;
        match key {
            "kind" => self.kind = parse_kind(value)?,
            "r" => self.r = scalar(key, value)?,
            "n" => self.n = scalar(key, value)?,
            "t" => self.t = scalar(key, value)?,
            "b" => self.b = list(key, value)?,
            "k" => self.k = list(key, value)?,
            "dynamic_pct" => self.dynamic_pct = list(key, value)?,
            "networks" => self.networks = scalar(key, value)?,
            "cycles" => self.cycles = scalar(key, value)?,
            "landscapes_per_config" => self.landscapes_per_config = scalar(key, value)?,
            "runs_per_landscape" => self.runs_per_landscape = scalar(key, value)?,
            "generations" => v.generations = scalar(key, value)?,
            "schedule" => self.schedule = parse_schedule(value)?,
            "inheritance" => v.inheritance = Inheritance::from_str(value)?,
            "table_inheritance" => v.table_inheritance = TableInheritance::from_str(value)?,
            "dynamism_mode" => v.dynamism_mode = DynamismMode::from_str(value)?,
            "mutation_set" => v.mutation_set = MutationSet::from_str(value)?,
            "addressing" => v.addressing = Addressing::from_str(value)?,
            "function_mutation" => v.function_mutation = FunctionMutation::from_str(value)?,
            "p_dynamic_init" => v.p_dynamic_init = scalar(key, value)?,
            "trace_every" => self.trace_every = scalar(key, value)?,
            "seed" => self.seed = scalar(key, value)?,
            _ => bail!("unknown key `{key}` (known keys: {})", KEYS.join(", ")),
        }
        Ok(())
    }

    /// Applies `key=value` overrides in order.
    pub fn apply_overrides<S: AsRef<str>>(&mut self, overrides: &[S]) -> Result<()> {
        for o in overrides {
            let o = o.as_ref();
            let (key, value) = o
                .split_once('=')
                .ok_or_else(|| anyhow!("override `{o}` is not key=value"))?;
            self.set(key.trim(), value.trim())?;
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 || self.n == 0 || self.t == 0 {
            bail!("r, n and t must be positive");
        }
        if self.b.is_empty() || self.k.is_empty() || self.dynamic_pct.is_empty() {
            bail!("sweep axes b, k and dynamic_pct must be non-empty");
        }
        if let Some(&b) = self.b.iter().find(|&&b| b == 0 || b > self.r) {
            bail!("b = {b} must be in 1..={}", self.r);
        }
        if let Some(&k) = self.k.iter().find(|&&k| k >= self.n) {
            bail!("k = {k} must be below n = {}", self.n);
        }
        if let Some(&p) = self
            .dynamic_pct
            .iter()
            .find(|p| !(0.0..=100.0).contains(*p))
        {
            bail!("dynamic_pct = {p} outside [0, 100]");
        }
        if self.kind == Kind::Dynamics && (self.networks == 0 || self.cycles < 2) {
            bail!("dynamics runs need networks > 0 and cycles >= 2");
        }
        if self.kind == Kind::Evolve {
            if 2 * self.n > self.r {
                bail!(
                    "{} inputs plus {} trait nodes do not fit in r = {}",
                    self.n,
                    self.n,
                    self.r
                );
            }
            if self.landscapes_per_config == 0 || self.runs_per_landscape == 0 {
                bail!("landscapes_per_config and runs_per_landscape must be positive");
            }
            if self.schedule == ScheduleKind::Nonstationary && self.t < 2 {
                bail!("a nonstationary lifecycle needs t >= 2");
            }
        }
        self.variant.validate()?;
        Ok(())
    }

    /// The fully resolved configuration, one key per line in a fixed order.
    pub fn to_text(&self) -> String {
        let v = &self.variant;
        let mut s = String::new();
        let mut put = |k: &str, val: String| {
            let _ = writeln!(s, "{k} = {val}");
        };
        put("kind", kind_name(self.kind).into());
        put("r", self.r.to_string());
        put("n", self.n.to_string());
        put("t", self.t.to_string());
        put("b", join(&self.b));
        put("k", join(&self.k));
        put("dynamic_pct", join(&self.dynamic_pct));
        put("networks", self.networks.to_string());
        put("cycles", self.cycles.to_string());
        put(
            "landscapes_per_config",
            self.landscapes_per_config.to_string(),
        );
        put("runs_per_landscape", self.runs_per_landscape.to_string());
        put("generations", v.generations.to_string());
        put("schedule", schedule_name(self.schedule).into());
        put("inheritance", v.inheritance.to_string());
        put("table_inheritance", v.table_inheritance.to_string());
        put("dynamism_mode", v.dynamism_mode.to_string());
        put("mutation_set", v.mutation_set.to_string());
        put("addressing", v.addressing.to_string());
        put("function_mutation", v.function_mutation.to_string());
        put("p_dynamic_init", v.p_dynamic_init.to_string());
        put("trace_every", self.trace_every.to_string());
        put("seed", self.seed.to_string());
        s
    }
}
