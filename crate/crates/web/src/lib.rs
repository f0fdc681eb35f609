//! WebAssembly bindings behind `www/index.html`.
//!
//! Three operations are exported: a state raster of one random dynamic
//! network, an exhaustive view of a small NK landscape, and a short
//! hillclimb trace. Each wraps a plain Rust function that the native tests
//! call directly. Seeds cross the boundary as `u32` so plain JS numbers work.

use rbnk_core::rng::{derive_seed, rng_from_seed, stream};
use rbnk_core::{
    exhaustive_analysis, generate_landscape, hillclimb, Addressing, ClimbSetup, DynamismMode,
    DynamismSpec, EnvironmentSchedule, EvalConfig, LiveNetwork, Network, RbnConfig, TraitVector,
    VariantConfig,
};
use wasm_bindgen::prelude::*;

/// States and rewiring activity of one network run.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct DynamicsRun {
    nodes: usize,
    cycles: usize,
    states: Vec<u8>,
    changed: Vec<f64>,
    events: Vec<u32>,
}

#[wasm_bindgen]
impl DynamicsRun {
    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn cycles(&self) -> usize {
        self.cycles
    }

    /// `(cycles + 1) * nodes` states, row by row from the start state.
    pub fn raster(&self) -> Vec<u8> {
        self.states.clone()
    }

    /// Fraction of nodes that changed state at each cycle.
    pub fn changed_fraction(&self) -> Vec<f64> {
        self.changed.clone()
    }

    /// Nodes that rewired at each cycle.
    pub fn rewire_events(&self) -> Vec<u32> {
        self.events.clone()
    }
}

pub fn dynamics_run(
    nodes: usize,
    b: usize,
    dynamic_pct: f64,
    cycles: usize,
    seed: u64,
) -> Result<DynamicsRun, String> {
    let config = RbnConfig::new(nodes, b).map_err(|e| e.to_string())?;
    let mut rng = rng_from_seed(seed);
    let net = Network::random(&config, &mut rng).map_err(|e| e.to_string())?;
    let dynamism = DynamismSpec::with_dynamic_fraction(
        &config,
        dynamic_pct / 100.0,
        DynamismMode::Standard,
        Addressing::Absolute,
        &mut rng,
    )
    .map_err(|e| e.to_string())?;
    let mut live = LiveNetwork::new(
        &net.functions,
        &dynamism,
        net.topology.clone(),
        net.start.clone(),
    )
    .map_err(|e| e.to_string())?;

    let mut states: Vec<u8> = live.state().iter().map(|&s| s as u8).collect();
    let mut changed = Vec::with_capacity(cycles);
    let mut events = Vec::with_capacity(cycles);
    for _ in 0..cycles {
        let before = states.len() - nodes;
        events.push(live.lifecycle_step() as u32);
        let mut flips = 0;
        for (i, &s) in live.state().iter().enumerate() {
            flips += (states[before + i] != s as u8) as usize;
            states.push(s as u8);
        }
        changed.push(flips as f64 / nodes as f64);
    }
    Ok(DynamicsRun {
        nodes,
        cycles,
        states,
        changed,
        events,
    })
}

#[wasm_bindgen]
pub fn run_dynamics(
    nodes: usize,
    b: usize,
    dynamic_pct: f64,
    cycles: usize,
    seed: u32,
) -> Result<DynamicsRun, JsValue> {
    dynamics_run(nodes, b, dynamic_pct, cycles, seed.into()).map_err(|e| JsValue::from_str(&e))
}

/// Every trait vector's fitness plus the 1-bit local optima.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct LandscapeView {
    fitness: Vec<f64>,
    optima: Vec<u32>,
    best: f64,
}

#[wasm_bindgen]
impl LandscapeView {
    /// Indexed by trait vector, trait 0 as the most significant bit.
    pub fn fitness(&self) -> Vec<f64> {
        self.fitness.clone()
    }

    pub fn local_optima(&self) -> Vec<u32> {
        self.optima.clone()
    }

    pub fn global_optimum(&self) -> f64 {
        self.best
    }
}

pub fn landscape_view(n: usize, k: usize, seed: u64) -> Result<LandscapeView, String> {
    if n > 12 {
        return Err(format!("n = {n} is too large to draw; use at most 12"));
    }
    let land = generate_landscape(n, k, seed).map_err(|e| e.to_string())?;
    let analysis = exhaustive_analysis(&land).map_err(|e| e.to_string())?;
    let fitness = (0..1usize << n)
        .map(|v| land.fitness(&TraitVector::from_index(v, n)))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    Ok(LandscapeView {
        fitness,
        optima: analysis
            .local_optima
            .iter()
            .map(|t| t.to_index() as u32)
            .collect(),
        best: analysis.global_optimum,
    })
}

#[wasm_bindgen]
pub fn analyze_landscape(n: usize, k: usize, seed: u32) -> Result<LandscapeView, JsValue> {
    landscape_view(n, k, seed.into()).map_err(|e| JsValue::from_str(&e))
}

/// Generation, fitness and dynamic-node fraction at every traced point.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct EvolveTrace {
    generations: Vec<u32>,
    fitness: Vec<f64>,
    dynamic_fraction: Vec<f64>,
}

#[wasm_bindgen]
impl EvolveTrace {
    pub fn generations(&self) -> Vec<u32> {
        self.generations.clone()
    }

    pub fn fitness(&self) -> Vec<f64> {
        self.fitness.clone()
    }

    pub fn dynamic_fraction(&self) -> Vec<f64> {
        self.dynamic_fraction.clone()
    }
}

#[allow(clippy::too_many_arguments)]
pub fn evolve_trace(
    nodes: usize,
    b: usize,
    n: usize,
    k: usize,
    generations: usize,
    switching: bool,
    seed: u64,
) -> Result<EvolveTrace, String> {
    let fail = |e: rbnk_core::error::Error| e.to_string();
    let rbn = RbnConfig::new(nodes, b).map_err(fail)?;
    let landscapes = [
        generate_landscape(n, k, derive_seed(seed, &[stream::LANDSCAPE, 0])).map_err(fail)?,
        generate_landscape(n, k, derive_seed(seed, &[stream::LANDSCAPE, 1])).map_err(fail)?,
    ];
    let mut rng = rng_from_seed(derive_seed(seed, &[stream::TRAIT_NODES]));
    let eval = EvalConfig::with_random_traits(100, nodes, n, n, &mut rng).map_err(fail)?;
    let schedule = if switching {
        EnvironmentSchedule::switching(n, 100)
    } else {
        EnvironmentSchedule::stationary(n, 100)
    };
    let variant = VariantConfig::default().with_generations(generations);
    let setup = ClimbSetup {
        rbn,
        variant: &variant,
        eval: &eval,
        schedule: &schedule,
        landscapes: &landscapes[..schedule.phases.len()],
        trace_every: (generations / 200).max(1),
    };
    let record = hillclimb(&setup, derive_seed(seed, &[stream::REPLICATE])).map_err(fail)?;
    Ok(EvolveTrace {
        generations: record.trace.iter().map(|p| p.generation as u32).collect(),
        fitness: record.trace.iter().map(|p| p.fitness).collect(),
        dynamic_fraction: record.trace.iter().map(|p| p.dynamic_fraction).collect(),
    })
}

#[wasm_bindgen]
pub fn run_evolution(
    nodes: usize,
    b: usize,
    n: usize,
    k: usize,
    generations: usize,
    switching: bool,
    seed: u32,
) -> Result<EvolveTrace, JsValue> {
    evolve_trace(nodes, b, n, k, generations, switching, seed.into())
        .map_err(|e| JsValue::from_str(&e))
}
