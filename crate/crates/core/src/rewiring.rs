//! Structural dynamism: nodes that rewrite their own connections during a lifecycle.
//!
//! A dynamic node carries `B'` structure-regulation sources and a rewiring
//! table of `2^B'` rows. Every cycle the states of its structure sources pick
//! a row, and that row replaces the node's `B` transcription sources (and, in
//! [`DynamismMode::Full`], its `B'` structure sources as well). The row index
//! is read from the same state vector that drives the synchronous update, so
//! new connections first take effect on the following cycle.

use rand::seq::index;
use rand::Rng;

use crate::error::{invalid, Result};
use crate::rbn::{row_index, step_into, BooleanFunction, RbnConfig, StateVector, Topology};

/// Largest offset magnitude in relative addressing.
pub const RELATIVE_RANGE: i32 = 5;

/// Which connection lists a dynamic node rewrites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DynamismMode {
    /// Only the `B` transcription sources.
    #[default]
    Standard,
    /// Both the `B` transcription and the `B'` structure sources.
    Full,
}

/// How rewiring table entries name their targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Addressing {
    /// Entries are node ids in `[0, R)`.
    #[default]
    Absolute,
    /// Entries are offsets in `[-5, 5]` applied to the current id modulo `R`.
    Relative,
}

named_enum!(DynamismMode { Standard => "standard", Full => "full" });
named_enum!(Addressing { Absolute => "absolute", Relative => "relative" });

impl Addressing {
    pub fn random_entry<R: Rng + ?Sized>(self, nodes: usize, rng: &mut R) -> i32 {
        match self {
            Addressing::Absolute => rng.random_range(0..nodes as i32),
            Addressing::Relative => rng.random_range(-RELATIVE_RANGE..=RELATIVE_RANGE),
        }
    }

    /// Uniform entry different from `current`.
    pub fn random_other_entry<R: Rng + ?Sized>(
        self,
        current: i32,
        nodes: usize,
        rng: &mut R,
    ) -> i32 {
        let (lo, hi) = match self {
            Addressing::Absolute => (0, nodes as i32 - 1),
            Addressing::Relative => (-RELATIVE_RANGE, RELATIVE_RANGE),
        };
        if lo == hi {
            return lo;
        }
        let draw = rng.random_range(lo..hi);
        if draw >= current {
            draw + 1
        } else {
            draw
        }
    }

    pub fn accepts(self, entry: i32, nodes: usize) -> bool {
        match self {
            Addressing::Absolute => entry >= 0 && (entry as usize) < nodes,
            Addressing::Relative => (-RELATIVE_RANGE..=RELATIVE_RANGE).contains(&entry),
        }
    }

    #[inline]
    pub fn resolve(self, current: u32, entry: i32, nodes: usize) -> u32 {
        match self {
            Addressing::Absolute => entry as u32,
            Addressing::Relative => (current as i64 + entry as i64).rem_euclid(nodes as i64) as u32,
        }
    }
}

/// Entries per rewiring-table row.
pub fn row_width(config: &RbnConfig, mode: DynamismMode) -> usize {
    match mode {
        DynamismMode::Standard => config.in_degree,
        DynamismMode::Full => config.in_degree + config.structure_in_degree,
    }
}

/// A per-node rewiring table: `2^B'` rows of replacement entries.
///
/// Each row holds the `B` transcription entries, followed by `B'` structure
/// entries in full mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RewireTable {
    width: usize,
    entries: Vec<i32>,
}

impl RewireTable {
    pub fn from_rows(rows: &[Vec<i32>]) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        if width == 0 || !rows.len().is_power_of_two() || rows.iter().any(|r| r.len() != width) {
            return Err(invalid(
                "rewiring table needs a power-of-two number of equal, non-empty rows",
            ));
        }
        Ok(Self {
            width,
            entries: rows.concat(),
        })
    }

    /// A table whose every row is `row`.
    pub fn uniform(structure_in_degree: usize, row: &[i32]) -> Self {
        Self {
            width: row.len(),
            entries: row.repeat(1 << structure_in_degree),
        }
    }

    pub fn random<R: Rng + ?Sized>(
        config: &RbnConfig,
        mode: DynamismMode,
        addressing: Addressing,
        rng: &mut R,
    ) -> Self {
        let width = row_width(config, mode);
        let entries = (0..width << config.structure_in_degree)
            .map(|_| addressing.random_entry(config.nodes, rng))
            .collect();
        Self { width, entries }
    }

    pub fn rows(&self) -> usize {
        self.entries.len() / self.width
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[i32] {
        &self.entries[row * self.width..(row + 1) * self.width]
    }

    pub fn entry(&self, row: usize, slot: usize) -> i32 {
        self.row(row)[slot]
    }

    pub fn set_entry(&mut self, row: usize, slot: usize, value: i32) {
        assert!(
            slot < self.width,
            "slot {slot} outside row width {}",
            self.width
        );
        self.entries[row * self.width + slot] = value;
    }

    pub fn entries(&self) -> &[i32] {
        &self.entries
    }
}

/// Dynamism data for every node of a network.
///
/// Structure sources and tables are held for all nodes; they are dormant
/// while a node's dynamic flag is off.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DynamismSpec {
    pub dynamic: Vec<bool>,
    /// Genome-defined `B'` sources, the starting structure topology.
    pub structure_sources: Topology,
    pub tables: Vec<RewireTable>,
    pub mode: DynamismMode,
    pub addressing: Addressing,
}

impl DynamismSpec {
    pub fn new(
        config: &RbnConfig,
        dynamic: Vec<bool>,
        structure_sources: Topology,
        tables: Vec<RewireTable>,
        mode: DynamismMode,
        addressing: Addressing,
    ) -> Result<Self> {
        let spec = Self {
            dynamic,
            structure_sources,
            tables,
            mode,
            addressing,
        };
        spec.validate(config)?;
        Ok(spec)
    }

    pub fn validate(&self, config: &RbnConfig) -> Result<()> {
        let nodes = config.nodes;
        if self.dynamic.len() != nodes || self.tables.len() != nodes {
            return Err(invalid("dynamism data must cover every node"));
        }
        if self.structure_sources.node_count() != nodes
            || self.structure_sources.degree() != config.structure_in_degree
        {
            return Err(invalid(format!(
                "structure sources must hold {} ids for each of {nodes} nodes",
                config.structure_in_degree
            )));
        }
        let width = row_width(config, self.mode);
        for (node, table) in self.tables.iter().enumerate() {
            if table.rows() != 1 << config.structure_in_degree || table.width() != width {
                return Err(invalid(format!(
                    "node {node}: rewiring table must be {} rows of {width}",
                    1 << config.structure_in_degree
                )));
            }
            if let Some(&bad) = table
                .entries()
                .iter()
                .find(|&&e| !self.addressing.accepts(e, nodes))
            {
                return Err(invalid(format!(
                    "node {node}: rewiring entry {bad} out of range"
                )));
            }
        }
        Ok(())
    }

    /// Random structure sources and tables for every node, with the given flags.
    pub fn random<R: Rng + ?Sized>(
        config: &RbnConfig,
        dynamic: Vec<bool>,
        mode: DynamismMode,
        addressing: Addressing,
        rng: &mut R,
    ) -> Self {
        assert_eq!(dynamic.len(), config.nodes);
        let structure_sources = Topology::random(config.nodes, config.structure_in_degree, rng);
        let tables = (0..config.nodes)
            .map(|_| RewireTable::random(config, mode, addressing, rng))
            .collect();
        Self {
            dynamic,
            structure_sources,
            tables,
            mode,
            addressing,
        }
    }

    /// Random dynamism with exactly `round(fraction * R)` dynamic nodes, chosen uniformly.
    pub fn with_dynamic_fraction<R: Rng + ?Sized>(
        config: &RbnConfig,
        fraction: f64,
        mode: DynamismMode,
        addressing: Addressing,
        rng: &mut R,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&fraction) {
            return Err(invalid(format!(
                "dynamic fraction {fraction} outside [0, 1]"
            )));
        }
        let count = (fraction * config.nodes as f64).round() as usize;
        let mut dynamic = vec![false; config.nodes];
        for node in index::sample(rng, config.nodes, count) {
            dynamic[node] = true;
        }
        Ok(Self::random(config, dynamic, mode, addressing, rng))
    }

    /// No dynamic nodes; dormant data is all zeros.
    pub fn inert(config: &RbnConfig) -> Self {
        let structure_sources = Topology::new(
            config.structure_in_degree,
            vec![0; config.nodes * config.structure_in_degree],
        )
        .expect("zero ids are always in range");
        let width = row_width(config, DynamismMode::Standard);
        let tables =
            vec![RewireTable::uniform(config.structure_in_degree, &vec![0; width]); config.nodes];
        Self {
            dynamic: vec![false; config.nodes],
            structure_sources,
            tables,
            mode: DynamismMode::Standard,
            addressing: Addressing::Absolute,
        }
    }

    pub fn dynamic_count(&self) -> usize {
        self.dynamic.iter().filter(|&&d| d).count()
    }
}

/// Rewires one dynamic node from `states`; returns whether any of its lists changed.
fn rewire_node(
    dynamism: &DynamismSpec,
    node: usize,
    states: &[bool],
    topology: &mut Topology,
    structure: &mut Topology,
) -> bool {
    let nodes = states.len();
    let row = dynamism.tables[node].row(row_index(structure.sources(node), states));
    let (transcription, regulation) = row.split_at(topology.degree());
    let mut changed = false;
    for (src, &entry) in topology.sources_mut(node).iter_mut().zip(transcription) {
        let target = dynamism.addressing.resolve(*src, entry, nodes);
        changed |= target != *src;
        *src = target;
    }
    if dynamism.mode == DynamismMode::Full {
        for (src, &entry) in structure.sources_mut(node).iter_mut().zip(regulation) {
            let target = dynamism.addressing.resolve(*src, entry, nodes);
            changed |= target != *src;
            *src = target;
        }
    }
    changed
}

fn rewire_all(
    dynamism: &DynamismSpec,
    states: &[bool],
    topology: &mut Topology,
    structure: &mut Topology,
) -> usize {
    (0..states.len())
        .filter(|&node| {
            dynamism.dynamic[node] && rewire_node(dynamism, node, states, topology, structure)
        })
        .count()
}

/// Result of one rewiring pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewireOutcome {
    pub topology: Topology,
    pub structure_topology: Topology,
    /// Nodes whose source lists changed.
    pub events: usize,
}

/// A network mid-lifecycle: current states and current connections.
///
/// Functions and dynamism data are borrowed from the genome; only the
/// topologies and the state vector change while the network runs.
#[derive(Debug, Clone)]
pub struct LiveNetwork<'a> {
    functions: &'a [BooleanFunction],
    dynamism: &'a DynamismSpec,
    topology: Topology,
    structure_topology: Topology,
    state: StateVector,
    scratch: StateVector,
}

impl<'a> LiveNetwork<'a> {
    /// The structure topology starts from `dynamism.structure_sources`.
    pub fn new(
        functions: &'a [BooleanFunction],
        dynamism: &'a DynamismSpec,
        topology: Topology,
        state: StateVector,
    ) -> Result<Self> {
        let nodes = functions.len();
        if state.len() != nodes || topology.node_count() != nodes || dynamism.dynamic.len() != nodes
        {
            return Err(invalid("network parts disagree on node count"));
        }
        if let Some((node, _)) = functions
            .iter()
            .enumerate()
            .find(|(_, f)| f.in_degree() != topology.degree())
        {
            return Err(invalid(format!(
                "node {node}: function arity differs from B"
            )));
        }
        Ok(Self {
            functions,
            dynamism,
            topology,
            structure_topology: dynamism.structure_sources.clone(),
            state,
            scratch: StateVector::zeros(nodes),
        })
    }

    pub fn functions(&self) -> &'a [BooleanFunction] {
        self.functions
    }

    pub fn dynamism(&self) -> &'a DynamismSpec {
        self.dynamism
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn structure_topology(&self) -> &Topology {
        &self.structure_topology
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn state_mut(&mut self) -> &mut StateVector {
        &mut self.state
    }

    pub fn node_count(&self) -> usize {
        self.functions.len()
    }

    /// Rewiring driven by `states`, without touching this network.
    pub fn rewire_step(&self, states: &[bool]) -> RewireOutcome {
        let mut topology = self.topology.clone();
        let mut structure_topology = self.structure_topology.clone();
        let events = rewire_all(
            self.dynamism,
            states,
            &mut topology,
            &mut structure_topology,
        );
        RewireOutcome {
            topology,
            structure_topology,
            events,
        }
    }

    /// One cycle: synchronous update from `s(t)`, then rewiring read from the
    /// same `s(t)`. Returns the number of nodes that rewired.
    pub fn lifecycle_step(&mut self) -> usize {
        step_into(
            self.functions,
            &self.topology,
            &self.state,
            &mut self.scratch,
        );
        let events = rewire_all(
            self.dynamism,
            &self.state,
            &mut self.topology,
            &mut self.structure_topology,
        );
        std::mem::swap(&mut self.state, &mut self.scratch);
        events
    }

    /// Final state, topology and structure topology.
    pub fn into_parts(self) -> (StateVector, Topology, Topology) {
        (self.state, self.topology, self.structure_topology)
    }
}
