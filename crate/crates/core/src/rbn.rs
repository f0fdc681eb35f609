//! Classic synchronous random Boolean networks.
//!
//! A network of `R` binary nodes where every node reads the current state of
//! `B` ordered source nodes and looks up its next state in a truth table of
//! `2^B` rows. All nodes update at once from the same state vector.
//!
//! Truth-table rows are addressed with the first source as the most
//! significant bit.

use std::collections::HashMap;
use std::ops::{Deref, DerefMut};

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::rng::rng_from_seed;

/// Largest supported in-degree; truth tables grow as `2^B`.
pub const MAX_IN_DEGREE: usize = 16;

/// Size parameters of a network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RbnConfig {
    /// Node count `R`.
    pub nodes: usize,
    /// Transcription in-degree `B`.
    pub in_degree: usize,
    /// Structure-regulation in-degree `B'` of dynamic nodes.
    pub structure_in_degree: usize,
}

impl RbnConfig {
    /// Config with `B' = B`.
    pub fn new(nodes: usize, in_degree: usize) -> Result<Self> {
        let config = Self {
            nodes,
            in_degree,
            structure_in_degree: in_degree,
        };
        config.validate()?;
        Ok(config)
    }

    /// Overrides `B'`. Off the default path; every experiment keeps `B' = B`.
    pub fn with_structure_in_degree(mut self, structure_in_degree: usize) -> Result<Self> {
        self.structure_in_degree = structure_in_degree;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes == 0 {
            return Err(invalid("network needs at least one node"));
        }
        if self.nodes > u32::MAX as usize {
            return Err(invalid("node count does not fit node ids"));
        }
        for (name, degree) in [("B", self.in_degree), ("B'", self.structure_in_degree)] {
            if degree == 0 || degree > self.nodes {
                return Err(invalid(format!(
                    "{name} = {degree} must lie in [1, R = {}]",
                    self.nodes
                )));
            }
            if degree > MAX_IN_DEGREE {
                return Err(invalid(format!(
                    "{name} = {degree} exceeds the supported maximum {MAX_IN_DEGREE}"
                )));
            }
        }
        Ok(())
    }
}

/// A node state vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct StateVector(Vec<bool>);

impl StateVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![false; len])
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self((0..len).map(|_| rng.random()).collect())
    }

    /// Parses a string of `0`/`1` characters.
    pub fn from_bit_str(bits: &str) -> Option<Self> {
        bits.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Self)
    }

    /// Renders the state as a string of `0`/`1` characters.
    pub fn to_bit_string(&self) -> String {
        self.0.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn into_inner(self) -> Vec<bool> {
        self.0
    }
}

impl From<Vec<bool>> for StateVector {
    fn from(bits: Vec<bool>) -> Self {
        Self(bits)
    }
}

impl Deref for StateVector {
    type Target = [bool];

    fn deref(&self) -> &[bool] {
        &self.0
    }
}

impl DerefMut for StateVector {
    fn deref_mut(&mut self) -> &mut [bool] {
        &mut self.0
    }
}

/// A Boolean update function stored as a packed truth table of `2^B` bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    in_degree: usize,
    words: Vec<u64>,
}

impl BooleanFunction {
    fn word_count(in_degree: usize) -> usize {
        (1usize << in_degree).div_ceil(64)
    }

    fn mask_tail(&mut self) {
        let rows = self.rows();
        if rows < 64 {
            self.words[0] &= (1u64 << rows) - 1;
        }
    }

    /// Builds a table by evaluating `f` on every row index.
    pub fn from_fn(in_degree: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut table = Self {
            in_degree,
            words: vec![0; Self::word_count(in_degree)],
        };
        for row in 0..table.rows() {
            if f(row) {
                table.words[row / 64] |= 1 << (row % 64);
            }
        }
        table
    }

    /// Builds a table from explicit row outputs; the length must be a power of two.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        if !bits.len().is_power_of_two() {
            return Err(invalid(format!(
                "truth table length {} is not a power of two",
                bits.len()
            )));
        }
        let in_degree = bits.len().trailing_zeros() as usize;
        Ok(Self::from_fn(in_degree, |row| bits[row]))
    }

    pub fn constant(in_degree: usize, value: bool) -> Self {
        Self::from_fn(in_degree, |_| value)
    }

    pub fn random<R: Rng + ?Sized>(in_degree: usize, rng: &mut R) -> Self {
        let mut table = Self {
            in_degree,
            words: (0..Self::word_count(in_degree))
                .map(|_| rng.random())
                .collect(),
        };
        table.mask_tail();
        table
    }

    pub fn in_degree(&self) -> usize {
        self.in_degree
    }

    /// Number of rows, `2^B`.
    pub fn rows(&self) -> usize {
        1 << self.in_degree
    }

    #[inline]
    pub fn output(&self, row: usize) -> bool {
        (self.words[row / 64] >> (row % 64)) & 1 == 1
    }

    pub fn flip(&mut self, row: usize) {
        assert!(row < self.rows(), "row {row} out of range");
        self.words[row / 64] ^= 1 << (row % 64);
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.rows()).map(|row| self.output(row))
    }
}

/// Ordered source lists: `degree` node ids per node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Topology {
    degree: usize,
    sources: Vec<u32>,
}

impl Topology {
    /// Builds a topology from a flat list of `nodes * degree` ids.
    pub fn new(degree: usize, sources: Vec<u32>) -> Result<Self> {
        if degree == 0 || sources.is_empty() || !sources.len().is_multiple_of(degree) {
            return Err(invalid(format!(
                "{} source ids do not split into lists of {degree}",
                sources.len()
            )));
        }
        let nodes = sources.len() / degree;
        if let Some(&bad) = sources.iter().find(|&&id| id as usize >= nodes) {
            return Err(invalid(format!("source id {bad} outside [0, {nodes})")));
        }
        Ok(Self { degree, sources })
    }

    pub fn from_lists(lists: &[Vec<u32>]) -> Result<Self> {
        let degree = lists.first().map_or(0, Vec::len);
        if lists.iter().any(|l| l.len() != degree) {
            return Err(invalid("source lists differ in length"));
        }
        Self::new(degree, lists.concat())
    }

    /// Draws every source uniformly over `[0, nodes)`, with replacement.
    pub fn random<R: Rng + ?Sized>(nodes: usize, degree: usize, rng: &mut R) -> Self {
        let sources = (0..nodes * degree)
            .map(|_| rng.random_range(0..nodes as u32))
            .collect();
        Self { degree, sources }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn node_count(&self) -> usize {
        self.sources.len() / self.degree
    }

    #[inline]
    pub fn sources(&self, node: usize) -> &[u32] {
        &self.sources[node * self.degree..(node + 1) * self.degree]
    }

    #[inline]
    pub fn sources_mut(&mut self, node: usize) -> &mut [u32] {
        &mut self.sources[node * self.degree..(node + 1) * self.degree]
    }

    pub fn as_flat(&self) -> &[u32] {
        &self.sources
    }

    pub fn lists(&self) -> Vec<Vec<u32>> {
        self.sources
            .chunks(self.degree)
            .map(<[u32]>::to_vec)
            .collect()
    }
}

/// Row index formed by the states of `sources`, first source most significant.
#[inline]
pub fn row_index(sources: &[u32], states: &[bool]) -> usize {
    sources
        .iter()
        .fold(0, |row, &src| (row << 1) | states[src as usize] as usize)
}

/// Next state of a single node.
#[inline]
pub fn node_next(function: &BooleanFunction, sources: &[u32], states: &[bool]) -> bool {
    function.output(row_index(sources, states))
}

/// A randomly generated static network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    pub functions: Vec<BooleanFunction>,
    pub topology: Topology,
    pub start: StateVector,
}

impl Network {
    /// Sources, function bits and start states all drawn uniformly from `rng`.
    pub fn random<R: Rng + ?Sized>(config: &RbnConfig, rng: &mut R) -> Result<Self> {
        config.validate()?;
        let topology = Topology::random(config.nodes, config.in_degree, rng);
        let functions = (0..config.nodes)
            .map(|_| BooleanFunction::random(config.in_degree, rng))
            .collect();
        let start = StateVector::random(config.nodes, rng);
        Ok(Self {
            functions,
            topology,
            start,
        })
    }
}

/// Generates a network deterministically from `seed`.
pub fn build_network(config: &RbnConfig, seed: u64) -> Result<Network> {
    Network::random(config, &mut rng_from_seed(seed))
}

/// Synchronous update writing into `next`.
pub fn step_into(
    functions: &[BooleanFunction],
    topology: &Topology,
    states: &[bool],
    next: &mut [bool],
) {
    debug_assert_eq!(functions.len(), states.len());
    debug_assert_eq!(topology.node_count(), states.len());
    for (node, out) in next.iter_mut().enumerate() {
        *out = node_next(&functions[node], topology.sources(node), states);
    }
}

/// Synchronous update: every node reads `states`, none reads a partially updated vector.
pub fn step(functions: &[BooleanFunction], topology: &Topology, states: &[bool]) -> StateVector {
    let mut next = vec![false; states.len()];
    step_into(functions, topology, states, &mut next);
    StateVector(next)
}

/// Fraction of nodes whose state differs between two vectors.
pub fn changed_fraction(prev: &[bool], next: &[bool]) -> Result<f64> {
    if prev.len() != next.len() {
        return Err(Error::LengthMismatch {
            expected: prev.len(),
            actual: next.len(),
        });
    }
    if prev.is_empty() {
        return Ok(0.0);
    }
    let changed = prev.iter().zip(next).filter(|(a, b)| a != b).count();
    Ok(changed as f64 / prev.len() as f64)
}

/// Position of a trajectory's first repeated state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Attractor {
    /// Step at which the cycle is first entered.
    pub transient: usize,
    /// Cycle length; 1 for a point attractor.
    pub period: usize,
}

/// Follows a static network from `start` for up to `max_steps` updates and
/// reports the first state revisit, if any.
pub fn find_attractor(
    functions: &[BooleanFunction],
    topology: &Topology,
    start: &[bool],
    max_steps: usize,
) -> Option<Attractor> {
    let mut seen: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut current = start.to_vec();
    let mut next = vec![false; current.len()];
    seen.insert(current.clone(), 0);
    for t in 1..=max_steps {
        step_into(functions, topology, &current, &mut next);
        std::mem::swap(&mut current, &mut next);
        if let Some(&first) = seen.get(&current) {
            return Some(Attractor {
                transient: first,
                period: t - first,
            });
        }
        seen.insert(current.clone(), t);
    }
    None
}
