use std::fmt::Write as _;

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::evolution::VariantConfig;
use crate::rbn::{BooleanFunction, RbnConfig, StateVector, Topology};
use crate::rewiring::{Addressing, DynamismMode, DynamismSpec, LiveNetwork, RewireTable};
use crate::rng::rng_from_seed;

const FORMAT_HEADER: &str = "rbnk-genome v1";

/// The evolvable description of a network.
///
/// Per node: start state, Boolean function, `B` sources, `B'` sources,
/// rewiring table and dynamic flag. The `B'` sources, tables and flags live
/// in [`DynamismSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Genome {
    pub config: RbnConfig,
    pub start: StateVector,
    pub functions: Vec<BooleanFunction>,
    pub b_sources: Topology,
    pub dynamism: DynamismSpec,
}

/// Count of differing atomic fields between two genomes, by field.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GenomeDiff {
    pub start: usize,
    pub function_bits: usize,
    pub b_sources: usize,
    pub bp_sources: usize,
    pub table_entries: usize,
    pub dynamic: usize,
}

impl GenomeDiff {
    pub fn total(&self) -> usize {
        self.start
            + self.function_bits
            + self.b_sources
            + self.bp_sources
            + self.table_entries
            + self.dynamic
    }
}

fn count_diff<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count() + a.len().abs_diff(b.len())
}

impl Genome {
    pub fn new(
        config: RbnConfig,
        start: StateVector,
        functions: Vec<BooleanFunction>,
        b_sources: Topology,
        dynamism: DynamismSpec,
    ) -> Result<Self> {
        let genome = Self {
            config,
            start,
            functions,
            b_sources,
            dynamism,
        };
        genome.validate()?;
        Ok(genome)
    }

    pub fn validate(&self) -> Result<()> {
        let c = &self.config;
        c.validate()?;
        if self.start.len() != c.nodes || self.functions.len() != c.nodes {
            return Err(invalid("start states and functions must cover every node"));
        }
        if self.functions.iter().any(|f| f.in_degree() != c.in_degree) {
            return Err(invalid("every function must take B inputs"));
        }
        if self.b_sources.node_count() != c.nodes || self.b_sources.degree() != c.in_degree {
            return Err(invalid("B sources must hold B ids per node"));
        }
        self.dynamism.validate(c)
    }

    /// Uniformly random genome; each node is dynamic with probability `p_dynamic_init`.
    pub fn random<R: Rng + ?Sized>(
        config: &RbnConfig,
        variant: &VariantConfig,
        rng: &mut R,
    ) -> Result<Self> {
        config.validate()?;
        variant.validate()?;
        let start = StateVector::random(config.nodes, rng);
        let functions = (0..config.nodes)
            .map(|_| BooleanFunction::random(config.in_degree, rng))
            .collect();
        let b_sources = Topology::random(config.nodes, config.in_degree, rng);
        let dynamic = (0..config.nodes)
            .map(|_| rng.random_bool(variant.p_dynamic_init))
            .collect();
        let dynamism = DynamismSpec::random(
            config,
            dynamic,
            variant.dynamism_mode,
            variant.addressing,
            rng,
        );
        Ok(Self {
            config: *config,
            start,
            functions,
            b_sources,
            dynamism,
        })
    }

    /// The `B'` sources.
    pub fn bp_sources(&self) -> &Topology {
        &self.dynamism.structure_sources
    }

    pub fn dynamic_count(&self) -> usize {
        self.dynamism.dynamic_count()
    }

    pub fn dynamic_fraction(&self) -> f64 {
        self.dynamic_count() as f64 / self.config.nodes as f64
    }

    /// A network positioned at the genome's start: genome sources and start states.
    pub fn live(&self) -> LiveNetwork<'_> {
        LiveNetwork::new(
            &self.functions,
            &self.dynamism,
            self.b_sources.clone(),
            self.start.clone(),
        )
        .expect("a valid genome yields a consistent network")
    }

    pub fn diff(&self, other: &Genome) -> GenomeDiff {
        GenomeDiff {
            start: count_diff(&self.start, &other.start),
            function_bits: self
                .functions
                .iter()
                .zip(&other.functions)
                .map(|(a, b)| a.bits().zip(b.bits()).filter(|(x, y)| x != y).count())
                .sum(),
            b_sources: count_diff(self.b_sources.as_flat(), other.b_sources.as_flat()),
            bp_sources: count_diff(self.bp_sources().as_flat(), other.bp_sources().as_flat()),
            table_entries: self
                .dynamism
                .tables
                .iter()
                .zip(&other.dynamism.tables)
                .map(|(a, b)| count_diff(a.entries(), b.entries()))
                .sum(),
            dynamic: count_diff(&self.dynamism.dynamic, &other.dynamism.dynamic),
        }
    }

    /// Flat text dump, one line per node:
    ///
    /// ```text
    /// rbnk-genome v1
    /// nodes <R> in_degree <B> structure_in_degree <B'> mode <mode> addressing <addressing>
    /// node <i> start <0|1> dynamic <0|1> function <bits> b <ids> bp <ids> table <row>|<row>|...
    /// ```
    ///
    /// Function bits are listed from row 0; table rows are separated by `|`.
    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = format!(
            "{FORMAT_HEADER}\nnodes {} in_degree {} structure_in_degree {} mode {} addressing {}\n",
            c.nodes,
            c.in_degree,
            c.structure_in_degree,
            self.dynamism.mode,
            self.dynamism.addressing
        );
        let join = |ids: &mut dyn Iterator<Item = String>| ids.collect::<Vec<_>>().join(" ");
        for node in 0..c.nodes {
            let function: String = self.functions[node]
                .bits()
                .map(|b| if b { '1' } else { '0' })
                .collect();
            let table = &self.dynamism.tables[node];
            let rows: Vec<String> = (0..table.rows())
                .map(|r| join(&mut table.row(r).iter().map(i32::to_string)))
                .collect();
            let _ = writeln!(
                out,
                "node {node} start {} dynamic {} function {function} b {} bp {} table {}",
                self.start[node] as u8,
                self.dynamism.dynamic[node] as u8,
                join(&mut self.b_sources.sources(node).iter().map(u32::to_string)),
                join(&mut self.bp_sources().sources(node).iter().map(u32::to_string)),
                rows.join(" | "),
            );
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse { line, message };
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        if lines.first().map(|l| l.trim()) != Some(FORMAT_HEADER) {
            return Err(err(1, "unsupported genome format".into()));
        }
        let header: Vec<&str> = lines
            .get(1)
            .copied()
            .unwrap_or("")
            .split_whitespace()
            .collect();
        let field = |key: &str| -> Result<&str> {
            header
                .iter()
                .position(|&t| t == key)
                .and_then(|i| header.get(i + 1).copied())
                .ok_or_else(|| err(2, format!("missing `{key}`")))
        };
        let number = |key: &str| -> Result<usize> {
            field(key)?
                .parse()
                .map_err(|_| err(2, format!("bad `{key}`")))
        };
        let config = RbnConfig::new(number("nodes")?, number("in_degree")?)?
            .with_structure_in_degree(number("structure_in_degree")?)?;
        let mode: DynamismMode = field("mode")?.parse()?;
        let addressing: Addressing = field("addressing")?.parse()?;

        let mut start = Vec::with_capacity(config.nodes);
        let mut functions = Vec::with_capacity(config.nodes);
        let mut b_sources = Vec::with_capacity(config.nodes);
        let mut bp_sources = Vec::with_capacity(config.nodes);
        let mut tables = Vec::with_capacity(config.nodes);
        let mut dynamic = Vec::with_capacity(config.nodes);
        if lines.len() != config.nodes + 2 {
            return Err(err(
                lines.len(),
                format!("expected {} node lines", config.nodes),
            ));
        }
        for (node, line) in lines[2..].iter().enumerate() {
            let lineno = node + 3;
            let bad = |what: &str| err(lineno, format!("node {node}: bad {what}"));
            let section = |key: &str, next: &str| -> Result<&str> {
                let from = line.find(&format!(" {key} ")).ok_or_else(|| bad(key))? + key.len() + 2;
                let to = if next.is_empty() {
                    line.len()
                } else {
                    line.find(&format!(" {next} ")).ok_or_else(|| bad(next))?
                };
                line.get(from..to).map(str::trim).ok_or_else(|| bad(key))
            };
            if !line.starts_with(&format!("node {node} ")) {
                return Err(bad("node index"));
            }
            let bit = |s: &str, what: &str| match s {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => Err(bad(what)),
            };
            start.push(bit(section("start", "dynamic")?, "start")?);
            dynamic.push(bit(section("dynamic", "function")?, "dynamic")?);
            let bits = StateVector::from_bit_str(section("function", "b")?)
                .ok_or_else(|| bad("function"))?;
            functions.push(BooleanFunction::from_bits(&bits)?);
            let ids = |s: &str, what: &str| -> Result<Vec<u32>> {
                s.split_whitespace()
                    .map(|t| t.parse().map_err(|_| bad(what)))
                    .collect()
            };
            b_sources.push(ids(section("b", "bp")?, "b")?);
            bp_sources.push(ids(section("bp", "table")?, "bp")?);
            let rows = section("table", "")?
                .split('|')
                .map(|row| {
                    row.split_whitespace()
                        .map(|t| t.parse().map_err(|_| bad("table")))
                        .collect()
                })
                .collect::<Result<Vec<Vec<i32>>>>()?;
            tables.push(RewireTable::from_rows(&rows)?);
        }
        let dynamism = DynamismSpec::new(
            &config,
            dynamic,
            Topology::from_lists(&bp_sources)?,
            tables,
            mode,
            addressing,
        )?;
        Self::new(
            config,
            StateVector::from(start),
            functions,
            Topology::from_lists(&b_sources)?,
            dynamism,
        )
    }
}

/// Generates a random genome deterministically from `seed`.
pub fn init_genome(config: &RbnConfig, variant: &VariantConfig, seed: u64) -> Result<Genome> {
    Genome::random(config, variant, &mut rng_from_seed(seed))
}
