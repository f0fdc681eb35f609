//! Evolving dynamic networks with a greedy (1+1) hillclimber.

mod climb;
mod genome;
mod mutation;

pub use climb::{accept, hillclimb, make_offspring, ClimbSetup, RunRecord, TracePoint};
pub use genome::{init_genome, Genome, GenomeDiff};
pub use mutation::{mutate, MutationClass};

use crate::error::{invalid, Result};
use crate::rewiring::{Addressing, DynamismMode};

/// What an offspring starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Inheritance {
    /// The parent's genome as written; lifecycle rewiring is not inherited.
    #[default]
    GenomeRestart,
    /// The parent's end-of-lifecycle connections and states replace the genome's.
    InheritFinal,
}

/// Whether rewiring tables pass to offspring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TableInheritance {
    #[default]
    Inherit,
    /// Every dynamic node's table is redrawn in each offspring.
    Rerandomize,
}

/// The mutation classes available to a variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MutationSet {
    /// All six classes.
    #[default]
    Full6,
    /// No direct `B` connection or start-state mutation.
    Reduced4,
    /// Reduced4 without `B'` connection mutation.
    Reduced3,
}

impl MutationSet {
    pub fn classes(self) -> &'static [MutationClass] {
        use MutationClass::*;
        match self {
            MutationSet::Full6 => &[
                FunctionBit,
                BConnection,
                StartState,
                DynamicToggle,
                RewireEntry,
                StructureConnection,
            ],
            MutationSet::Reduced4 => {
                &[FunctionBit, DynamicToggle, RewireEntry, StructureConnection]
            }
            MutationSet::Reduced3 => &[FunctionBit, DynamicToggle, RewireEntry],
        }
    }
}

/// How a function mutation changes the truth table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FunctionMutation {
    /// Flip one table bit.
    #[default]
    BitFlip,
    /// Redraw the whole table.
    Replace,
}

named_enum!(Inheritance { GenomeRestart => "genome_restart", InheritFinal => "inherit_final" });
named_enum!(TableInheritance { Inherit => "inherit", Rerandomize => "rerandomize" });
named_enum!(MutationSet { Full6 => "full6", Reduced4 => "reduced4", Reduced3 => "reduced3" });
named_enum!(FunctionMutation { BitFlip => "bit_flip", Replace => "replace" });

/// One experimental arm's evolutionary settings.
#[derive(Debug, Clone, PartialEq)]
pub struct VariantConfig {
    pub inheritance: Inheritance,
    pub table_inheritance: TableInheritance,
    pub dynamism_mode: DynamismMode,
    pub mutation_set: MutationSet,
    pub addressing: Addressing,
    pub function_mutation: FunctionMutation,
    /// Probability that a node starts out dynamic.
    pub p_dynamic_init: f64,
    pub generations: usize,
}

impl Default for VariantConfig {
    fn default() -> Self {
        Self {
            inheritance: Inheritance::GenomeRestart,
            table_inheritance: TableInheritance::Inherit,
            dynamism_mode: DynamismMode::Standard,
            mutation_set: MutationSet::Full6,
            addressing: Addressing::Absolute,
            function_mutation: FunctionMutation::BitFlip,
            p_dynamic_init: 0.5,
            generations: 50_000,
        }
    }
}

impl VariantConfig {
    /// Offspring do not inherit their parent's rewiring tables.
    pub fn rerandomized_tables() -> Self {
        Self {
            table_inheritance: TableInheritance::Rerandomize,
            ..Self::default()
        }
    }

    /// Offspring inherit the parent's final structure and states; no direct
    /// `B` or start-state mutation.
    pub fn inherited_structure() -> Self {
        Self {
            inheritance: Inheritance::InheritFinal,
            mutation_set: MutationSet::Reduced4,
            ..Self::default()
        }
    }

    /// As [`Self::inherited_structure`], with `B'` sources rewired too and no
    /// direct `B'` mutation.
    pub fn full_dynamism() -> Self {
        Self {
            inheritance: Inheritance::InheritFinal,
            dynamism_mode: DynamismMode::Full,
            mutation_set: MutationSet::Reduced3,
            ..Self::default()
        }
    }

    pub fn with_generations(mut self, generations: usize) -> Self {
        self.generations = generations;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.mutation_set == MutationSet::Reduced3 && self.dynamism_mode != DynamismMode::Full {
            return Err(invalid("the reduced3 mutation set requires full dynamism"));
        }
        if self.table_inheritance == TableInheritance::Rerandomize
            && self.inheritance != Inheritance::GenomeRestart
        {
            return Err(invalid(
                "table rerandomization requires genome-restart inheritance",
            ));
        }
        if !(0.0..=1.0).contains(&self.p_dynamic_init) {
            return Err(invalid(format!(
                "p_dynamic_init = {} outside [0, 1]",
                self.p_dynamic_init
            )));
        }
        Ok(())
    }
}
