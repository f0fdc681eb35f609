use rand::Rng;

use crate::evolution::{FunctionMutation, Genome, VariantConfig};
use crate::rbn::BooleanFunction;

/// The atomic genome changes a mutation can make.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MutationClass {
    FunctionBit,
    BConnection,
    StartState,
    DynamicToggle,
    /// Only drawn when some node is dynamic.
    RewireEntry,
    /// A `B'` source; only drawn when some node is dynamic.
    StructureConnection,
}

impl MutationClass {
    pub fn needs_dynamic_node(self) -> bool {
        matches!(
            self,
            MutationClass::RewireEntry | MutationClass::StructureConnection
        )
    }
}

/// Uniform node id other than `current`, or `current` when `nodes == 1`.
fn other_id<R: Rng + ?Sized>(current: u32, nodes: usize, rng: &mut R) -> u32 {
    if nodes <= 1 {
        return current;
    }
    let draw = rng.random_range(0..nodes as u32 - 1);
    if draw >= current {
        draw + 1
    } else {
        draw
    }
}

/// Applies exactly one mutation event and returns its class.
///
/// The class is drawn uniformly from the variant's set; classes that need a
/// dynamic node are redrawn while the genome has none.
pub fn mutate<R: Rng + ?Sized>(
    genome: &mut Genome,
    variant: &VariantConfig,
    rng: &mut R,
) -> MutationClass {
    let classes = variant.mutation_set.classes();
    let dynamic_nodes: Vec<usize> = (0..genome.config.nodes)
        .filter(|&n| genome.dynamism.dynamic[n])
        .collect();
    let class = loop {
        let class = classes[rng.random_range(0..classes.len())];
        if !class.needs_dynamic_node() || !dynamic_nodes.is_empty() {
            break class;
        }
    };

    let nodes = genome.config.nodes;
    match class {
        MutationClass::FunctionBit => {
            let node = rng.random_range(0..nodes);
            match variant.function_mutation {
                FunctionMutation::BitFlip => {
                    let function = &mut genome.functions[node];
                    let row = rng.random_range(0..function.rows());
                    function.flip(row);
                }
                FunctionMutation::Replace => {
                    genome.functions[node] = BooleanFunction::random(genome.config.in_degree, rng);
                }
            }
        }
        MutationClass::BConnection => {
            let node = rng.random_range(0..nodes);
            let slot = rng.random_range(0..genome.config.in_degree);
            let src = &mut genome.b_sources.sources_mut(node)[slot];
            *src = other_id(*src, nodes, rng);
        }
        MutationClass::StartState => {
            let node = rng.random_range(0..nodes);
            genome.start[node] = !genome.start[node];
        }
        MutationClass::DynamicToggle => {
            let node = rng.random_range(0..nodes);
            genome.dynamism.dynamic[node] = !genome.dynamism.dynamic[node];
        }
        MutationClass::RewireEntry => {
            let node = dynamic_nodes[rng.random_range(0..dynamic_nodes.len())];
            let addressing = genome.dynamism.addressing;
            let table = &mut genome.dynamism.tables[node];
            let row = rng.random_range(0..table.rows());
            let slot = rng.random_range(0..table.width());
            let value = addressing.random_other_entry(table.entry(row, slot), nodes, rng);
            table.set_entry(row, slot, value);
        }
        MutationClass::StructureConnection => {
            let node = dynamic_nodes[rng.random_range(0..dynamic_nodes.len())];
            let slot = rng.random_range(0..genome.config.structure_in_degree);
            let src = &mut genome.dynamism.structure_sources.sources_mut(node)[slot];
            *src = other_id(*src, nodes, rng);
        }
    }
    class
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{init_genome, MutationSet};
    use crate::rbn::RbnConfig;
    use crate::rewiring::Addressing;
    use crate::rng::rng_from_seed;
    use std::collections::HashMap;

    fn variants() -> Vec<VariantConfig> {
        vec![
            VariantConfig::default(),
            VariantConfig::inherited_structure(),
            VariantConfig::full_dynamism(),
            VariantConfig {
                addressing: Addressing::Relative,
                ..VariantConfig::default()
            },
        ]
    }

    #[test]
    fn exactly_one_atomic_change() {
        let config = RbnConfig::new(20, 2).unwrap();
        let mut rng = rng_from_seed(1);
        for variant in variants() {
            let mut genome = init_genome(&config, &variant, 3).unwrap();
            for _ in 0..10_000 {
                let before = genome.clone();
                let class = mutate(&mut genome, &variant, &mut rng);
                let diff = before.diff(&genome);
                assert_eq!(
                    diff.total(),
                    1,
                    "{class:?} under {variant:?} changed {diff:?}"
                );
                genome.validate().unwrap();
            }
        }
    }

    #[test]
    fn reduced_sets_leave_fields_alone() {
        let config = RbnConfig::new(20, 2).unwrap();
        let mut rng = rng_from_seed(2);
        for (variant, bp_fixed) in [
            (VariantConfig::inherited_structure(), false),
            (VariantConfig::full_dynamism(), true),
        ] {
            let mut genome = init_genome(&config, &variant, 5).unwrap();
            let original = genome.clone();
            for _ in 0..10_000 {
                mutate(&mut genome, &variant, &mut rng);
            }
            let diff = original.diff(&genome);
            assert_eq!(diff.b_sources, 0);
            assert_eq!(diff.start, 0);
            if bp_fixed {
                assert_eq!(diff.bp_sources, 0);
            }
        }
    }

    #[test]
    fn class_frequencies_without_dynamic_nodes() {
        let config = RbnConfig::new(20, 2).unwrap();
        let variant = VariantConfig {
            p_dynamic_init: 0.0,
            ..VariantConfig::default()
        };
        let template = init_genome(&config, &variant, 1).unwrap();
        let mut rng = rng_from_seed(9);
        let draws = 10_000;
        let mut counts: HashMap<MutationClass, usize> = HashMap::new();
        for _ in 0..draws {
            let mut g = template.clone();
            *counts
                .entry(mutate(&mut g, &variant, &mut rng))
                .or_default() += 1;
        }
        assert!(!counts.contains_key(&MutationClass::RewireEntry));
        assert!(!counts.contains_key(&MutationClass::StructureConnection));
        assert_eq!(counts.len(), 4);
        // multinomial cell with p = 1/4: sd = sqrt(n p (1 - p))
        let expected = draws as f64 / 4.0;
        let sd = (draws as f64 * 0.25 * 0.75).sqrt();
        for (class, &count) in &counts {
            assert!(
                (count as f64 - expected).abs() < 3.0 * sd,
                "{class:?}: {count}"
            );
        }
    }

    #[test]
    fn full_set_uses_all_classes_with_dynamic_nodes() {
        let config = RbnConfig::new(20, 2).unwrap();
        let variant = VariantConfig::default();
        let template = init_genome(&config, &variant, 1).unwrap();
        assert!(template.dynamic_count() > 0);
        let mut rng = rng_from_seed(10);
        let draws = 12_000;
        let mut counts: HashMap<MutationClass, usize> = HashMap::new();
        for _ in 0..draws {
            let mut g = template.clone();
            *counts
                .entry(mutate(&mut g, &variant, &mut rng))
                .or_default() += 1;
        }
        let expected = draws as f64 / 6.0;
        let sd = (draws as f64 * (1.0 / 6.0) * (5.0 / 6.0)).sqrt();
        assert_eq!(counts.len(), 6);
        for &count in counts.values() {
            assert!((count as f64 - expected).abs() < 3.0 * sd);
        }
        let reduced: Vec<_> = MutationSet::Reduced3.classes().to_vec();
        let variant = VariantConfig::full_dynamism();
        let template = init_genome(&config, &variant, 1).unwrap();
        for _ in 0..1000 {
            let mut g = template.clone();
            assert!(reduced.contains(&mutate(&mut g, &variant, &mut rng)));
        }
    }

    #[test]
    fn replace_mode_redraws_table() {
        let config = RbnConfig::new(5, 4).unwrap();
        let variant = VariantConfig {
            function_mutation: FunctionMutation::Replace,
            mutation_set: MutationSet::Reduced3,
            dynamism_mode: crate::rewiring::DynamismMode::Full,
            p_dynamic_init: 0.0,
            ..VariantConfig::default()
        };
        let mut rng = rng_from_seed(4);
        let original = init_genome(&config, &variant, 0).unwrap();
        let mut multi_bit = false;
        for _ in 0..200 {
            let mut g = original.clone();
            if mutate(&mut g, &variant, &mut rng) == MutationClass::FunctionBit {
                multi_bit |= original.diff(&g).function_bits > 1;
            }
        }
        assert!(multi_bit);
    }

    #[test]
    fn other_id_never_repeats() {
        let mut rng = rng_from_seed(0);
        for _ in 0..1000 {
            let cur = rng.random_range(0..9);
            let id = other_id(cur, 9, &mut rng);
            assert!(id != cur && id < 9);
        }
        assert_eq!(other_id(0, 1, &mut rng), 0);
    }
}
