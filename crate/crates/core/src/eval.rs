//! Lifecycle fitness of a network coupled to NK landscapes.
//!
//! The first `N` nodes receive environmental inputs, clamped every cycle.
//! `N` further nodes are read as the traits of an NK landscape after each
//! update, and the lifecycle fitness is the mean over all `T` cycles.

use rand::seq::index;
use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::nk::NkLandscape;
use crate::rbn::{changed_fraction, StateVector, Topology};
use crate::rewiring::LiveNetwork;

/// Lifecycle length used throughout the experiments.
pub const DEFAULT_LIFECYCLE: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalConfig {
    /// Update cycles per lifecycle, `T`.
    pub lifecycle: usize,
    /// Clamped input loci: nodes `0..inputs`.
    pub inputs: usize,
    /// Nodes read as traits, in trait order.
    pub trait_nodes: Vec<usize>,
}

impl EvalConfig {
    pub fn new(lifecycle: usize, inputs: usize, trait_nodes: Vec<usize>) -> Self {
        Self {
            lifecycle,
            inputs,
            trait_nodes,
        }
    }

    /// Chooses `traits` distinct trait nodes uniformly from `[inputs, nodes)`.
    pub fn with_random_traits<R: Rng + ?Sized>(
        lifecycle: usize,
        nodes: usize,
        inputs: usize,
        traits: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if inputs + traits > nodes {
            return Err(invalid(format!(
                "{inputs} inputs and {traits} trait nodes do not fit in {nodes} nodes"
            )));
        }
        let trait_nodes = index::sample(rng, nodes - inputs, traits)
            .into_iter()
            .map(|i| i + inputs)
            .collect();
        Ok(Self::new(lifecycle, inputs, trait_nodes))
    }

    pub fn validate(&self, nodes: usize) -> Result<()> {
        if self.lifecycle == 0 {
            return Err(invalid("lifecycle must have at least one cycle"));
        }
        if self.inputs > nodes {
            return Err(invalid(format!(
                "{} inputs exceed {nodes} nodes",
                self.inputs
            )));
        }
        let mut seen = vec![false; nodes];
        for &node in &self.trait_nodes {
            if node < self.inputs || node >= nodes {
                return Err(Error::TraitNodeOutOfBounds {
                    node,
                    lower: self.inputs,
                    nodes,
                });
            }
            if std::mem::replace(&mut seen[node], true) {
                return Err(invalid(format!("trait node {node} listed twice")));
            }
        }
        Ok(())
    }
}

/// One environmental phase: clamped inputs and the landscape that scores it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phase {
    pub inputs: Vec<bool>,
    /// Index into the landscape slice passed to [`evaluate`].
    pub landscape: usize,
    /// Cycles spent in this phase.
    pub duration: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvironmentSchedule {
    pub phases: Vec<Phase>,
}

impl EnvironmentSchedule {
    /// A single phase: all-zero inputs on landscape 0.
    pub fn stationary(inputs: usize, lifecycle: usize) -> Self {
        Self {
            phases: vec![Phase {
                inputs: vec![false; inputs],
                landscape: 0,
                duration: lifecycle,
            }],
        }
    }

    /// All-zero inputs on landscape 0 for the first half of the lifecycle,
    /// then all-one inputs on landscape 1.
    pub fn switching(inputs: usize, lifecycle: usize) -> Self {
        let first = lifecycle / 2;
        Self {
            phases: vec![
                Phase {
                    inputs: vec![false; inputs],
                    landscape: 0,
                    duration: first,
                },
                Phase {
                    inputs: vec![true; inputs],
                    landscape: 1,
                    duration: lifecycle - first,
                },
            ],
        }
    }

    pub fn validate(&self, cfg: &EvalConfig, landscapes: &[NkLandscape]) -> Result<()> {
        if self.phases.iter().any(|p| p.duration == 0) {
            return Err(invalid("phase durations must be positive"));
        }
        let total: usize = self.phases.iter().map(|p| p.duration).sum();
        if total != cfg.lifecycle {
            return Err(invalid(format!(
                "phase durations sum to {total}, lifecycle is {}",
                cfg.lifecycle
            )));
        }
        for phase in &self.phases {
            if phase.inputs.len() != cfg.inputs {
                return Err(Error::LengthMismatch {
                    expected: cfg.inputs,
                    actual: phase.inputs.len(),
                });
            }
            let land = landscapes
                .get(phase.landscape)
                .ok_or(Error::UnknownLandscape {
                    id: phase.landscape,
                    available: landscapes.len(),
                })?;
            if land.traits() != cfg.trait_nodes.len() {
                return Err(Error::LengthMismatch {
                    expected: land.traits(),
                    actual: cfg.trait_nodes.len(),
                });
            }
        }
        Ok(())
    }

    /// Phase active at 1-based `cycle`: phase `p` owns the cycles after the
    /// preceding phases' durations, up to and including its own end.
    pub fn phase_at(&self, cycle: usize) -> Option<&Phase> {
        let mut end = 0;
        self.phases.iter().find(|p| {
            end += p.duration;
            cycle <= end
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LifecycleResult {
    pub mean_fitness: f64,
    pub final_state: StateVector,
    pub final_topology: Topology,
    pub final_structure_topology: Topology,
    /// Rewiring events per cycle, `T` entries.
    pub rewire_events: Vec<usize>,
}

impl LifecycleResult {
    /// Cycles in which at least one node rewired.
    pub fn firing_cycles(&self) -> usize {
        self.rewire_events.iter().filter(|&&e| e > 0).count()
    }
}

fn clamp(state: &mut [bool], inputs: &[bool]) {
    state[..inputs.len()].copy_from_slice(inputs);
}

/// Runs one lifecycle and averages the per-cycle fitness.
///
/// Each cycle clamps the active phase's inputs, updates and rewires, clamps
/// again, then scores the trait nodes on the phase's landscape.
pub fn evaluate(
    mut net: LiveNetwork<'_>,
    cfg: &EvalConfig,
    schedule: &EnvironmentSchedule,
    landscapes: &[NkLandscape],
) -> Result<LifecycleResult> {
    cfg.validate(net.node_count())?;
    schedule.validate(cfg, landscapes)?;

    let mut traits = vec![false; cfg.trait_nodes.len()];
    let mut rewire_events = Vec::with_capacity(cfg.lifecycle);
    let mut total = 0.0;
    let mut phases = schedule.phases.iter();
    let mut phase = phases.next().expect("validated schedule has a phase");
    let mut remaining = phase.duration;
    clamp(net.state_mut(), &phase.inputs);

    for _ in 0..cfg.lifecycle {
        if remaining == 0 {
            phase = phases.next().expect("durations sum to the lifecycle");
            remaining = phase.duration;
        }
        remaining -= 1;
        clamp(net.state_mut(), &phase.inputs);
        rewire_events.push(net.lifecycle_step());
        clamp(net.state_mut(), &phase.inputs);
        for (t, &node) in traits.iter_mut().zip(&cfg.trait_nodes) {
            *t = net.state()[node];
        }
        total += landscapes[phase.landscape].fitness_unchecked(&traits);
    }

    let (final_state, final_topology, final_structure_topology) = net.into_parts();
    Ok(LifecycleResult {
        mean_fitness: total / cfg.lifecycle as f64,
        final_state,
        final_topology,
        final_structure_topology,
        rewire_events,
    })
}

/// Per-cycle changed fraction of an unclamped run.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsProfile {
    /// `changed_fraction(s(t-1), s(t))` for `t = 1..=cycles`.
    pub series: Vec<f64>,
}

impl DynamicsProfile {
    pub fn final_value(&self) -> f64 {
        *self.series.last().expect("profile has at least two cycles")
    }
}

/// Runs `cycles` lifecycle steps with no clamping and records how much of
/// the network changes state each cycle.
pub fn dynamics_profile(mut net: LiveNetwork<'_>, cycles: usize) -> Result<DynamicsProfile> {
    if cycles < 2 {
        return Err(invalid("dynamics profile needs at least two cycles"));
    }
    let mut series = Vec::with_capacity(cycles);
    let mut prev = net.state().clone();
    for _ in 0..cycles {
        net.lifecycle_step();
        series.push(changed_fraction(&prev, net.state())?);
        prev.copy_from_slice(net.state());
    }
    Ok(DynamicsProfile { series })
}

#[cfg(test)]
#[allow(clippy::needless_range_loop, clippy::too_many_arguments)]
mod tests {
    use super::*;
    use crate::nk::{generate_landscape, NkLandscape};
    use crate::rbn::{build_network, BooleanFunction, Network, RbnConfig};
    use crate::rewiring::{Addressing, DynamismMode, DynamismSpec};
    use crate::rng::rng_from_seed;
    use proptest::prelude::*;

    fn constant_network(
        nodes: usize,
        b: usize,
        value: bool,
    ) -> (Vec<BooleanFunction>, Topology, DynamismSpec) {
        let config = RbnConfig::new(nodes, b).unwrap();
        let net = build_network(&config, 1).unwrap();
        (
            vec![BooleanFunction::constant(b, value); nodes],
            net.topology,
            DynamismSpec::inert(&config),
        )
    }

    #[test]
    fn constant_network_single_phase() {
        let (functions, topology, dynamism) = constant_network(8, 2, true);
        let land = generate_landscape(2, 1, 5).unwrap();
        let cfg = EvalConfig::new(100, 2, vec![4, 6]);
        let live =
            LiveNetwork::new(&functions, &dynamism, topology, StateVector::zeros(8)).unwrap();
        let result = evaluate(
            live,
            &cfg,
            &EnvironmentSchedule::stationary(2, 100),
            std::slice::from_ref(&land),
        )
        .unwrap();
        let expected = land.fitness(&[true, true]).unwrap();
        assert!((result.mean_fitness - expected).abs() < 1e-12);
        assert_eq!(result.rewire_events, vec![0; 100]);
        assert_eq!(&result.final_state[..2], &[false, false]);
    }

    #[test]
    fn constant_network_two_phases_average() {
        let (functions, topology, dynamism) = constant_network(8, 2, false);
        let a = generate_landscape(2, 1, 5).unwrap();
        let b = generate_landscape(2, 1, 6).unwrap();
        let cfg = EvalConfig::new(100, 2, vec![2, 7]);
        let live =
            LiveNetwork::new(&functions, &dynamism, topology, StateVector::zeros(8)).unwrap();
        let result = evaluate(
            live,
            &cfg,
            &EnvironmentSchedule::switching(2, 100),
            &[a.clone(), b.clone()],
        )
        .unwrap();
        let expected =
            (a.fitness(&[false, false]).unwrap() + b.fitness(&[false, false]).unwrap()) / 2.0;
        assert!((result.mean_fitness - expected).abs() < 1e-12);
        assert_eq!(&result.final_state[..2], &[true, true]);
    }

    #[test]
    fn phase_boundary_is_exact() {
        let schedule = EnvironmentSchedule::switching(3, 100);
        assert_eq!(schedule.phase_at(1).unwrap().landscape, 0);
        assert_eq!(schedule.phase_at(50).unwrap().landscape, 0);
        assert_eq!(schedule.phase_at(51).unwrap().landscape, 1);
        assert_eq!(schedule.phase_at(100).unwrap().landscape, 1);
        assert!(schedule.phase_at(101).is_none());

        // trait node copies input 0; landscape 0 rewards 0 and landscape 1 rewards 1
        let config = RbnConfig::new(4, 1).unwrap();
        let copy = BooleanFunction::from_bits(&[false, true]).unwrap();
        let functions = vec![copy; 4];
        let topology = Topology::new(1, vec![0, 0, 0, 0]).unwrap();
        let dynamism = DynamismSpec::inert(&config);
        let zero = NkLandscape::from_parts(1, 0, vec![vec![]], vec![vec![1.0, 0.0]]).unwrap();
        let one = NkLandscape::from_parts(1, 0, vec![vec![]], vec![vec![0.0, 1.0]]).unwrap();
        let cfg = EvalConfig::new(100, 1, vec![2]);
        let schedule = EnvironmentSchedule::switching(1, 100);
        let live =
            LiveNetwork::new(&functions, &dynamism, topology, StateVector::zeros(4)).unwrap();
        let result = evaluate(live, &cfg, &schedule, &[zero, one]).unwrap();
        // cycle 51 reads input 0 clamped to 1 before the update, so the copy is immediate
        assert_eq!(result.mean_fitness, 1.0);
    }

    #[test]
    fn validation_errors() {
        let (functions, topology, dynamism) = constant_network(8, 2, false);
        let land = generate_landscape(2, 1, 5).unwrap();
        let live = || {
            LiveNetwork::new(
                &functions,
                &dynamism,
                topology.clone(),
                StateVector::zeros(8),
            )
            .unwrap()
        };
        let stationary = EnvironmentSchedule::stationary(2, 100);

        let bad_trait = EvalConfig::new(100, 2, vec![1, 5]);
        assert!(matches!(
            evaluate(live(), &bad_trait, &stationary, std::slice::from_ref(&land)),
            Err(Error::TraitNodeOutOfBounds { node: 1, .. })
        ));
        let beyond = EvalConfig::new(100, 2, vec![3, 8]);
        assert!(matches!(
            evaluate(live(), &beyond, &stationary, std::slice::from_ref(&land)),
            Err(Error::TraitNodeOutOfBounds { node: 8, .. })
        ));
        let cfg = EvalConfig::new(100, 2, vec![3, 4]);
        assert!(matches!(
            evaluate(
                live(),
                &cfg,
                &EnvironmentSchedule::switching(2, 100),
                std::slice::from_ref(&land)
            ),
            Err(Error::UnknownLandscape {
                id: 1,
                available: 1
            })
        ));
        assert!(evaluate(
            live(),
            &cfg,
            &EnvironmentSchedule::stationary(2, 99),
            std::slice::from_ref(&land)
        )
        .is_err());
        let dup = EvalConfig::new(100, 2, vec![3, 3]);
        assert!(evaluate(live(), &dup, &stationary, &[land]).is_err());
    }

    #[test]
    fn random_traits_avoid_inputs() {
        let mut rng = rng_from_seed(3);
        for _ in 0..100 {
            let cfg = EvalConfig::with_random_traits(100, 30, 10, 10, &mut rng).unwrap();
            assert!(cfg.validate(30).is_ok());
        }
        assert!(EvalConfig::with_random_traits(100, 15, 10, 10, &mut rng).is_err());
    }

    /// Independent step-by-step simulation of the R=6, B=2, N=2, K=1 setup
    /// using plain arrays and its own indexing.
    fn miniature_oracle(
        functions: &[[bool; 4]; 6],
        mut sources: [[usize; 2]; 6],
        structure: [[usize; 2]; 6],
        dynamic: [bool; 6],
        tables: &[[[usize; 2]; 4]; 6],
        start: [bool; 6],
        traits: [usize; 2],
        landscapes: [(&[usize; 2], &[[f64; 4]; 2]); 2],
    ) -> f64 {
        let mut state = start;
        let mut total = 0.0;
        for cycle in 1..=100 {
            let (input, which) = if cycle <= 50 { (false, 0) } else { (true, 1) };
            state[0] = input;
            state[1] = input;
            let mut next = [false; 6];
            for i in 0..6 {
                let row = 2 * state[sources[i][0]] as usize + state[sources[i][1]] as usize;
                next[i] = functions[i][row];
            }
            for i in 0..6 {
                if dynamic[i] {
                    let row = 2 * state[structure[i][0]] as usize + state[structure[i][1]] as usize;
                    sources[i] = tables[i][row];
                }
            }
            state = next;
            state[0] = input;
            state[1] = input;
            let (links, table) = landscapes[which];
            let t = [state[traits[0]], state[traits[1]]];
            let f0 = table[0][2 * t[0] as usize + t[links[0]] as usize];
            let f1 = table[1][2 * t[1] as usize + t[links[1]] as usize];
            total += (f0 + f1) / 2.0;
        }
        total / 100.0
    }

    #[test]
    fn miniature_matches_oracle() {
        for seed in 0..20u64 {
            let config = RbnConfig::new(6, 2).unwrap();
            let mut rng = rng_from_seed(seed);
            let net = Network::random(&config, &mut rng).unwrap();
            let dynamism = DynamismSpec::with_dynamic_fraction(
                &config,
                0.5,
                DynamismMode::Standard,
                Addressing::Absolute,
                &mut rng,
            )
            .unwrap();
            let lands = [
                NkLandscape::random(2, 1, &mut rng).unwrap(),
                NkLandscape::random(2, 1, &mut rng).unwrap(),
            ];
            let cfg = EvalConfig::with_random_traits(100, 6, 2, 2, &mut rng).unwrap();

            let mut functions = [[false; 4]; 6];
            let mut sources = [[0usize; 2]; 6];
            let mut structure = [[0usize; 2]; 6];
            let mut dynamic = [false; 6];
            let mut tables = [[[0usize; 2]; 4]; 6];
            let mut start = [false; 6];
            for i in 0..6 {
                for (row, bit) in net.functions[i].bits().enumerate() {
                    functions[i][row] = bit;
                }
                sources[i] = [
                    net.topology.sources(i)[0] as usize,
                    net.topology.sources(i)[1] as usize,
                ];
                structure[i] = [
                    dynamism.structure_sources.sources(i)[0] as usize,
                    dynamism.structure_sources.sources(i)[1] as usize,
                ];
                dynamic[i] = dynamism.dynamic[i];
                for row in 0..4 {
                    let r = dynamism.tables[i].row(row);
                    tables[i][row] = [r[0] as usize, r[1] as usize];
                }
                start[i] = net.start[i];
            }
            let link_arr = |l: &NkLandscape| [l.links()[0][0], l.links()[1][0]];
            let table_arr = |l: &NkLandscape| {
                let mut t = [[0.0; 4]; 2];
                for i in 0..2 {
                    t[i].copy_from_slice(&l.tables()[i]);
                }
                t
            };
            let (l0, l1) = (link_arr(&lands[0]), link_arr(&lands[1]));
            let (t0, t1) = (table_arr(&lands[0]), table_arr(&lands[1]));
            let expected = miniature_oracle(
                &functions,
                sources,
                structure,
                dynamic,
                &tables,
                start,
                [cfg.trait_nodes[0], cfg.trait_nodes[1]],
                [(&l0, &t0), (&l1, &t1)],
            );

            let live = LiveNetwork::new(
                &net.functions,
                &dynamism,
                net.topology.clone(),
                net.start.clone(),
            )
            .unwrap();
            let got =
                evaluate(live, &cfg, &EnvironmentSchedule::switching(2, 100), &lands).unwrap();
            assert!((got.mean_fitness - expected).abs() < 1e-12, "seed {seed}");
        }
    }

    #[test]
    fn profile_of_point_attractor() {
        let (functions, topology, dynamism) = constant_network(10, 2, false);
        let mut start = StateVector::zeros(10);
        start[3] = true;
        let live = LiveNetwork::new(&functions, &dynamism, topology, start).unwrap();
        let profile = dynamics_profile(live, 10).unwrap();
        assert_eq!(profile.series[0], 0.1);
        assert!(profile.series[1..].iter().all(|&v| v == 0.0));
        assert_eq!(profile.final_value(), 0.0);
    }

    #[test]
    fn profile_of_flip_flop() {
        // nodes 0..4 negate themselves, nodes 4..8 are constant
        let config = RbnConfig::new(8, 1).unwrap();
        let mut functions = vec![BooleanFunction::from_bits(&[true, false]).unwrap(); 4];
        functions.extend(vec![BooleanFunction::constant(1, true); 4]);
        let topology = Topology::new(1, (0..8).collect()).unwrap();
        let dynamism = DynamismSpec::inert(&config);
        let live =
            LiveNetwork::new(&functions, &dynamism, topology, StateVector::zeros(8)).unwrap();
        let profile = dynamics_profile(live, 20).unwrap();
        assert!(profile.series[1..].iter().all(|&v| v == 0.5));
        assert_eq!(profile.series[0], 1.0);
        assert!(dynamics_profile(
            LiveNetwork::new(
                &functions,
                &dynamism,
                Topology::new(1, (0..8).collect()).unwrap(),
                StateVector::zeros(8)
            )
            .unwrap(),
            1
        )
        .is_err());
    }

    proptest! {
        #[test]
        fn clamped_inputs_hold_every_cycle(seed in any::<u64>(), b in 1usize..=3) {
            let config = RbnConfig::new(30, b).unwrap();
            let mut rng = rng_from_seed(seed);
            let net = Network::random(&config, &mut rng).unwrap();
            let dynamism = DynamismSpec::with_dynamic_fraction(&config, 0.5, DynamismMode::Full, Addressing::Absolute, &mut rng).unwrap();
            let schedule = EnvironmentSchedule::switching(5, 40);
            let mut live = LiveNetwork::new(&net.functions, &dynamism, net.topology.clone(), net.start.clone()).unwrap();
            for cycle in 1..=40 {
                let inputs = &schedule.phase_at(cycle).unwrap().inputs;
                live.state_mut()[..5].copy_from_slice(inputs);
                live.lifecycle_step();
                live.state_mut()[..5].copy_from_slice(inputs);
                prop_assert_eq!(&live.state()[..5], &inputs[..]);
            }
        }

        #[test]
        fn constant_tables_give_constant_fitness(seed in any::<u64>(), value in 0.0f64..=1.0) {
            let config = RbnConfig::new(40, 2).unwrap();
            let mut rng = rng_from_seed(seed);
            let net = Network::random(&config, &mut rng).unwrap();
            let dynamism = DynamismSpec::with_dynamic_fraction(&config, 0.5, DynamismMode::Standard, Addressing::Absolute, &mut rng).unwrap();
            let land = NkLandscape::constant(10, 3, value).unwrap();
            let cfg = EvalConfig::with_random_traits(100, 40, 10, 10, &mut rng).unwrap();
            let live = LiveNetwork::new(&net.functions, &dynamism, net.topology.clone(), net.start.clone()).unwrap();
            let result = evaluate(live, &cfg, &EnvironmentSchedule::switching(10, 100), &[land.clone(), land]).unwrap();
            prop_assert!((result.mean_fitness - value).abs() < 1e-12);
            prop_assert_eq!(result.rewire_events.len(), 100);
        }
    }
}
