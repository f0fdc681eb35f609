use rand::Rng;

use crate::error::{Error, Result};
use crate::eval::{evaluate, EnvironmentSchedule, EvalConfig, LifecycleResult};
use crate::evolution::{mutate, Genome, Inheritance, TableInheritance, VariantConfig};
use crate::nk::NkLandscape;
use crate::rbn::RbnConfig;
use crate::rewiring::RewireTable;
use crate::rng::rng_from_seed;

/// Whether a child replaces its parent.
///
/// Higher fitness wins; on an exact tie the genome with fewer dynamic nodes
/// wins; on a full tie a fair coin decides.
pub fn accept<R: Rng + ?Sized>(
    parent_fitness: f64,
    child_fitness: f64,
    parent_dynamic: usize,
    child_dynamic: usize,
    rng: &mut R,
) -> bool {
    if child_fitness != parent_fitness {
        child_fitness > parent_fitness
    } else if child_dynamic != parent_dynamic {
        child_dynamic < parent_dynamic
    } else {
        rng.random_bool(0.5)
    }
}

/// Builds one offspring: inheritance as configured, then a single mutation.
pub fn make_offspring<R: Rng + ?Sized>(
    parent: &Genome,
    parent_result: Option<&LifecycleResult>,
    variant: &VariantConfig,
    rng: &mut R,
) -> Result<Genome> {
    let mut child = parent.clone();
    match variant.inheritance {
        Inheritance::GenomeRestart => {
            if variant.table_inheritance == TableInheritance::Rerandomize {
                let dynamism = &mut child.dynamism;
                for (table, _) in dynamism
                    .tables
                    .iter_mut()
                    .zip(&dynamism.dynamic)
                    .filter(|(_, &d)| d)
                {
                    *table =
                        RewireTable::random(&child.config, dynamism.mode, dynamism.addressing, rng);
                }
            }
        }
        Inheritance::InheritFinal => {
            let result = parent_result.ok_or(Error::MissingParentResult)?;
            child.b_sources.clone_from(&result.final_topology);
            child
                .dynamism
                .structure_sources
                .clone_from(&result.final_structure_topology);
            child.start.clone_from(&result.final_state);
        }
    }
    mutate(&mut child, variant, rng);
    Ok(child)
}

/// Everything a hillclimb run needs besides its seed.
#[derive(Debug, Clone, Copy)]
pub struct ClimbSetup<'a> {
    pub rbn: RbnConfig,
    pub variant: &'a VariantConfig,
    pub eval: &'a EvalConfig,
    pub schedule: &'a EnvironmentSchedule,
    pub landscapes: &'a [NkLandscape],
    /// Trace every n-th generation; generation 0 and the last are always kept.
    pub trace_every: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub generation: usize,
    pub fitness: f64,
    pub dynamic_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub seed: u64,
    pub trace: Vec<TracePoint>,
    pub final_genome: Genome,
    pub final_fitness: f64,
    pub final_dynamic_fraction: f64,
    /// Generations in which the child replaced the parent.
    pub accepted: usize,
}

/// Runs a (1+1) hillclimb from a random genome drawn from `seed`.
pub fn hillclimb(setup: &ClimbSetup<'_>, seed: u64) -> Result<RunRecord> {
    let mut rng = rng_from_seed(seed);
    let genome = Genome::random(&setup.rbn, setup.variant, &mut rng)?;
    hillclimb_from(setup, genome, seed, &mut rng)
}

/// Runs a hillclimb from `genome`, drawing from `rng`.
///
/// Evaluation is deterministic, so the parent's lifecycle result is cached
/// rather than recomputed each generation.
pub fn hillclimb_from<R: Rng + ?Sized>(
    setup: &ClimbSetup<'_>,
    genome: Genome,
    seed: u64,
    rng: &mut R,
) -> Result<RunRecord> {
    setup.variant.validate()?;
    genome.validate()?;
    let run = |g: &Genome| evaluate(g.live(), setup.eval, setup.schedule, setup.landscapes);

    let mut parent = genome;
    let mut parent_result = run(&parent)?;
    let generations = setup.variant.generations;
    let mut trace = vec![TracePoint {
        generation: 0,
        fitness: parent_result.mean_fitness,
        dynamic_fraction: parent.dynamic_fraction(),
    }];
    let mut accepted = 0;

    for generation in 1..=generations {
        let child = make_offspring(&parent, Some(&parent_result), setup.variant, rng)?;
        let child_result = run(&child)?;
        if accept(
            parent_result.mean_fitness,
            child_result.mean_fitness,
            parent.dynamic_count(),
            child.dynamic_count(),
            rng,
        ) {
            parent = child;
            parent_result = child_result;
            accepted += 1;
        }
        if generation == generations
            || (setup.trace_every > 0 && generation % setup.trace_every == 0)
        {
            trace.push(TracePoint {
                generation,
                fitness: parent_result.mean_fitness,
                dynamic_fraction: parent.dynamic_fraction(),
            });
        }
    }

    Ok(RunRecord {
        seed,
        trace,
        final_fitness: parent_result.mean_fitness,
        final_dynamic_fraction: parent.dynamic_fraction(),
        final_genome: parent,
        accepted,
    })
}
