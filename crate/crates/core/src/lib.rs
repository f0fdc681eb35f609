//! Random Boolean networks whose nodes can rewire their own connections
//! during a lifecycle, coupled to NK fitness landscapes and evolved with a
//! greedy hillclimber.
//!
//! The modules build on one another:
//!
//! - [`rbn`]: static synchronous networks, attractors and change statistics.
//! - [`rewiring`]: dynamic nodes and the lifecycle step.
//! - [`nk`]: NK landscapes and exhaustive landscape analysis.
//! - [`eval`]: lifecycle fitness with clamped inputs and switching environments.
//! - [`evolution`]: genomes, mutation and the hillclimber.
//! - [`stats`]: summaries and Welch's t-test.
//!
//! All randomness is driven by explicit seeds, see [`rng`].

/// `name()`, `Display` and `FromStr` for fieldless config enums.
macro_rules! named_enum {
    ($ty:ident { $($variant:ident => $name:literal),+ $(,)? }) => {
        impl $ty {
            pub const NAMES: &'static [&'static str] = &[$($name),+];

            pub fn name(self) -> &'static str {
                match self {
                    $($ty::$variant => $name),+
                }
            }
        }

        impl std::fmt::Display for $ty {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str(self.name())
            }
        }

        impl std::str::FromStr for $ty {
            type Err = $crate::error::Error;

            fn from_str(s: &str) -> $crate::error::Result<Self> {
                match s {
                    $($name => Ok($ty::$variant),)+
                    _ => Err($crate::error::Error::InvalidConfig(format!(
                        "unknown {} `{s}` (expected one of: {})",
                        stringify!($ty),
                        Self::NAMES.join(", ")
                    ))),
                }
            }
        }
    };
}

pub mod error;
pub mod eval;
pub mod evolution;
pub mod nk;
pub mod rbn;
pub mod rewiring;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use eval::{
    dynamics_profile, evaluate, DynamicsProfile, EnvironmentSchedule, EvalConfig, LifecycleResult,
    Phase,
};
pub use evolution::{
    accept, hillclimb, init_genome, make_offspring, mutate, ClimbSetup, FunctionMutation, Genome,
    Inheritance, MutationClass, MutationSet, RunRecord, TableInheritance, TracePoint,
    VariantConfig,
};
pub use nk::{
    exhaustive_analysis, generate_landscape, LandscapeAnalysis, NkLandscape, TraitVector,
};
pub use rbn::{
    build_network, changed_fraction, find_attractor, step, Attractor, BooleanFunction, Network,
    RbnConfig, StateVector, Topology,
};
pub use rewiring::{
    Addressing, DynamismMode, DynamismSpec, LiveNetwork, RewireOutcome, RewireTable,
};
pub use stats::{median, welch_t_test, Summary, WelchTest};
