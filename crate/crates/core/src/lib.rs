//! Bio-PEPA with locations: a compiler and simulator for multi-compartment
//! biochemical process-algebra models.
//!
//! The pipeline is
//!
//! 1. [`parser::parse_system`] turns model text into a [`BioPepaSystem`],
//! 2. [`analyzer`] expands the multi-location shorthand, runs the static
//!    checks and flattens the species components into a [`ReactionNetwork`],
//! 3. [`kinetics`] binds every kinetic law to a [`RateFunction`],
//! 4. [`ode`] and [`stoch`] integrate or sample the resulting dynamics.
//!
//! [`Model`] wires the steps together for the common case.

pub mod analyzer;
pub mod diagnostic;
pub mod expr;
pub mod kinetics;
pub mod location;
pub mod model;
pub mod ode;
pub mod parser;
pub mod pipeline;
pub mod span;
pub mod stoch;

pub use analyzer::{
    check_system, conserved_moieties, try_conserved_moieties, derive_reaction_network, expand_location_shorthand,
    Participant, Reaction, ReactionNetwork, SpeciesKey,
};
pub use diagnostic::{Diagnostic, Severity};
pub use expr::{BinOp, Expr};
pub use kinetics::{
    bind_kinetic_law, bind_observables, eval_expression, resolve_parameters, CompiledObservable,
    EvalEnvironment, EvalError, ParamValues, RateFunction, RateSet,
};
pub use location::{build_location_tree, location_size_at, LocationError, LocationTree};
pub use model::{
    BioPepaSystem, Composition, CooperationSet, KineticLaw, LawBody, Location, LocationKind,
    Observable, Parameter, PrefixTerm, Role, SpeciesComponent,
};
pub use ode::{
    build_vector_field, integrate_dopri, integrate_rk4, uniform_grid, DopriOptions, OdeError,
    TimeSeries, VectorField,
};
pub use parser::{parse_expression, parse_system};
pub use pipeline::{Model, ModelError};
pub use span::Span;
pub use stoch::{
    run_ensemble, run_ensemble_sequential, sample_exponential, sample_poisson, simulate_direct,
    simulate_next_reaction, simulate_tau_leap, Ensemble, EnsembleSpec, Method, SimRng, StochError,
    StochasticTrajectory,
};

/// The cAMP/PKA/MAPK pathway model shipped with the crate.
pub const CAMP_PKA_MAPK: &str = include_str!("../../../models/camp_pka_mapk.biopepa");
