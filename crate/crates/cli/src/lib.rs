//! Command implementations behind the `biopepa` binary.
//!
//! `check` reports diagnostics; `simulate` runs one of the deterministic or
//! stochastic back-ends and writes a CSV table. Exit codes are 0 on
//! success, 1 for static model errors and 2 for runtime, I/O or usage errors.

pub mod config;
pub mod output;
pub mod run;

pub use config::{parse_override, MethodArg, RunConfig};
pub use output::{format_number, write_csv, Table};
pub use run::{
    apply_overrides, cmd_check, cmd_simulate, eval_observables, simulate, simulate_source, OverrideError,
    SimulateError, SimulationOutput, EXIT_OK, EXIT_RUNTIME, EXIT_STATIC,
};
