use std::fs;
use std::io::Write;
use std::path::Path;

use biopepa::{
    check_system, parse_system, run_ensemble, CompiledObservable, Diagnostic, EvalError, Model, ModelError,
    OdeError, ParamValues, Span, StochError, TimeSeries,
};
use thiserror::Error;

use crate::config::{MethodArg, RunConfig};
use crate::output::{write_csv, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_STATIC: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Error)]
#[error("`{0}` is not a parameter of the model")]
pub struct OverrideError(pub String);

/// Replaces resolved parameter values. Overrides are terminal: parameters
/// defined in terms of an overridden one keep their original values.
pub fn apply_overrides(resolved: &ParamValues, overrides: &[(String, f64)]) -> Result<ParamValues, OverrideError> {
    let mut out = resolved.clone();
    for (name, value) in overrides {
        match out.get_mut(name) {
            Some(slot) => *slot = *value,
            None => return Err(OverrideError(name.clone())),
        }
    }
    Ok(out)
}

/// Observable values at every point of `ts`; `None` where evaluation
/// divides by zero.
pub fn eval_observables(observables: &[CompiledObservable], ts: &TimeSeries) -> Vec<Vec<Option<f64>>> {
    ts.times.iter().zip(&ts.states).map(|(&t, x)| observables.iter().map(|o| o.evaluate(x, t)).collect()).collect()
}

#[derive(Debug, Error)]
pub enum SimulateError {
    #[error("cannot read `{path}`: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write `{path}`: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("model has static errors")]
    Static(Vec<Diagnostic>),
    #[error(transparent)]
    UnknownOverride(#[from] OverrideError),
    #[error("`{0}` is neither a species instance nor an observable")]
    UnknownSelection(String),
    #[error("{0}")]
    InvalidArguments(String),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Stochastic(#[from] StochError),
    #[error(transparent)]
    Bind(#[from] EvalError),
}

impl SimulateError {
    pub fn code(&self) -> &'static str {
        match self {
            SimulateError::Read { .. } | SimulateError::Write { .. } => "IO_ERROR",
            SimulateError::Static(_) => "STATIC_ERRORS",
            SimulateError::UnknownOverride(_) => "UNKNOWN_OVERRIDE",
            SimulateError::UnknownSelection(_) => "UNKNOWN_SELECTION",
            SimulateError::InvalidArguments(_) => "INVALID_ARGUMENTS",
            SimulateError::Ode(e) => e.code(),
            SimulateError::Stochastic(e) => e.code(),
            SimulateError::Bind(EvalError::DivisionByZero(_)) => "DIVISION_BY_ZERO",
            SimulateError::Bind(_) => "BIND_ERROR",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            SimulateError::Static(_) => EXIT_STATIC,
            _ => EXIT_RUNTIME,
        }
    }
}

/// Output of a successful simulation: the table and any warnings, already
/// rendered as diagnostic lines.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationOutput {
    pub table: Table,
    pub warnings: Vec<String>,
}

enum Column {
    Species(usize),
    Observable(usize),
}

fn select_columns(model: &Model, selection: Option<&[String]>) -> Result<Vec<(String, Column)>, SimulateError> {
    let observables = &model.system.observables;
    match selection {
        None => Ok(model
            .network
            .species
            .iter()
            .enumerate()
            .map(|(i, k)| (k.to_string(), Column::Species(i)))
            .chain(observables.iter().enumerate().map(|(i, o)| (o.name.clone(), Column::Observable(i))))
            .collect()),
        Some(tokens) => tokens
            .iter()
            .map(|tok| {
                if let Some(i) = observables.iter().position(|o| &o.name == tok) {
                    return Ok((tok.clone(), Column::Observable(i)));
                }
                match model.network.find_species(tok) {
                    Some(i) => Ok((model.network.species[i].to_string(), Column::Species(i))),
                    None => Err(SimulateError::UnknownSelection(tok.clone())),
                }
            })
            .collect(),
    }
}

fn undefined_warning(file: &str, span: Span, name: &str, t: f64) -> String {
    Diagnostic::warning(
        "DIVISION_BY_ZERO",
        span,
        format!("observable `{name}` is undefined (division by zero) at t = {t}"),
    )
    .render(file)
}

/// Runs the configured simulation and builds the output table.
pub fn simulate(config: &RunConfig) -> Result<SimulationOutput, SimulateError> {
    config.validate().map_err(SimulateError::InvalidArguments)?;
    let file = config.input.display().to_string();
    let text = fs::read_to_string(&config.input).map_err(|source| SimulateError::Read { path: file.clone(), source })?;
    simulate_source(&text, &file, config)
}

/// As [`simulate`], on model text already in memory. `file` names the
/// source in diagnostics.
pub fn simulate_source(text: &str, file: &str, config: &RunConfig) -> Result<SimulationOutput, SimulateError> {
    config.validate().map_err(SimulateError::InvalidArguments)?;
    let model = Model::from_source(text).map_err(|e| match e {
        ModelError::Static(d) => SimulateError::Static(d),
        ModelError::Bind(e) => SimulateError::Bind(e),
    })?;
    let mut warnings: Vec<String> = model.warnings.iter().map(|d| d.render(file)).collect();
    let params = apply_overrides(&model.parameters, &config.overrides)?;
    let rates = model.rates(&params)?;
    let observables = model.observables(&params)?;
    let columns = select_columns(&model, config.selection.as_deref())?;
    let obs_span = |i: usize| model.system.observables[i].span;

    let mut header = vec!["time".to_string()];
    let mut rows: Vec<Vec<Option<f64>>>;
    match config.stochastic_method() {
        None => {
            let ts = match config.method {
                MethodArg::OdeRk4 => model.integrate_rk4(&rates, config.stop, config.step, config.points)?,
                _ => model.integrate_dopri(&rates, config.stop, config.points, &config.dopri_options())?,
            };
            let obs_values = eval_observables(&observables, &ts);
            header.extend(columns.iter().map(|(name, _)| name.clone()));
            rows = Vec::with_capacity(ts.len());
            for (p, (&t, x)) in ts.times.iter().zip(&ts.states).enumerate() {
                let mut row = vec![Some(t)];
                for (name, col) in &columns {
                    row.push(match col {
                        Column::Species(i) => Some(x[*i]),
                        Column::Observable(i) => {
                            let v = obs_values[p][*i];
                            if v.is_none() {
                                warnings.push(undefined_warning(file, obs_span(*i), name, t));
                            }
                            v
                        }
                    });
                }
                rows.push(row);
            }
        }
        Some(method) => {
            let spec = biopepa::EnsembleSpec {
                method,
                t_end: config.stop,
                points: config.points,
                runs: config.runs,
                seed: config.seed,
            };
            let ens = run_ensemble(&spec, &model.network, &rates, model.initial_state(), &observables)?;
            let n_species = model.network.species.len();
            for (name, _) in &columns {
                header.push(format!("{name}:mean"));
                header.push(format!("{name}:std"));
            }
            rows = Vec::with_capacity(ens.times.len());
            for (p, &t) in ens.times.iter().enumerate() {
                let mut row = vec![Some(t)];
                for (name, col) in &columns {
                    let c = match col {
                        Column::Species(i) => *i,
                        Column::Observable(i) => n_species + i,
                    };
                    let (m, s) = (ens.mean[p][c], ens.std[p][c]);
                    if m.is_nan() {
                        if let Column::Observable(i) = col {
                            warnings.push(undefined_warning(file, obs_span(*i), name, t));
                        }
                        row.extend([None, None]);
                    } else {
                        row.extend([Some(m), Some(s)]);
                    }
                }
                rows.push(row);
            }
        }
    }
    Ok(SimulationOutput { table: Table { header, rows }, warnings })
}

/// `check FILE`: prints diagnostics, returns the exit status.
pub fn cmd_check(path: &Path, err: &mut dyn Write) -> i32 {
    let file = path.display().to_string();
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "ERROR IO_ERROR {file}: cannot read file: {e}");
            return EXIT_RUNTIME;
        }
    };
    let diags = match parse_system(&text) {
        Ok(sys) => check_system(&sys),
        Err(d) => d,
    };
    for d in &diags {
        let _ = writeln!(err, "{}", d.render(&file));
    }
    if diags.iter().any(Diagnostic::is_error) {
        EXIT_STATIC
    } else {
        EXIT_OK
    }
}

/// `simulate FILE ...`: writes the CSV to `--out` or `out`, diagnostics to
/// `err`, and returns the exit status.
pub fn cmd_simulate(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let file = config.input.display().to_string();
    let result = simulate(config).and_then(|output| {
        for w in &output.warnings {
            let _ = writeln!(err, "{w}");
        }
        match &config.output {
            Some(path) => {
                let mut bytes = Vec::new();
                write_csv(&output.table, &mut bytes).and_then(|_| fs::write(path, bytes)).map_err(|source| {
                    SimulateError::Write { path: path.display().to_string(), source }
                })
            }
            None => write_csv(&output.table, out).map_err(|source| SimulateError::Write { path: "<stdout>".into(), source }),
        }
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(SimulateError::Static(diags)) => {
            for d in &diags {
                let _ = writeln!(err, "{}", d.render(&file));
            }
            EXIT_STATIC
        }
        Err(e) => {
            let _ = writeln!(err, "ERROR {} {file}: {e}", e.code());
            e.exit_code()
        }
    }
}
