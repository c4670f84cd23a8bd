use rayon::prelude::*;

use super::{
    simulate_direct, simulate_next_reaction, simulate_tau_leap, Method, SimRng, StochError, StochasticTrajectory,
};
use crate::analyzer::ReactionNetwork;
use crate::kinetics::{CompiledObservable, RateSet};
use crate::ode::uniform_grid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub method: Method,
    pub t_end: f64,
    /// Grid points on `[0, t_end]`, at least 2.
    pub points: usize,
    pub runs: usize,
    pub seed: u64,
}

/// Per-grid-point statistics over independent runs. Columns are the
/// species in network order followed by the observables; an observable
/// undefined in any run (division by zero) is `NaN` at that point.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub times: Vec<f64>,
    pub columns: Vec<String>,
    pub mean: Vec<Vec<f64>>,
    /// Sample standard deviation; zero for a single run.
    pub std: Vec<Vec<f64>>,
    pub runs: usize,
    pub seed: u64,
}

impl Ensemble {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn mean_of(&self, column: usize) -> Vec<f64> {
        self.mean.iter().map(|row| row[column]).collect()
    }
}

fn check_spec(spec: &EnsembleSpec) -> Result<(), StochError> {
    if spec.runs == 0 {
        return Err(StochError::InvalidArguments("need at least one run".into()));
    }
    if spec.points < 2 || !(spec.t_end > 0.0) {
        return Err(StochError::InvalidArguments("need t_end > 0 and at least two grid points".into()));
    }
    Ok(())
}

pub(crate) fn simulate_one(
    method: Method,
    network: &ReactionNetwork,
    rates: &RateSet,
    x0: &[i64],
    grid: &[f64],
    rng: &mut SimRng,
) -> Result<StochasticTrajectory, StochError> {
    match method {
        Method::Direct => simulate_direct(network, rates, x0, grid, rng),
        Method::NextReaction => simulate_next_reaction(network, rates, x0, grid, rng),
        Method::TauLeap { tau } => simulate_tau_leap(network, rates, x0, grid, tau, rng),
    }
}

/// Species counts then observable values, per grid point.
fn run_columns(
    spec: &EnsembleSpec,
    run: usize,
    network: &ReactionNetwork,
    rates: &RateSet,
    x0: &[i64],
    grid: &[f64],
    observables: &[CompiledObservable],
) -> Result<Vec<Vec<f64>>, StochError> {
    let mut rng = SimRng::for_run(spec.seed, run as u64);
    let traj = simulate_one(spec.method, network, rates, x0, grid, &mut rng)?;
    Ok(traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, state)| {
            let xf: Vec<f64> = state.iter().map(|&v| v as f64).collect();
            let obs = observables.iter().map(|o| o.evaluate(&xf, t).unwrap_or(f64::NAN));
            xf.iter().copied().chain(obs).collect()
        })
        .collect())
}

fn reduce(
    spec: &EnsembleSpec,
    grid: Vec<f64>,
    columns: Vec<String>,
    runs: Vec<Vec<Vec<f64>>>,
) -> Ensemble {
    let r = runs.len() as f64;
    let width = columns.len();
    let mut mean = vec![vec![0.0; width]; grid.len()];
    let mut std = vec![vec![0.0; width]; grid.len()];
    for p in 0..grid.len() {
        for c in 0..width {
            let m = runs.iter().map(|run| run[p][c]).sum::<f64>() / r;
            mean[p][c] = m;
            std[p][c] = if runs.len() > 1 {
                (runs.iter().map(|run| (run[p][c] - m).powi(2)).sum::<f64>() / (r - 1.0)).sqrt()
            } else if m.is_nan() {
                f64::NAN
            } else {
                0.0
            };
        }
    }
    Ensemble { times: grid, columns, mean, std, runs: runs.len(), seed: spec.seed }
}

fn column_names(network: &ReactionNetwork, observables: &[CompiledObservable]) -> Vec<String> {
    network.species.iter().map(ToString::to_string).chain(observables.iter().map(|o| o.name.clone())).collect()
}

/// Runs `spec.runs` independent trajectories in parallel. Run `i` uses the
/// substream `(spec.seed, i)`, and statistics are reduced in run order, so
/// the result does not depend on scheduling.
pub fn run_ensemble(
    spec: &EnsembleSpec,
    network: &ReactionNetwork,
    rates: &RateSet,
    x0: &[i64],
    observables: &[CompiledObservable],
) -> Result<Ensemble, StochError> {
    check_spec(spec)?;
    let grid = uniform_grid(0.0, spec.t_end, spec.points);
    let runs = (0..spec.runs)
        .into_par_iter()
        .map(|i| run_columns(spec, i, network, rates, x0, &grid, observables))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(reduce(spec, grid, column_names(network, observables), runs))
}

/// Single-threaded counterpart of [`run_ensemble`] with identical results.
pub fn run_ensemble_sequential(
    spec: &EnsembleSpec,
    network: &ReactionNetwork,
    rates: &RateSet,
    x0: &[i64],
    observables: &[CompiledObservable],
) -> Result<Ensemble, StochError> {
    check_spec(spec)?;
    let grid = uniform_grid(0.0, spec.t_end, spec.points);
    let runs = (0..spec.runs)
        .map(|i| run_columns(spec, i, network, rates, x0, &grid, observables))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(reduce(spec, grid, column_names(network, observables), runs))
}
