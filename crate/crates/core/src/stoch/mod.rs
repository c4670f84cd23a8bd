//! Discrete-stochastic simulation over integer molecule counts.
//!
//! Propensities are the bound functional rates evaluated on the integer
//! state. A reaction whose reactant counts fall short of its stoichiometry
//! has propensity zero, which keeps every count non-negative.

mod direct;
mod ensemble;
mod heap;
mod next_reaction;
mod rng;
mod tau_leap;

use thiserror::Error;

use crate::analyzer::ReactionNetwork;
use crate::kinetics::{EvalError, RateSet};

pub use direct::{simulate_direct, simulate_direct_observed};
pub use ensemble::{run_ensemble, run_ensemble_sequential, Ensemble, EnsembleSpec};
pub use next_reaction::{simulate_next_reaction, simulate_next_reaction_observed};
pub use rng::{exponential_from_uniform, sample_exponential, sample_poisson, SimRng};
pub use tau_leap::{simulate_tau_leap, simulate_tau_leap_observed};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Direct,
    NextReaction,
    TauLeap { tau: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StochError {
    #[error("reaction `{action}` has propensity {value} at t = {t}")]
    NegativePropensity { action: String, value: f64, t: f64 },
    #[error("{0}")]
    Eval(#[from] EvalError),
    #[error("invalid simulation arguments: {0}")]
    InvalidArguments(String),
}

impl StochError {
    pub fn code(&self) -> &'static str {
        match self {
            StochError::NegativePropensity { .. } => "NEGATIVE_PROPENSITY",
            StochError::Eval(EvalError::DivisionByZero(_)) => "DIVISION_BY_ZERO",
            StochError::Eval(_) => "EVAL_ERROR",
            StochError::InvalidArguments(_) => "INVALID_ARGUMENTS",
        }
    }
}

/// Integer state sampled on a grid by last-value hold.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<i64>>,
    /// Number of reaction firings (a tau leap counts every firing it applies).
    pub events: u64,
}

impl StochasticTrajectory {
    pub fn last(&self) -> Option<&[i64]> {
        self.states.last().map(Vec::as_slice)
    }
}

/// Precomputed network data shared by the simulators.
pub(crate) struct Kernel<'a> {
    rates: &'a RateSet,
    changes: Vec<Vec<(usize, i64)>>,
    requirements: Vec<Vec<(usize, i64)>>,
    pub dependents: Vec<Vec<usize>>,
    pub time_dependent: bool,
}

impl<'a> Kernel<'a> {
    pub fn new(network: &ReactionNetwork, rates: &'a RateSet) -> Result<Self, StochError> {
        if rates.len() != network.reactions.len() {
            return Err(StochError::InvalidArguments(format!(
                "{} rate functions for {} reactions",
                rates.len(),
                network.reactions.len()
            )));
        }
        Ok(Kernel {
            rates,
            changes: network.state_changes(),
            requirements: network
                .reactions
                .iter()
                .map(|r| r.reactants.iter().map(|p| (p.species, i64::from(p.stoichiometry))).collect())
                .collect(),
            dependents: rates.dependency_graph(network),
            time_dependent: rates.is_time_dependent(),
        })
    }

    pub fn len(&self) -> usize {
        self.changes.len()
    }

    pub fn propensity(&self, j: usize, x: &[i64], xf: &[f64], t: f64) -> Result<f64, StochError> {
        if self.requirements[j].iter().any(|&(s, k)| x[s] < k) {
            return Ok(0.0);
        }
        let a = self.rates.get(j).evaluate(xf, t)?;
        if a < 0.0 || a.is_nan() {
            return Err(StochError::NegativePropensity { action: self.rates.get(j).action().to_string(), value: a, t });
        }
        Ok(a)
    }

    pub fn all_propensities(&self, x: &[i64], xf: &[f64], t: f64, out: &mut [f64]) -> Result<(), StochError> {
        for (j, o) in out.iter_mut().enumerate() {
            *o = self.propensity(j, x, xf, t)?;
        }
        Ok(())
    }

    pub fn fire(&self, j: usize, times: i64, x: &mut [i64], xf: &mut [f64]) {
        for &(s, d) in &self.changes[j] {
            x[s] += d * times;
            xf[s] = x[s] as f64;
        }
    }

    pub fn changes(&self, j: usize) -> &[(usize, i64)] {
        &self.changes[j]
    }
}

/// Emits grid samples of a piecewise-constant trajectory.
pub(crate) struct Recorder<'g> {
    grid: &'g [f64],
    next: usize,
    states: Vec<Vec<i64>>,
}

impl<'g> Recorder<'g> {
    pub fn new(grid: &'g [f64]) -> Self {
        Recorder { grid, next: 0, states: Vec::with_capacity(grid.len()) }
    }

    /// Records `x` at every pending grid time strictly before `t`.
    pub fn hold_until(&mut self, t: f64, x: &[i64]) {
        while self.next < self.grid.len() && self.grid[self.next] < t {
            self.states.push(x.to_vec());
            self.next += 1;
        }
    }

    pub fn finish(mut self, x: &[i64], events: u64) -> StochasticTrajectory {
        self.hold_until(f64::INFINITY, x);
        StochasticTrajectory { times: self.grid.to_vec(), states: self.states, events }
    }
}

pub(crate) fn validate(network: &ReactionNetwork, x0: &[i64], grid: &[f64]) -> Result<(), StochError> {
    if x0.len() != network.species.len() {
        return Err(StochError::InvalidArguments(format!(
            "initial state has {} entries for {} species",
            x0.len(),
            network.species.len()
        )));
    }
    if x0.iter().any(|&v| v < 0) {
        return Err(StochError::InvalidArguments("initial counts must be non-negative".into()));
    }
    if grid.is_empty() || grid.windows(2).any(|w| !(w[0] < w[1])) || !grid.iter().all(|t| t.is_finite()) {
        return Err(StochError::InvalidArguments("sample grid must be non-empty and strictly increasing".into()));
    }
    Ok(())
}

/// Picks `j` with probability `a[j] / total` given `target = u · total`.
pub(crate) fn select(a: &[f64], target: f64) -> usize {
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (j, &v) in a.iter().enumerate() {
        if v > 0.0 {
            acc += v;
            last_positive = j;
            if target < acc {
                return j;
            }
        }
    }
    // Round-off can leave `target` at or just above the running sum.
    last_positive
}
