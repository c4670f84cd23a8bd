//! Parse, check, derive and bind in one step.

use thiserror::Error;

use crate::analyzer::{check_system, derive_reaction_network, expand_location_shorthand, ReactionNetwork};
use crate::diagnostic::{has_errors, Diagnostic};
use crate::kinetics::{bind_observables, resolve_parameters, CompiledObservable, EvalError, ParamValues, RateSet};
use crate::model::BioPepaSystem;
use crate::ode::{build_vector_field, integrate_dopri, integrate_rk4, DopriOptions, OdeError, TimeSeries};
use crate::parser::parse_system;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// Parse or static-analysis errors, with any warnings found alongside.
    #[error("model has {} static error(s)", .0.iter().filter(|d| d.is_error()).count())]
    Static(Vec<Diagnostic>),
    #[error("{0}")]
    Bind(#[from] EvalError),
}

/// A statically valid model ready for simulation.
#[derive(Debug, Clone)]
pub struct Model {
    /// The system with every prefix term located.
    pub system: BioPepaSystem,
    pub network: ReactionNetwork,
    /// Parameter values as defined in the source.
    pub parameters: ParamValues,
    /// Warnings from the static checks.
    pub warnings: Vec<Diagnostic>,
}

impl Model {
    pub fn from_source(text: &str) -> Result<Model, ModelError> {
        let system = parse_system(text).map_err(ModelError::Static)?;
        Model::from_system(&system)
    }

    pub fn from_system(system: &BioPepaSystem) -> Result<Model, ModelError> {
        let diags = check_system(system);
        if has_errors(&diags) {
            return Err(ModelError::Static(diags));
        }
        let (expanded, _) = expand_location_shorthand(system);
        let network = derive_reaction_network(&expanded)
            .map_err(|e| ModelError::Static(vec![Diagnostic::error("DERIVATION_FAILED", Default::default(), e.0)]))?;
        let parameters = resolve_parameters(&expanded.parameters).map_err(|d| ModelError::Static(vec![d]))?;
        Ok(Model { system: expanded, network, parameters, warnings: diags })
    }

    pub fn initial_state(&self) -> &[i64] {
        &self.network.initial_state
    }

    pub fn initial_continuous_state(&self) -> Vec<f64> {
        self.network.initial_state.iter().map(|&v| v as f64).collect()
    }

    pub fn rates(&self, params: &ParamValues) -> Result<RateSet, EvalError> {
        RateSet::bind(&self.network, &self.system.locations, params)
    }

    pub fn observables(&self, params: &ParamValues) -> Result<Vec<CompiledObservable>, EvalError> {
        bind_observables(&self.system.observables, &self.network, &self.system.locations, params)
    }

    /// Fixed-step RK4 on `[0, t_end]`.
    pub fn integrate_rk4(&self, rates: &RateSet, t_end: f64, h: f64, points: usize) -> Result<TimeSeries, OdeError> {
        let f = build_vector_field(&self.network, rates);
        integrate_rk4(&f, &self.initial_continuous_state(), 0.0, t_end, h, points)
    }

    /// Adaptive Dormand–Prince on `[0, t_end]`.
    pub fn integrate_dopri(
        &self,
        rates: &RateSet,
        t_end: f64,
        points: usize,
        opts: &DopriOptions,
    ) -> Result<TimeSeries, OdeError> {
        let f = build_vector_field(&self.network, rates);
        integrate_dopri(&f, &self.initial_continuous_state(), 0.0, t_end, points, opts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn static_errors_are_returned() {
        let err = Model::from_source("k = 1;\nkineticLawOf r : fMA(k);\nA = r >> A;\nA[0]").unwrap_err();
        let ModelError::Static(d) = err else { panic!() };
        assert_eq!(d.iter().filter(|d| d.is_error()).map(|d| d.code).collect::<Vec<_>>(), vec!["MA_NO_REACTANTS"]);
    }

    #[test]
    fn decay_model_integrates() {
        let m = Model::from_source("k = 1;\nkineticLawOf r : fMA(k);\nA = r << A;\nB = r >> B;\nA[100] <*> B[0]").unwrap();
        let rates = m.rates(&m.parameters).unwrap();
        let ts = m.integrate_rk4(&rates, 1.0, 0.001, 2).unwrap();
        let end = ts.last().unwrap();
        assert!((end[0] - 100.0 * (-1.0f64).exp()).abs() < 1e-6);
        assert!((end[0] + end[1] - 100.0).abs() < 1e-9);
    }
}
