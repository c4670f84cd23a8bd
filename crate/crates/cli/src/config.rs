use std::path::PathBuf;
use std::str::FromStr;

use biopepa::{DopriOptions, Method};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodArg {
    OdeRk4,
    OdeDopri,
    Ssa,
    Nrm,
    Tau,
}

impl MethodArg {
    pub fn is_stochastic(self) -> bool {
        matches!(self, MethodArg::Ssa | MethodArg::Nrm | MethodArg::Tau)
    }

    pub fn name(self) -> &'static str {
        match self {
            MethodArg::OdeRk4 => "ode-rk4",
            MethodArg::OdeDopri => "ode-dopri",
            MethodArg::Ssa => "ssa",
            MethodArg::Nrm => "nrm",
            MethodArg::Tau => "tau",
        }
    }
}

impl FromStr for MethodArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "ode-rk4" => MethodArg::OdeRk4,
            "ode-dopri" => MethodArg::OdeDopri,
            "ssa" => MethodArg::Ssa,
            "nrm" => MethodArg::Nrm,
            "tau" => MethodArg::Tau,
            other => return Err(format!("unknown method `{other}` (expected ode-rk4, ode-dopri, ssa, nrm or tau)")),
        })
    }
}

/// Everything one `simulate` invocation needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub method: MethodArg,
    pub stop: f64,
    pub points: usize,
    pub runs: usize,
    pub seed: u64,
    /// Fixed RK4 step.
    pub step: f64,
    pub rtol: f64,
    pub atol: f64,
    pub tau: f64,
    /// Applied in order after the model's own parameter values.
    pub overrides: Vec<(String, f64)>,
    /// `name@location` species or observable names; `None` selects everything.
    pub selection: Option<Vec<String>>,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub const DEFAULT_STEP: f64 = 0.01;
    pub const DEFAULT_TAU: f64 = 0.01;

    pub fn new(input: impl Into<PathBuf>, method: MethodArg, stop: f64, points: usize) -> Self {
        let dopri = DopriOptions::default();
        RunConfig {
            input: input.into(),
            method,
            stop,
            points,
            runs: 1,
            seed: 0,
            step: Self::DEFAULT_STEP,
            rtol: dopri.rtol,
            atol: dopri.atol,
            tau: Self::DEFAULT_TAU,
            overrides: Vec::new(),
            selection: None,
            output: None,
        }
    }

    pub fn stochastic_method(&self) -> Option<Method> {
        match self.method {
            MethodArg::Ssa => Some(Method::Direct),
            MethodArg::Nrm => Some(Method::NextReaction),
            MethodArg::Tau => Some(Method::TauLeap { tau: self.tau }),
            MethodArg::OdeRk4 | MethodArg::OdeDopri => None,
        }
    }

    pub fn dopri_options(&self) -> DopriOptions {
        DopriOptions { rtol: self.rtol, atol: self.atol, ..DopriOptions::default() }
    }

    /// Checks ranges that do not depend on the model.
    pub fn validate(&self) -> Result<(), String> {
        if !(self.stop > 0.0) || !self.stop.is_finite() {
            return Err(format!("--stop must be positive, got {}", self.stop));
        }
        if self.points < 2 {
            return Err(format!("--points must be at least 2, got {}", self.points));
        }
        if self.runs < 1 {
            return Err("--runs must be at least 1".into());
        }
        for (flag, v) in [("--step", self.step), ("--rtol", self.rtol), ("--atol", self.atol), ("--tau", self.tau)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(format!("{flag} must be positive, got {v}"));
            }
        }
        Ok(())
    }
}

/// Parses `NAME=VALUE`.
pub fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(format!("missing parameter name in `{s}`"));
    }
    let value: f64 = value.trim().parse().map_err(|_| format!("`{value}` is not a number"))?;
    Ok((name.to_string(), value))
}
