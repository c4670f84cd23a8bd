//! Deterministic integration of the reaction-rate equations.
//!
//! The vector field is `dx/dt = Sᵀ·v(x, t)` for stoichiometry matrix `S` and
//! bound rates `v`. Two integrators are provided: classical fixed-step RK4
//! and the adaptive Dormand–Prince 5(4) pair with its 4th-order dense output.
//! Both report the solution on a uniform grid of `points` times.

use thiserror::Error;

use crate::analyzer::ReactionNetwork;
use crate::kinetics::{EvalError, RateSet};

/// States whose magnitude exceeds this are treated as divergent.
pub const OVERFLOW_LIMIT: f64 = 1e300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("state diverged at t = {t}")]
    NumericOverflow { t: f64 },
    #[error("step size {h:e} at t = {t} is below the minimum")]
    StepUnderflow { t: f64, h: f64 },
    #[error("{0}")]
    Eval(#[from] EvalError),
    #[error("invalid integration arguments: {0}")]
    InvalidArguments(String),
}

impl OdeError {
    pub fn code(&self) -> &'static str {
        match self {
            OdeError::NumericOverflow { .. } => "NUMERIC_OVERFLOW",
            OdeError::StepUnderflow { .. } => "STEP_UNDERFLOW",
            OdeError::Eval(EvalError::DivisionByZero(_)) => "DIVISION_BY_ZERO",
            OdeError::Eval(_) => "EVAL_ERROR",
            OdeError::InvalidArguments(_) => "INVALID_ARGUMENTS",
        }
    }
}

type Derivative<'a> = dyn Fn(f64, &[f64], &mut [f64]) -> Result<(), EvalError> + Sync + 'a;

/// Right-hand side `f(t, x)` of an autonomous or time-dependent system.
pub struct VectorField<'a> {
    dimension: usize,
    f: Box<Derivative<'a>>,
}

impl<'a> VectorField<'a> {
    pub fn new(
        dimension: usize,
        f: impl Fn(f64, &[f64], &mut [f64]) -> Result<(), EvalError> + Sync + 'a,
    ) -> Self {
        VectorField { dimension, f: Box::new(f) }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Writes `f(t, x)` into `dx`.
    pub fn eval(&self, t: f64, x: &[f64], dx: &mut [f64]) -> Result<(), EvalError> {
        (self.f)(t, x, dx)
    }
}

/// Reaction-rate equations of `network` under `rates`. Species that only
/// act as activators, inhibitors or modifiers of a reaction are unchanged by it.
pub fn build_vector_field<'a>(network: &'a ReactionNetwork, rates: &'a RateSet) -> VectorField<'a> {
    let changes: Vec<Vec<(usize, f64)>> = network
        .state_changes()
        .into_iter()
        .map(|row| row.into_iter().map(|(i, d)| (i, d as f64)).collect())
        .collect();
    VectorField::new(network.species.len(), move |t, x, dx| {
        dx.fill(0.0);
        for (j, delta) in changes.iter().enumerate() {
            if delta.is_empty() {
                continue;
            }
            let v = rates.get(j).evaluate(x, t)?;
            for &(i, d) in delta {
                dx[i] += d * v;
            }
        }
        Ok(())
    })
}

/// States sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    /// One state vector per grid time.
    pub states: Vec<Vec<f64>>,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&[f64]> {
        self.states.last().map(Vec::as_slice)
    }

    /// Trajectory of one state component.
    pub fn column(&self, i: usize) -> Vec<f64> {
        self.states.iter().map(|s| s[i]).collect()
    }
}

/// `points` equally spaced times from `t0` to `t_end` inclusive.
pub fn uniform_grid(t0: f64, t_end: f64, points: usize) -> Vec<f64> {
    let span = t_end - t0;
    let n = points - 1;
    (0..points)
        .map(|i| if i == n { t_end } else { t0 + span * i as f64 / n as f64 })
        .collect()
}

fn validate(f: &VectorField<'_>, x0: &[f64], t0: f64, t_end: f64, points: usize) -> Result<(), OdeError> {
    if x0.len() != f.dimension() {
        return Err(OdeError::InvalidArguments(format!(
            "initial state has {} components, vector field has {}",
            x0.len(),
            f.dimension()
        )));
    }
    if !(t_end > t0) || !t0.is_finite() || !t_end.is_finite() {
        return Err(OdeError::InvalidArguments(format!("need t0 < t_end, got {t0} and {t_end}")));
    }
    if points < 2 {
        return Err(OdeError::InvalidArguments("need at least two grid points".into()));
    }
    Ok(())
}

fn check_finite(x: &[f64], t: f64) -> Result<(), OdeError> {
    if x.iter().all(|v| v.abs() <= OVERFLOW_LIMIT) {
        Ok(())
    } else {
        Err(OdeError::NumericOverflow { t })
    }
}

/// Collects grid samples as the integrator advances over `[t_prev, t_new]`.
struct Sampler {
    grid: Vec<f64>,
    next: usize,
    states: Vec<Vec<f64>>,
}

impl Sampler {
    fn new(t0: f64, t_end: f64, points: usize) -> Self {
        Sampler { grid: uniform_grid(t0, t_end, points), next: 0, states: Vec::with_capacity(points) }
    }

    /// Emits every pending grid time `≤ t_new` using `at(t)`.
    fn advance(&mut self, t_new: f64, mut at: impl FnMut(f64) -> Vec<f64>) {
        while self.next < self.grid.len() && self.grid[self.next] <= t_new {
            let t = self.grid[self.next];
            self.states.push(at(t));
            self.next += 1;
        }
    }

    fn finish(self) -> TimeSeries {
        TimeSeries { times: self.grid, states: self.states }
    }
}

/// Classical fixed-step RK4. The last step is shortened to end on `t_end`;
/// grid values between steps are linearly interpolated.
pub fn integrate_rk4(
    f: &VectorField<'_>,
    x0: &[f64],
    t0: f64,
    t_end: f64,
    h: f64,
    points: usize,
) -> Result<TimeSeries, OdeError> {
    validate(f, x0, t0, t_end, points)?;
    if !(h > 0.0) || !h.is_finite() {
        return Err(OdeError::InvalidArguments(format!("step size must be positive, got {h}")));
    }
    let n = x0.len();
    let span = t_end - t0;
    let steps = {
        let s = (span / h).ceil();
        // Absorb a sliver of round-off rather than taking a near-zero final step.
        if s > 1.0 && (s - 1.0) * h >= span * (1.0 - 1e-12) { s - 1.0 } else { s }
    } as u64;

    let mut sampler = Sampler::new(t0, t_end, points);
    let mut x = x0.to_vec();
    let mut t = t0;
    sampler.advance(t0, |_| x0.to_vec());

    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut tmp = vec![0.0; n];
    let mut next = vec![0.0; n];
    for step in 1..=steps {
        let t_new = if step == steps { t_end } else { t0 + step as f64 * h };
        let hh = t_new - t;
        f.eval(t, &x, &mut k1)?;
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * hh * k1[i];
        }
        f.eval(t + 0.5 * hh, &tmp, &mut k2)?;
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * hh * k2[i];
        }
        f.eval(t + 0.5 * hh, &tmp, &mut k3)?;
        for i in 0..n {
            tmp[i] = x[i] + hh * k3[i];
        }
        f.eval(t + hh, &tmp, &mut k4)?;
        for i in 0..n {
            next[i] = x[i] + hh / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        check_finite(&next, t_new)?;
        sampler.advance(t_new, |s| {
            if s == t_new {
                return next.clone();
            }
            let w = (s - t) / hh;
            x.iter().zip(&next).map(|(a, b)| a + w * (b - a)).collect()
        });
        std::mem::swap(&mut x, &mut next);
        t = t_new;
    }
    Ok(sampler.finish())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopriOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on accepted plus rejected steps.
    pub max_steps: u64,
}

impl Default for DopriOptions {
    fn default() -> Self {
        DopriOptions { rtol: 1e-6, atol: 1e-9, max_steps: 10_000_000 }
    }
}

/// Outcome counters of an adaptive integration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DopriStats {
    pub accepted: u64,
    pub rejected: u64,
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
// Fifth-order weights minus embedded fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// Dense output.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FACTOR_MIN: f64 = 0.2;
const FACTOR_MAX: f64 = 5.0;

/// Adaptive Dormand–Prince 5(4) integration with dense output.
pub fn integrate_dopri(
    f: &VectorField<'_>,
    x0: &[f64],
    t0: f64,
    t_end: f64,
    points: usize,
    opts: &DopriOptions,
) -> Result<TimeSeries, OdeError> {
    integrate_dopri_with_stats(f, x0, t0, t_end, points, opts).map(|(ts, _)| ts)
}

pub fn integrate_dopri_with_stats(
    f: &VectorField<'_>,
    x0: &[f64],
    t0: f64,
    t_end: f64,
    points: usize,
    opts: &DopriOptions,
) -> Result<(TimeSeries, DopriStats), OdeError> {
    validate(f, x0, t0, t_end, points)?;
    if !(opts.rtol > 0.0) || !(opts.atol > 0.0) {
        return Err(OdeError::InvalidArguments("rtol and atol must be positive".into()));
    }
    let n = x0.len();
    let span = t_end - t0;
    let h_min = 1e-14 * span;
    let scale = |a: f64, b: f64| opts.atol + opts.rtol * a.abs().max(b.abs());
    let rms = |v: &[f64], x: &[f64], y: &[f64]| -> f64 {
        if n == 0 {
            return 0.0;
        }
        let s: f64 = (0..n).map(|i| (v[i] / scale(x[i], y[i])).powi(2)).sum();
        (s / n as f64).sqrt()
    };

    let mut sampler = Sampler::new(t0, t_end, points);
    sampler.advance(t0, |_| x0.to_vec());
    let mut stats = DopriStats::default();

    let mut x = x0.to_vec();
    let mut t = t0;
    let mut k1 = vec![0.0; n];
    f.eval(t, &x, &mut k1)?;
    let mut h = initial_step(f, &x, &k1, t, span, &rms)?;

    let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) =
        (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut tmp = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut err = vec![0.0; n];
    let mut rejected_last = false;

    while t < t_end {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(OdeError::StepUnderflow { t, h });
        }
        if h < h_min {
            return Err(OdeError::StepUnderflow { t, h });
        }
        let last = t + h >= t_end || t_end - (t + h) < h_min;
        if last {
            h = t_end - t;
        }
        for i in 0..n {
            tmp[i] = x[i] + h * A21 * k1[i];
        }
        f.eval(t + C2 * h, &tmp, &mut k2)?;
        for i in 0..n {
            tmp[i] = x[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        f.eval(t + C3 * h, &tmp, &mut k3)?;
        for i in 0..n {
            tmp[i] = x[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        f.eval(t + C4 * h, &tmp, &mut k4)?;
        for i in 0..n {
            tmp[i] = x[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        f.eval(t + C5 * h, &tmp, &mut k5)?;
        for i in 0..n {
            tmp[i] = x[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let t_new = if last { t_end } else { t + h };
        f.eval(t_new, &tmp, &mut k6)?;
        for i in 0..n {
            y[i] = x[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        if y.iter().any(|v| !v.is_finite()) {
            // Treat a non-finite trial as a rejected step.
            stats.rejected += 1;
            h *= FACTOR_MIN;
            rejected_last = true;
            continue;
        }
        f.eval(t_new, &y, &mut k7)?;
        for i in 0..n {
            err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let norm = rms(&err, &x, &y);
        let factor = if norm == 0.0 {
            FACTOR_MAX
        } else {
            (SAFETY * norm.powf(-0.2)).clamp(FACTOR_MIN, FACTOR_MAX)
        };

        if norm <= 1.0 {
            stats.accepted += 1;
            check_finite(&y, t_new)?;
            let r5: Vec<f64> = (0..n)
                .map(|i| h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]))
                .collect();
            let (t_old, h_step) = (t, h);
            sampler.advance(t_new, |s| {
                if s == t_new {
                    return y.clone();
                }
                let theta = (s - t_old) / h_step;
                let theta1 = 1.0 - theta;
                (0..n)
                    .map(|i| {
                        let ydiff = y[i] - x[i];
                        let bspl = h_step * k1[i] - ydiff;
                        let r4 = ydiff - h_step * k7[i] - bspl;
                        x[i] + theta * (ydiff + theta1 * (bspl + theta * (r4 + theta1 * r5[i])))
                    })
                    .collect()
            });
            std::mem::swap(&mut x, &mut y);
            std::mem::swap(&mut k1, &mut k7);
            t = t_new;
            h *= if rejected_last { factor.min(1.0) } else { factor };
            rejected_last = false;
        } else {
            stats.rejected += 1;
            h *= factor.min(1.0);
            rejected_last = true;
        }
    }
    Ok((sampler.finish(), stats))
}

/// Starting step from the scaled sizes of the state, its derivative and an
/// estimate of the second derivative. A vanishing field takes the whole span.
fn initial_step(
    f: &VectorField<'_>,
    x: &[f64],
    dx: &[f64],
    t: f64,
    span: f64,
    rms: &dyn Fn(&[f64], &[f64], &[f64]) -> f64,
) -> Result<f64, OdeError> {
    let d0 = rms(x, x, x);
    let d1 = rms(dx, x, x);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 * span.max(1.0) } else { 0.01 * d0 / d1 };
    let h0 = h0.min(span);
    let x1: Vec<f64> = x.iter().zip(dx).map(|(a, b)| a + h0 * b).collect();
    let mut dx1 = vec![0.0; x.len()];
    f.eval(t + h0, &x1, &mut dx1)?;
    let diff: Vec<f64> = dx1.iter().zip(dx).map(|(a, b)| a - b).collect();
    let d2 = rms(&diff, x, x) / h0;
    let m = d1.max(d2);
    if m == 0.0 {
        return Ok(span);
    }
    let h1 = if m <= 1e-15 { span } else { (0.01 / m).powf(0.2) };
    Ok((100.0 * h0).min(h1).min(span))
}
