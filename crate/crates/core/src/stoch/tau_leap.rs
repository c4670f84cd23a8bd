use super::direct::direct_step;
use super::{rng::sample_poisson, validate, Kernel, Recorder, SimRng, StochError, StochasticTrajectory};
use crate::analyzer::ReactionNetwork;
use crate::kinetics::RateSet;

/// Fixed-step tau-leaping from `grid[0]` to the last grid time.
pub fn simulate_tau_leap(
    network: &ReactionNetwork,
    rates: &RateSet,
    x0: &[i64],
    grid: &[f64],
    tau: f64,
    rng: &mut SimRng,
) -> Result<StochasticTrajectory, StochError> {
    simulate_tau_leap_observed(network, rates, x0, grid, tau, rng, &mut |_, _| {})
}

/// As [`simulate_tau_leap`], calling `on_leap(t, firings)` after each
/// accepted leap or fallback exact step.
///
/// Each reaction fires `Poisson(a_j · tau)` times per leap. A leap that
/// would make any count negative is retried at half the step, down to
/// `1e-6 · tau`; below that one exact direct-method step is taken instead.
pub fn simulate_tau_leap_observed(
    network: &ReactionNetwork,
    rates: &RateSet,
    x0: &[i64],
    grid: &[f64],
    tau: f64,
    rng: &mut SimRng,
    on_leap: &mut dyn FnMut(f64, u64),
) -> Result<StochasticTrajectory, StochError> {
    validate(network, x0, grid)?;
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(StochError::InvalidArguments(format!("tau must be positive, got {tau}")));
    }
    let kernel = Kernel::new(network, rates)?;
    let m = kernel.len();
    let tau_min = 1e-6 * tau;
    let t_end = grid[grid.len() - 1];
    let mut t = grid[0];
    let mut x = x0.to_vec();
    let mut xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
    let mut a = vec![0.0; m];
    let mut firings = vec![0u64; m];
    let mut trial = x.clone();
    let mut recorder = Recorder::new(grid);
    let mut events = 0u64;

    while t < t_end {
        kernel.all_propensities(&x, &xf, t, &mut a)?;
        if !(a.iter().sum::<f64>() > 0.0) {
            break;
        }
        let mut step = tau.min(t_end - t);
        let accepted = loop {
            trial.copy_from_slice(&x);
            for j in 0..m {
                firings[j] = if a[j] > 0.0 { sample_poisson(a[j] * step, rng) } else { 0 };
                if firings[j] > 0 {
                    for &(s, d) in kernel.changes(j) {
                        trial[s] += d * firings[j] as i64;
                    }
                }
            }
            if trial.iter().all(|&v| v >= 0) {
                break true;
            }
            step /= 2.0;
            if step < tau_min {
                break false;
            }
        };
        if accepted {
            let t_new = if step >= t_end - t { t_end } else { t + step };
            recorder.hold_until(t_new, &x);
            x.copy_from_slice(&trial);
            for (f, &v) in xf.iter_mut().zip(&x) {
                *f = v as f64;
            }
            let fired: u64 = firings.iter().sum();
            events += fired;
            t = t_new;
            on_leap(t, fired);
        } else {
            let before = x.clone();
            match direct_step(&kernel, &mut x, &mut xf, t, t_end, rng)? {
                Some((t_new, _)) => {
                    recorder.hold_until(t_new, &before);
                    events += 1;
                    t = t_new;
                    on_leap(t, 1);
                }
                None => break,
            }
        }
    }
    Ok(recorder.finish(&x, events))
}
