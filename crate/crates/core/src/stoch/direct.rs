use super::{rng::sample_exponential, select, validate, Kernel, Recorder, SimRng, StochError, StochasticTrajectory};
use crate::analyzer::ReactionNetwork;
use crate::kinetics::RateSet;

/// Gillespie's direct method from `grid[0]` to the last grid time.
pub fn simulate_direct(
    network: &ReactionNetwork,
    rates: &RateSet,
    x0: &[i64],
    grid: &[f64],
    rng: &mut SimRng,
) -> Result<StochasticTrajectory, StochError> {
    simulate_direct_observed(network, rates, x0, grid, rng, &mut |_, _| {})
}

/// As [`simulate_direct`], calling `on_event(t, reaction)` after each firing.
pub fn simulate_direct_observed(
    network: &ReactionNetwork,
    rates: &RateSet,
    x0: &[i64],
    grid: &[f64],
    rng: &mut SimRng,
    on_event: &mut dyn FnMut(f64, usize),
) -> Result<StochasticTrajectory, StochError> {
    validate(network, x0, grid)?;
    let kernel = Kernel::new(network, rates)?;
    let t_end = grid[grid.len() - 1];
    let mut t = grid[0];
    let mut x = x0.to_vec();
    let mut xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
    let mut a = vec![0.0; kernel.len()];
    kernel.all_propensities(&x, &xf, t, &mut a)?;
    let mut recorder = Recorder::new(grid);
    let mut events = 0u64;

    loop {
        let a0: f64 = a.iter().sum();
        if !(a0 > 0.0) {
            break;
        }
        let t_next = t + sample_exponential(a0, rng);
        if t_next > t_end {
            break;
        }
        let j = select(&a, rng.uniform() * a0);
        recorder.hold_until(t_next, &x);
        kernel.fire(j, 1, &mut x, &mut xf);
        t = t_next;
        events += 1;
        on_event(t, j);
        if kernel.time_dependent {
            kernel.all_propensities(&x, &xf, t, &mut a)?;
        } else {
            for &k in &kernel.dependents[j] {
                a[k] = kernel.propensity(k, &x, &xf, t)?;
            }
        }
    }
    Ok(recorder.finish(&x, events))
}

/// One exact step from `t`; returns the new time, or `None` when no event
/// occurs before `t_end`.
pub(crate) fn direct_step(
    kernel: &Kernel<'_>,
    x: &mut [i64],
    xf: &mut [f64],
    t: f64,
    t_end: f64,
    rng: &mut SimRng,
) -> Result<Option<(f64, usize)>, StochError> {
    let mut a = vec![0.0; kernel.len()];
    kernel.all_propensities(x, xf, t, &mut a)?;
    let a0: f64 = a.iter().sum();
    if !(a0 > 0.0) {
        return Ok(None);
    }
    let t_next = t + sample_exponential(a0, rng);
    if t_next > t_end {
        return Ok(None);
    }
    let j = select(&a, rng.uniform() * a0);
    kernel.fire(j, 1, x, xf);
    Ok(Some((t_next, j)))
}
