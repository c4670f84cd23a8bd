use super::heap::IndexedHeap;
use super::{rng::sample_exponential, validate, Kernel, Recorder, SimRng, StochError, StochasticTrajectory};
use crate::analyzer::ReactionNetwork;
use crate::kinetics::RateSet;

/// Gibson–Bruck next-reaction method from `grid[0]` to the last grid time.
pub fn simulate_next_reaction(
    network: &ReactionNetwork,
    rates: &RateSet,
    x0: &[i64],
    grid: &[f64],
    rng: &mut SimRng,
) -> Result<StochasticTrajectory, StochError> {
    simulate_next_reaction_observed(network, rates, x0, grid, rng, &mut |_, _| {})
}

/// As [`simulate_next_reaction`], calling `on_event(t, reaction)` after each firing.
///
/// Each reaction holds an absolute putative firing time in an indexed
/// min-heap. After a firing only the reactions in the dependency graph are
/// touched: the fired one draws a fresh time, the others rescale their
/// remaining waiting time by `a_old / a_new`.
pub fn simulate_next_reaction_observed(
    network: &ReactionNetwork,
    rates: &RateSet,
    x0: &[i64],
    grid: &[f64],
    rng: &mut SimRng,
    on_event: &mut dyn FnMut(f64, usize),
) -> Result<StochasticTrajectory, StochError> {
    validate(network, x0, grid)?;
    let kernel = Kernel::new(network, rates)?;
    let m = kernel.len();
    let t_end = grid[grid.len() - 1];
    let mut t = grid[0];
    let mut x = x0.to_vec();
    let mut xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
    let mut a = vec![0.0; m];
    kernel.all_propensities(&x, &xf, t, &mut a)?;
    let putative: Vec<f64> =
        a.iter().map(|&aj| if aj > 0.0 { t + sample_exponential(aj, rng) } else { f64::INFINITY }).collect();
    let mut heap = IndexedHeap::new(putative);
    let mut recorder = Recorder::new(grid);
    let mut events = 0u64;
    let everyone: Vec<usize> = (0..m).collect();

    while let Some((mu, t_next)) = heap.peek() {
        if t_next > t_end {
            break;
        }
        recorder.hold_until(t_next, &x);
        kernel.fire(mu, 1, &mut x, &mut xf);
        t = t_next;
        events += 1;
        on_event(t, mu);
        let dependents = if kernel.time_dependent { &everyone } else { &kernel.dependents[mu] };
        for &k in dependents {
            let a_new = kernel.propensity(k, &x, &xf, t)?;
            let a_old = a[k];
            let tau = if k == mu || a_old == 0.0 {
                if a_new > 0.0 { t + sample_exponential(a_new, rng) } else { f64::INFINITY }
            } else if a_new > 0.0 {
                t + (a_old / a_new) * (heap.priority(k) - t)
            } else {
                f64::INFINITY
            };
            a[k] = a_new;
            heap.update(k, tau);
        }
    }
    Ok(recorder.finish(&x, events))
}
