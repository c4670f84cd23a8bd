use biopepa::{
    parse_system, simulate_direct, simulate_next_reaction, simulate_tau_leap, uniform_grid, DopriOptions, SimRng,
    CAMP_PKA_MAPK,
};
use biopepa_bench::Fixture;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn front_end(c: &mut Criterion) {
    c.bench_function("parse_pathway", |b| b.iter(|| parse_system(black_box(CAMP_PKA_MAPK)).unwrap()));
    c.bench_function("compile_pathway", |b| b.iter(|| Fixture::from_source(black_box(CAMP_PKA_MAPK))));
}

fn ode(c: &mut Criterion) {
    let f = Fixture::pathway();
    let mut group = c.benchmark_group("ode_pathway_100s");
    group.sample_size(20);
    group.bench_function("rk4", |b| b.iter(|| f.model.integrate_rk4(&f.rates, 100.0, 0.01, 101).unwrap()));
    group.bench_function("dopri", |b| {
        b.iter(|| f.model.integrate_dopri(&f.rates, 100.0, 101, &DopriOptions::default()).unwrap())
    });
    group.finish();
}

fn stochastic(c: &mut Criterion) {
    let pathway = Fixture::pathway();
    let grid = uniform_grid(0.0, 10.0, 11);
    let mut group = c.benchmark_group("ssa_pathway_10s");
    group.sample_size(20);
    group.bench_function("direct", |b| {
        let mut rng = SimRng::new(1);
        b.iter(|| simulate_direct(&pathway.model.network, &pathway.rates, pathway.model.initial_state(), &grid, &mut rng))
    });
    group.bench_function("next_reaction", |b| {
        let mut rng = SimRng::new(1);
        b.iter(|| {
            simulate_next_reaction(&pathway.model.network, &pathway.rates, pathway.model.initial_state(), &grid, &mut rng)
        })
    });
    group.finish();

    let mut group = c.benchmark_group("chain_decay");
    let grid = uniform_grid(0.0, 5.0, 6);
    for a0 in [100u32, 10_000] {
        let chain = Fixture::chain(a0);
        let x0 = chain.model.initial_state();
        group.bench_with_input(BenchmarkId::new("direct", a0), &a0, |b, _| {
            let mut rng = SimRng::new(2);
            b.iter(|| simulate_direct(&chain.model.network, &chain.rates, x0, &grid, &mut rng))
        });
        group.bench_with_input(BenchmarkId::new("tau_leap", a0), &a0, |b, _| {
            let mut rng = SimRng::new(2);
            b.iter(|| simulate_tau_leap(&chain.model.network, &chain.rates, x0, &grid, 0.01, &mut rng))
        });
    }
    group.finish();
}

criterion_group!(benches, front_end, ode, stochastic);
criterion_main!(benches);
