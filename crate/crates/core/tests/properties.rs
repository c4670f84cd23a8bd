//! Invariants over randomly generated small models.

use biopepa::{
    build_location_tree, parse_system, run_ensemble, run_ensemble_sequential, simulate_direct, simulate_next_reaction,
    simulate_tau_leap, uniform_grid, DopriOptions, EnsembleSpec, Method, Model, SimRng,
};
use proptest::prelude::*;

/// `A + B <-> C`, `C -> D`: both `A + C + D` and `B + C + D` are conserved.
fn binding_model(kf: f64, kr: f64, kc: f64, a: u32, b: u32) -> String {
    format!(
        "kf = {kf}; kr = {kr}; kc = {kc};\nlocation c : size = 1, kind = compartment;\n\
         kineticLawOf bind : fMA(kf);\nkineticLawOf unbind : fMA(kr);\nkineticLawOf convert : fMA(kc);\n\
         A = bind << A@c + unbind >> A@c;\nB = bind << B@c + unbind >> B@c;\n\
         C = bind >> C@c + unbind << C@c + convert << C@c;\nD = convert >> D@c;\n\
         A@c[{a}] <*> B@c[{b}] <*> C@c[0] <*> D@c[0]"
    )
}

fn rates() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.001f64..0.5, 0.01f64..2.0, 0.01f64..2.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stochastic_counts_stay_nonnegative_and_conserved(
        (kf, kr, kc) in rates(), a in 0u32..60, b in 0u32..60, seed in any::<u64>(), which in 0usize..3,
    ) {
        let model = Model::from_source(&binding_model(kf, kr, kc, a, b)).unwrap();
        let rates = model.rates(&model.parameters).unwrap();
        let grid = uniform_grid(0.0, 5.0, 26);
        let mut rng = SimRng::new(seed);
        let x0 = model.initial_state();
        let traj = match which {
            0 => simulate_direct(&model.network, &rates, x0, &grid, &mut rng),
            1 => simulate_next_reaction(&model.network, &rates, x0, &grid, &mut rng),
            _ => simulate_tau_leap(&model.network, &rates, x0, &grid, 0.05, &mut rng),
        }
        .unwrap();
        let idx = |k: &str| model.network.find_species(k).unwrap();
        let (ia, ib, ic, id) = (idx("A@c"), idx("B@c"), idx("C@c"), idx("D@c"));
        for x in &traj.states {
            prop_assert!(x.iter().all(|&v| v >= 0));
            prop_assert_eq!(x[ia] + x[ic] + x[id], i64::from(a));
            prop_assert_eq!(x[ib] + x[ic] + x[id], i64::from(b));
        }
    }

    #[test]
    fn ode_conserves_totals((kf, kr, kc) in rates(), a in 0u32..500, b in 0u32..500) {
        let model = Model::from_source(&binding_model(kf, kr, kc, a, b)).unwrap();
        let rates = model.rates(&model.parameters).unwrap();
        let ts = model.integrate_dopri(&rates, 10.0, 11, &DopriOptions::default()).unwrap();
        let idx = |k: &str| model.network.find_species(k).unwrap();
        let (ia, ib, ic, id) = (idx("A@c"), idx("B@c"), idx("C@c"), idx("D@c"));
        for x in &ts.states {
            let scale = f64::from(a.max(b)).max(1.0);
            prop_assert!((x[ia] + x[ic] + x[id] - f64::from(a)).abs() <= 1e-6 * scale);
            prop_assert!((x[ib] + x[ic] + x[id] - f64::from(b)).abs() <= 1e-6 * scale);
        }
    }

    #[test]
    fn ensembles_are_seed_determined((kf, kr, kc) in rates(), seed in any::<u64>(), runs in 1usize..6) {
        let model = Model::from_source(&binding_model(kf, kr, kc, 30, 20)).unwrap();
        let rates = model.rates(&model.parameters).unwrap();
        let observables = model.observables(&model.parameters).unwrap();
        for method in [Method::Direct, Method::NextReaction, Method::TauLeap { tau: 0.1 }] {
            let spec = EnsembleSpec { method, t_end: 3.0, points: 7, runs, seed };
            let parallel = run_ensemble(&spec, &model.network, &rates, model.initial_state(), &observables).unwrap();
            let again = run_ensemble(&spec, &model.network, &rates, model.initial_state(), &observables).unwrap();
            let sequential =
                run_ensemble_sequential(&spec, &model.network, &rates, model.initial_state(), &observables).unwrap();
            prop_assert_eq!(&parallel, &again);
            prop_assert_eq!(&parallel, &sequential);
            if runs == 1 {
                prop_assert!(parallel.std.iter().flatten().all(|&s| s == 0.0));
            }
        }
    }

    #[test]
    fn adjacency_is_symmetric(parents in proptest::collection::vec(proptest::option::of(0usize..8), 1..8)) {
        // Location i may only nest in an earlier location, so the tree is acyclic.
        let mut text = String::new();
        for (i, p) in parents.iter().enumerate() {
            match p {
                Some(p) if *p < i => text.push_str(&format!("location L{i} in L{p} : size = 1, kind = compartment;\n")),
                _ => text.push_str(&format!("location L{i} : size = 1, kind = compartment;\n")),
            }
        }
        text.push_str("k = 1;\nkineticLawOf r : fMA(k);\nA = r << A@L0;\nA@L0[1]");
        let sys = parse_system(&text).unwrap();
        let tree = build_location_tree(&sys.locations).unwrap();
        for i in 0..parents.len() {
            let a = format!("L{i}");
            prop_assert!(tree.adjacent(&a, &a));
            for j in 0..parents.len() {
                let b = format!("L{j}");
                prop_assert_eq!(tree.adjacent(&a, &b), tree.adjacent(&b, &a));
            }
        }
    }

    #[test]
    fn michaelis_menten_rate_is_monotone_in_substrate(
        vm in 0.01f64..10.0, km in 0.01f64..100.0, e in 1u32..50, s1 in 0u32..1000, ds in 1u32..1000,
    ) {
        let src = format!(
            "vm = {vm}; km = {km};\nlocation c : size = 1, kind = compartment;\nkineticLawOf r : fMM(vm, km);\n\
             S = r << S@c;\nE = r (+) E@c;\nP = r >> P@c;\nS@c[{s1}] <*> E@c[{e}] <*> P@c[0]"
        );
        let model = Model::from_source(&src).unwrap();
        let rates = model.rates(&model.parameters).unwrap();
        let is = model.network.find_species("S@c").unwrap();
        let mut x = model.initial_continuous_state();
        let low = rates.get(0).evaluate(&x, 0.0).unwrap();
        x[is] += f64::from(ds);
        let high = rates.get(0).evaluate(&x, 0.0).unwrap();
        prop_assert!(high > low);
        prop_assert!(high < vm * f64::from(e));
    }
}
