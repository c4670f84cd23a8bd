//! Library results against closed forms computed independently here.

use biopepa::{
    integrate_dopri, integrate_rk4, run_ensemble, sample_exponential, sample_poisson, DopriOptions, EnsembleSpec,
    Method, Model, SimRng, VectorField,
};

#[test]
fn oscillator_follows_sine_and_cosine() {
    let f = VectorField::new(2, |_, x, dx| {
        dx[0] = x[1];
        dx[1] = -x[0];
        Ok(())
    });
    let opts = DopriOptions { rtol: 1e-9, atol: 1e-12, ..DopriOptions::default() };
    let ts = integrate_dopri(&f, &[0.0, 1.0], 0.0, 10.0, 101, &opts).unwrap();
    for (t, x) in ts.times.iter().zip(&ts.states) {
        assert!((x[0] - t.sin()).abs() < 1e-7, "t = {t}");
        assert!((x[1] - t.cos()).abs() < 1e-7, "t = {t}");
    }
}

#[test]
fn logistic_growth_matches_closed_form() {
    let f = VectorField::new(1, |_, x, dx| {
        dx[0] = x[0] * (1.0 - x[0]);
        Ok(())
    });
    let ts = integrate_rk4(&f, &[0.1], 0.0, 5.0, 0.001, 11).unwrap();
    for (t, x) in ts.times.iter().zip(&ts.states) {
        let exact = 1.0 / (1.0 + 9.0 * (-t).exp());
        assert!((x[0] - exact).abs() < 1e-10, "t = {t}");
    }
}

#[test]
fn model_rates_match_hand_evaluation() {
    let src = "vm = 3; km = 2; k = 0.5;\nlocation c : size = 1, kind = compartment;\n\
               kineticLawOf mm : fMM(vm, km);\nkineticLawOf ma : fMA(k);\n\
               S = mm << S@c + ma << S@c;\nE = mm (+) E@c;\nP = mm >> P@c + ma >> P@c;\n\
               S@c[7] <*> E@c[4] <*> P@c[0]";
    let model = Model::from_source(src).unwrap();
    let rates = model.rates(&model.parameters).unwrap();
    let x = model.initial_continuous_state();
    let mut out = vec![0.0; 2];
    rates.evaluate_all(&x, 0.0, &mut out).unwrap();
    let mm = model.network.reaction_index("mm").unwrap();
    let ma = model.network.reaction_index("ma").unwrap();
    assert!((out[mm] - 3.0 * 4.0 * 7.0 / (2.0 + 7.0)).abs() < 1e-12);
    assert!((out[ma] - 0.5 * 7.0).abs() < 1e-12);
}

#[test]
fn decay_ensemble_mean_and_variance() {
    let src = "k = 0.7;\nlocation c : size = 1, kind = compartment;\nkineticLawOf d : fMA(k);\nA = d << A@c;\nA@c[400]";
    let model = Model::from_source(src).unwrap();
    let rates = model.rates(&model.parameters).unwrap();
    let spec = EnsembleSpec { method: Method::Direct, t_end: 1.0, points: 2, runs: 1000, seed: 5 };
    let ens = run_ensemble(&spec, &model.network, &rates, model.initial_state(), &[]).unwrap();
    let p = (-0.7f64).exp();
    let (mean, var) = (400.0 * p, 400.0 * p * (1.0 - p));
    let se = (var / 1000.0).sqrt();
    assert!((ens.mean[1][0] - mean).abs() < 4.0 * se);
    assert!((ens.std[1][0].powi(2) / var - 1.0).abs() < 0.15);
}

#[test]
fn sampler_moments() {
    let mut rng = SimRng::new(99);
    let n = 200_000;
    let exp_mean = (0..n).map(|_| sample_exponential(2.0, &mut rng)).sum::<f64>() / n as f64;
    assert!((exp_mean - 0.5).abs() < 0.005);
    for lambda in [3.5, 80.0] {
        let draws: Vec<f64> = (0..n).map(|_| sample_poisson(lambda, &mut rng) as f64).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((mean - lambda).abs() < 5.0 * (lambda / n as f64).sqrt(), "lambda {lambda}");
        assert!((var / lambda - 1.0).abs() < 0.03, "lambda {lambda}");
    }
}
