//! Fixtures shared by the simulator benchmarks.

use biopepa::{CompiledObservable, Model, RateSet, CAMP_PKA_MAPK};

/// A compiled model with its default rate functions and observables.
pub struct Fixture {
    pub model: Model,
    pub rates: RateSet,
    pub observables: Vec<CompiledObservable>,
}

impl Fixture {
    pub fn from_source(text: &str) -> Fixture {
        let model = Model::from_source(text).expect("fixture model compiles");
        let rates = model.rates(&model.parameters).expect("fixture rates bind");
        let observables = model.observables(&model.parameters).expect("fixture observables bind");
        Fixture { model, rates, observables }
    }

    pub fn pathway() -> Fixture {
        Fixture::from_source(CAMP_PKA_MAPK)
    }

    /// `A -> B -> C` with `a0` initial copies of `A`.
    pub fn chain(a0: u32) -> Fixture {
        Fixture::from_source(&format!(
            "k1 = 1; k2 = 0.5;\nlocation c : size = 1, kind = compartment;\n\
             kineticLawOf r1 : fMA(k1);\nkineticLawOf r2 : fMA(k2);\n\
             A = r1 << A@c;\nB = r1 >> B@c + r2 << B@c;\nC = r2 >> C@c;\n\
             A@c[{a0}] <*> B@c[0] <*> C@c[0]"
        ))
    }
}
