//! Expression evaluation and binding of kinetic laws to rate functions.
//!
//! [`eval_expression`] interprets an [`Expr`] against an [`EvalEnvironment`].
//! The simulators do not interpret expressions directly: [`bind_kinetic_law`]
//! compiles a law into a [`RateFunction`] whose parameters are folded into
//! constants and whose species references are indices into the state vector.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::analyzer::{is_time_variable, Reaction, ReactionNetwork};
use crate::diagnostic::Diagnostic;
use crate::expr::{BinOp, Expr};
use crate::location::LocationTree;
use crate::model::{LawBody, Location, Observable, Parameter};

/// Resolved parameter values by name.
pub type ParamValues = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero in {0}")]
    DivisionByZero(String),
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),
    #[error("`{0}` depends on itself")]
    Cyclic(String),
    #[error("location `{name}` has non-positive size {size}")]
    NonpositiveSize { name: String, size: f64 },
}

/// Bindings for [`eval_expression`].
///
/// Identifiers resolve in order: parameter, location size, time variable,
/// observable, then species by bare name.
#[derive(Debug, Clone)]
pub struct EvalEnvironment<'a> {
    params: &'a ParamValues,
    species: HashMap<(String, String), f64>,
    bare_species: HashMap<String, f64>,
    locations: Option<&'a LocationTree>,
    observables: &'a [Observable],
    time: f64,
}

impl<'a> EvalEnvironment<'a> {
    pub fn new(params: &'a ParamValues) -> Self {
        EvalEnvironment {
            params,
            species: HashMap::new(),
            bare_species: HashMap::new(),
            locations: None,
            observables: &[],
            time: 0.0,
        }
    }

    pub fn at_time(mut self, t: f64) -> Self {
        self.time = t;
        self
    }

    pub fn with_locations(mut self, tree: &'a LocationTree) -> Self {
        self.locations = Some(tree);
        self
    }

    pub fn with_observables(mut self, observables: &'a [Observable]) -> Self {
        self.observables = observables;
        self
    }

    /// Binds `name@location`; an unlocated species is bound by bare name only.
    pub fn with_species(mut self, name: &str, location: Option<&str>, amount: f64) -> Self {
        match location {
            Some(loc) => {
                self.species.insert((name.to_string(), loc.to_string()), amount);
            }
            None => {
                self.bare_species.insert(name.to_string(), amount);
            }
        }
        self
    }

    pub fn time(&self) -> f64 {
        self.time
    }
}

/// Evaluates `expr` in `env`. Species amounts below zero read as zero.
pub fn eval_expression(expr: &Expr, env: &EvalEnvironment<'_>) -> Result<f64, EvalError> {
    eval_in(expr, env, &mut Vec::new())
}

fn eval_in<'e>(expr: &'e Expr, env: &EvalEnvironment<'e>, stack: &mut Vec<&'e str>) -> Result<f64, EvalError> {
    match expr {
        Expr::Number(v) => Ok(*v),
        Expr::Neg(inner) => Ok(-eval_in(inner, env, stack)?),
        Expr::Binary { op, lhs, rhs } => {
            let l = eval_in(lhs, env, stack)?;
            let r = eval_in(rhs, env, stack)?;
            if *op == BinOp::Div && r == 0.0 {
                return Err(EvalError::DivisionByZero(format!("`{expr}`")));
            }
            Ok(op.apply(l, r))
        }
        Expr::Species { name, location } => env
            .species
            .get(&(name.clone(), location.clone()))
            .map(|v| v.max(0.0))
            .ok_or_else(|| EvalError::UnknownSpecies(format!("{name}@{location}"))),
        Expr::Ident(name) => {
            if let Some(v) = env.params.get(name) {
                return Ok(*v);
            }
            if let Some(loc) = env.locations.and_then(|t| t.get(name)) {
                let size = eval_in(&loc.size, env, stack)?;
                if size.is_nan() || size <= 0.0 {
                    return Err(EvalError::NonpositiveSize { name: name.clone(), size });
                }
                return Ok(size);
            }
            if is_time_variable(name) {
                return Ok(env.time);
            }
            if let Some(obs) = env.observables.iter().find(|o| &o.name == name) {
                if stack.contains(&name.as_str()) {
                    return Err(EvalError::Cyclic(name.clone()));
                }
                stack.push(&obs.name);
                let v = eval_in(&obs.body, env, stack);
                stack.pop();
                return v;
            }
            if let Some(v) = env.bare_species.get(name) {
                return Ok(v.max(0.0));
            }
            let mut located = env.species.iter().filter(|((n, _), _)| n == name);
            match (located.next(), located.next()) {
                (Some((_, v)), None) => Ok(v.max(0.0)),
                _ => Err(EvalError::UnknownIdentifier(name.clone())),
            }
        }
    }
}

/// Evaluates parameters to numbers. Definitions may reference one another
/// in any order as long as the references are acyclic.
pub fn resolve_parameters(parameters: &[Parameter]) -> Result<ParamValues, Diagnostic> {
    let defs: HashMap<&str, &Parameter> = parameters.iter().map(|p| (p.name.as_str(), p)).collect();
    let mut values = ParamValues::new();
    for p in parameters {
        resolve_one(p, &defs, &mut values, &mut Vec::new())?;
    }
    Ok(values)
}

fn resolve_one<'p>(
    p: &'p Parameter,
    defs: &HashMap<&str, &'p Parameter>,
    values: &mut ParamValues,
    stack: &mut Vec<&'p str>,
) -> Result<f64, Diagnostic> {
    if let Some(v) = values.get(&p.name) {
        return Ok(*v);
    }
    if stack.contains(&p.name.as_str()) {
        return Err(Diagnostic::error("CYCLIC_PARAMETER", p.span, format!("parameter `{}` depends on itself", p.name)));
    }
    stack.push(&p.name);
    for id in p.value.identifiers() {
        let Some(dep) = defs.get(id) else {
            return Err(Diagnostic::error(
                "UNDEFINED_PARAMETER",
                p.span,
                format!("parameter `{}` uses undefined parameter `{id}`", p.name),
            ));
        };
        resolve_one(dep, defs, values, stack)?;
    }
    stack.pop();
    if p.value.has_species_ref() {
        return Err(Diagnostic::error(
            "UNDEFINED_PARAMETER",
            p.span,
            format!("parameter `{}` reads a species amount", p.name),
        ));
    }
    let v = eval_expression(&p.value, &EvalEnvironment::new(values))
        .map_err(|e| Diagnostic::error("DIVISION_BY_ZERO", p.span, format!("parameter `{}`: {e}", p.name)))?;
    values.insert(p.name.clone(), v);
    Ok(v)
}

/// Compiled expression over a state vector.
#[derive(Debug, Clone, PartialEq)]
enum Node {
    Const(f64),
    Species(usize),
    Time,
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
}

impl Node {
    fn eval(&self, x: &[f64], t: f64) -> Result<f64, ()> {
        Ok(match self {
            Node::Const(v) => *v,
            Node::Species(i) => x[*i].max(0.0),
            Node::Time => t,
            Node::Neg(a) => -a.eval(x, t)?,
            Node::Bin(op, a, b) => {
                let l = a.eval(x, t)?;
                let r = b.eval(x, t)?;
                if *op == BinOp::Div && r == 0.0 {
                    return Err(());
                }
                op.apply(l, r)
            }
        })
    }

    fn collect_species(&self, out: &mut Vec<usize>) {
        match self {
            Node::Species(i) => {
                if !out.contains(i) {
                    out.push(*i);
                }
            }
            Node::Neg(a) => a.collect_species(out),
            Node::Bin(_, a, b) => {
                a.collect_species(out);
                b.collect_species(out);
            }
            Node::Const(_) | Node::Time => {}
        }
    }

    fn uses_time(&self) -> bool {
        match self {
            Node::Time => true,
            Node::Neg(a) => a.uses_time(),
            Node::Bin(_, a, b) => a.uses_time() || b.uses_time(),
            Node::Const(_) | Node::Species(_) => false,
        }
    }
}

/// Name resolution context for compiling expressions against a network.
struct Compiler<'a> {
    params: &'a ParamValues,
    locations: &'a [Location],
    network: &'a ReactionNetwork,
    observables: &'a [Observable],
    stack: Vec<String>,
}

impl Compiler<'_> {
    fn compile(&mut self, expr: &Expr) -> Result<Node, EvalError> {
        Ok(match expr {
            Expr::Number(v) => Node::Const(*v),
            Expr::Neg(inner) => match self.compile(inner)? {
                Node::Const(v) => Node::Const(-v),
                n => Node::Neg(Box::new(n)),
            },
            Expr::Binary { op, lhs, rhs } => {
                let (l, r) = (self.compile(lhs)?, self.compile(rhs)?);
                match (&l, &r) {
                    (Node::Const(a), Node::Const(b)) if !(*op == BinOp::Div && *b == 0.0) => {
                        Node::Const(op.apply(*a, *b))
                    }
                    _ => Node::Bin(*op, Box::new(l), Box::new(r)),
                }
            }
            Expr::Species { name, location } => {
                let token = format!("{name}@{location}");
                let idx = self.network.find_species(&token).ok_or(EvalError::UnknownSpecies(token))?;
                Node::Species(idx)
            }
            Expr::Ident(name) => self.identifier(name)?,
        })
    }

    fn identifier(&mut self, name: &str) -> Result<Node, EvalError> {
        if let Some(v) = self.params.get(name) {
            return Ok(Node::Const(*v));
        }
        if let Some(loc) = self.locations.iter().find(|l| l.name == name) {
            return self.nested(name, &loc.size.clone());
        }
        if is_time_variable(name) {
            return Ok(Node::Time);
        }
        if let Some(obs) = self.observables.iter().find(|o| o.name == name) {
            return self.nested(name, &obs.body.clone());
        }
        match self.network.find_species(name) {
            Some(idx) => Ok(Node::Species(idx)),
            None => Err(EvalError::UnknownIdentifier(name.to_string())),
        }
    }

    fn nested(&mut self, name: &str, body: &Expr) -> Result<Node, EvalError> {
        if self.stack.iter().any(|s| s == name) {
            return Err(EvalError::Cyclic(name.to_string()));
        }
        self.stack.push(name.to_string());
        let node = self.compile(body);
        self.stack.pop();
        node
    }
}

#[derive(Debug, Clone, PartialEq)]
enum RateKind {
    MassAction { k: Node, reactants: Vec<(usize, u32)> },
    MichaelisMenten { vmax: Node, km: Node, substrate: usize, enzyme: usize },
    Custom(Node),
}

/// A kinetic law compiled against a reaction network.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFunction {
    action: String,
    kind: RateKind,
    reads: Vec<usize>,
    time_dependent: bool,
}

impl RateFunction {
    pub fn action(&self) -> &str {
        &self.action
    }

    /// State indices the rate may read.
    pub fn reads(&self) -> &[usize] {
        &self.reads
    }

    pub fn is_time_dependent(&self) -> bool {
        self.time_dependent
    }

    /// Rate at state `x` and time `t`. Negative amounts read as zero.
    pub fn evaluate(&self, x: &[f64], t: f64) -> Result<f64, EvalError> {
        let div = || EvalError::DivisionByZero(format!("kinetic law `{}`", self.action));
        match &self.kind {
            RateKind::MassAction { k, reactants } => {
                let mut rate = k.eval(x, t).map_err(|_| div())?;
                for &(i, kappa) in reactants {
                    let n = x[i].max(0.0);
                    rate *= if kappa == 1 { n } else { n.powi(kappa as i32) };
                }
                Ok(rate)
            }
            RateKind::MichaelisMenten { vmax, km, substrate, enzyme } => {
                let s = x[*substrate].max(0.0);
                let e = x[*enzyme].max(0.0);
                if s == 0.0 || e == 0.0 {
                    return Ok(0.0);
                }
                let vmax = vmax.eval(x, t).map_err(|_| div())?;
                let km = km.eval(x, t).map_err(|_| div())?;
                if km + s == 0.0 {
                    return Err(div());
                }
                Ok(vmax * e * s / (km + s))
            }
            RateKind::Custom(node) => node.eval(x, t).map_err(|_| div()),
        }
    }
}

/// Compiles the law of `reaction` with parameters folded to constants.
///
/// `locations` supplies the size expressions of location names used inside
/// the law. Fails only when the law names something the network does not
/// define, which the analyzer reports beforehand.
pub fn bind_kinetic_law(
    reaction: &Reaction,
    network: &ReactionNetwork,
    locations: &[Location],
    params: &ParamValues,
) -> Result<RateFunction, EvalError> {
    let mut c = Compiler { params, locations, network, observables: &[], stack: Vec::new() };
    let mut nodes = Vec::new();
    let kind = match &reaction.law.body {
        LawBody::MassAction(r) => {
            let k = c.compile(r)?;
            nodes.push(k.clone());
            RateKind::MassAction {
                k,
                reactants: reaction.reactants.iter().map(|p| (p.species, p.stoichiometry)).collect(),
            }
        }
        LawBody::MichaelisMenten { vmax, km } => {
            let (vmax, km) = (c.compile(vmax)?, c.compile(km)?);
            nodes.push(vmax.clone());
            nodes.push(km.clone());
            let substrate = reaction.reactants.first().map(|p| p.species);
            let enzyme = reaction.activators.first().copied();
            let (Some(substrate), Some(enzyme)) = (substrate, enzyme) else {
                return Err(EvalError::UnknownSpecies(format!(
                    "substrate or enzyme of Michaelis-Menten law `{}`",
                    reaction.action
                )));
            };
            RateKind::MichaelisMenten { vmax, km, substrate, enzyme }
        }
        LawBody::Custom(e) => {
            let node = c.compile(e)?;
            nodes.push(node.clone());
            RateKind::Custom(node)
        }
    };
    let mut reads = Vec::new();
    match &kind {
        RateKind::MassAction { reactants, .. } => reads.extend(reactants.iter().map(|r| r.0)),
        RateKind::MichaelisMenten { substrate, enzyme, .. } => reads.extend([*substrate, *enzyme]),
        RateKind::Custom(_) => {}
    }
    for n in &nodes {
        n.collect_species(&mut reads);
    }
    reads.sort_unstable();
    reads.dedup();
    let time_dependent = nodes.iter().any(Node::uses_time);
    Ok(RateFunction { action: reaction.action.clone(), kind, reads, time_dependent })
}

/// Rate functions for every reaction of a network, in reaction order.
#[derive(Debug, Clone, PartialEq)]
pub struct RateSet {
    rates: Vec<RateFunction>,
}

impl RateSet {
    /// Binds every reaction. Location sizes are checked at `t = 0`.
    pub fn bind(
        network: &ReactionNetwork,
        locations: &[Location],
        params: &ParamValues,
    ) -> Result<RateSet, EvalError> {
        let mut c = Compiler { params, locations, network, observables: &[], stack: Vec::new() };
        for loc in locations {
            let size = c.compile(&loc.size)?.eval(&[], 0.0).map_err(|_| EvalError::DivisionByZero(format!("size of `{}`", loc.name)))?;
            if size.is_nan() || size <= 0.0 {
                return Err(EvalError::NonpositiveSize { name: loc.name.clone(), size });
            }
        }
        let rates = network
            .reactions
            .iter()
            .map(|r| bind_kinetic_law(r, network, locations, params))
            .collect::<Result<_, _>>()?;
        Ok(RateSet { rates })
    }

    pub fn from_functions(rates: Vec<RateFunction>) -> Self {
        RateSet { rates }
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    pub fn get(&self, j: usize) -> &RateFunction {
        &self.rates[j]
    }

    pub fn iter(&self) -> impl Iterator<Item = &RateFunction> {
        self.rates.iter()
    }

    pub fn is_time_dependent(&self) -> bool {
        self.rates.iter().any(RateFunction::is_time_dependent)
    }

    /// Writes every rate at `(x, t)` into `out`.
    pub fn evaluate_all(&self, x: &[f64], t: f64, out: &mut [f64]) -> Result<(), EvalError> {
        for (o, r) in out.iter_mut().zip(&self.rates) {
            *o = r.evaluate(x, t)?;
        }
        Ok(())
    }

    /// For each reaction `k`, the reactions whose rates or reactant counts
    /// involve a species that `k` changes, including `k` itself.
    pub fn dependency_graph(&self, network: &ReactionNetwork) -> Vec<Vec<usize>> {
        let changes = network.state_changes();
        let mut readers: Vec<Vec<usize>> = vec![Vec::new(); network.species.len()];
        for (j, r) in self.rates.iter().enumerate() {
            let reactants = network.reactions.get(j).into_iter().flat_map(|r| r.reactants.iter().map(|p| p.species));
            for s in r.reads().iter().copied().chain(reactants) {
                if !readers[s].contains(&j) {
                    readers[s].push(j);
                }
            }
        }
        changes
            .iter()
            .enumerate()
            .map(|(k, delta)| {
                let mut deps = vec![k];
                for &(s, _) in delta {
                    for &j in &readers[s] {
                        if !deps.contains(&j) {
                            deps.push(j);
                        }
                    }
                }
                deps.sort_unstable();
                deps
            })
            .collect()
    }
}

/// An observable compiled against a network's state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledObservable {
    pub name: String,
    node: Node,
}

impl CompiledObservable {
    /// `None` on division by zero.
    pub fn evaluate(&self, x: &[f64], t: f64) -> Option<f64> {
        self.node.eval(x, t).ok()
    }
}

pub fn bind_observables(
    observables: &[Observable],
    network: &ReactionNetwork,
    locations: &[Location],
    params: &ParamValues,
) -> Result<Vec<CompiledObservable>, EvalError> {
    let mut c = Compiler { params, locations, network, observables, stack: Vec::new() };
    observables
        .iter()
        .map(|o| {
            c.stack = vec![o.name.clone()];
            Ok(CompiledObservable { name: o.name.clone(), node: c.compile(&o.body)? })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyzer::derive_reaction_network;
    use crate::parser::{parse_expression, parse_system};

    fn expr(s: &str) -> Expr {
        parse_expression(s).unwrap()
    }

    fn single_rate(src: &str, state: &[f64]) -> f64 {
        let sys = parse_system(src).unwrap();
        let net = derive_reaction_network(&sys).unwrap();
        let params = resolve_parameters(&sys.parameters).unwrap();
        let rates = RateSet::bind(&net, &sys.locations, &params).unwrap();
        rates.get(0).evaluate(state, 0.0).unwrap()
    }

    #[test]
    fn evaluates_division_of_parameters() {
        let params = ParamValues::from([("Kf_trimer".into(), 6.0), ("omega_cyto".into(), 602.0)]);
        let v = eval_expression(&expr("Kf_trimer / omega_cyto"), &EvalEnvironment::new(&params)).unwrap();
        assert_eq!(v, 6.0 / 602.0);
        assert!((v - 0.009_966_777).abs() < 1e-9);
    }

    #[test]
    fn evaluates_species_reads() {
        let params = ParamValues::new();
        let env = EvalEnvironment::new(&params)
            .with_species("MAPK", Some("cyto"), 217.0)
            .with_species("MAPK_active", Some("cyto"), 0.0);
        let f = expr("MAPK_active@cyto / (MAPK@cyto + MAPK_active@cyto)");
        assert_eq!(eval_expression(&f, &env).unwrap(), 0.0);
        let clamped = EvalEnvironment::new(&params).with_species("A", Some("c"), -3.0);
        assert_eq!(eval_expression(&expr("A@c + 1"), &clamped).unwrap(), 1.0);
        assert_eq!(eval_expression(&expr("A + 1"), &clamped).unwrap(), 1.0);
    }

    #[test]
    fn division_by_zero() {
        let params = ParamValues::from([("x".into(), 4.0)]);
        let err = eval_expression(&expr("1/ (x - x)"), &EvalEnvironment::new(&params)).unwrap_err();
        assert!(matches!(err, EvalError::DivisionByZero(_)));
    }

    #[test]
    fn unknown_identifier() {
        let params = ParamValues::new();
        let err = eval_expression(&expr("q * 2"), &EvalEnvironment::new(&params)).unwrap_err();
        assert_eq!(err, EvalError::UnknownIdentifier("q".into()));
    }

    #[test]
    fn time_variable() {
        let params = ParamValues::new();
        let env = EvalEnvironment::new(&params).at_time(2.5);
        assert_eq!(eval_expression(&expr("2 * t"), &env).unwrap(), 5.0);
    }

    fn param(name: &str, value: &str) -> Parameter {
        Parameter { name: name.into(), value: expr(value), span: Default::default() }
    }

    #[test]
    fn resolves_parameters() {
        let p = resolve_parameters(&[param("omega_cyto", "602")]).unwrap();
        assert_eq!(p["omega_cyto"], 602.0);
        let p = resolve_parameters(&[param("a", "2"), param("b", "a*3")]).unwrap();
        assert_eq!(p["b"], 6.0);
        let p = resolve_parameters(&[param("b", "a*3"), param("a", "2")]).unwrap();
        assert_eq!(p["b"], 6.0);
        let e = resolve_parameters(&[param("a", "b"), param("b", "a")]).unwrap_err();
        assert_eq!(e.code, "CYCLIC_PARAMETER");
        let e = resolve_parameters(&[param("a", "zz")]).unwrap_err();
        assert_eq!(e.code, "UNDEFINED_PARAMETER");
    }

    #[test]
    fn mass_action_rate() {
        let src = "Kf_trimer = 6; omega_cyto = 602;\nkineticLawOf v11f : fMA(Kf_trimer / omega_cyto);\n\
                   G_GDP = v11f << G_GDP@cyto;\nbg = v11f << bg@cyto;\nG = v11f >> G@cyto;\n\
                   G_GDP@cyto[100] <*> bg@cyto[50] <*> G@cyto[0]";
        let r = single_rate(src, &[100.0, 50.0, 0.0]);
        assert!((r - 6.0 / 602.0 * 5000.0).abs() < 1e-12);
        assert!((r - 49.8339).abs() < 1e-4);
        assert_eq!(single_rate(src, &[0.0, 50.0, 0.0]), 0.0);
    }

    #[test]
    fn michaelis_menten_rate() {
        let src = "vm = 10; km = 2;\nkineticLawOf r : fMM(vm, km);\nS = r << S;\nP = r >> P;\nE = r (+) E;\nS[2] <*> P[0] <*> E[5]";
        assert_eq!(single_rate(src, &[2.0, 0.0, 5.0]), 25.0);
        assert_eq!(single_rate(src, &[0.0, 0.0, 5.0]), 0.0);
    }

    #[test]
    fn stoichiometry_powers_and_custom_law() {
        let src = "k = 0.5;\nkineticLawOf r : fMA(k);\nA = (r, 2) << A;\nB = r >> B;\nA[3] <*> B[0]";
        assert_eq!(single_rate(src, &[3.0, 0.0]), 4.5);
        let custom = "k = 0.5; w = 2;\nkineticLawOf r : k * A@c / w;\nlocation c : size = 1, kind = compartment;\nA = r << A@c;\nA@c[3]";
        assert_eq!(single_rate(custom, &[3.0]), 0.75);
        assert_eq!(single_rate(custom, &[-3.0]), 0.0);
    }

    #[test]
    fn location_names_read_sizes() {
        let src = "location c : size = 0.2, kind = compartment;\nk = 5;\nkineticLawOf r : fMA(k * c);\nA = r << A@c;\nA@c[3]";
        assert!((single_rate(src, &[3.0]) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn dependency_graph_follows_reads() {
        let src = "k = 1;\nkineticLawOf a : fMA(k);\nkineticLawOf b : fMA(k);\nkineticLawOf c : fMA(k);\n\
                   A = a << A;\nB = a >> B + b << B;\nC = b >> C + c << C;\nD = c >> D;\nA[1] <*> B[0] <*> C[0] <*> D[0]";
        let sys = parse_system(src).unwrap();
        let net = derive_reaction_network(&sys).unwrap();
        let rates = RateSet::bind(&net, &sys.locations, &ParamValues::from([("k".into(), 1.0)])).unwrap();
        assert_eq!(rates.dependency_graph(&net), vec![vec![0, 1], vec![1, 2], vec![2]]);
    }
}
