//! Static analysis and flattening of a parsed system into a reaction network.
//!
//! Every action name becomes one [`Reaction`] whose participants are the
//! prefix terms carrying that action across all species instances of the
//! model component. Cooperation sets are validated but do not restrict the
//! synchronisation: components always synchronise on shared action names.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::diagnostic::Diagnostic;
use crate::expr::Expr;
use crate::model::{BioPepaSystem, Composition, CooperationSet, KineticLaw, LawBody, PrefixTerm, Role};
use crate::span::Span;

/// A species instance: a species component in one location.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpeciesKey {
    pub name: String,
    pub location: Option<String>,
}

impl SpeciesKey {
    pub fn new(name: &str, location: Option<&str>) -> Self {
        SpeciesKey { name: name.to_string(), location: location.map(str::to_string) }
    }

    pub fn at(name: &str, location: &str) -> Self {
        SpeciesKey::new(name, Some(location))
    }
}

impl fmt::Display for SpeciesKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.location {
            Some(loc) => write!(f, "{}@{}", self.name, loc),
            None => f.write_str(&self.name),
        }
    }
}

/// Index into [`ReactionNetwork::species`] with its stoichiometric coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Participant {
    pub species: usize,
    pub stoichiometry: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reaction {
    pub action: String,
    pub reactants: Vec<Participant>,
    pub products: Vec<Participant>,
    pub activators: Vec<usize>,
    pub inhibitors: Vec<usize>,
    pub modifiers: Vec<usize>,
    pub law: KineticLaw,
}

impl Reaction {
    fn empty(law: &KineticLaw) -> Self {
        Reaction {
            action: law.action.clone(),
            reactants: Vec::new(),
            products: Vec::new(),
            activators: Vec::new(),
            inhibitors: Vec::new(),
            modifiers: Vec::new(),
            law: law.clone(),
        }
    }

    pub fn participant_count(&self) -> usize {
        self.reactants.len()
            + self.products.len()
            + self.activators.len()
            + self.inhibitors.len()
            + self.modifiers.len()
    }

    /// Every species index the reaction touches, in role order.
    pub fn species(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        let all = self
            .reactants
            .iter()
            .chain(&self.products)
            .map(|p| p.species)
            .chain(self.activators.iter().chain(&self.inhibitors).chain(&self.modifiers).copied());
        for s in all {
            if !out.contains(&s) {
                out.push(s);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReactionNetwork {
    /// Species instances in model-component order.
    pub species: Vec<SpeciesKey>,
    pub reactions: Vec<Reaction>,
    /// `reactions × species`; products minus reactants.
    pub stoichiometry: Vec<Vec<i64>>,
    pub initial_state: Vec<i64>,
}

impl ReactionNetwork {
    pub fn species_index(&self, key: &SpeciesKey) -> Option<usize> {
        self.species.iter().position(|k| k == key)
    }

    /// Looks up `name@location`, or a bare name with a unique instance.
    pub fn find_species(&self, token: &str) -> Option<usize> {
        match token.split_once('@') {
            Some((name, loc)) => self.species_index(&SpeciesKey::at(name, loc)),
            None => {
                let mut hits = self.species.iter().enumerate().filter(|(_, k)| k.name == token);
                let first = hits.next()?;
                hits.next().is_none().then_some(first.0)
            }
        }
    }

    pub fn reaction(&self, action: &str) -> Option<&Reaction> {
        self.reactions.iter().find(|r| r.action == action)
    }

    pub fn reaction_index(&self, action: &str) -> Option<usize> {
        self.reactions.iter().position(|r| r.action == action)
    }

    /// Sparse per-reaction state change `(species, delta)`, zero entries dropped.
    pub fn state_changes(&self) -> Vec<Vec<(usize, i64)>> {
        self.stoichiometry
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, &d)| d != 0).map(|(i, &d)| (i, d)).collect())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Instance {
    pub key: SpeciesKey,
    pub initial: f64,
    pub span: Span,
}

/// Flattens the model component left to right, expanding labelled
/// compositions. Unresolvable references are reported and skipped.
pub(crate) fn flatten_model(system: &BioPepaSystem) -> (Vec<Instance>, Vec<Diagnostic>) {
    fn walk(
        system: &BioPepaSystem,
        comp: &Composition,
        stack: &mut Vec<String>,
        out: &mut Vec<Instance>,
        diags: &mut Vec<Diagnostic>,
    ) {
        match comp {
            Composition::Species { name, location, initial, span } => out.push(Instance {
                key: SpeciesKey::new(name, location.as_deref()),
                initial: *initial,
                span: *span,
            }),
            Composition::Reference { name, span } => {
                if stack.contains(name) {
                    diags.push(Diagnostic::error(
                        "CYCLIC_COMPOSITION",
                        *span,
                        format!("labelled composition `{name}` refers to itself"),
                    ));
                    return;
                }
                match system.composition(name) {
                    Some(def) => {
                        stack.push(name.clone());
                        walk(system, &def.body, stack, out, diags);
                        stack.pop();
                    }
                    None => diags.push(Diagnostic::error(
                        "UNDEFINED_COMPOSITION",
                        *span,
                        format!("undefined composition `{name}`"),
                    )),
                }
            }
            Composition::Cooperation { left, right, .. } => {
                walk(system, left, stack, out, diags);
                walk(system, right, stack, out, diags);
            }
        }
    }
    let mut out = Vec::new();
    let mut diags = Vec::new();
    walk(system, &system.model, &mut Vec::new(), &mut out, &mut diags);
    (out, diags)
}

/// Rewrites unqualified prefix terms so every term names its location.
///
/// An unqualified term of species `S` is replicated once per location in
/// which `S` is instantiated. Species without any located instance keep
/// their unqualified terms.
pub fn expand_location_shorthand(system: &BioPepaSystem) -> (BioPepaSystem, Vec<Diagnostic>) {
    let (instances, _) = flatten_model(system);
    let mut placements: HashMap<&str, Vec<Option<&str>>> = HashMap::new();
    for inst in &instances {
        let entry = placements.entry(inst.key.name.as_str()).or_default();
        let loc = inst.key.location.as_deref();
        if !entry.contains(&loc) {
            entry.push(loc);
        }
    }

    let mut diags = Vec::new();
    let mut expanded = system.clone();
    for comp in &mut expanded.components {
        if comp.terms.iter().all(|t| t.location.is_some()) {
            continue;
        }
        let locations = placements.get(comp.name.as_str());
        let mut terms: Vec<PrefixTerm> = Vec::with_capacity(comp.terms.len());
        for term in &comp.terms {
            if term.location.is_some() {
                terms.push(term.clone());
                continue;
            }
            match locations {
                None => {
                    diags.push(Diagnostic::error(
                        "UNRESOLVED_LOCATION",
                        term.span,
                        format!(
                            "cannot place unqualified prefix `{}` of `{}`: the species does not occur in the model component",
                            term.action, comp.name
                        ),
                    ));
                    terms.push(term.clone());
                }
                Some(locs) => {
                    for loc in locs {
                        let mut t = term.clone();
                        t.location = loc.map(str::to_string);
                        if !terms.contains(&t) {
                            terms.push(t);
                        }
                    }
                }
            }
        }
        comp.terms = terms;
    }
    (expanded, diags)
}

/// Time variable names accepted in expressions.
pub(crate) fn is_time_variable(name: &str) -> bool {
    name == "t" || name == "time"
}

struct Checker<'a> {
    sys: &'a BioPepaSystem,
    diags: Vec<Diagnostic>,
    location_names: HashSet<&'a str>,
    instances: Vec<Instance>,
    instance_keys: HashSet<SpeciesKey>,
    /// Actions whose participant lists are unreliable because of another error.
    tainted: HashSet<String>,
}

/// Runs every static check. Errors block simulation; warnings do not.
pub fn check_system(system: &BioPepaSystem) -> Vec<Diagnostic> {
    let (expanded, mut diags) = expand_location_shorthand(system);
    let (instances, flatten_diags) = flatten_model(&expanded);
    diags.extend(flatten_diags);
    let mut checker = Checker {
        sys: &expanded,
        diags,
        location_names: expanded.locations.iter().map(|l| l.name.as_str()).collect(),
        instance_keys: instances.iter().map(|i| i.key.clone()).collect(),
        instances,
        tainted: HashSet::new(),
    };
    checker.locations();
    checker.names();
    checker.parameters();
    checker.instances();
    checker.components();
    checker.kinetic_laws();
    checker.observables();
    checker.reactions();
    checker.cooperation();
    let mut diags = checker.diags;
    diags.sort_by_key(|d| (d.span.begin, d.severity));
    diags
}

impl<'a> Checker<'a> {
    fn err(&mut self, code: &'static str, span: Span, msg: String) {
        self.diags.push(Diagnostic::error(code, span, msg));
    }

    fn locations(&mut self) {
        let mut seen = HashSet::new();
        for loc in &self.sys.locations {
            if !seen.insert(loc.name.as_str()) {
                self.err("DUPLICATE_DEFINITION", loc.span, format!("location `{}` is defined more than once", loc.name));
            }
            if let Some(parent) = &loc.parent {
                if !self.location_names.contains(parent.as_str()) {
                    self.err(
                        "UNDEFINED_LOCATION",
                        loc.span,
                        format!("location `{}` is placed in undefined location `{parent}`", loc.name),
                    );
                }
            }
            for id in loc.size.identifiers() {
                if self.sys.parameter(id).is_none() && !is_time_variable(id) {
                    self.err(
                        "UNDEFINED_PARAMETER",
                        loc.span,
                        format!("size of location `{}` uses undefined parameter `{id}`", loc.name),
                    );
                }
            }
            if loc.size.has_species_ref() {
                self.err(
                    "INVALID_SIZE",
                    loc.span,
                    format!("size of location `{}` may depend only on parameters and time", loc.name),
                );
            }
        }
        if self.diags.iter().any(|d| d.code == "DUPLICATE_DEFINITION" || d.code == "UNDEFINED_LOCATION") {
            return;
        }
        if let Err(e) = crate::location::build_location_tree(&self.sys.locations) {
            let span = self.sys.locations.first().map(|l| l.span).unwrap_or_default();
            self.err("CYCLIC_LOCATION", span, e.to_string());
        }
    }

    /// Parameters, observables and locations share one namespace.
    fn names(&mut self) {
        let mut seen: HashMap<&str, &str> = self.sys.locations.iter().map(|l| (l.name.as_str(), "location")).collect();
        let defs = self
            .sys
            .parameters
            .iter()
            .map(|p| (p.name.as_str(), p.span, "parameter"))
            .chain(self.sys.observables.iter().map(|o| (o.name.as_str(), o.span, "observable")));
        let mut dups = Vec::new();
        for (name, span, what) in defs {
            if let Some(prev) = seen.insert(name, what) {
                dups.push((span, format!("{what} `{name}` clashes with an earlier {prev} of the same name")));
            }
        }
        let mut seen = HashSet::new();
        for c in &self.sys.components {
            if !seen.insert(c.name.as_str()) {
                dups.push((c.span, format!("species component `{}` is defined more than once", c.name)));
            }
        }
        let mut seen = HashSet::new();
        for c in &self.sys.compositions {
            if !seen.insert(c.name.as_str()) {
                dups.push((c.span, format!("composition `{}` is defined more than once", c.name)));
            }
        }
        for (span, msg) in dups {
            self.err("DUPLICATE_DEFINITION", span, msg);
        }
    }

    fn parameters(&mut self) {
        let names: HashSet<&str> = self.sys.parameters.iter().map(|p| p.name.as_str()).collect();
        let mut undefined = HashSet::new();
        for p in &self.sys.parameters {
            for id in p.value.identifiers() {
                if !names.contains(id) {
                    undefined.insert(p.name.as_str());
                    self.err(
                        "UNDEFINED_PARAMETER",
                        p.span,
                        format!("parameter `{}` uses undefined parameter `{id}`", p.name),
                    );
                }
            }
        }
        // Cycle detection by depth-first search over parameter references.
        let deps: HashMap<&str, Vec<&str>> =
            self.sys.parameters.iter().map(|p| (p.name.as_str(), p.value.identifiers())).collect();
        let mut state: HashMap<&str, u8> = HashMap::new();
        fn visit<'s>(n: &'s str, deps: &HashMap<&'s str, Vec<&'s str>>, state: &mut HashMap<&'s str, u8>) -> bool {
            match state.get(n) {
                Some(1) => return true,
                Some(_) => return false,
                None => {}
            }
            state.insert(n, 1);
            let cyclic = deps.get(n).is_some_and(|ds| ds.iter().any(|d| deps.contains_key(d) && visit(d, deps, state)));
            state.insert(n, 2);
            cyclic
        }
        for p in &self.sys.parameters {
            let mut fresh = HashMap::new();
            if !undefined.contains(p.name.as_str()) && visit(&p.name, &deps, &mut fresh) {
                state.insert(&p.name, 2);
                self.err("CYCLIC_PARAMETER", p.span, format!("parameter `{}` depends on itself", p.name));
            }
        }
    }

    fn instances(&mut self) {
        let mut seen = HashSet::new();
        let instances = self.instances.clone();
        for inst in &instances {
            if let Some(loc) = &inst.key.location {
                if !self.location_names.contains(loc.as_str()) {
                    self.err("UNDEFINED_LOCATION", inst.span, format!("undefined location `{loc}` in `{}`", inst.key));
                    self.taint_component(&inst.key.name);
                    continue;
                }
            }
            if self.sys.component(&inst.key.name).is_none() {
                self.err(
                    "UNDEFINED_SPECIES",
                    inst.span,
                    format!("species `{}` has no species component definition", inst.key.name),
                );
                continue;
            }
            if !seen.insert(inst.key.clone()) {
                self.err("DUPLICATE_DEFINITION", inst.span, format!("species instance `{}` appears twice", inst.key));
                self.taint_component(&inst.key.name);
            }
            if inst.initial < 0.0 || inst.initial.fract() != 0.0 || !inst.initial.is_finite() {
                self.err(
                    "INVALID_INITIAL_COUNT",
                    inst.span,
                    format!("initial amount of `{}` must be a non-negative integer count, found {}", inst.key, inst.initial),
                );
            }
        }
    }

    fn taint_component(&mut self, name: &str) {
        if let Some(c) = self.sys.component(name) {
            for t in &c.terms {
                self.tainted.insert(t.action.clone());
            }
        }
    }

    fn components(&mut self) {
        let mut missing_law_reported = HashSet::new();
        for comp in &self.sys.components {
            let mut seen: Vec<(&str, &Role, Option<&str>)> = Vec::new();
            for term in &comp.terms {
                let key = (term.action.as_str(), &term.role, term.location.as_deref());
                if seen.contains(&key) {
                    self.err(
                        "DUPLICATE_PREFIX",
                        term.span,
                        format!("`{}` repeats the prefix `{} {}`", comp.name, term.action, term.role.operator()),
                    );
                }
                seen.push(key);

                let mut locs: Vec<&str> = term.location.iter().map(String::as_str).collect();
                if let Role::TransportOut(dest) = &term.role {
                    locs.push(dest);
                }
                for loc in locs {
                    if !self.location_names.contains(loc) {
                        self.diags.push(Diagnostic::error(
                            "UNDEFINED_LOCATION",
                            term.span,
                            format!("undefined location `{loc}` in `{}@{loc}`", comp.name),
                        ));
                        self.tainted.insert(term.action.clone());
                    }
                }
                if let (Role::TransportOut(dest), Some(src)) = (&term.role, &term.location) {
                    let source = SpeciesKey::at(&comp.name, src);
                    let target = SpeciesKey::at(&comp.name, dest);
                    if self.location_names.contains(dest.as_str())
                        && self.instance_keys.contains(&source)
                        && !self.instance_keys.contains(&target)
                    {
                        self.diags.push(Diagnostic::error(
                            "UNDEFINED_SPECIES",
                            term.span,
                            format!("transport destination `{target}` is not instantiated in the model component"),
                        ));
                        self.tainted.insert(term.action.clone());
                    }
                }
                if self.sys.kinetic_law(&term.action).is_none() && missing_law_reported.insert(term.action.clone()) {
                    self.diags.push(Diagnostic::error(
                        "MISSING_KINETIC_LAW",
                        term.span,
                        format!("action `{}` has no kinetic law", term.action),
                    ));
                    self.tainted.insert(term.action.clone());
                }
            }
        }
    }

    /// Identifier and species references of an expression used in a law or observable.
    fn expression_refs(&mut self, expr: &Expr, span: Span, owner: &str, allow_observables: bool) -> bool {
        let mut ok = true;
        let unique_bare: HashMap<String, usize> = self.instances.iter().fold(HashMap::new(), |mut m, i| {
            *m.entry(i.key.name.clone()).or_default() += 1;
            m
        });
        for id in expr.identifiers() {
            let known = self.sys.parameter(id).is_some()
                || self.location_names.contains(id)
                || is_time_variable(id)
                || unique_bare.get(id) == Some(&1)
                || (allow_observables && self.sys.observable(id).is_some());
            if !known {
                ok = false;
                self.err("UNDEFINED_PARAMETER", span, format!("{owner} uses undefined identifier `{id}`"));
            }
        }
        for (name, loc) in expr.species_refs() {
            if !self.location_names.contains(loc) {
                ok = false;
                self.err("UNDEFINED_LOCATION", span, format!("undefined location `{loc}` in `{name}@{loc}` ({owner})"));
            } else if !self.instance_keys.contains(&SpeciesKey::at(name, loc)) {
                ok = false;
                self.err(
                    "UNDEFINED_SPECIES",
                    span,
                    format!("{owner} reads `{name}@{loc}`, which is not in the model component"),
                );
            }
        }
        ok
    }

    fn kinetic_laws(&mut self) {
        let used: HashSet<&str> =
            self.sys.components.iter().flat_map(|c| c.terms.iter().map(|t| t.action.as_str())).collect();
        let mut seen = HashSet::new();
        for law in &self.sys.kinetic_laws {
            if !seen.insert(law.action.as_str()) {
                self.err(
                    "DUPLICATE_DEFINITION",
                    law.span,
                    format!("action `{}` has more than one kinetic law", law.action),
                );
                self.tainted.insert(law.action.clone());
            }
            if !used.contains(law.action.as_str()) {
                self.err(
                    "UNUSED_KINETIC_LAW",
                    law.span,
                    format!("kinetic law `{}` names an action no species performs", law.action),
                );
            }
            let owner = format!("kinetic law `{}`", law.action);
            for e in law.body.expressions() {
                self.expression_refs(e, law.span, &owner, false);
            }
        }
    }

    fn observables(&mut self) {
        for obs in &self.sys.observables {
            let owner = format!("observable `{}`", obs.name);
            self.expression_refs(&obs.body, obs.span, &owner, true);
        }
        // Cycles through observable references.
        let deps: HashMap<&str, Vec<&str>> = self
            .sys
            .observables
            .iter()
            .map(|o| {
                let ids = o.body.identifiers().into_iter().filter(|id| self.sys.observable(id).is_some()).collect();
                (o.name.as_str(), ids)
            })
            .collect();
        for obs in &self.sys.observables {
            let mut stack = vec![obs.name.as_str()];
            let mut visited = HashSet::new();
            let mut cyclic = false;
            while let Some(n) = stack.pop() {
                for d in deps.get(n).into_iter().flatten() {
                    if *d == obs.name {
                        cyclic = true;
                    } else if visited.insert(*d) {
                        stack.push(d);
                    }
                }
            }
            if cyclic {
                self.err("CYCLIC_OBSERVABLE", obs.span, format!("observable `{}` depends on itself", obs.name));
            }
        }
    }

    fn reactions(&mut self) {
        let valid: Vec<Instance> = self
            .instances
            .iter()
            .filter(|i| {
                i.key.location.as_deref().is_none_or(|l| self.location_names.contains(l))
                    && self.sys.component(&i.key.name).is_some()
            })
            .cloned()
            .collect();
        let view = participants_by_action(self.sys, &valid);
        let tree = crate::location::build_location_tree(&self.sys.locations).ok();

        for law in &self.sys.kinetic_laws {
            if self.tainted.contains(&law.action) {
                continue;
            }
            let Some(parts) = view.get(law.action.as_str()) else { continue };
            if parts.is_empty() {
                self.diags.push(Diagnostic::warning(
                    "EMPTY_REACTION",
                    law.span,
                    format!("action `{}` has no participant instantiated in the model component", law.action),
                ));
                continue;
            }
            let count = |role: RoleClass| parts.iter().filter(|p| p.class == role).count();
            let (reactants, products) = (count(RoleClass::Reactant), count(RoleClass::Product));
            let (activators, others) = (count(RoleClass::Activator), count(RoleClass::Inhibitor) + count(RoleClass::Modifier));
            match &law.body {
                LawBody::MichaelisMenten { .. } => {
                    if reactants != 1 || products != 1 || activators != 1 || others != 0 {
                        self.err(
                            "MM_ROLE_MISMATCH",
                            law.span,
                            format!(
                                "fMM law of `{}` needs exactly one reactant, one product and one enzyme (activator); found {reactants} reactant(s), {products} product(s), {activators} activator(s), {others} other modifier(s)",
                                law.action
                            ),
                        );
                    }
                }
                LawBody::MassAction(_) if reactants == 0 => {
                    self.err("MA_NO_REACTANTS", law.span, format!("fMA law of `{}` has no reactants", law.action));
                }
                _ => {}
            }
            if let Some(tree) = &tree {
                let locs: BTreeSet<&str> = parts.iter().filter_map(|p| p.key.location.as_deref()).collect();
                let far: Vec<(&str, &str)> = locs
                    .iter()
                    .flat_map(|a| locs.iter().map(move |b| (*a, *b)))
                    .filter(|(a, b)| a < b && !tree.adjacent(a, b))
                    .collect();
                if let Some((a, b)) = far.first() {
                    self.diags.push(Diagnostic::warning(
                        "NON_ADJACENT_REACTION",
                        law.span,
                        format!("reaction `{}` involves species in non-adjacent locations `{a}` and `{b}`", law.action),
                    ));
                }
            }
        }
    }

    fn cooperation(&mut self) {
        let mut warnings = Vec::new();
        self.cooperation_node(&self.sys.model, &mut Vec::new(), &mut warnings);
        self.diags.extend(warnings);
    }

    /// Returns the action set of `comp`, emitting warnings for explicit
    /// cooperation sets that omit shared actions or name unused ones.
    fn cooperation_node(&self, comp: &Composition, stack: &mut Vec<String>, out: &mut Vec<Diagnostic>) -> BTreeSet<String> {
        match comp {
            Composition::Species { name, location, .. } => self
                .sys
                .component(name)
                .map(|c| {
                    c.terms
                        .iter()
                        .filter(|t| t.location.is_none() || t.location == *location)
                        .map(|t| t.action.clone())
                        .collect()
                })
                .unwrap_or_default(),
            Composition::Reference { name, .. } => {
                if stack.contains(name) {
                    return BTreeSet::new();
                }
                match self.sys.composition(name) {
                    Some(def) => {
                        stack.push(name.clone());
                        let acts = self.cooperation_node(&def.body, stack, out);
                        stack.pop();
                        acts
                    }
                    None => BTreeSet::new(),
                }
            }
            Composition::Cooperation { left, right, set, span } => {
                let l = self.cooperation_node(left, stack, out);
                let r = self.cooperation_node(right, stack, out);
                if let CooperationSet::Actions(actions) = set {
                    let listed: BTreeSet<&str> = actions.iter().map(String::as_str).collect();
                    for shared in l.intersection(&r) {
                        if !listed.contains(shared.as_str()) {
                            out.push(Diagnostic::warning(
                                "COOPERATION_OMISSION",
                                *span,
                                format!("action `{shared}` is shared by both operands but missing from the cooperation set"),
                            ));
                        }
                    }
                    for a in actions {
                        if !l.contains(a) && !r.contains(a) {
                            out.push(Diagnostic::warning(
                                "UNUSED_COOPERATION_ACTION",
                                *span,
                                format!("cooperation set names `{a}`, which neither operand performs"),
                            ));
                        }
                    }
                }
                l.union(&r).cloned().collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RoleClass {
    Reactant,
    Product,
    Activator,
    Inhibitor,
    Modifier,
}

#[derive(Debug, Clone)]
struct RawParticipant {
    key: SpeciesKey,
    class: RoleClass,
    stoichiometry: u32,
}

/// Per action (keyed by kinetic law), the participants contributed by each
/// species instance. Laws with no participant map to an empty list.
fn participants_by_action<'s>(
    sys: &'s BioPepaSystem,
    instances: &[Instance],
) -> BTreeMap<&'s str, Vec<RawParticipant>> {
    let mut out: BTreeMap<&str, Vec<RawParticipant>> =
        sys.kinetic_laws.iter().map(|l| (l.action.as_str(), Vec::new())).collect();
    for inst in instances {
        let Some(comp) = sys.component(&inst.key.name) else { continue };
        for term in &comp.terms {
            if term.location != inst.key.location {
                continue;
            }
            let Some(list) = out.get_mut(term.action.as_str()) else { continue };
            let mut push = |key: SpeciesKey, class| {
                list.push(RawParticipant { key, class, stoichiometry: term.stoichiometry })
            };
            match &term.role {
                Role::Reactant => push(inst.key.clone(), RoleClass::Reactant),
                Role::Product => push(inst.key.clone(), RoleClass::Product),
                Role::Activator => push(inst.key.clone(), RoleClass::Activator),
                Role::Inhibitor => push(inst.key.clone(), RoleClass::Inhibitor),
                Role::Modifier => push(inst.key.clone(), RoleClass::Modifier),
                Role::TransportOut(dest) => {
                    push(inst.key.clone(), RoleClass::Reactant);
                    push(SpeciesKey::at(&inst.key.name, dest), RoleClass::Product);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("cannot derive reaction network: {0}")]
pub struct DeriveError(pub String);

/// Flattens a checked system into its reaction network.
pub fn derive_reaction_network(system: &BioPepaSystem) -> Result<ReactionNetwork, DeriveError> {
    let (system, _) = expand_location_shorthand(system);
    let (instances, diags) = flatten_model(&system);
    if let Some(d) = diags.first() {
        return Err(DeriveError(d.message.clone()));
    }
    let species: Vec<SpeciesKey> = instances.iter().map(|i| i.key.clone()).collect();
    let index: HashMap<&SpeciesKey, usize> = species.iter().enumerate().map(|(i, k)| (k, i)).collect();
    if index.len() != species.len() {
        return Err(DeriveError("duplicate species instance in the model component".into()));
    }
    let initial_state = instances
        .iter()
        .map(|i| {
            if i.initial >= 0.0 && i.initial.fract() == 0.0 && i.initial <= i64::MAX as f64 {
                Ok(i.initial as i64)
            } else {
                Err(DeriveError(format!("invalid initial amount {} for `{}`", i.initial, i.key)))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;

    let view = participants_by_action(&system, &instances);
    let mut reactions = Vec::new();
    let mut seen = HashSet::new();
    for law in &system.kinetic_laws {
        if !seen.insert(law.action.as_str()) {
            return Err(DeriveError(format!("action `{}` has more than one kinetic law", law.action)));
        }
        let parts = &view[law.action.as_str()];
        if parts.is_empty() {
            continue;
        }
        let mut r = Reaction::empty(law);
        for p in parts {
            let idx = *index
                .get(&p.key)
                .ok_or_else(|| DeriveError(format!("`{}` in reaction `{}` is not instantiated", p.key, law.action)))?;
            let part = Participant { species: idx, stoichiometry: p.stoichiometry };
            match p.class {
                RoleClass::Reactant => r.reactants.push(part),
                RoleClass::Product => r.products.push(part),
                RoleClass::Activator => r.activators.push(idx),
                RoleClass::Inhibitor => r.inhibitors.push(idx),
                RoleClass::Modifier => r.modifiers.push(idx),
            }
        }
        reactions.push(r);
    }
    let stoichiometry = reactions
        .iter()
        .map(|r| {
            let mut row = vec![0i64; species.len()];
            for p in &r.reactants {
                row[p.species] -= i64::from(p.stoichiometry);
            }
            for p in &r.products {
                row[p.species] += i64::from(p.stoichiometry);
            }
            row
        })
        .collect();
    Ok(ReactionNetwork { species, reactions, stoichiometry, initial_state })
}

/// Matrices with more entries than this are not searched for conservation laws.
pub const MOIETY_SEARCH_LIMIT: usize = 10_000;

/// Non-negative integer conservation vectors `m` with `S·m = 0` for the
/// stoichiometry matrix `S`.
///
/// The basis comes from the reduced row echelon form of `S` computed in exact
/// rational arithmetic, one vector per free column, scaled to coprime
/// integers. Basis vectors with mixed signs are dropped. Returns `None` when
/// the matrix exceeds [`MOIETY_SEARCH_LIMIT`] entries.
pub fn try_conserved_moieties(network: &ReactionNetwork) -> Option<Vec<Vec<i64>>> {
    let rows = network.stoichiometry.len();
    let cols = network.species.len();
    if rows * cols > MOIETY_SEARCH_LIMIT {
        return None;
    }
    let mut m: Vec<Vec<BigRational>> = network
        .stoichiometry
        .iter()
        .map(|row| row.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in &mut m[r] {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..cols {
                    let delta = &factor * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }

    let pivot_set: HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivot_set.contains(c)) {
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[row][free].clone();
        }
        let lcm = v.iter().fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
        let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
        let ints: Vec<BigInt> = ints.into_iter().map(|x| x / &gcd).collect();
        let nonneg = ints.iter().all(|x| !x.is_negative());
        let nonpos = ints.iter().all(|x| !x.is_positive());
        if !(nonneg || nonpos) {
            continue;
        }
        let sign = if nonneg { 1 } else { -1 };
        let Some(vec) = ints.iter().map(|x| x.to_i64().map(|v| v * sign)).collect::<Option<Vec<i64>>>() else {
            continue;
        };
        basis.push(vec);
    }
    Some(basis)
}

pub fn conserved_moieties(network: &ReactionNetwork) -> Vec<Vec<i64>> {
    try_conserved_moieties(network).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_system;

    fn sys(src: &str) -> BioPepaSystem {
        parse_system(src).unwrap_or_else(|d| panic!("{d:#?}"))
    }

    fn codes(src: &str) -> Vec<&'static str> {
        check_system(&sys(src)).iter().filter(|d| d.is_error()).map(|d| d.code).collect()
    }

    fn warnings(src: &str) -> Vec<&'static str> {
        check_system(&sys(src)).iter().filter(|d| !d.is_error()).map(|d| d.code).collect()
    }

    const LOCS: &str = "location cyto in cyto_mem : size = 1, kind = compartment;\n\
        location cyto_mem in extra : size = 0.2, kind = membrane;\n\
        location extra : size = 0.111, kind = compartment;\n";

    fn network(src: &str) -> ReactionNetwork {
        let s = sys(src);
        let errors: Vec<_> = check_system(&s).into_iter().filter(Diagnostic::is_error).collect();
        assert!(errors.is_empty(), "{errors:#?}");
        derive_reaction_network(&s).unwrap()
    }

    #[test]
    fn shorthand_replicates_over_locations() {
        let s = sys("S = (a1, 1) << S@L1 + (a2, 2) >> S;\nS@L1[1] <*> S@L2[2]");
        let (e, d) = expand_location_shorthand(&s);
        assert!(d.is_empty());
        let terms: Vec<_> = e.components[0].terms.iter().map(|t| (t.action.as_str(), t.location.as_deref())).collect();
        assert_eq!(terms, vec![("a1", Some("L1")), ("a2", Some("L1")), ("a2", Some("L2"))]);
    }

    #[test]
    fn shorthand_single_location_and_fixpoint() {
        let s = sys("PDE4_P = v20 >> PDE4_P@cyto + v27 << PDE4_P@cyto + v02 (+) PDE4_P;\nPDE4_P@cyto[0]");
        let (e, _) = expand_location_shorthand(&s);
        let t = &e.components[0].terms[2];
        assert_eq!((t.action.as_str(), t.stoichiometry, &t.role, t.location.as_deref()), ("v02", 1, &Role::Activator, Some("cyto")));
        let (again, d) = expand_location_shorthand(&e);
        assert!(d.is_empty());
        assert_eq!(again, e);
    }

    #[test]
    fn shorthand_unresolved() {
        let s = sys("S = a << S;\nT = a >> T@L;\nT@L[1]");
        let (_, d) = expand_location_shorthand(&s);
        assert_eq!(d.iter().map(|d| d.code).collect::<Vec<_>>(), vec!["UNRESOLVED_LOCATION"]);
    }

    #[test]
    fn mm_role_mismatch() {
        let src = format!(
            "{LOCS}vm = 1; km = 2;\nkineticLawOf r : fMM(vm, km);\nA = r << A@cyto;\nB = r << B@cyto;\nC = r >> C@cyto;\nE = r (+) E@cyto;\nA@cyto[1] <*> B@cyto[1] <*> C@cyto[0] <*> E@cyto[1]"
        );
        assert_eq!(codes(&src), vec!["MM_ROLE_MISMATCH"]);
    }

    #[test]
    fn fma_without_reactants() {
        let src = format!("{LOCS}k = 1;\nkineticLawOf r : fMA(k);\nA = r >> A@cyto;\nA@cyto[0]");
        assert_eq!(codes(&src), vec!["MA_NO_REACTANTS"]);
    }

    #[test]
    fn undefined_references_are_reported_once() {
        let base = format!("{LOCS}k = 1;\nkineticLawOf r : fMA(k);\nA = r << A@cyto;\nB = r >> B@cyto;\nA@cyto[1] <*> B@cyto[0]");
        assert!(codes(&base).is_empty());

        let bad_param = base.replace("fMA(k)", "fMA(k * kk)");
        let d: Vec<_> = check_system(&sys(&bad_param)).into_iter().filter(Diagnostic::is_error).collect();
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains("`kk`"));

        let bad_loc = base.replace("B = r >> B@cyto", "B = r >> B@cytoo");
        let d: Vec<_> = check_system(&sys(&bad_loc)).into_iter().filter(Diagnostic::is_error).collect();
        assert_eq!(d.len(), 1, "{d:#?}");
        assert!(d[0].message.contains("cytoo"));

        let bad_leaf = base.replace("B@cyto[0]", "B@cytoo[0]");
        let d: Vec<_> = check_system(&sys(&bad_leaf)).into_iter().filter(Diagnostic::is_error).collect();
        assert_eq!(d.len(), 1, "{d:#?}");

        let no_law = base.replace("B = r >> B@cyto", "B = r >> B@cyto + q >> B@cyto");
        assert_eq!(codes(&no_law), vec!["MISSING_KINETIC_LAW"]);

        let unused = format!("{base}").replace("kineticLawOf r", "kineticLawOf zz : fMA(k);\nkineticLawOf r");
        assert_eq!(codes(&unused), vec!["UNUSED_KINETIC_LAW"]);

        let no_comp = base.replace("<*> B@cyto[0]", "<*> B@cyto[0] <*> Z@cyto[3]");
        assert_eq!(codes(&no_comp), vec!["UNDEFINED_SPECIES"]);
    }

    #[test]
    fn duplicates_cycles_and_counts() {
        let base = format!("{LOCS}k = 1;\nkineticLawOf r : fMA(k);\nA = r << A@cyto;\nA@cyto[1]");
        assert_eq!(codes(&base.replace("k = 1;", "k = 1; k = 2;")), vec!["DUPLICATE_DEFINITION"]);
        assert_eq!(codes(&base.replace("k = 1;", "k = j; j = k;")), vec!["CYCLIC_PARAMETER", "CYCLIC_PARAMETER"]);
        assert_eq!(codes(&base.replace("A@cyto[1]", "A@cyto[1.5]")), vec!["INVALID_INITIAL_COUNT"]);
        assert_eq!(codes(&base.replace("A@cyto[1]", "A@cyto[-1]")), vec!["INVALID_INITIAL_COUNT"]);
        assert_eq!(codes(&base.replace("A = r << A@cyto;", "A = r << A@cyto + r << A@cyto;")), vec!["DUPLICATE_PREFIX"]);
        assert_eq!(codes(&base.replace("A@cyto[1]", "P ::= Q;\nQ ::= P;\nP")), vec!["CYCLIC_COMPOSITION"]);
        assert_eq!(codes(&base.replace("A@cyto[1]", "Nope")), vec!["UNDEFINED_COMPOSITION"]);
    }

    #[test]
    fn non_adjacent_warning() {
        let src = format!("{LOCS}k = 1;\nkineticLawOf r : fMA(k);\nA = r << A@extra;\nB = r >> B@cyto;\nA@extra[1] <*> B@cyto[0]");
        assert!(codes(&src).is_empty());
        assert_eq!(warnings(&src), vec!["NON_ADJACENT_REACTION"]);
        let near = src.replace("B@cyto", "B@cyto_mem");
        assert!(warnings(&near).is_empty());
    }

    #[test]
    fn cooperation_warnings() {
        let src = "k = 1;\nkineticLawOf r : fMA(k);\nkineticLawOf s : fMA(k);\nA = r << A + s << A;\nB = r >> B + s >> B;\nA[1] <r, zz> B[0]";
        let w = warnings(src);
        assert_eq!(w, vec!["COOPERATION_OMISSION", "UNUSED_COOPERATION_ACTION"]);
        assert!(warnings(&src.replace("<r, zz>", "<*>")).is_empty());
    }

    #[test]
    fn derives_single_reaction() {
        let net = network(&format!("{LOCS}k = 1;\nkineticLawOf alpha : fMA(k);\nA = alpha << A@cyto;\nA@cyto[5]"));
        assert_eq!(net.reactions.len(), 1);
        assert_eq!(net.stoichiometry, vec![vec![-1]]);
        assert_eq!(net.initial_state, vec![5]);
    }

    #[test]
    fn derives_transport_and_stoichiometry() {
        let net = network(&format!(
            "{LOCS}k = 1;\nkineticLawOf t : fMA(k);\nkineticLawOf d : fMA(k);\nA = t A@cyto -> A@cyto_mem + (d, 2) << A@cyto_mem;\nA@cyto[4] <*> A@cyto_mem[0]"
        ));
        assert_eq!(net.species, vec![SpeciesKey::at("A", "cyto"), SpeciesKey::at("A", "cyto_mem")]);
        assert_eq!(net.stoichiometry, vec![vec![-1, 1], vec![0, -2]]);
    }

    #[test]
    fn species_order_follows_model_component() {
        let a = "k = 1;\nkineticLawOf r : fMA(k);\nA = r << A;\nB = r >> B;\nB[0] <*> A[3]";
        let b = "k = 1;\nkineticLawOf r : fMA(k);\nB = r >> B;\nA = r << A;\nB[0] <*> A[3]";
        let (na, nb) = (network(a), network(b));
        assert_eq!(na, nb);
        assert_eq!(na.species[0].name, "B");
        assert_eq!(na.initial_state, vec![0, 3]);
    }

    #[test]
    fn moieties_small_cases() {
        let pair = network("k = 1;\nkineticLawOf f : fMA(k);\nkineticLawOf b : fMA(k);\nA = f << A + b >> A;\nB = f >> B + b << B;\nA[3] <*> B[0]");
        assert_eq!(conserved_moieties(&pair), vec![vec![1, 1]]);

        let synth = network("k = 1;\nkineticLawOf s : k;\nA = s >> A;\nA[0]");
        assert!(conserved_moieties(&synth).is_empty());

        // A + B -> C: the free columns give B - A (mixed sign, dropped) and A + C.
        let bind = network("k = 1;\nkineticLawOf r : fMA(k);\nA = r << A;\nB = r << B;\nC = r >> C;\nA[1] <*> B[1] <*> C[0]");
        assert_eq!(conserved_moieties(&bind), vec![vec![1, 0, 1]]);
    }
}
