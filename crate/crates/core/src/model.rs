//! Domain types of the Bio-PEPA-with-locations language.
//!
//! A [`BioPepaSystem`] is the parsed six-tuple: locations, auxiliary species
//! information, parameters, functional rates (kinetic laws), species
//! components and the model component, plus the labelled compositions and
//! observables the concrete syntax adds. Values are immutable once built.
//! `Display` renders the concrete syntax accepted by [`crate::parse_system`].

use std::collections::BTreeMap;
use std::fmt;

use crate::expr::Expr;
use crate::span::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocationKind {
    Compartment,
    Membrane,
}

impl LocationKind {
    pub fn keyword(self) -> &'static str {
        match self {
            LocationKind::Compartment => "compartment",
            LocationKind::Membrane => "membrane",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Location {
    pub name: String,
    pub size: Expr,
    /// Carried verbatim, never interpreted.
    pub unit: Option<String>,
    pub kind: LocationKind,
    pub parent: Option<String>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Parameter {
    pub name: String,
    pub value: Expr,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LawBody {
    /// `fMA(r)`: `r` times the product of reactant counts raised to their stoichiometry.
    MassAction(Expr),
    /// `fMM(vM, KM)`: `vM * E * S / (KM + S)`.
    MichaelisMenten { vmax: Expr, km: Expr },
    Custom(Expr),
}

impl LawBody {
    pub fn expressions(&self) -> Vec<&Expr> {
        match self {
            LawBody::MassAction(r) => vec![r],
            LawBody::MichaelisMenten { vmax, km } => vec![vmax, km],
            LawBody::Custom(e) => vec![e],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KineticLaw {
    pub action: String,
    pub body: LawBody,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Role {
    Reactant,
    Product,
    Activator,
    Inhibitor,
    Modifier,
    /// Uni-directional transport from the term's location to the named one.
    TransportOut(String),
}

impl Role {
    pub fn operator(&self) -> &'static str {
        match self {
            Role::Reactant => "<<",
            Role::Product => ">>",
            Role::Activator => "(+)",
            Role::Inhibitor => "(-)",
            Role::Modifier => "(.)",
            Role::TransportOut(_) => "->",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrefixTerm {
    pub action: String,
    pub stoichiometry: u32,
    pub role: Role,
    pub location: Option<String>,
    pub span: Span,
}

impl PrefixTerm {
    pub fn new(action: &str, stoichiometry: u32, role: Role, location: Option<&str>) -> Self {
        PrefixTerm {
            action: action.to_string(),
            stoichiometry,
            role,
            location: location.map(str::to_string),
            span: Span::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesComponent {
    pub name: String,
    /// The alternatives of the `+` choice.
    pub terms: Vec<PrefixTerm>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CooperationSet {
    /// `<*>`: synchronise on every shared action.
    All,
    Actions(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Composition {
    /// `S@L[x]`: species instance with its initial molecular count.
    Species { name: String, location: Option<String>, initial: f64, span: Span },
    /// Reference to a labelled composition.
    Reference { name: String, span: Span },
    Cooperation { left: Box<Composition>, right: Box<Composition>, set: CooperationSet, span: Span },
}

impl Composition {
    pub fn span(&self) -> Span {
        match self {
            Composition::Species { span, .. }
            | Composition::Reference { span, .. }
            | Composition::Cooperation { span, .. } => *span,
        }
    }
}

/// `Name ::= composition;`
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledComposition {
    pub name: String,
    pub body: Composition,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    pub name: String,
    pub body: Expr,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BioPepaSystem {
    pub locations: Vec<Location>,
    /// Auxiliary species information, kept as opaque annotations.
    pub species_info: BTreeMap<String, String>,
    /// In definition order; later parameters may refer to earlier ones.
    pub parameters: Vec<Parameter>,
    pub kinetic_laws: Vec<KineticLaw>,
    pub components: Vec<SpeciesComponent>,
    pub compositions: Vec<LabeledComposition>,
    pub model: Composition,
    pub observables: Vec<Observable>,
}

impl BioPepaSystem {
    pub fn location(&self, name: &str) -> Option<&Location> {
        self.locations.iter().find(|l| l.name == name)
    }

    pub fn parameter(&self, name: &str) -> Option<&Parameter> {
        self.parameters.iter().find(|p| p.name == name)
    }

    pub fn kinetic_law(&self, action: &str) -> Option<&KineticLaw> {
        self.kinetic_laws.iter().find(|k| k.action == action)
    }

    pub fn component(&self, name: &str) -> Option<&SpeciesComponent> {
        self.components.iter().find(|c| c.name == name)
    }

    pub fn composition(&self, name: &str) -> Option<&LabeledComposition> {
        self.compositions.iter().find(|c| c.name == name)
    }

    pub fn observable(&self, name: &str) -> Option<&Observable> {
        self.observables.iter().find(|o| o.name == name)
    }
}

fn write_species_ref(f: &mut fmt::Formatter<'_>, name: &str, location: Option<&str>) -> fmt::Result {
    match location {
        Some(loc) => write!(f, "{name}@{loc}"),
        None => f.write_str(name),
    }
}

impl fmt::Display for LawBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawBody::MassAction(r) => write!(f, "fMA({r})"),
            LawBody::MichaelisMenten { vmax, km } => write!(f, "fMM({vmax}, {km})"),
            LawBody::Custom(e) => write!(f, "{e}"),
        }
    }
}

struct TermDisplay<'a>(&'a str, &'a PrefixTerm);

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let TermDisplay(species, term) = *self;
        if term.stoichiometry == 1 {
            write!(f, "{}", term.action)?;
        } else {
            write!(f, "({}, {})", term.action, term.stoichiometry)?;
        }
        match &term.role {
            Role::TransportOut(dest) => {
                f.write_str(" ")?;
                write_species_ref(f, species, term.location.as_deref())?;
                write!(f, " -> {species}@{dest}")
            }
            role => {
                write!(f, " {} ", role.operator())?;
                write_species_ref(f, species, term.location.as_deref())
            }
        }
    }
}

impl fmt::Display for SpeciesComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = ", self.name)?;
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}", TermDisplay(&self.name, term))?;
        }
        f.write_str(";")
    }
}

impl fmt::Display for CooperationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CooperationSet::All => f.write_str("<*>"),
            CooperationSet::Actions(actions) => write!(f, "<{}>", actions.join(", ")),
        }
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Composition::Species { name, location, initial, .. } => {
                write_species_ref(f, name, location.as_deref())?;
                write!(f, "[{initial}]")
            }
            Composition::Reference { name, .. } => f.write_str(name),
            Composition::Cooperation { left, right, set, .. } => {
                write!(f, "{left} {set} ")?;
                if matches!(**right, Composition::Cooperation { .. }) {
                    write!(f, "({right})")
                } else {
                    write!(f, "{right}")
                }
            }
        }
    }
}

impl fmt::Display for BioPepaSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for loc in &self.locations {
            write!(f, "location {}", loc.name)?;
            if let Some(parent) = &loc.parent {
                write!(f, " in {parent}")?;
            }
            write!(f, " : size = {}", loc.size)?;
            if let Some(unit) = &loc.unit {
                write!(f, ", unit = {unit}")?;
            }
            writeln!(f, ", kind = {};", loc.kind.keyword())?;
        }
        for p in &self.parameters {
            writeln!(f, "{} = {};", p.name, p.value)?;
        }
        for law in &self.kinetic_laws {
            writeln!(f, "kineticLawOf {} : {};", law.action, law.body)?;
        }
        for c in &self.components {
            writeln!(f, "{c}")?;
        }
        for o in &self.observables {
            writeln!(f, "{} = {};", o.name, o.body)?;
        }
        for c in &self.compositions {
            writeln!(f, "{} ::= {};", c.name, c.body)?;
        }
        writeln!(f, "{}", self.model)
    }
}
