//! Recursive-descent parser for the concrete model syntax.
//!
//! A document is a sequence of `;`-terminated definitions in any order,
//! followed by the model component:
//!
//! ```text
//! location cyto in cyto_mem : size = 1, kind = compartment;
//! k = 0.5;
//! kineticLawOf r : fMA(k);
//! A = r << A@cyto;
//! B = r >> B@cyto;
//! Pathway ::= A@cyto[10] <*> B@cyto[0];
//! Pathway
//! ```
//!
//! Errors are recovered at statement granularity: every statement is parsed
//! independently, so one malformed definition yields one diagnostic.

mod lexer;

use std::collections::{BTreeMap, HashSet};

use crate::diagnostic::Diagnostic;
use crate::expr::{BinOp, Expr};
use crate::model::{
    BioPepaSystem, Composition, CooperationSet, KineticLaw, LabeledComposition, LawBody, Location,
    LocationKind, Observable, Parameter, PrefixTerm, Role, SpeciesComponent,
};
use crate::span::Span;

use lexer::{tokenize, Tok, Token};

type PResult<T> = Result<T, Diagnostic>;

/// Parses a whole model document.
pub fn parse_system(text: &str) -> Result<BioPepaSystem, Vec<Diagnostic>> {
    let (tokens, mut diags) = tokenize(text);
    let eof = eof_span(text);

    let mut statements: Vec<(&[Token], bool)> = Vec::new();
    let mut start = 0;
    for (i, t) in tokens.iter().enumerate() {
        if t.tok == Tok::Semi {
            statements.push((&tokens[start..i], true));
            start = i + 1;
        }
    }
    if start < tokens.len() {
        statements.push((&tokens[start..], false));
    }
    statements.retain(|(toks, _)| !toks.is_empty());

    let mut builder = Builder::default();
    let count = statements.len();
    for (idx, (toks, terminated)) in statements.into_iter().enumerate() {
        let last = idx + 1 == count;
        if let Err(d) = builder.statement(toks, terminated, last) {
            diags.push(d);
        }
    }

    if builder.model.is_none() && !diags.iter().any(Diagnostic::is_error) {
        diags.push(Diagnostic::error(
            "MISSING_MODEL_COMPONENT",
            eof,
            "document has no model component; the final statement must be the system composition",
        ));
    }
    if diags.iter().any(Diagnostic::is_error) {
        return Err(diags);
    }
    Ok(builder.finish())
}

/// Parses a standalone expression fragment.
pub fn parse_expression(text: &str) -> Result<Expr, Vec<Diagnostic>> {
    let (tokens, diags) = tokenize(text);
    if !diags.is_empty() {
        return Err(diags);
    }
    let mut p = Parser::new(&tokens, eof_span(text));
    if p.at_end() {
        return Err(vec![Diagnostic::error("SYNTAX_ERROR", p.end, "empty expression")]);
    }
    let result = p.expr().and_then(|e| p.expect_end("end of expression").map(|_| e));
    result.map_err(|d| vec![d])
}

fn eof_span(text: &str) -> Span {
    let line = 1 + text.matches('\n').count() as u32;
    let col = 1 + text.rsplit('\n').next().map_or(0, |l| l.chars().count()) as u32;
    Span::new(text.len(), text.len(), line, col)
}

/// Classified `name = expr;` definition, resolved to parameter or observable
/// once all definitions are known.
struct ValueDef {
    name: String,
    value: Expr,
    span: Span,
}

#[derive(Default)]
struct Builder {
    locations: Vec<Location>,
    values: Vec<ValueDef>,
    laws: Vec<KineticLaw>,
    components: Vec<SpeciesComponent>,
    compositions: Vec<LabeledComposition>,
    model: Option<Composition>,
}

impl Builder {
    fn statement(&mut self, toks: &[Token], terminated: bool, last: bool) -> PResult<()> {
        let span = toks[0].span.to(toks[toks.len() - 1].span);
        let end = Span::new(span.end, span.end, span.line, span.column);
        let mut p = Parser::new(toks, end);

        let head = match &toks[0].tok {
            Tok::Ident(s) => Some(s.as_str()),
            _ => None,
        };
        let second = toks.get(1).map(|t| &t.tok);
        let is_definition = matches!(head, Some("location" | "kineticLawOf"))
            || matches!(second, Some(Tok::Assign | Tok::Define));

        if is_definition && !terminated {
            return Err(Diagnostic::error(
                "UNTERMINATED_STATEMENT",
                span,
                "definition is not terminated by `;`",
            ));
        }

        match (head, second) {
            (Some("location"), _) => {
                let loc = p.location(span)?;
                self.locations.push(loc);
            }
            (Some("kineticLawOf"), _) => {
                let law = p.kinetic_law(span)?;
                self.laws.push(law);
            }
            (Some(name), Some(Tok::Define)) => {
                p.pos = 2;
                let body = p.composition()?;
                p.expect_end("`;`")?;
                self.compositions.push(LabeledComposition { name: name.to_string(), body, span });
            }
            (Some(name), Some(Tok::Assign)) => {
                p.pos = 2;
                if toks.iter().any(|t| t.tok.is_role_operator()) {
                    let component = p.species_component(name, span)?;
                    self.components.push(component);
                } else {
                    if p.at_end() {
                        return Err(p.error_here("expected an expression after `=`"));
                    }
                    let value = p.expr()?;
                    p.expect_end("`;`")?;
                    self.values.push(ValueDef { name: name.to_string(), value, span });
                }
            }
            (Some(word), Some(Tok::Ident(_))) => {
                return Err(Diagnostic::error(
                    "UNKNOWN_KEYWORD",
                    toks[0].span,
                    format!("unknown keyword `{word}`"),
                ));
            }
            _ => {
                if !last {
                    return Err(Diagnostic::error(
                        "MISPLACED_MODEL_COMPONENT",
                        span,
                        "the model component must be the final statement",
                    ));
                }
                let model = p.composition()?;
                p.expect_end("end of model component")?;
                self.model = Some(model);
            }
        }
        Ok(())
    }

    fn finish(self) -> BioPepaSystem {
        // A definition is an observable if it reads a species amount directly
        // or through another observable.
        let mut observable: HashSet<String> = self
            .values
            .iter()
            .filter(|v| v.value.has_species_ref())
            .map(|v| v.name.clone())
            .collect();
        loop {
            let before = observable.len();
            for v in &self.values {
                if !observable.contains(&v.name)
                    && v.value.identifiers().iter().any(|id| observable.contains(*id))
                {
                    observable.insert(v.name.clone());
                }
            }
            if observable.len() == before {
                break;
            }
        }
        let mut parameters = Vec::new();
        let mut observables = Vec::new();
        for v in self.values {
            if observable.contains(&v.name) {
                observables.push(Observable { name: v.name, body: v.value, span: v.span });
            } else {
                parameters.push(Parameter { name: v.name, value: v.value, span: v.span });
            }
        }
        BioPepaSystem {
            locations: self.locations,
            species_info: BTreeMap::new(),
            parameters,
            kinetic_laws: self.laws,
            components: self.components,
            compositions: self.compositions,
            model: self.model.expect("checked by caller"),
            observables,
        }
    }
}

struct Parser<'t> {
    toks: &'t [Token],
    pos: usize,
    end: Span,
}

impl<'t> Parser<'t> {
    fn new(toks: &'t [Token], end: Span) -> Self {
        Parser { toks, pos: 0, end }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek(&self) -> Option<&'t Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, offset: usize) -> Option<&'t Tok> {
        self.toks.get(self.pos + offset).map(|t| &t.tok)
    }

    fn span_here(&self) -> Span {
        self.toks.get(self.pos).map_or(self.end, |t| t.span)
    }

    fn prev_span(&self) -> Span {
        self.pos.checked_sub(1).and_then(|i| self.toks.get(i)).map_or(self.end, |t| t.span)
    }

    fn error_here(&self, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::error("SYNTAX_ERROR", self.span_here(), msg)
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        match self.peek() {
            Some(t) => self.error_here(format!("expected {expected}, found {}", t.describe())),
            None => self.error_here(format!("expected {expected}, found end of statement")),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> PResult<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn expect_end(&self, what: &str) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    // location NAME [in PARENT] : key = value {, key = value}
    fn location(&mut self, span: Span) -> PResult<Location> {
        self.pos = 1;
        let name = self.ident("location name")?;
        let parent = if self.keyword("in") { Some(self.ident("enclosing location name")?) } else { None };
        self.expect(&Tok::Colon, "`:`")?;
        let (mut size, mut kind, mut unit) = (None, None, None);
        loop {
            let key_span = self.span_here();
            let key = self.ident("`size`, `kind` or `unit`")?;
            self.expect(&Tok::Assign, "`=`")?;
            match key.as_str() {
                "size" => size = Some(self.expr()?),
                "kind" => {
                    let kind_span = self.span_here();
                    kind = Some(match self.ident("`compartment` or `membrane`")?.as_str() {
                        "compartment" => LocationKind::Compartment,
                        "membrane" => LocationKind::Membrane,
                        other => {
                            return Err(Diagnostic::error(
                                "SYNTAX_ERROR",
                                kind_span,
                                format!("unknown location kind `{other}`; expected `compartment` or `membrane`"),
                            ))
                        }
                    });
                }
                "unit" => unit = Some(self.ident("unit name")?),
                other => {
                    return Err(Diagnostic::error(
                        "UNKNOWN_KEYWORD",
                        key_span,
                        format!("unknown location property `{other}`"),
                    ))
                }
            }
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect_end("`,` or `;`")?;
        let size = size.ok_or_else(|| {
            Diagnostic::error("SYNTAX_ERROR", span, format!("location `{name}` has no size"))
        })?;
        let kind = kind.ok_or_else(|| {
            Diagnostic::error("SYNTAX_ERROR", span, format!("location `{name}` has no kind"))
        })?;
        Ok(Location { name, size, unit, kind, parent, span })
    }

    fn kinetic_law(&mut self, span: Span) -> PResult<KineticLaw> {
        self.pos = 1;
        let action = self.ident("action name")?;
        self.expect(&Tok::Colon, "`:`")?;
        let predefined = matches!(self.peek(), Some(Tok::Ident(s)) if s == "fMA" || s == "fMM")
            && self.peek_at(1) == Some(&Tok::LParen);
        let body = if predefined {
            let which = self.ident("law")?;
            self.pos += 1;
            let first = self.expr()?;
            let body = if which == "fMA" {
                LawBody::MassAction(first)
            } else {
                self.expect(&Tok::Comma, "`,` between the fMM constants")?;
                let km = self.expr()?;
                LawBody::MichaelisMenten { vmax: first, km }
            };
            self.expect(&Tok::RParen, "`)`")?;
            body
        } else {
            if self.at_end() {
                return Err(self.error_here("expected a kinetic law after `:`"));
            }
            LawBody::Custom(self.expr()?)
        };
        self.expect_end("`;`")?;
        Ok(KineticLaw { action, body, span })
    }

    fn species_component(&mut self, name: &str, span: Span) -> PResult<SpeciesComponent> {
        let mut terms = vec![self.prefix_term(name)?];
        while self.eat(&Tok::Plus) {
            terms.push(self.prefix_term(name)?);
        }
        self.expect_end("`+` or `;`")?;
        Ok(SpeciesComponent { name: name.to_string(), terms, span })
    }

    fn prefix_term(&mut self, component: &str) -> PResult<PrefixTerm> {
        let start = self.span_here();
        let (action, stoichiometry) = if self.eat(&Tok::LParen) {
            let action = self.ident("action name")?;
            self.expect(&Tok::Comma, "`,`")?;
            let k_span = self.span_here();
            let k = match self.peek() {
                Some(Tok::Number(v)) => *v,
                _ => return Err(self.unexpected("stoichiometry coefficient")),
            };
            self.pos += 1;
            if k < 1.0 || k.fract() != 0.0 || k > u32::MAX as f64 {
                return Err(Diagnostic::error(
                    "SYNTAX_ERROR",
                    k_span,
                    format!("stoichiometry must be a positive integer, found {k}"),
                ));
            }
            self.expect(&Tok::RParen, "`)`")?;
            (action, k as u32)
        } else {
            (self.ident("action name or `(`")?, 1)
        };

        let op_span = self.span_here();
        let role = match self.peek() {
            Some(Tok::Reactant) => Some(Role::Reactant),
            Some(Tok::Product) => Some(Role::Product),
            Some(Tok::Activator) => Some(Role::Activator),
            Some(Tok::Inhibitor) => Some(Role::Inhibitor),
            Some(Tok::Modifier) => Some(Role::Modifier),
            Some(Tok::Ident(_)) => None,
            _ => return Err(self.unexpected("a role operator (`<<`, `>>`, `(+)`, `(-)`, `(.)`)")),
        };

        let (role, location) = match role {
            Some(role) => {
                self.pos += 1;
                let (_, loc) = self.species_ref(component)?;
                (role, loc)
            }
            None => {
                // Transport: `a S@L1 -> S@L2`.
                let (_, from) = self.species_ref(component)?;
                let arrow_span = self.span_here();
                if self.eat(&Tok::BiTransport) {
                    return Err(Diagnostic::error(
                        "BIDIRECTIONAL_TRANSPORT",
                        arrow_span,
                        format!(
                            "bi-directional transport `<->` is not supported; write separate forward and backward actions for `{action}`"
                        ),
                    ));
                }
                self.expect(&Tok::Transport, "`->`")?;
                let dest_span = self.span_here();
                let (_, to) = self.species_ref(component)?;
                let to = to.ok_or_else(|| {
                    Diagnostic::error("SYNTAX_ERROR", dest_span, "transport destination needs `@location`")
                })?;
                if from.is_none() {
                    return Err(Diagnostic::error(
                        "SYNTAX_ERROR",
                        op_span,
                        "transport source needs `@location`",
                    ));
                }
                (Role::TransportOut(to), from)
            }
        };
        if matches!(self.peek(), Some(Tok::BiTransport | Tok::Transport)) {
            return Err(Diagnostic::error(
                if self.peek() == Some(&Tok::BiTransport) { "BIDIRECTIONAL_TRANSPORT" } else { "SYNTAX_ERROR" },
                self.span_here(),
                "transport is written `action S@from -> S@to`",
            ));
        }
        Ok(PrefixTerm { action, stoichiometry, role, location, span: start.to(self.prev_span()) })
    }

    fn species_ref(&mut self, component: &str) -> PResult<(String, Option<String>)> {
        let span = self.span_here();
        let name = self.ident("species name")?;
        if name != component {
            return Err(Diagnostic::error(
                "SYNTAX_ERROR",
                span,
                format!("prefix in the definition of `{component}` must continue as `{component}`, found `{name}`"),
            ));
        }
        let loc = if self.eat(&Tok::At) { Some(self.ident("location name after `@`")?) } else { None };
        Ok((name, loc))
    }

    // comp := primary { coop primary }
    fn composition(&mut self) -> PResult<Composition> {
        let mut left = self.composition_primary()?;
        loop {
            let coop_span = self.span_here();
            let set = match self.peek() {
                Some(Tok::CoopAll) => {
                    self.pos += 1;
                    CooperationSet::All
                }
                Some(Tok::Lt) => {
                    self.pos += 1;
                    let mut actions = Vec::new();
                    if !self.eat(&Tok::Gt) {
                        loop {
                            match self.peek() {
                                Some(Tok::Ident(a)) => {
                                    actions.push(a.clone());
                                    self.pos += 1;
                                }
                                _ => return Err(self.malformed_coop(coop_span)),
                            }
                            if self.eat(&Tok::Gt) {
                                break;
                            }
                            if !self.eat(&Tok::Comma) {
                                return Err(self.malformed_coop(coop_span));
                            }
                        }
                    }
                    CooperationSet::Actions(actions)
                }
                Some(Tok::Reactant) => {
                    return Err(Diagnostic::error(
                        "MALFORMED_COOPERATION",
                        coop_span,
                        "cooperation sets are written `<a, b>`; `<<` is the reactant operator",
                    ))
                }
                _ => break,
            };
            let right = self.composition_primary()?;
            let span = left.span().to(right.span());
            left = Composition::Cooperation { left: Box::new(left), right: Box::new(right), set, span };
        }
        Ok(left)
    }

    fn malformed_coop(&self, start: Span) -> Diagnostic {
        Diagnostic::error(
            "MALFORMED_COOPERATION",
            start.to(self.span_here()),
            "malformed cooperation set; expected `<*>` or `<action, ...>`",
        )
    }

    fn composition_primary(&mut self) -> PResult<Composition> {
        let start = self.span_here();
        if self.eat(&Tok::LParen) {
            let inner = self.composition()?;
            self.expect(&Tok::RParen, "`)`")?;
            return Ok(inner);
        }
        let name = self.ident("species instance or composition name")?;
        let location = if self.eat(&Tok::At) { Some(self.ident("location name after `@`")?) } else { None };
        if !self.eat(&Tok::LBracket) {
            if location.is_some() {
                return Err(self.unexpected("`[initial amount]`"));
            }
            return Ok(Composition::Reference { name, span: start });
        }
        let negative = self.eat(&Tok::Minus);
        let initial = match self.peek() {
            Some(Tok::Number(v)) => *v,
            _ => return Err(self.unexpected("initial amount")),
        };
        self.pos += 1;
        self.expect(&Tok::RBracket, "`]`")?;
        let initial = if negative { -initial } else { initial };
        Ok(Composition::Species { name, location, initial, span: start.to(self.prev_span()) })
    }

    // expr := term {(+|-) term}; term := unary {(*|/) unary}
    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => BinOp::Mul,
                Some(Tok::Slash) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Expr> {
        match self.peek() {
            Some(Tok::Number(v)) => {
                self.pos += 1;
                Ok(Expr::Number(*v))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat(&Tok::At) {
                    let loc = self.ident("location name after `@`")?;
                    Ok(Expr::Species { name: name.clone(), location: loc })
                } else {
                    Ok(Expr::Ident(name.clone()))
                }
            }
            Some(Tok::LParen) => {
                let open = self.span_here();
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return Err(Diagnostic::error(
                        "SYNTAX_ERROR",
                        open.to(self.span_here()),
                        "unbalanced parentheses: `(` is never closed",
                    ));
                }
                Ok(inner)
            }
            _ => Err(self.unexpected("a number, identifier or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(src: &str) -> BioPepaSystem {
        parse_system(src).unwrap_or_else(|d| panic!("{d:#?}"))
    }

    fn codes(src: &str) -> Vec<&'static str> {
        parse_system(src).err().expect("expected diagnostics").iter().map(|d| d.code).collect()
    }

    const TINY: &str = "location cell : size = 1, kind = compartment;\nk = 2;\nkineticLawOf r : fMA(k);\nA = r << A@cell;\nA@cell[5]\n";

    #[test]
    fn location_statement() {
        let sys = parse(
            "location cyto in cyto_mem : size = 1, kind = compartment;\n\
             location cyto_mem : size = 0.2, kind = membrane;\nA = r << A@cyto;\nA@cyto[1]",
        );
        let cyto = sys.location("cyto").unwrap();
        assert_eq!(cyto.parent.as_deref(), Some("cyto_mem"));
        assert_eq!(cyto.size, Expr::Number(1.0));
        assert_eq!(cyto.kind, LocationKind::Compartment);
        assert_eq!(sys.location("cyto_mem").unwrap().kind, LocationKind::Membrane);
    }

    #[test]
    fn species_component_terms() {
        let sys = parse("PDE4 = v27 >> PDE4@cyto + v20 << PDE4@cyto + v5 (+) PDE4@cyto;\nPDE4@cyto[1]");
        let c = sys.component("PDE4").unwrap();
        let terms: Vec<_> = c
            .terms
            .iter()
            .map(|t| (t.action.as_str(), t.stoichiometry, t.role.clone(), t.location.as_deref()))
            .collect();
        assert_eq!(
            terms,
            vec![
                ("v27", 1, Role::Product, Some("cyto")),
                ("v20", 1, Role::Reactant, Some("cyto")),
                ("v5", 1, Role::Activator, Some("cyto")),
            ]
        );
    }

    #[test]
    fn explicit_stoichiometry_roles_and_transport() {
        let sys = parse("A = (r, 2) << A@c + s (-) A + u (.) A@c + m A@c -> A@d;\nA@c[1]");
        let t = &sys.component("A").unwrap().terms;
        assert_eq!(t[0].stoichiometry, 2);
        assert_eq!(t[1].role, Role::Inhibitor);
        assert_eq!(t[1].location, None);
        assert_eq!(t[2].role, Role::Modifier);
        assert_eq!(t[3].role, Role::TransportOut("d".into()));
        assert_eq!(t[3].location.as_deref(), Some("c"));
    }

    #[test]
    fn model_component_cooperation_sets() {
        let sys = parse(
            "G ::= A@c[1];\ncAMP ::= B@c[1];\nM ::= C@c[1];\nG_Pathway <v09, v17> cAMP_Pathway <v08, v15> MAPK_Pathway",
        );
        let Composition::Cooperation { left, right, set, .. } = &sys.model else { panic!() };
        assert_eq!(set, &CooperationSet::Actions(vec!["v08".into(), "v15".into()]));
        assert!(matches!(&**right, Composition::Reference { name, .. } if name == "MAPK_Pathway"));
        let Composition::Cooperation { set, .. } = &**left else { panic!() };
        assert_eq!(set, &CooperationSet::Actions(vec!["v09".into(), "v17".into()]));
    }

    #[test]
    fn kinetic_laws() {
        let sys = parse(
            "kineticLawOf v01f : fMA(Kf_activate_Gs);\n\
             kineticLawOf v20 : fMM(kcat_PKA_P_PDE, Km_v20*omega_cyto);\n\
             kineticLawOf v1f : kf_activate_Gs * iso_BAR_G@cyto_mem;\nX@c[0]",
        );
        assert_eq!(sys.kinetic_law("v01f").unwrap().body, LawBody::MassAction(Expr::ident("Kf_activate_Gs")));
        assert!(matches!(sys.kinetic_law("v20").unwrap().body, LawBody::MichaelisMenten { .. }));
        assert!(matches!(sys.kinetic_law("v1f").unwrap().body, LawBody::Custom(_)));
    }

    #[test]
    fn expressions() {
        let e = parse_expression("kcat_grk_GRK * cyto_mem / omega_cyto").unwrap();
        assert_eq!(
            e,
            Expr::binary(
                BinOp::Div,
                Expr::binary(BinOp::Mul, Expr::ident("kcat_grk_GRK"), Expr::ident("cyto_mem")),
                Expr::ident("omega_cyto")
            )
        );
        let e = parse_expression("MAPK_active@cyto / (MAPK@cyto + MAPK_active@cyto)").unwrap();
        assert_eq!(
            e,
            Expr::binary(
                BinOp::Div,
                Expr::species("MAPK_active", "cyto"),
                Expr::binary(BinOp::Add, Expr::species("MAPK", "cyto"), Expr::species("MAPK_active", "cyto"))
            )
        );
        assert_eq!(parse_expression("-(3)").unwrap(), Expr::Neg(Box::new(Expr::Number(3.0))));
        assert_eq!(
            parse_expression("a - b - c").unwrap(),
            Expr::binary(
                BinOp::Sub,
                Expr::binary(BinOp::Sub, Expr::ident("a"), Expr::ident("b")),
                Expr::ident("c")
            )
        );
    }

    #[test]
    fn expression_errors() {
        for bad in ["(a + b", "a +", "", "a b", "a + )", "2 *"] {
            let d = parse_expression(bad).unwrap_err();
            assert!(!d.is_empty(), "{bad}");
            assert!(d.iter().all(|d| d.span.end <= bad.len()), "{bad}");
        }
    }

    #[test]
    fn observable_classification() {
        let sys = parse(
            "omega = 602;\nfrac = A@c / (A@c + B@c);\ntwice = 2 * frac;\nk = omega * 2;\nA@c[1]",
        );
        let params: Vec<_> = sys.parameters.iter().map(|p| p.name.as_str()).collect();
        let obs: Vec<_> = sys.observables.iter().map(|o| o.name.as_str()).collect();
        assert_eq!(params, vec!["omega", "k"]);
        assert_eq!(obs, vec!["frac", "twice"]);
    }

    #[test]
    fn statement_errors() {
        assert_eq!(codes("k = 1\nj = 2;\nA@c[1]"), vec!["SYNTAX_ERROR"]);
        assert_eq!(codes("k = 1;\nj = 2"), vec!["UNTERMINATED_STATEMENT"]);
        assert_eq!(codes("k = 1\nA@c[1]"), vec!["UNTERMINATED_STATEMENT"]);
        assert_eq!(codes("species A = 1;\nA@c[1]"), vec!["UNKNOWN_KEYWORD"]);
        assert_eq!(codes("A@c[1];\nk = 1;"), vec!["MISPLACED_MODEL_COMPONENT"]);
        assert_eq!(codes("k = 1;"), vec!["MISSING_MODEL_COMPONENT"]);
        assert_eq!(codes("A = r A@c <-> A@d;\nA@c[1]"), vec!["BIDIRECTIONAL_TRANSPORT"]);
        assert_eq!(codes("P ::= A@c[1] <r1, > B@c[1];\nP"), vec!["MALFORMED_COOPERATION"]);
        assert_eq!(codes("P ::= A@c[1] <r1 B@c[1];\nP"), vec!["MALFORMED_COOPERATION"]);
        assert_eq!(codes("A = r << B@c;\nA@c[1]"), vec!["SYNTAX_ERROR"]);
        assert_eq!(codes("location x : size = 1, kind = tube;\nA@x[1]"), vec!["SYNTAX_ERROR"]);
    }

    #[test]
    fn recovery_reports_each_bad_statement() {
        let d = parse_system("a = (1;\nb = 2 +;\nc = 3;\nA = r << A@c;\nA@c[1]").unwrap_err();
        assert_eq!(d.len(), 2);
        assert_eq!((d[0].span.line, d[1].span.line), (1, 2));
    }

    #[test]
    fn trailing_semicolon_on_model_is_accepted() {
        let sys = parse("A = r << A@cell;\nA@cell[5];");
        assert!(matches!(sys.model, Composition::Species { .. }));
        let _ = parse(TINY);
    }
}
