//! Arithmetic expressions used by kinetic laws, parameters, location sizes
//! and observables.
//!
//! Parsed expressions leave bare identifiers unresolved: a name may denote a
//! parameter, a location size, the time variable `t`, an observable or (in
//! single-location models) a species. [`crate::kinetics`] resolves them when
//! compiling an expression against a concrete network.

use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }

    pub fn apply(self, lhs: f64, rhs: f64) -> f64 {
        match self {
            BinOp::Add => lhs + rhs,
            BinOp::Sub => lhs - rhs,
            BinOp::Mul => lhs * rhs,
            BinOp::Div => lhs / rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    /// Bare identifier, resolved later.
    Ident(String),
    /// `name@location`: the current amount of a located species.
    Species { name: String, location: String },
    Neg(Box<Expr>),
    Binary { op: BinOp, lhs: Box<Expr>, rhs: Box<Expr> },
}

impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Number(v)
    }

    pub fn ident(name: impl Into<String>) -> Expr {
        Expr::Ident(name.into())
    }

    pub fn species(name: impl Into<String>, location: impl Into<String>) -> Expr {
        Expr::Species { name: name.into(), location: location.into() }
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) }
    }

    /// Every bare identifier, in first-occurrence order.
    pub fn identifiers(&self) -> Vec<&str> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        self.visit(&mut |e| {
            if let Expr::Ident(name) = e {
                if seen.insert(name.as_str()) {
                    out.push(name.as_str());
                }
            }
        });
        out
    }

    /// Every `name@location` reference, in first-occurrence order.
    pub fn species_refs(&self) -> Vec<(&str, &str)> {
        let mut out = Vec::new();
        self.visit(&mut |e| {
            if let Expr::Species { name, location } = e {
                let key = (name.as_str(), location.as_str());
                if !out.contains(&key) {
                    out.push(key);
                }
            }
        });
        out
    }

    pub fn has_species_ref(&self) -> bool {
        let mut found = false;
        self.visit(&mut |e| found |= matches!(e, Expr::Species { .. }));
        found
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        match self {
            Expr::Neg(inner) => inner.visit(f),
            Expr::Binary { lhs, rhs, .. } => {
                lhs.visit(f);
                rhs.visit(f);
            }
            Expr::Number(_) | Expr::Ident(_) | Expr::Species { .. } => {}
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, parent: u8, right: bool) -> fmt::Result {
        match self {
            Expr::Number(v) => write_number(f, *v),
            Expr::Ident(name) => f.write_str(name),
            Expr::Species { name, location } => write!(f, "{name}@{location}"),
            Expr::Neg(inner) => {
                f.write_str("-")?;
                match **inner {
                    Expr::Binary { .. } | Expr::Neg(_) => {
                        f.write_str("(")?;
                        inner.fmt_prec(f, 0, false)?;
                        f.write_str(")")
                    }
                    _ => inner.fmt_prec(f, 3, false),
                }
            }
            Expr::Binary { op, lhs, rhs } => {
                let prec = op.precedence();
                // Left-associative: a right operand of equal precedence needs parentheses.
                let wrap = prec < parent || (right && prec == parent);
                if wrap {
                    f.write_str("(")?;
                }
                lhs.fmt_prec(f, prec, false)?;
                write!(f, " {} ", op.symbol())?;
                rhs.fmt_prec(f, prec, true)?;
                if wrap {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

fn write_number(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        write!(f, "{}", v as i64)
    } else {
        write!(f, "{v:e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_respects_associativity() {
        let e = Expr::binary(
            BinOp::Sub,
            Expr::ident("a"),
            Expr::binary(BinOp::Sub, Expr::ident("b"), Expr::ident("c")),
        );
        assert_eq!(e.to_string(), "a - (b - c)");
        let e = Expr::binary(
            BinOp::Div,
            Expr::binary(BinOp::Mul, Expr::ident("k"), Expr::ident("s")),
            Expr::ident("w"),
        );
        assert_eq!(e.to_string(), "k * s / w");
    }

    #[test]
    fn collects_references() {
        let e = Expr::binary(
            BinOp::Div,
            Expr::species("A", "cyto"),
            Expr::binary(BinOp::Add, Expr::species("B", "cyto"), Expr::ident("k")),
        );
        assert_eq!(e.species_refs(), vec![("A", "cyto"), ("B", "cyto")]);
        assert_eq!(e.identifiers(), vec!["k"]);
        assert!(e.has_species_ref());
        assert!(!Expr::num(2.0).has_species_ref());
    }
}
