//! Formula syntax. Variables are named; a binder fixes whether a name
//! denotes an element or a set, and the domain it ranges over.

use std::fmt;

use super::structure::Sort;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Element,
    Set,
}

/// Arguments and operands: a variable, the constant `ρ`, or a sort used as a set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Rho,
    Sort(Sort),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }
}

impl From<&str> for Term {
    fn from(s: &str) -> Term {
        Term::var(s)
    }
}

impl From<&String> for Term {
    fn from(s: &String) -> Term {
        Term::var(s)
    }
}

impl From<Sort> for Term {
    fn from(s: Sort) -> Term {
        Term::Sort(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Binder {
    pub name: String,
    pub kind: Kind,
    /// Elements range over this set; set variables over its subsets.
    pub domain: Term,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(Binder, Box<Formula>),
    Forall(Binder, Box<Formula>),
    Member(Term, Term),
    Eq(Term, Term),
    /// `R^D(edge, vertex)`.
    Incident(Term, Term),
    CardEq(Term, usize),
    Subset(Term, Term),
    Call(String, Vec<Term>),
}

pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

pub fn and(fs: impl IntoIterator<Item = Formula>) -> Formula {
    Formula::And(fs.into_iter().collect())
}

pub fn or(fs: impl IntoIterator<Item = Formula>) -> Formula {
    Formula::Or(fs.into_iter().collect())
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    Formula::Implies(Box::new(a), Box::new(b))
}

pub fn iff(a: Formula, b: Formula) -> Formula {
    Formula::Iff(Box::new(a), Box::new(b))
}

fn binder(name: &str, kind: Kind, domain: impl Into<Term>) -> Binder {
    Binder {
        name: name.to_string(),
        kind,
        domain: domain.into(),
    }
}

/// `∃x ∈ domain . body`
pub fn exists(x: &str, domain: impl Into<Term>, body: Formula) -> Formula {
    Formula::Exists(binder(x, Kind::Element, domain), Box::new(body))
}

pub fn forall(x: &str, domain: impl Into<Term>, body: Formula) -> Formula {
    Formula::Forall(binder(x, Kind::Element, domain), Box::new(body))
}

/// `∃X ⊆ domain . body`
pub fn exists_set(x: &str, domain: impl Into<Term>, body: Formula) -> Formula {
    Formula::Exists(binder(x, Kind::Set, domain), Box::new(body))
}

pub fn forall_set(x: &str, domain: impl Into<Term>, body: Formula) -> Formula {
    Formula::Forall(binder(x, Kind::Set, domain), Box::new(body))
}

/// Nested element quantifiers over a shared domain.
pub fn exists_many(xs: &[&str], domain: impl Into<Term>, body: Formula) -> Formula {
    let d = domain.into();
    xs.iter().rev().fold(body, |b, x| exists(x, d.clone(), b))
}

pub fn forall_many(xs: &[&str], domain: impl Into<Term>, body: Formula) -> Formula {
    let d = domain.into();
    xs.iter().rev().fold(body, |b, x| forall(x, d.clone(), b))
}

pub fn exists_sets(xs: &[&str], domain: impl Into<Term>, body: Formula) -> Formula {
    let d = domain.into();
    xs.iter().rev().fold(body, |b, x| exists_set(x, d.clone(), b))
}

pub fn mem(x: impl Into<Term>, s: impl Into<Term>) -> Formula {
    Formula::Member(x.into(), s.into())
}

pub fn eq(x: impl Into<Term>, y: impl Into<Term>) -> Formula {
    Formula::Eq(x.into(), y.into())
}

pub fn neq(x: impl Into<Term>, y: impl Into<Term>) -> Formula {
    not(eq(x, y))
}

pub fn incident(e: impl Into<Term>, v: impl Into<Term>) -> Formula {
    Formula::Incident(e.into(), v.into())
}

pub fn card_eq(s: impl Into<Term>, c: usize) -> Formula {
    Formula::CardEq(s.into(), c)
}

pub fn subset(a: impl Into<Term>, b: impl Into<Term>) -> Formula {
    Formula::Subset(a.into(), b.into())
}

pub fn call<T: Into<Term>>(name: &str, args: impl IntoIterator<Item = T>) -> Formula {
    Formula::Call(name.to_string(), args.into_iter().map(Into::into).collect())
}

impl Formula {
    /// Number of predicate invocations, the measure used to bound macro expansion.
    pub fn call_count(&self) -> usize {
        match self {
            Formula::Call(..) => 1,
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => a.call_count(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::call_count).sum(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => a.call_count() + b.call_count(),
            _ => 0,
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + match self {
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => a.size(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::size).sum(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => a.size() + b.size(),
            _ => 0,
        }
    }

    /// The same formula with every conjunction and disjunction listed backwards.
    pub fn reversed(&self) -> Formula {
        let rev = |fs: &[Formula]| fs.iter().rev().map(Formula::reversed).collect();
        match self {
            Formula::And(fs) => Formula::And(rev(fs)),
            Formula::Or(fs) => Formula::Or(rev(fs)),
            Formula::Not(a) => not(a.reversed()),
            Formula::Exists(b, a) => Formula::Exists(b.clone(), Box::new(a.reversed())),
            Formula::Forall(b, a) => Formula::Forall(b.clone(), Box::new(a.reversed())),
            Formula::Implies(a, b) => implies(a.reversed(), b.reversed()),
            Formula::Iff(a, b) => iff(a.reversed(), b.reversed()),
            f => f.clone(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Rho => write!(f, "ρ"),
            Term::Sort(s) => write!(f, "{}", s.symbol()),
        }
    }
}

fn join(f: &mut fmt::Formatter<'_>, fs: &[Formula], op: &str, empty: &str) -> fmt::Result {
    if fs.is_empty() {
        return write!(f, "{empty}");
    }
    write!(f, "(")?;
    for (i, x) in fs.iter().enumerate() {
        if i > 0 {
            write!(f, " {op} ")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "⊤"),
            Formula::False => write!(f, "⊥"),
            Formula::Not(a) => match &**a {
                Formula::Eq(x, y) => write!(f, "{x} ≠ {y}"),
                Formula::Member(x, s) => write!(f, "{x} ∉ {s}"),
                a => write!(f, "¬{a}"),
            },
            Formula::And(fs) => join(f, fs, "∧", "⊤"),
            Formula::Or(fs) => join(f, fs, "∨", "⊥"),
            Formula::Implies(a, b) => write!(f, "({a} ⇒ {b})"),
            Formula::Iff(a, b) => write!(f, "({a} ⇔ {b})"),
            Formula::Exists(b, a) | Formula::Forall(b, a) => {
                let q = if matches!(self, Formula::Exists(..)) { "∃" } else { "∀" };
                let rel = if b.kind == Kind::Element { "∈" } else { "⊆" };
                write!(f, "{q}{} {rel} {}. {a}", b.name, b.domain)
            }
            Formula::Member(x, s) => write!(f, "{x} ∈ {s}"),
            Formula::Eq(x, y) => write!(f, "{x} = {y}"),
            Formula::Incident(e, v) => write!(f, "R({e},{v})"),
            Formula::CardEq(s, c) => write!(f, "|{s}| = {c}"),
            Formula::Subset(a, b) => write!(f, "{a} ⊆ {b}"),
            Formula::Call(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_counts() {
        let f = or([eq("x1", "x2"), not(exists_set("P", Sort::Universe, call("Bipartition", ["Z", "P", "Q"])))]);
        assert_eq!(f.to_string(), "(x1 = x2 ∨ ¬∃P ⊆ U. Bipartition(Z,P,Q))");
        assert_eq!(f.call_count(), 1);
        assert_eq!(f.reversed().reversed(), f);
    }
}
