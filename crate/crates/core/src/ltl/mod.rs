//! LTL over trace-indexed atoms `a[i]`: parsing, negation normal form,
//! syntactic safety and translation into safety / bad-prefix automata.

mod parser;
mod tableau;

use std::fmt;

pub use parser::parse_ltl;
pub(crate) use parser::Parser;
pub use tableau::{bad_prefix_dfa, safety_nfa};

use crate::error::{Error, Result};
use crate::repr::PermutationMap;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ltl {
    True,
    False,
    Atom { prop: String, trace: usize },
    Not(Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Implies(Box<Ltl>, Box<Ltl>),
    Iff(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    Release(Box<Ltl>, Box<Ltl>),
    Globally(Box<Ltl>),
    Finally(Box<Ltl>),
}

impl Ltl {
    pub fn atom(prop: impl Into<String>, trace: usize) -> Ltl {
        Ltl::Atom {
            prop: prop.into(),
            trace,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Ltl) -> Ltl {
        Ltl::Not(Box::new(f))
    }

    pub fn and(a: Ltl, b: Ltl) -> Ltl {
        Ltl::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Iff(Box::new(a), Box::new(b))
    }

    pub fn next(f: Ltl) -> Ltl {
        Ltl::Next(Box::new(f))
    }

    pub fn until(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Release(Box::new(a), Box::new(b))
    }

    pub fn globally(f: Ltl) -> Ltl {
        Ltl::Globally(Box::new(f))
    }

    pub fn finally(f: Ltl) -> Ltl {
        Ltl::Finally(Box::new(f))
    }

    /// Conjunction of all formulas; `true` when empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Ltl>) -> Ltl {
        parts
            .into_iter()
            .reduce(Ltl::and)
            .unwrap_or(Ltl::True)
    }

    fn children(&self) -> Vec<&Ltl> {
        match self {
            Ltl::True | Ltl::False | Ltl::Atom { .. } => vec![],
            Ltl::Not(a) | Ltl::Next(a) | Ltl::Globally(a) | Ltl::Finally(a) => vec![a],
            Ltl::And(a, b)
            | Ltl::Or(a, b)
            | Ltl::Implies(a, b)
            | Ltl::Iff(a, b)
            | Ltl::Until(a, b)
            | Ltl::Release(a, b) => vec![a, b],
        }
    }

    fn map_children(&self, f: &mut impl FnMut(&Ltl) -> Result<Ltl>) -> Result<Ltl> {
        let b = |x: Ltl| Box::new(x);
        Ok(match self {
            Ltl::True | Ltl::False | Ltl::Atom { .. } => self.clone(),
            Ltl::Not(a) => Ltl::Not(b(f(a)?)),
            Ltl::Next(a) => Ltl::Next(b(f(a)?)),
            Ltl::Globally(a) => Ltl::Globally(b(f(a)?)),
            Ltl::Finally(a) => Ltl::Finally(b(f(a)?)),
            Ltl::And(x, y) => Ltl::And(b(f(x)?), b(f(y)?)),
            Ltl::Or(x, y) => Ltl::Or(b(f(x)?), b(f(y)?)),
            Ltl::Implies(x, y) => Ltl::Implies(b(f(x)?), b(f(y)?)),
            Ltl::Iff(x, y) => Ltl::Iff(b(f(x)?), b(f(y)?)),
            Ltl::Until(x, y) => Ltl::Until(b(f(x)?), b(f(y)?)),
            Ltl::Release(x, y) => Ltl::Release(b(f(x)?), b(f(y)?)),
        })
    }

    /// Propositions in order of first appearance.
    pub fn propositions(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        self.visit(&mut |f| {
            if let Ltl::Atom { prop, .. } = f {
                if !out.contains(prop) {
                    out.push(prop.clone());
                }
            }
        });
        out
    }

    /// Number of trace indices used, i.e. the largest index plus one.
    pub fn trace_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |f| {
            if let Ltl::Atom { trace, .. } = f {
                n = n.max(trace + 1);
            }
        });
        n
    }

    fn visit(&self, f: &mut impl FnMut(&Ltl)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// True iff negations sit only on atoms and `→`, `↔` do not occur.
    pub fn is_nnf(&self) -> bool {
        match self {
            Ltl::Not(a) => matches!(**a, Ltl::Atom { .. }),
            Ltl::Implies(..) | Ltl::Iff(..) => false,
            _ => self.children().iter().all(|c| c.is_nnf()),
        }
    }

    /// Replaces every atom `a[i]` by `a[map(i)]`.
    pub fn substitute(&self, map: &PermutationMap) -> Result<Ltl> {
        match self {
            Ltl::Atom { prop, trace } => {
                if *trace >= map.len() {
                    return Err(Error::IndexOutOfRange {
                        index: *trace,
                        len: map.len(),
                    });
                }
                Ok(Ltl::atom(prop.clone(), map.get(*trace)))
            }
            _ => self.map_children(&mut |c| c.substitute(map)),
        }
    }
}

/// Pushes negations to the atoms and eliminates `→` and `↔`.
pub fn to_nnf(f: &Ltl) -> Ltl {
    nnf(f, false)
}

fn nnf(f: &Ltl, neg: bool) -> Ltl {
    use Ltl::*;
    match (f, neg) {
        (True, false) | (False, true) => True,
        (True, true) | (False, false) => False,
        (Atom { .. }, false) => f.clone(),
        (Atom { .. }, true) => Ltl::not(f.clone()),
        (Not(a), _) => nnf(a, !neg),
        (And(a, b), false) | (Or(a, b), true) => Ltl::and(nnf(a, neg), nnf(b, neg)),
        (Or(a, b), false) | (And(a, b), true) => Ltl::or(nnf(a, neg), nnf(b, neg)),
        (Implies(a, b), false) => Ltl::or(nnf(a, true), nnf(b, false)),
        (Implies(a, b), true) => Ltl::and(nnf(a, false), nnf(b, true)),
        (Iff(a, b), false) => Ltl::or(
            Ltl::and(nnf(a, false), nnf(b, false)),
            Ltl::and(nnf(a, true), nnf(b, true)),
        ),
        (Iff(a, b), true) => Ltl::or(
            Ltl::and(nnf(a, false), nnf(b, true)),
            Ltl::and(nnf(a, true), nnf(b, false)),
        ),
        (Next(a), _) => Ltl::next(nnf(a, neg)),
        (Until(a, b), false) | (Release(a, b), true) => Ltl::until(nnf(a, neg), nnf(b, neg)),
        (Release(a, b), false) | (Until(a, b), true) => Ltl::release(nnf(a, neg), nnf(b, neg)),
        (Globally(a), false) | (Finally(a), true) => Ltl::globally(nnf(a, neg)),
        (Finally(a), false) | (Globally(a), true) => Ltl::finally(nnf(a, neg)),
    }
}

/// True iff the negation normal form of `f` uses no `U` and no `F`.
pub fn is_syntactically_safe(f: &Ltl) -> bool {
    fn safe(f: &Ltl) -> bool {
        !matches!(f, Ltl::Until(..) | Ltl::Finally(..)) && f.children().iter().all(|c| safe(c))
    }
    if f.is_nnf() {
        safe(f)
    } else {
        safe(&to_nnf(f))
    }
}

fn precedence(f: &Ltl) -> u8 {
    match f {
        Ltl::Iff(..) => 1,
        Ltl::Implies(..) => 2,
        Ltl::Or(..) => 3,
        Ltl::And(..) => 4,
        Ltl::Until(..) | Ltl::Release(..) => 5,
        Ltl::Not(_) | Ltl::Next(_) | Ltl::Globally(_) | Ltl::Finally(_) => 6,
        Ltl::True | Ltl::False | Ltl::Atom { .. } => 7,
    }
}

impl Ltl {
    /// Renders the formula in the input syntax, naming trace `i` by
    /// `names(i)`.
    pub fn display_with<'a>(&'a self, names: &'a dyn Fn(usize) -> String) -> impl fmt::Display + 'a {
        Shown { f: self, names }
    }
}

struct Shown<'a> {
    f: &'a Ltl,
    names: &'a dyn Fn(usize) -> String,
}

impl Shown<'_> {
    fn sub<'b>(&'b self, f: &'b Ltl) -> Shown<'b> {
        Shown { f, names: self.names }
    }

    fn operand(&self, out: &mut fmt::Formatter<'_>, f: &Ltl, min: u8) -> fmt::Result {
        if precedence(f) < min {
            write!(out, "({})", self.sub(f))
        } else {
            write!(out, "{}", self.sub(f))
        }
    }
}

impl fmt::Display for Shown<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = precedence(self.f);
        let binary = |out: &mut fmt::Formatter<'_>, a: &Ltl, op: &str, b: &Ltl, right_assoc: bool| {
            // the side that does not associate needs strictly tighter operands
            let (lmin, rmin) = if right_assoc { (p + 1, p) } else { (p, p + 1) };
            self.operand(out, a, lmin)?;
            write!(out, " {op} ")?;
            self.operand(out, b, rmin)
        };
        match self.f {
            Ltl::True => write!(out, "true"),
            Ltl::False => write!(out, "false"),
            Ltl::Atom { prop, trace } => write!(out, "{prop}[{}]", (self.names)(*trace)),
            Ltl::Not(a) => {
                write!(out, "!")?;
                self.operand(out, a, 6)
            }
            Ltl::Next(a) => {
                write!(out, "X ")?;
                self.operand(out, a, 6)
            }
            Ltl::Globally(a) => {
                write!(out, "G ")?;
                self.operand(out, a, 6)
            }
            Ltl::Finally(a) => {
                write!(out, "F ")?;
                self.operand(out, a, 6)
            }
            Ltl::And(a, b) => binary(out, a, "&", b, false),
            Ltl::Or(a, b) => binary(out, a, "|", b, false),
            Ltl::Iff(a, b) => binary(out, a, "<->", b, false),
            Ltl::Implies(a, b) => binary(out, a, "->", b, true),
            Ltl::Until(a, b) => binary(out, a, "U", b, true),
            Ltl::Release(a, b) => binary(out, a, "R", b, true),
        }
    }
}

impl fmt::Display for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |i: usize| i.to_string();
        write!(f, "{}", self.display_with(&names))?;
        Ok(())
    }
}
