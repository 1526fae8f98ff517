//! HyperLTL formulas with a trace-quantifier prefix, the universally-safe
//! classifier and the teacher answering queries for such formulas.

mod teacher;

use std::collections::HashMap;
use std::fmt;

pub use teacher::{Counterexample, TeacherSession, TeacherStats};

use crate::error::{Error, ParseError, Result};
use crate::ltl::{is_syntactically_safe, Ltl, Parser};
use crate::repr::PermutationMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    Forall,
    Exists,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperFormula {
    quantifiers: Vec<(Quantifier, String)>,
    body: Ltl,
    aps: Vec<String>,
}

impl HyperFormula {
    /// Builds a formula over `quantifiers`; atom indices refer to positions
    /// in the quantifier list.
    pub fn new(quantifiers: Vec<(Quantifier, String)>, body: Ltl) -> Result<Self> {
        for (i, (_, name)) in quantifiers.iter().enumerate() {
            if quantifiers[..i].iter().any(|(_, other)| other == name) {
                return Err(Error::Format(format!("trace variable `{name}` is quantified twice")));
            }
        }
        if body.trace_count() > quantifiers.len() {
            return Err(Error::UnboundVariable(format!("#{}", body.trace_count() - 1)));
        }
        let aps = body.propositions();
        Ok(HyperFormula {
            quantifiers,
            body,
            aps,
        })
    }

    pub fn quantifiers(&self) -> &[(Quantifier, String)] {
        &self.quantifiers
    }

    /// Number of quantified trace variables.
    pub fn arity(&self) -> usize {
        self.quantifiers.len()
    }

    pub fn body(&self) -> &Ltl {
        &self.body
    }

    /// Atomic propositions in order of first appearance in the body.
    pub fn aps(&self) -> &[String] {
        &self.aps
    }
}

impl fmt::Display for HyperFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, name) in &self.quantifiers {
            let kw = match q {
                Quantifier::Forall => "forall",
                Quantifier::Exists => "exists",
            };
            write!(f, "{kw} {name}. ")?;
        }
        let names = |i: usize| self.quantifiers[i].1.clone();
        write!(f, "{}", self.body.display_with(&names))?;
        Ok(())
    }
}

/// Parses `forall p. forall q. <body>`; `exists` is accepted as well.
pub fn parse_hyper(text: &str) -> Result<HyperFormula> {
    let mut parser = Parser::new(text)?;
    let quantifiers: Vec<(Quantifier, String)> = parser
        .quantifiers()?
        .into_iter()
        .map(|(forall, name)| {
            let q = if forall {
                Quantifier::Forall
            } else {
                Quantifier::Exists
            };
            (q, name)
        })
        .collect();
    if quantifiers.is_empty() {
        return Err(Error::Parse(ParseError {
            line: 1,
            column: 1,
            expected: vec!["`exists`".into(), "`forall`".into()],
            found: "formula body".into(),
        }));
    }
    let index: HashMap<String, usize> = quantifiers
        .iter()
        .enumerate()
        .map(|(i, (_, n))| (n.clone(), i))
        .collect();
    if index.len() != quantifiers.len() {
        return Err(Error::Format("a trace variable is quantified twice".into()));
    }
    let mut resolve = |v: &str| index.get(v).copied().ok_or_else(|| Error::UnboundVariable(v.to_string()));
    let body = parser.formula(&mut resolve)?;
    HyperFormula::new(quantifiers, body)
}

/// All quantifiers universal and the body syntactically safe.
pub fn is_universally_safe(f: &HyperFormula) -> bool {
    f.quantifiers.iter().all(|(q, _)| *q == Quantifier::Forall) && is_syntactically_safe(f.body())
}

/// Instances of the body under every map from the quantified variables into
/// `{0..n-1}`, duplicates removed, in map order.
pub fn closure_instances(f: &HyperFormula, n: usize) -> Result<Vec<Ltl>> {
    if !is_universally_safe(f) {
        return Err(Error::NotUniversallySafe);
    }
    if n == 0 {
        return Err(Error::BadArity {
            arity: f.arity(),
            target: n,
        });
    }
    let mut out: Vec<Ltl> = Vec::new();
    for map in PermutationMap::all(f.arity(), n) {
        let inst = f.body().substitute(&map)?;
        if !out.contains(&inst) {
            out.push(inst);
        }
    }
    Ok(out)
}

/// The conjunction of [`closure_instances`]: an `n`-tuple word satisfies it
/// iff its set of component traces satisfies `f`.
pub fn assignment_closure(f: &HyperFormula, n: usize) -> Result<Ltl> {
    Ok(Ltl::conjunction(closure_instances(f, n)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse_ltl;

    #[test]
    fn parse_examples() {
        let f = parse_hyper("forall p. forall q. G (a[p] -> a[q])").unwrap();
        assert_eq!(f.arity(), 2);
        assert!(f.quantifiers().iter().all(|(q, _)| *q == Quantifier::Forall));
        assert_eq!(f.body(), &parse_ltl("G (a[0] -> a[1])").unwrap());

        let ni = parse_hyper("forall p. forall q. (!(i[p]<->i[q])) R (o[p]<->o[q])").unwrap();
        assert_eq!(ni.aps(), ["i".to_string(), "o".to_string()]);
        assert!(matches!(ni.body(), Ltl::Release(..)));

        assert!(matches!(parse_hyper("forall p. a[q]"), Err(Error::UnboundVariable(v)) if v == "q"));
        assert!(matches!(parse_hyper("G a[p]"), Err(Error::Parse(_))));
        assert!(parse_hyper("forall p. forall p. a[p]").is_err());
        let multi = parse_hyper("forall p, q. a[p] & a[q]").unwrap();
        assert_eq!(multi.arity(), 2);
    }

    #[test]
    fn display_round_trip() {
        let text = "forall p. forall q. a[p] & G (a[p] <-> a[q])";
        let f = parse_hyper(text).unwrap();
        assert_eq!(f.to_string(), text);
        assert_eq!(parse_hyper(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn classification() {
        let run = parse_hyper("forall p. forall q. a[p] & G (a[p] <-> a[q])").unwrap();
        assert!(is_universally_safe(&run));
        assert!(!is_universally_safe(&parse_hyper("exists p. G a[p]").unwrap()));
        assert!(!is_universally_safe(&parse_hyper("forall p. F a[p]").unwrap()));
    }

    #[test]
    fn closure_examples() {
        let intro = parse_hyper("forall p. forall q. G (a[p] -> a[q])").unwrap();
        assert_eq!(assignment_closure(&intro, 1).unwrap(), parse_ltl("G (a[0] -> a[0])").unwrap());
        let two = closure_instances(&intro, 2).unwrap();
        assert_eq!(two.len(), 4);
        for i in 0..2 {
            for j in 0..2 {
                let inst = Ltl::globally(Ltl::implies(Ltl::atom("a", i), Ltl::atom("a", j)));
                assert!(two.contains(&inst));
            }
        }
        assert_eq!(closure_instances(&intro, 3).unwrap().len(), 9);
        let ex = parse_hyper("exists p. G a[p]").unwrap();
        assert!(matches!(assignment_closure(&ex, 1), Err(Error::NotUniversallySafe)));
    }
}
