//! Membership and equivalence queries answered from a universally-safe
//! formula.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{assignment_closure, is_universally_safe, HyperFormula};
use crate::alphabet::{Alphabet, Letter, Word};
use crate::automata::{language_subset, Dfa, Inclusion};
use crate::constructions::{permuted_projection, tighten};
use crate::equiv::{accepted_prefix, covering_check};
use crate::error::{Error, Result};
use crate::ltl::bad_prefix_dfa;
use crate::repr::{lift_automaton, restrict_arity, unzip, zip, Trace, TraceSet};

/// A reason why a conjecture is wrong.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    /// A bad prefix the conjecture does not represent.
    Positive(TraceSet),
    /// An accepted word that represents no bad prefix.
    Negative(Word),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TeacherStats {
    pub membership_queries: usize,
    pub equivalence_queries: usize,
}

pub struct TeacherSession {
    formula: HyperFormula,
    aps: Arc<[String]>,
    cache: BTreeMap<usize, Dfa>,
    stats: TeacherStats,
    exact_minimization: bool,
}

impl TeacherSession {
    pub fn new(formula: HyperFormula) -> Result<Self> {
        if !is_universally_safe(&formula) {
            return Err(Error::NotUniversallySafe);
        }
        let aps: Arc<[String]> = formula.aps().into();
        Ok(TeacherSession {
            formula,
            aps,
            cache: BTreeMap::new(),
            stats: TeacherStats::default(),
            exact_minimization: false,
        })
    }

    /// Searches all subsets (smallest first) when shrinking positive
    /// counterexamples of at most four traces, instead of greedy deletion.
    pub fn with_exact_minimization(mut self, on: bool) -> Self {
        self.exact_minimization = on;
        self
    }

    pub fn formula(&self) -> &HyperFormula {
        &self.formula
    }

    pub fn aps(&self) -> &Arc<[String]> {
        &self.aps
    }

    pub fn stats(&self) -> TeacherStats {
        self.stats
    }

    /// The tight bad-prefix automaton of the closure at arity `n`.
    pub fn automaton(&mut self, n: usize) -> Result<&Dfa> {
        if !self.cache.contains_key(&n) {
            let phi = assignment_closure(&self.formula, n)?;
            let dfa = tighten(&bad_prefix_dfa(&phi, &self.aps, n)?);
            self.cache.insert(n, dfa);
        }
        Ok(&self.cache[&n])
    }

    fn check_aps(&self, aps: &[String]) -> Result<()> {
        if *aps != *self.aps {
            return Err(Error::AlphabetMismatch(format!(
                "formula uses {:?}, input uses {:?}",
                self.aps, aps
            )));
        }
        Ok(())
    }

    /// Is `t` a bad prefix of the formula?
    pub fn member(&mut self, t: &TraceSet) -> Result<bool> {
        self.stats.membership_queries += 1;
        self.is_bad(t)
    }

    fn is_bad(&mut self, t: &TraceSet) -> Result<bool> {
        self.check_aps(t.aps())?;
        if t.is_empty() {
            return Ok(false);
        }
        let traces: Vec<&Trace> = t.traces().collect();
        let word = zip(&traces);
        self.automaton(traces.len())?.accepts(&word)
    }

    /// Checks `conjecture` against the formula. A conjecture passes when it
    /// accepts exactly the representations of bad prefixes at its arity and
    /// those suffice to cover every bad prefix.
    pub fn equivalence(&mut self, conjecture: &Dfa) -> Result<Option<Counterexample>> {
        self.stats.equivalence_queries += 1;
        self.check_aps(conjecture.alphabet().aps())?;
        let k_l = conjecture.arity();
        let k_t = self.formula.arity();
        if k_l > k_t {
            return Err(Error::ArityTooLarge {
                conjecture: k_l,
                quantifiers: k_t,
            });
        }
        let p = self.automaton(k_t)?.clone();

        let lifted = if k_l < k_t {
            lift_automaton(conjecture, k_t)?
        } else {
            conjecture.clone()
        };
        if let Inclusion::Fails(w) = language_subset(&lifted, &p)? {
            return Ok(Some(Counterexample::Negative(truncate(conjecture.alphabet(), &w))));
        }

        let cover = tighten(&permuted_projection(conjecture, k_t)?);
        if let Some(lasso) = covering_check(&p, &cover)?.witness {
            let prefix = accepted_prefix(&p, &lasso)?;
            let t = unzip(p.alphabet(), &prefix);
            return Ok(Some(Counterexample::Positive(self.shrink(t)?)));
        }

        if let Inclusion::Fails(w) = language_subset(&restrict_arity(&p, k_l)?, conjecture)? {
            return Ok(Some(Counterexample::Positive(unzip(conjecture.alphabet(), &w))));
        }
        Ok(None)
    }

    /// Removes traces while the set stays a bad prefix.
    pub fn shrink(&mut self, t: TraceSet) -> Result<TraceSet> {
        if self.exact_minimization && t.len() <= 4 {
            return self.shrink_exact(t);
        }
        let mut current = t;
        loop {
            let mut reduced = None;
            for trace in current.traces() {
                if current.len() == 1 {
                    break;
                }
                let smaller = current.without(trace);
                if self.is_bad(&smaller)? {
                    reduced = Some(smaller);
                    break;
                }
            }
            match reduced {
                Some(s) => current = s,
                None => return Ok(current),
            }
        }
    }

    fn shrink_exact(&mut self, t: TraceSet) -> Result<TraceSet> {
        let traces: Vec<Trace> = t.traces().cloned().collect();
        let n = traces.len();
        for size in 1..n {
            for mask in 1u32..(1 << n) {
                if mask.count_ones() as usize != size {
                    continue;
                }
                let subset = TraceSet::new(
                    t.shared_aps().clone(),
                    (0..n).filter(|i| mask >> i & 1 == 1).map(|i| traces[i].clone()),
                )?;
                if self.is_bad(&subset)? {
                    return Ok(subset);
                }
            }
        }
        Ok(t)
    }
}

/// Keeps the first `sigma.arity()` components of every letter.
fn truncate(sigma: &Alphabet, w: &Word) -> Word {
    Word::new(
        w.0.iter()
            .map(|l| Letter(l.0[..sigma.arity()].to_vec()))
            .collect(),
    )
}
