use std::collections::BTreeMap;
use std::sync::Arc;

use super::{Answer, Teacher};
use crate::automata::{language_subset, Dfa, Inclusion};
use crate::constructions::{permuted_projection, tighten};
use crate::equiv::{accepted_prefix, covering_check};
use crate::error::{Error, Result};
use crate::hyperltl::{Counterexample, TeacherSession};
use crate::repr::{canonical_representation, restrict_arity, unzip, TraceSet};

impl Teacher for TeacherSession {
    fn aps(&self) -> Arc<[String]> {
        TeacherSession::aps(self).clone()
    }

    fn max_arity(&self) -> usize {
        self.formula().arity()
    }

    fn member(&mut self, t: &TraceSet) -> Result<bool> {
        TeacherSession::member(self, t)
    }

    fn equivalence(&mut self, conjecture: &Dfa) -> Result<Answer> {
        Ok(match TeacherSession::equivalence(self, conjecture)? {
            None => Answer::Equivalent,
            Some(c) => Answer::Counterexample(c),
        })
    }
}

/// A teacher for the hyperproperty represented by a reference automaton.
pub struct AutomatonTeacher {
    reference: Dfa,
    cache: BTreeMap<usize, Dfa>,
    membership_queries: usize,
    equivalence_queries: usize,
}

impl AutomatonTeacher {
    pub fn new(reference: Dfa) -> Self {
        AutomatonTeacher {
            reference,
            cache: BTreeMap::new(),
            membership_queries: 0,
            equivalence_queries: 0,
        }
    }

    pub fn reference(&self) -> &Dfa {
        &self.reference
    }

    /// Tight, permutation-closed view of the reference at arity `m ≥ k`.
    pub fn closed_reference(&mut self, m: usize) -> Result<&Dfa> {
        if !self.cache.contains_key(&m) {
            let dfa = tighten(&permuted_projection(&self.reference, m)?).minimize();
            self.cache.insert(m, dfa);
        }
        Ok(&self.cache[&m])
    }

    pub fn membership_queries(&self) -> usize {
        self.membership_queries
    }

    pub fn equivalence_queries(&self) -> usize {
        self.equivalence_queries
    }

    fn is_bad(&mut self, t: &TraceSet) -> Result<bool> {
        if t.aps() != self.reference.alphabet().aps() {
            return Err(Error::AlphabetMismatch("trace set and reference differ".into()));
        }
        if t.is_empty() {
            return Ok(false);
        }
        let m = t.len().max(self.reference.arity());
        let w = canonical_representation(t, m)?;
        self.closed_reference(m)?.accepts(&w)
    }

    fn shrink(&mut self, t: TraceSet) -> Result<TraceSet> {
        let mut current = t;
        'outer: loop {
            if current.len() == 1 {
                return Ok(current);
            }
            let traces: Vec<_> = current.traces().cloned().collect();
            for trace in &traces {
                let smaller = current.without(trace);
                if self.is_bad(&smaller)? {
                    current = smaller;
                    continue 'outer;
                }
            }
            return Ok(current);
        }
    }
}

impl Teacher for AutomatonTeacher {
    fn aps(&self) -> Arc<[String]> {
        self.reference.alphabet().shared_aps().clone()
    }

    fn max_arity(&self) -> usize {
        self.reference.arity()
    }

    fn member(&mut self, t: &TraceSet) -> Result<bool> {
        self.membership_queries += 1;
        self.is_bad(t)
    }

    fn equivalence(&mut self, conjecture: &Dfa) -> Result<Answer> {
        self.equivalence_queries += 1;
        let k = self.reference.arity();
        let k_l = conjecture.arity();
        if k_l > k {
            return Err(Error::ArityTooLarge {
                conjecture: k_l,
                quantifiers: k,
            });
        }
        let p = self.closed_reference(k)?.clone();
        let target = restrict_arity(&p, k_l)?;
        if let Inclusion::Fails(w) = language_subset(conjecture, &target)? {
            return Ok(Answer::Counterexample(Counterexample::Negative(w)));
        }
        let cover = tighten(&permuted_projection(conjecture, k)?);
        if let Some(lasso) = covering_check(&p, &cover)?.witness {
            let prefix = accepted_prefix(&p, &lasso)?;
            let t = self.shrink(unzip(p.alphabet(), &prefix))?;
            return Ok(Answer::Counterexample(Counterexample::Positive(t)));
        }
        if let Inclusion::Fails(w) = language_subset(&target, conjecture)? {
            return Ok(Answer::Counterexample(Counterexample::Positive(unzip(conjecture.alphabet(), &w))));
        }
        Ok(Answer::Equivalent)
    }
}
