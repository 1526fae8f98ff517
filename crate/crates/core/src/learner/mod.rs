//! Active learning of bad-prefix automata with arity escalation.

mod table;
mod teachers;

use std::sync::Arc;

pub use table::{Closedness, Consistency, ObservationTable, Oracle};
pub use teachers::AutomatonTeacher;

pub use crate::hyperltl::Counterexample;

use crate::alphabet::{Alphabet, Word};
use crate::automata::Dfa;
use crate::constructions::{is_permutation_complete, Completeness};
use crate::error::{Error, Result};
use crate::repr::{all_representations, canonical_representation, extend_word, unzip, TraceSet};

/// Answer to an equivalence query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Equivalent,
    Counterexample(Counterexample),
}

/// Membership and equivalence oracle for the learner.
pub trait Teacher {
    fn aps(&self) -> Arc<[String]>;

    /// Largest arity a conjecture may have.
    fn max_arity(&self) -> usize;

    fn member(&mut self, t: &TraceSet) -> Result<bool>;

    fn equivalence(&mut self, conjecture: &Dfa) -> Result<Answer>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LearnConfig {
    pub max_rounds: usize,
    /// Defaults to the teacher's own bound when `None`.
    pub max_arity: Option<usize>,
}

impl Default for LearnConfig {
    fn default() -> Self {
        LearnConfig {
            max_rounds: 200,
            max_arity: None,
        }
    }
}

/// How a round ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Negative(Word),
    Positive(TraceSet),
    /// The hypothesis passed the teacher but was not closed under a
    /// component map; the witness word was fed back.
    NotComplete(Word),
    Accepted,
}

/// One hypothesis and what happened to it.
#[derive(Debug, Clone)]
pub struct Round {
    pub arity: usize,
    pub rows: usize,
    pub hypothesis: Dfa,
    pub outcome: Outcome,
}

#[derive(Debug, Clone)]
pub struct LearnReport {
    pub automaton: Dfa,
    pub arity: usize,
    pub membership_queries: usize,
    pub equivalence_queries: usize,
    pub arity_extensions: usize,
    pub permutation_counterexamples: usize,
    pub rounds: Vec<Round>,
}

impl LearnReport {
    pub fn hypothesis_sizes(&self) -> Vec<usize> {
        self.rounds.iter().map(|r| r.hypothesis.num_states()).collect()
    }

    /// `key value` lines for the stats file.
    pub fn stats_text(&self) -> String {
        format!(
            "membership_queries {}\nequivalence_queries {}\nfinal_arity {}\nfinal_states {}\nrounds {}\n",
            self.membership_queries,
            self.equivalence_queries,
            self.arity,
            self.automaton.num_states(),
            self.rounds.len()
        )
    }
}

/// Adds a counterexample to the table, extending the arity first when a
/// positive one has more traces than the table's arity. For positive
/// counterexamples the canonical representation is used unless `current`
/// already accepts it; then the first representation it rejects is taken.
pub fn add_counterexample<T: Teacher + ?Sized>(
    table: &mut ObservationTable,
    cex: &Counterexample,
    current: Option<&Dfa>,
    oracle: &mut Oracle<'_, T>,
) -> Result<()> {
    let word = match cex {
        Counterexample::Positive(t) => {
            let mut stale = current;
            if t.len() > table.arity() {
                table.extend(t.len(), oracle)?;
                stale = None;
            }
            let k = table.arity();
            let canonical = canonical_representation(t, k)?;
            match stale {
                Some(h) if h.arity() == k && h.accepts(&canonical)? => {
                    let mut chosen = canonical;
                    for r in all_representations(t, k)? {
                        if !h.accepts(&r)? {
                            chosen = r;
                            break;
                        }
                    }
                    chosen
                }
                _ => canonical,
            }
        }
        Counterexample::Negative(w) => match w.arity() {
            Some(a) if a < table.arity() => extend_word(w, table.arity())?,
            _ => w.clone(),
        },
    };
    table.add_prefixes(&word, oracle)
}

/// Runs the learning loop from arity 1 until the teacher accepts a
/// permutation-complete hypothesis.
pub fn learn<T: Teacher + ?Sized>(teacher: &mut T, config: LearnConfig) -> Result<LearnReport> {
    let max_arity = config.max_arity.unwrap_or_else(|| teacher.max_arity());
    let alphabet = Alphabet::from_shared(teacher.aps(), 1)?;
    let mut rounds: Vec<Round> = Vec::new();
    let mut equivalence_queries = 0;
    let mut arity_extensions = 0;
    let mut permutation_counterexamples = 0;
    let mut oracle = Oracle::new(teacher);
    let mut table = ObservationTable::new(alphabet, &mut oracle)?;

    let partial = |rounds: &Vec<Round>, oracle: &Oracle<'_, T>, eq, ext, perm| LearnReport {
        automaton: rounds
            .last()
            .map(|r: &Round| r.hypothesis.clone())
            .unwrap_or_else(|| Dfa::universal(Alphabet::from_shared(oracle.teacher.aps(), 1).expect("valid"), false)),
        arity: rounds.last().map_or(1, |r| r.arity),
        membership_queries: oracle.queries(),
        equivalence_queries: eq,
        arity_extensions: ext,
        permutation_counterexamples: perm,
        rounds: rounds.clone(),
    };

    loop {
        if rounds.len() >= config.max_rounds {
            return Err(Error::BudgetExceeded {
                reason: format!("{} rounds", config.max_rounds),
                report: Box::new(partial(&rounds, &oracle, equivalence_queries, arity_extensions, permutation_counterexamples)),
            });
        }
        table.repair(&mut oracle)?;
        let hypothesis = table.hypothesis()?;
        let rows = table.distinct_rows();
        equivalence_queries += 1;
        let answer = oracle.teacher.equivalence(&hypothesis)?;
        let outcome = match answer {
            Answer::Counterexample(Counterexample::Negative(w)) => Outcome::Negative(w),
            Answer::Counterexample(Counterexample::Positive(t)) => Outcome::Positive(t),
            Answer::Equivalent => match is_permutation_complete(&hypothesis) {
                Completeness::Complete => Outcome::Accepted,
                Completeness::Witness { word, .. } => Outcome::NotComplete(word),
            },
        };
        rounds.push(Round {
            arity: table.arity(),
            rows,
            hypothesis: hypothesis.clone(),
            outcome: outcome.clone(),
        });
        let cex = match outcome {
            Outcome::Accepted => break,
            Outcome::Negative(w) => Counterexample::Negative(w),
            Outcome::Positive(t) => Counterexample::Positive(t),
            Outcome::NotComplete(w) => {
                permutation_counterexamples += 1;
                Counterexample::Positive(unzip(hypothesis.alphabet(), &w))
            }
        };
        if let Counterexample::Positive(t) = &cex {
            if t.len() > max_arity {
                return Err(Error::BudgetExceeded {
                    reason: format!("counterexample needs arity {} > {max_arity}", t.len()),
                    report: Box::new(partial(&rounds, &oracle, equivalence_queries, arity_extensions, permutation_counterexamples)),
                });
            }
            if t.len() > table.arity() {
                arity_extensions += 1;
            }
        }
        add_counterexample(&mut table, &cex, Some(&hypothesis), &mut oracle)?;
    }

    let last = rounds.last().expect("at least one round");
    Ok(LearnReport {
        automaton: last.hypothesis.minimize(),
        arity: last.arity,
        membership_queries: oracle.queries(),
        equivalence_queries,
        arity_extensions,
        permutation_counterexamples,
        rounds,
    })
}
