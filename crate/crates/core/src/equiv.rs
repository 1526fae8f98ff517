//! Representation-equivalence of bad-prefix automata across arities.
//!
//! The building block is [`covering_check`]: does every infinite word that
//! has a prefix accepted by the producer also have a prefix accepted by the
//! coverer? Failures come with a lasso witness `stem · cycle^ω`.

use std::collections::VecDeque;

use crate::alphabet::{Alphabet, Word};
use crate::automata::{product, Combine, Dfa};
use crate::constructions::{permutation_complete, permuted_projection, tighten};
use crate::error::{Error, Result};
use crate::repr::{lift_automaton, unzip, TraceSet};

/// A lasso `prefix · cycle^ω` whose prefix is accepted by the producer while
/// the coverer accepts no prefix of the whole infinite word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub prefix: Word,
    pub cycle: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringVerdict {
    pub ok: bool,
    pub witness: Option<Lasso>,
}

impl CoveringVerdict {
    fn covered() -> Self {
        CoveringVerdict {
            ok: true,
            witness: None,
        }
    }
}

/// BFS path inside `allowed` from `start` to the first state meeting `goal`.
fn bfs_path(
    dfa: &Dfa,
    start: usize,
    allowed: &[bool],
    goal: impl Fn(usize) -> bool,
) -> Option<(usize, Vec<usize>)> {
    if goal(start) {
        return Some((start, Vec::new()));
    }
    let n = dfa.num_states();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(q) = queue.pop_front() {
        for l in 0..dfa.alphabet().size() {
            let t = dfa.next(q, l);
            if seen[t] || !allowed[t] {
                continue;
            }
            seen[t] = true;
            parent[t] = Some((q, l));
            if goal(t) {
                let mut path = Vec::new();
                let mut cur = t;
                while let Some((p, l)) = parent[cur] {
                    path.push(l);
                    cur = p;
                }
                path.reverse();
                return Some((t, path));
            }
            queue.push_back(t);
        }
    }
    None
}

/// Shortest nonempty cycle through `q` inside `allowed`.
fn shortest_cycle(dfa: &Dfa, q: usize, allowed: &[bool]) -> Option<Vec<usize>> {
    let mut best: Option<Vec<usize>> = None;
    for l in 0..dfa.alphabet().size() {
        let t = dfa.next(q, l);
        if !allowed[t] {
            continue;
        }
        if let Some((_, rest)) = bfs_path(dfa, t, allowed, |s| s == q) {
            if best.as_ref().is_none_or(|b| rest.len() + 1 < b.len()) {
                let mut cycle = vec![l];
                cycle.extend(rest);
                best = Some(cycle);
            }
        }
    }
    best
}

/// Decides whether `coverer` covers every infinite extension of every word
/// accepted by `producer`.
pub fn covering_check(producer: &Dfa, coverer: &Dfa) -> Result<CoveringVerdict> {
    let prod = product(producer, coverer, Combine::Intersection)?;
    let dfa = &prod.dfa;
    let restricted: Vec<bool> = prod.pairs.iter().map(|&(_, c)| !coverer.is_accepting(c)).collect();
    if !restricted[dfa.initial()] {
        return Ok(CoveringVerdict::covered());
    }
    let live = dfa.live_mask(&restricted);
    let bad = |s: usize| live[s] && producer.is_accepting(prod.pairs[s].0);
    let Some((end, stem)) = bfs_path(dfa, dfa.initial(), &restricted, bad) else {
        return Ok(CoveringVerdict::covered());
    };
    // walk inside the live region to the first state that sits on a cycle
    let on_cycle = |s: usize| shortest_cycle(dfa, s, &live).is_some();
    let (loop_state, approach) =
        bfs_path(dfa, end, &live, on_cycle).expect("live states reach a cycle");
    let cycle = shortest_cycle(dfa, loop_state, &live).expect("state lies on a cycle");
    let mut prefix = stem;
    prefix.extend(approach);
    let sigma = dfa.alphabet();
    Ok(CoveringVerdict {
        ok: false,
        witness: Some(Lasso {
            prefix: sigma.word_from_indices(&prefix),
            cycle: sigma.word_from_indices(&cycle),
        }),
    })
}

/// Which side of the equivalence failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// The smaller-arity automaton represents a bad prefix the other misses.
    First,
    /// The larger-arity automaton represents a bad prefix the other misses.
    Second,
}

impl Direction {
    pub fn number(self) -> u8 {
        match self {
            Direction::First => 1,
            Direction::Second => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    Violation {
        direction: Direction,
        witness: TraceSet,
    },
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }
}

/// Unzip of the shortest prefix of `lasso.prefix` accepted by `producer`.
pub(crate) fn accepted_prefix(producer: &Dfa, lasso: &Lasso) -> Result<Word> {
    let sigma = producer.alphabet();
    let letters = sigma.word_indices(&lasso.prefix)?;
    let mut q = producer.initial();
    if producer.is_accepting(q) {
        return Ok(Word::default());
    }
    for (i, &l) in letters.iter().enumerate() {
        q = producer.next(q, l);
        if producer.is_accepting(q) {
            return Ok(sigma.word_from_indices(&letters[..=i]));
        }
    }
    Ok(lasso.prefix.clone())
}

fn violation(producer: &Dfa, lasso: &Lasso, direction: Direction) -> Result<Equivalence> {
    let word = accepted_prefix(producer, lasso)?;
    Ok(Equivalence::Violation {
        direction,
        witness: unzip(producer.alphabet(), &word),
    })
}

/// Checks whether `a` and `b` represent the same hyperproperty. The
/// automaton of smaller arity is taken as the first one.
pub fn representation_equivalent(a: &Dfa, b: &Dfa) -> Result<Equivalence> {
    if !a.alphabet().same_signature(b.alphabet()) {
        return Err(Error::AlphabetMismatch(format!(
            "propositions {:?} vs {:?}",
            a.alphabet().aps(),
            b.alphabet().aps()
        )));
    }
    let (small, large) = if a.arity() <= b.arity() { (a, b) } else { (b, a) };
    let k = large.arity();
    let lifted = if small.arity() < k {
        lift_automaton(small, k)?
    } else {
        small.clone()
    };

    let first = covering_check(&lifted, &tighten(&permutation_complete(large)))?;
    if let Some(lasso) = first.witness {
        return violation(&lifted, &lasso, Direction::First);
    }

    let producer = tighten(large);
    let second = covering_check(&producer, &tighten(&permuted_projection(small, k)?))?;
    if let Some(lasso) = second.witness {
        return violation(&producer, &lasso, Direction::Second);
    }
    Ok(Equivalence::Equivalent)
}

/// Convenience for tests and the CLI: the alphabet both automata share.
pub fn shared_alphabet(a: &Dfa, b: &Dfa) -> Option<Alphabet> {
    (a.alphabet() == b.alphabet()).then(|| a.alphabet().clone())
}
