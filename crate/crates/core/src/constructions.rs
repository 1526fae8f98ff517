//! Transformations of bad-prefix automata: tightening, permutation
//! completion and permuted projections, plus the permutation-completeness
//! check.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::automata::{language_subset, Dfa, Inclusion};
use crate::error::{Error, Result};
use crate::repr::{permuted_copy, projection_table, PermutationMap};

/// Size statistics of a product construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionReport {
    pub input_states: usize,
    pub output_states: usize,
    pub copies: usize,
    pub elapsed: Duration,
}

/// Replaces the accepting set by the states from which every infinite path
/// visits an accepting state (the current position included).
pub fn tighten(a: &Dfa) -> Dfa {
    let rejecting: Vec<bool> = a.accepting_mask().iter().map(|&f| !f).collect();
    let escape = a.live_mask(&rejecting);
    a.with_accepting(escape.into_iter().map(|e| !e).collect())
}

/// Reachable product of one copy of `a` per map; copy `i` reads a letter of
/// arity `target` through map `i`. A product state accepts iff some
/// component accepts.
fn union_of_projections(a: &Dfa, maps: &[PermutationMap], target: usize) -> Result<Dfa> {
    let wide = a.alphabet().with_arity(target)?;
    let tables: Vec<Vec<usize>> = maps
        .iter()
        .map(|m| projection_table(&wide, a.alphabet(), m.as_slice()))
        .collect();
    let size = wide.size();
    let start = vec![a.initial(); maps.len()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    index.insert(start.clone(), 0);
    let mut states = vec![start];
    let mut delta = Vec::new();
    let mut i = 0;
    while i < states.len() {
        for l in 0..size {
            let next: Vec<usize> = states[i]
                .iter()
                .zip(&tables)
                .map(|(&q, table)| a.next(q, table[l]))
                .collect();
            let fresh = states.len();
            let id = *index.entry(next.clone()).or_insert(fresh);
            if id == fresh {
                states.push(next);
            }
            delta.push(id);
        }
        i += 1;
    }
    let accepting = states
        .iter()
        .map(|s| s.iter().any(|&q| a.is_accepting(q)))
        .collect();
    Dfa::new(wide, 0, accepting, delta)
}

/// Product of all `k^k` permuted copies of `a`, accepting when any copy
/// accepts, then tightened.
pub fn permutation_complete(a: &Dfa) -> Dfa {
    permutation_complete_with_report(a).0
}

pub fn permutation_complete_with_report(a: &Dfa) -> (Dfa, ConstructionReport) {
    let started = Instant::now();
    let k = a.arity();
    let maps: Vec<PermutationMap> = PermutationMap::all(k, k).collect();
    let product = union_of_projections(a, &maps, k).expect("same alphabet");
    let out = tighten(&product);
    let report = ConstructionReport {
        input_states: a.num_states(),
        output_states: out.num_states(),
        copies: maps.len(),
        elapsed: started.elapsed(),
    };
    (out, report)
}

/// Arity-`target` automaton accepting `w` iff some projection of `w` through
/// a map `{1..k} → {1..target}` is accepted by `a`.
pub fn permuted_projection(a: &Dfa, target: usize) -> Result<Dfa> {
    Ok(permuted_projection_with_report(a, target)?.0)
}

pub fn permuted_projection_with_report(a: &Dfa, target: usize) -> Result<(Dfa, ConstructionReport)> {
    let started = Instant::now();
    let k = a.arity();
    if target < k {
        return Err(Error::BadArity { arity: k, target });
    }
    let maps: Vec<PermutationMap> = PermutationMap::all(k, target).collect();
    let out = union_of_projections(a, &maps, target)?;
    let report = ConstructionReport {
        input_states: a.num_states(),
        output_states: out.num_states(),
        copies: maps.len(),
        elapsed: started.elapsed(),
    };
    Ok((out, report))
}

/// Outcome of the permutation-completeness check; on failure, the map whose
/// copy is not included and a shortest word accepted by that copy but not by
/// the automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Completeness {
    Complete,
    Witness {
        map: PermutationMap,
        word: crate::alphabet::Word,
    },
}

/// Checks `L(A^ς) ⊆ L(A)` for every map `ς` in canonical order.
pub fn is_permutation_complete(a: &Dfa) -> Completeness {
    let k = a.arity();
    for map in PermutationMap::all(k, k) {
        let copy = permuted_copy(a, &map).expect("map matches arity");
        if let Inclusion::Fails(word) = language_subset(&copy, a).expect("same alphabet") {
            return Completeness::Witness { map, word };
        }
    }
    Completeness::Complete
}
