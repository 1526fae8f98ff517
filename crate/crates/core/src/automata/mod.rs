//! Finite automata over explicit product alphabets.
//!
//! Every [`Dfa`] is total: each state has exactly one successor per letter of
//! the universe. Letters are addressed by their canonical index (see
//! [`Alphabet`]), so exploration in index order is exploration in canonical
//! letter order.

mod io;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::alphabet::{Alphabet, Word};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    initial: usize,
    accepting: Vec<bool>,
    /// `delta[q * |Σ| + letter]`
    delta: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    initial: usize,
    accepting: Vec<bool>,
    /// `delta[q * |Σ| + letter]`, sorted and deduplicated
    delta: Vec<Vec<usize>>,
    all_accepting: bool,
}

/// How a product state's acceptance derives from its two components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combine {
    Intersection,
    Union,
    Difference,
}

impl Combine {
    fn apply(self, a: bool, b: bool) -> bool {
        match self {
            Combine::Intersection => a && b,
            Combine::Union => a || b,
            Combine::Difference => a && !b,
        }
    }
}

/// A reachable synchronous product together with the originating state pair
/// of every product state.
#[derive(Debug, Clone)]
pub struct Product {
    pub dfa: Dfa,
    pub pairs: Vec<(usize, usize)>,
}

/// Outcome of an inclusion-style check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inclusion {
    Holds,
    Fails(Word),
}

impl Inclusion {
    pub fn holds(&self) -> bool {
        matches!(self, Inclusion::Holds)
    }

    pub fn witness(&self) -> Option<&Word> {
        match self {
            Inclusion::Holds => None,
            Inclusion::Fails(w) => Some(w),
        }
    }
}

pub(crate) fn check_same_alphabet(a: &Alphabet, b: &Alphabet) -> Result<()> {
    if a.arity() != b.arity() {
        return Err(Error::ArityMismatch {
            expected: a.arity(),
            got: b.arity(),
        });
    }
    if !a.same_signature(b) {
        return Err(Error::AlphabetMismatch(format!(
            "propositions {:?} vs {:?}",
            a.aps(),
            b.aps()
        )));
    }
    Ok(())
}

impl Dfa {
    /// Builds a DFA from a dense transition table. Fails unless the table is
    /// total and every target is a valid state.
    pub fn new(
        alphabet: Alphabet,
        initial: usize,
        accepting: Vec<bool>,
        delta: Vec<usize>,
    ) -> Result<Self> {
        let n = accepting.len();
        if n == 0 || initial >= n {
            return Err(Error::Format("automaton needs a valid initial state".into()));
        }
        if delta.len() != n * alphabet.size() {
            return Err(Error::Format(format!(
                "transition table has {} entries, expected {}",
                delta.len(),
                n * alphabet.size()
            )));
        }
        if let Some(bad) = delta.iter().find(|&&t| t >= n) {
            return Err(Error::Format(format!("transition to unknown state {bad}")));
        }
        Ok(Dfa {
            alphabet,
            initial,
            accepting,
            delta,
        })
    }

    pub fn from_fn(
        alphabet: Alphabet,
        states: usize,
        initial: usize,
        accepting: Vec<bool>,
        step: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let size = alphabet.size();
        let delta = (0..states)
            .flat_map(|q| (0..size).map(move |l| (q, l)))
            .map(|(q, l)| step(q, l))
            .collect();
        Dfa::new(alphabet, initial, accepting, delta)
    }

    /// Builds a DFA from an edge list; letters without an edge lead to a fresh
    /// non-accepting dead state, which is only added when needed.
    pub fn from_partial(
        alphabet: Alphabet,
        states: usize,
        initial: usize,
        accepting: &[usize],
        edges: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self> {
        let size = alphabet.size();
        let mut table: Vec<Option<usize>> = vec![None; states * size];
        for (from, letter, to) in edges {
            if from >= states || to >= states || letter >= size {
                return Err(Error::Format(format!("bad edge {from} -{letter}-> {to}")));
            }
            match table[from * size + letter] {
                Some(prev) if prev != to => {
                    return Err(Error::Format(format!(
                        "state {from} has two successors on letter {}",
                        alphabet.format_letter(&alphabet.letter(letter))
                    )))
                }
                _ => table[from * size + letter] = Some(to),
            }
        }
        let needs_dead = table.iter().any(Option::is_none);
        let total = if needs_dead { states + 1 } else { states };
        let mut acc = vec![false; total];
        for &q in accepting {
            if q >= states {
                return Err(Error::Format(format!("accepting state {q} out of range")));
            }
            acc[q] = true;
        }
        let mut delta: Vec<usize> = table.into_iter().map(|t| t.unwrap_or(states)).collect();
        if needs_dead {
            delta.extend(std::iter::repeat(states).take(size));
        }
        Dfa::new(alphabet, initial, acc, delta)
    }

    /// The one-state automaton accepting everything (or nothing).
    pub fn universal(alphabet: Alphabet, accepting: bool) -> Self {
        let size = alphabet.size();
        Dfa {
            alphabet,
            initial: 0,
            accepting: vec![accepting],
            delta: vec![0; size],
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn arity(&self) -> usize {
        self.alphabet.arity()
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting_mask(&self) -> &[bool] {
        &self.accepting
    }

    pub fn accepting_states(&self) -> BTreeSet<usize> {
        (0..self.num_states()).filter(|&q| self.accepting[q]).collect()
    }

    pub fn next(&self, q: usize, letter: usize) -> usize {
        self.delta[q * self.alphabet.size() + letter]
    }

    pub(crate) fn row(&self, q: usize) -> &[usize] {
        let size = self.alphabet.size();
        &self.delta[q * size..(q + 1) * size]
    }

    /// Same structure, new accepting set.
    pub fn with_accepting(&self, accepting: Vec<bool>) -> Dfa {
        assert_eq!(accepting.len(), self.num_states());
        Dfa {
            accepting,
            ..self.clone()
        }
    }

    pub fn run(&self, word: &Word) -> Result<usize> {
        let letters = self.alphabet.word_indices(word)?;
        Ok(self.run_indices(&letters))
    }

    pub fn run_indices(&self, letters: &[usize]) -> usize {
        letters.iter().fold(self.initial, |q, &l| self.next(q, l))
    }

    pub fn accepts(&self, word: &Word) -> Result<bool> {
        Ok(self.accepting[self.run(word)?])
    }

    pub fn accepts_indices(&self, letters: &[usize]) -> bool {
        self.accepting[self.run_indices(letters)]
    }

    pub fn complement(&self) -> Dfa {
        self.with_accepting(self.accepting.iter().map(|a| !a).collect())
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        seen[self.initial] = true;
        let mut stack = vec![self.initial];
        while let Some(q) = stack.pop() {
            for &t in self.row(q) {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// Reachable part, states renumbered in BFS order from the initial state
    /// with letters explored in canonical order.
    pub fn canonical(&self) -> Dfa {
        let size = self.alphabet.size();
        let mut id: Vec<Option<usize>> = vec![None; self.num_states()];
        let mut order = vec![self.initial];
        id[self.initial] = Some(0);
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for &t in self.row(q) {
                if id[t].is_none() {
                    id[t] = Some(order.len());
                    order.push(t);
                }
            }
            i += 1;
        }
        let mut delta = Vec::with_capacity(order.len() * size);
        for &q in &order {
            delta.extend(self.row(q).iter().map(|&t| id[t].unwrap()));
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            initial: 0,
            accepting: order.iter().map(|&q| self.accepting[q]).collect(),
            delta,
        }
    }

    /// Structural equality of the canonical (reachable, BFS-numbered) forms.
    pub fn is_isomorphic(&self, other: &Dfa) -> bool {
        self.alphabet == other.alphabet && self.canonical() == other.canonical()
    }

    /// Moore-style partition refinement on the reachable part. The result is
    /// the unique minimal DFA, numbered canonically.
    pub fn minimize(&self) -> Dfa {
        let dfa = self.canonical();
        let n = dfa.num_states();
        let size = dfa.alphabet.size();
        let mut class: Vec<usize> = dfa.accepting.iter().map(|&a| a as usize).collect();
        let mut classes = {
            let mut distinct: Vec<usize> = class.clone();
            distinct.sort_unstable();
            distinct.dedup();
            distinct.len()
        };
        loop {
            let mut sigs: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut next_class = vec![0; n];
            for q in 0..n {
                let sig = (class[q], dfa.row(q).iter().map(|&t| class[t]).collect());
                let fresh = sigs.len();
                next_class[q] = *sigs.entry(sig).or_insert(fresh);
            }
            let count = sigs.len();
            class = next_class;
            if count == classes {
                break;
            }
            classes = count;
        }
        let mut accepting = vec![false; classes];
        let mut delta = vec![0; classes * size];
        for q in 0..n {
            let c = class[q];
            accepting[c] = dfa.accepting[q];
            for (l, &t) in dfa.row(q).iter().enumerate() {
                delta[c * size + l] = class[t];
            }
        }
        Dfa {
            alphabet: dfa.alphabet.clone(),
            initial: class[dfa.initial],
            accepting,
            delta,
        }
        .canonical()
    }

    /// BFS for a shortest accepted word; among equally short words the
    /// canonically smallest one is returned.
    pub fn shortest_accepted(&self) -> Option<Word> {
        let path = self.shortest_path_to(|q| self.accepting[q], |_| true, self.initial)?;
        Some(self.alphabet.word_from_indices(&path))
    }

    /// Shortest (canonically least) letter sequence from `start` to a state
    /// satisfying `goal`, moving only through states satisfying `allowed`.
    pub(crate) fn shortest_path_to(
        &self,
        goal: impl Fn(usize) -> bool,
        allowed: impl Fn(usize) -> bool,
        start: usize,
    ) -> Option<Vec<usize>> {
        if goal(start) {
            return Some(Vec::new());
        }
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.num_states()];
        let mut seen = vec![false; self.num_states()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(q) = queue.pop_front() {
            for (l, &t) in self.row(q).iter().enumerate() {
                if seen[t] || !allowed(t) {
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
                    return Some(path);
                }
                queue.push_back(t);
            }
        }
        None
    }

    pub fn is_empty(&self) -> bool {
        let reach = self.reachable();
        !(0..self.num_states()).any(|q| reach[q] && self.accepting[q])
    }

    /// States of `allowed` from which some infinite path stays inside
    /// `allowed` forever (greatest fixpoint).
    pub fn live_states(&self, allowed: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut mask = vec![false; self.num_states()];
        for &q in allowed {
            mask[q] = true;
        }
        let live = self.live_mask(&mask);
        (0..self.num_states()).filter(|&q| live[q]).collect()
    }

    pub(crate) fn live_mask(&self, allowed: &[bool]) -> Vec<bool> {
        let n = self.num_states();
        let mut alive = allowed.to_vec();
        let mut succ_count = vec![0usize; n];
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for q in 0..n {
            if !alive[q] {
                continue;
            }
            let mut targets: Vec<usize> = self.row(q).to_vec();
            targets.sort_unstable();
            targets.dedup();
            for t in targets {
                if alive[t] {
                    succ_count[q] += 1;
                    preds[t].push(q);
                }
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&q| alive[q] && succ_count[q] == 0).collect();
        for &q in &stack {
            alive[q] = false;
        }
        while let Some(q) = stack.pop() {
            for &p in &preds[q] {
                if alive[p] {
                    succ_count[p] -= 1;
                    if succ_count[p] == 0 {
                        alive[p] = false;
                        stack.push(p);
                    }
                }
            }
        }
        alive
    }

    /// Transition labels grouped per (source, target), letters in canonical
    /// order. Used by the text and DOT writers.
    pub fn grouped_edges(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut edges: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for q in 0..self.num_states() {
            for (l, &t) in self.row(q).iter().enumerate() {
                edges.entry((q, t)).or_default().push(l);
            }
        }
        edges
    }
}

/// Reachable synchronous product of two DFAs over the same alphabet.
pub fn product(a: &Dfa, b: &Dfa, combine: Combine) -> Result<Product> {
    check_same_alphabet(&a.alphabet, &b.alphabet)?;
    let size = a.alphabet.size();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs = vec![(a.initial, b.initial)];
    index.insert(pairs[0], 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        for l in 0..size {
            let t = (a.next(p, l), b.next(q, l));
            let fresh = pairs.len();
            let id = *index.entry(t).or_insert(fresh);
            if id == fresh {
                pairs.push(t);
            }
            delta.push(id);
        }
        i += 1;
    }
    let accepting = pairs
        .iter()
        .map(|&(p, q)| combine.apply(a.accepting[p], b.accepting[q]))
        .collect();
    Ok(Product {
        dfa: Dfa {
            alphabet: a.alphabet.clone(),
            initial: 0,
            accepting,
            delta,
        },
        pairs,
    })
}

/// Checks `L(a) ⊆ L(b)`, returning a shortest word of `L(a) \ L(b)` on failure.
pub fn language_subset(a: &Dfa, b: &Dfa) -> Result<Inclusion> {
    let diff = product(a, b, Combine::Difference)?;
    Ok(match diff.dfa.shortest_accepted() {
        None => Inclusion::Holds,
        Some(w) => Inclusion::Fails(w),
    })
}

pub fn language_equal(a: &Dfa, b: &Dfa) -> Result<bool> {
    Ok(language_subset(a, b)?.holds() && language_subset(b, a)?.holds())
}

impl Nfa {
    pub fn new(
        alphabet: Alphabet,
        initial: usize,
        accepting: Vec<bool>,
        delta: Vec<Vec<usize>>,
        all_accepting: bool,
    ) -> Result<Self> {
        let n = accepting.len();
        if n == 0 || initial >= n {
            return Err(Error::Format("automaton needs a valid initial state".into()));
        }
        if delta.len() != n * alphabet.size() {
            return Err(Error::Format("transition relation has the wrong shape".into()));
        }
        if all_accepting && accepting.iter().any(|a| !a) {
            return Err(Error::Format(
                "safety automaton must accept in every state".into(),
            ));
        }
        let mut delta = delta;
        for targets in &mut delta {
            targets.sort_unstable();
            targets.dedup();
            if targets.iter().any(|&t| t >= n) {
                return Err(Error::Format("transition to unknown state".into()));
            }
        }
        Ok(Nfa {
            alphabet,
            initial,
            accepting,
            delta,
            all_accepting,
        })
    }

    pub fn from_dfa(dfa: &Dfa) -> Nfa {
        Nfa {
            alphabet: dfa.alphabet.clone(),
            initial: dfa.initial,
            accepting: dfa.accepting.clone(),
            delta: dfa.delta.iter().map(|&t| vec![t]).collect(),
            all_accepting: dfa.accepting.iter().all(|&a| a),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn all_accepting(&self) -> bool {
        self.all_accepting
    }

    pub fn successors(&self, q: usize, letter: usize) -> &[usize] {
        &self.delta[q * self.alphabet.size() + letter]
    }

    pub fn accepts(&self, word: &Word) -> Result<bool> {
        let letters = self.alphabet.word_indices(word)?;
        let mut current = vec![self.initial];
        for l in letters {
            let mut next: Vec<usize> = current
                .iter()
                .flat_map(|&q| self.successors(q, l).iter().copied())
                .collect();
            next.sort_unstable();
            next.dedup();
            current = next;
        }
        Ok(current.iter().any(|&q| self.accepting[q]))
    }

    /// Subset construction over reachable subsets. The empty subset, when
    /// reachable, becomes an explicit non-accepting dead state.
    pub fn determinize(&self) -> Dfa {
        self.determinize_with_subsets().0
    }

    /// Like [`Nfa::determinize`], also returning the NFA subset behind each
    /// DFA state.
    pub fn determinize_with_subsets(&self) -> (Dfa, Vec<Vec<usize>>) {
        let size = self.alphabet.size();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut subsets = vec![vec![self.initial]];
        index.insert(subsets[0].clone(), 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < subsets.len() {
            for l in 0..size {
                let mut next: Vec<usize> = subsets[i]
                    .iter()
                    .flat_map(|&q| self.successors(q, l).iter().copied())
                    .collect();
                next.sort_unstable();
                next.dedup();
                let fresh = subsets.len();
                let id = *index.entry(next.clone()).or_insert(fresh);
                if id == fresh {
                    subsets.push(next);
                }
                delta.push(id);
            }
            i += 1;
        }
        let accepting = subsets
            .iter()
            .map(|s| s.iter().any(|&q| self.accepting[q]))
            .collect();
        (
            Dfa {
                alphabet: self.alphabet.clone(),
                initial: 0,
                accepting,
                delta,
            },
            subsets,
        )
    }
}
