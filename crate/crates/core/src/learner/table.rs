use std::collections::{BTreeMap, HashMap};

use super::Teacher;
use crate::alphabet::{Alphabet, Word};
use crate::automata::Dfa;
use crate::error::{Error, Result};
use crate::repr::{extend_word, unzip, TraceSet};

type Key = Vec<usize>;

fn shortlex(a: &Key, b: &Key) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn concat(a: &[usize], b: &[usize]) -> Key {
    let mut out = a.to_vec();
    out.extend_from_slice(b);
    out
}

/// Result of the closedness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Closedness {
    Closed,
    /// A frontier word whose row matches no row of `S`.
    Open(Word),
}

/// Result of the consistency check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Consistency {
    Consistent,
    /// `s` and `t` share a row, but `s·letter·suffix` and `t·letter·suffix`
    /// are classified differently.
    Inconsistent {
        s: Word,
        t: Word,
        letter: Word,
        suffix: Word,
    },
}

/// Angluin's observation table over a product alphabet. Words are stored as
/// letter indices; `S` is kept in shortlex order, `E` in insertion order.
#[derive(Debug, Clone)]
pub struct ObservationTable {
    alphabet: Alphabet,
    s: Vec<Key>,
    e: Vec<Key>,
    cells: HashMap<Key, bool>,
}

impl ObservationTable {
    /// `S = E = {ε}` with its frontier filled in.
    pub fn new<T: Teacher + ?Sized>(alphabet: Alphabet, teacher: &mut Oracle<'_, T>) -> Result<Self> {
        let mut table = ObservationTable {
            alphabet,
            s: vec![vec![]],
            e: vec![vec![]],
            cells: HashMap::new(),
        };
        table.fill(teacher)?;
        Ok(table)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn arity(&self) -> usize {
        self.alphabet.arity()
    }

    pub fn access_words(&self) -> Vec<Word> {
        self.s.iter().map(|w| self.alphabet.word_from_indices(w)).collect()
    }

    pub fn suffixes(&self) -> Vec<Word> {
        self.e.iter().map(|w| self.alphabet.word_from_indices(w)).collect()
    }

    fn frontier(&self) -> impl Iterator<Item = Key> + '_ {
        self.s
            .iter()
            .flat_map(move |s| (0..self.alphabet.size()).map(move |l| concat(s, &[l])))
    }

    fn fill<T: Teacher + ?Sized>(&mut self, teacher: &mut Oracle<'_, T>) -> Result<()> {
        let rows: Vec<Key> = self.s.iter().cloned().chain(self.frontier()).collect();
        for r in &rows {
            for e in &self.e {
                let w = concat(r, e);
                if !self.cells.contains_key(&w) {
                    let v = teacher.member(&self.alphabet, &w)?;
                    self.cells.insert(w, v);
                }
            }
        }
        Ok(())
    }

    fn row_of(&self, t: &[usize]) -> Option<Vec<bool>> {
        self.e
            .iter()
            .map(|e| self.cells.get(&concat(t, e)).copied())
            .collect()
    }

    /// The row of `t`, a word of `S ∪ S·Σ`, as a bitvector in `E` order.
    pub fn row(&self, t: &Word) -> Result<Vec<bool>> {
        let key = self.alphabet.word_indices(t)?;
        let known = self.s.contains(&key)
            || key
                .split_last()
                .is_some_and(|(_, prefix)| self.s.iter().any(|s| s.as_slice() == prefix));
        if !known {
            return Err(Error::UnknownWord);
        }
        self.row_of(&key).ok_or(Error::UnknownWord)
    }

    /// The stored value of `s·e`.
    pub fn value(&self, s: &Word, e: &Word) -> Result<bool> {
        let key = concat(&self.alphabet.word_indices(s)?, &self.alphabet.word_indices(e)?);
        self.cells.get(&key).copied().ok_or(Error::UnknownWord)
    }

    /// Every filled cell as `(row word, suffix, value)`.
    pub fn entries(&self) -> Vec<(Word, Word, bool)> {
        let mut out = Vec::new();
        for r in self.s.iter().cloned().chain(self.frontier()) {
            for e in &self.e {
                let v = self.cells[&concat(&r, e)];
                out.push((
                    self.alphabet.word_from_indices(&r),
                    self.alphabet.word_from_indices(e),
                    v,
                ));
            }
        }
        out
    }

    /// Number of distinct rows among `S`.
    pub fn distinct_rows(&self) -> usize {
        let rows: std::collections::BTreeSet<Vec<bool>> =
            self.s.iter().map(|s| self.row_of(s).expect("filled")).collect();
        rows.len()
    }

    pub fn check_closed(&self) -> Closedness {
        let rows: std::collections::BTreeSet<Vec<bool>> =
            self.s.iter().map(|s| self.row_of(s).expect("filled")).collect();
        for t in self.frontier() {
            if !rows.contains(&self.row_of(&t).expect("filled")) {
                return Closedness::Open(self.alphabet.word_from_indices(&t));
            }
        }
        Closedness::Closed
    }

    pub fn check_consistent(&self) -> Consistency {
        for (i, s) in self.s.iter().enumerate() {
            let rs = self.row_of(s).expect("filled");
            for t in &self.s[i + 1..] {
                if self.row_of(t).expect("filled") != rs {
                    continue;
                }
                for l in 0..self.alphabet.size() {
                    for e in &self.e {
                        let a = self.cells[&concat(&concat(s, &[l]), e)];
                        let b = self.cells[&concat(&concat(t, &[l]), e)];
                        if a != b {
                            let sigma = &self.alphabet;
                            return Consistency::Inconsistent {
                                s: sigma.word_from_indices(s),
                                t: sigma.word_from_indices(t),
                                letter: sigma.word_from_indices(&[l]),
                                suffix: sigma.word_from_indices(e),
                            };
                        }
                    }
                }
            }
        }
        Consistency::Consistent
    }

    fn add_access(&mut self, w: Key) {
        if let Err(pos) = self.s.binary_search_by(|x| shortlex(x, &w)) {
            self.s.insert(pos, w);
        }
    }

    /// Adds `w` and all its prefixes to `S`.
    pub fn add_prefixes<T: Teacher + ?Sized>(&mut self, w: &Word, teacher: &mut Oracle<'_, T>) -> Result<()> {
        let key = self.alphabet.word_indices(w)?;
        for i in 0..=key.len() {
            self.add_access(key[..i].to_vec());
        }
        self.fill(teacher)
    }

    /// Makes the table closed and consistent.
    pub fn repair<T: Teacher + ?Sized>(&mut self, teacher: &mut Oracle<'_, T>) -> Result<()> {
        loop {
            let before = self.distinct_rows();
            if let Closedness::Open(t) = self.check_closed() {
                let key = self.alphabet.word_indices(&t)?;
                self.add_access(key);
            } else if let Consistency::Inconsistent { letter, suffix, .. } = self.check_consistent() {
                let e = letter.concat(&suffix);
                self.e.push(self.alphabet.word_indices(&e)?);
            } else {
                return Ok(());
            }
            self.fill(teacher)?;
            debug_assert!(self.distinct_rows() > before);
        }
    }

    /// The quotient automaton of the rows of `S`.
    pub fn hypothesis(&self) -> Result<Dfa> {
        if self.check_closed() != Closedness::Closed || self.check_consistent() != Consistency::Consistent {
            return Err(Error::TableNotReady);
        }
        let mut states: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
        let mut reps: Vec<&Key> = Vec::new();
        for s in &self.s {
            let r = self.row_of(s).expect("filled");
            if !states.contains_key(&r) {
                states.insert(r, reps.len());
                reps.push(s);
            }
        }
        let accepting = reps.iter().map(|s| self.cells[*s]).collect();
        let initial = states[&self.row_of(&[]).expect("filled")];
        let dfa = Dfa::from_fn(self.alphabet.clone(), reps.len(), initial, accepting, |q, l| {
            states[&self.row_of(&concat(reps[q], &[l])).expect("filled")]
        })?;
        Ok(dfa.canonical())
    }

    /// Lifts every word to arity `target` by repeating the last component,
    /// keeps the values of lifted cells and queries the new frontier.
    pub fn extend<T: Teacher + ?Sized>(&mut self, target: usize, teacher: &mut Oracle<'_, T>) -> Result<()> {
        if target <= self.arity() {
            return Err(Error::BadArity {
                arity: self.arity(),
                target,
            });
        }
        let wide = self.alphabet.with_arity(target)?;
        let lift = |key: &Key| -> Result<Key> {
            let w = extend_word(&self.alphabet.word_from_indices(key), target)?;
            wide.word_indices(&w)
        };
        let s = self.s.iter().map(&lift).collect::<Result<Vec<_>>>()?;
        let e = self.e.iter().map(&lift).collect::<Result<Vec<_>>>()?;
        let mut cells = HashMap::with_capacity(self.cells.len());
        for (k, &v) in &self.cells {
            cells.insert(lift(k)?, v);
        }
        self.alphabet = wide;
        self.s = s;
        self.s.sort_by(shortlex);
        self.e = e;
        self.cells = cells;
        self.fill(teacher)
    }
}

/// Membership front end: asks the teacher about `unzip(w)`, remembering
/// answers per trace set.
pub struct Oracle<'a, T: Teacher + ?Sized> {
    pub(crate) teacher: &'a mut T,
    memo: HashMap<TraceSet, bool>,
    pub(crate) queries: usize,
}

impl<'a, T: Teacher + ?Sized> Oracle<'a, T> {
    pub fn new(teacher: &'a mut T) -> Self {
        Oracle {
            teacher,
            memo: HashMap::new(),
            queries: 0,
        }
    }

    pub fn queries(&self) -> usize {
        self.queries
    }

    pub fn teacher_mut(&mut self) -> &mut T {
        self.teacher
    }

    pub fn member(&mut self, sigma: &Alphabet, w: &[usize]) -> Result<bool> {
        let t = unzip(sigma, &sigma.word_from_indices(w));
        if let Some(&v) = self.memo.get(&t) {
            return Ok(v);
        }
        self.queries += 1;
        let v = self.teacher.member(&t)?;
        self.memo.insert(t, v);
        Ok(v)
    }
}
