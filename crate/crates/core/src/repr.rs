//! Trace sets and their tuple-word representations.
//!
//! A word over `Σ^k` represents the set of its `k` component traces
//! ([`unzip`]). Maps `{1..k} → {1..m}` (repetition allowed) rearrange or
//! project components; [`extend_word`] and [`lift_automaton`] duplicate the
//! last component to move to a larger arity without changing the represented
//! set.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::alphabet::{format_set, parse_set_sequence, Alphabet, Letter, Word};
use crate::automata::Dfa;
use crate::error::{Error, Result};

/// A finite trace: one AP bitmask per position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trace(pub Vec<u32>);

impl Trace {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A set of equal-length finite traces over a fixed AP signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TraceSet {
    aps: Arc<[String]>,
    traces: BTreeSet<Trace>,
}

impl TraceSet {
    pub fn new(aps: Arc<[String]>, traces: impl IntoIterator<Item = Trace>) -> Result<Self> {
        let traces: BTreeSet<Trace> = traces.into_iter().collect();
        let mut lengths = traces.iter().map(Trace::len);
        if let Some(first) = lengths.next() {
            if lengths.any(|l| l != first) {
                return Err(Error::RaggedTraces);
            }
        }
        let limit = 1u32.checked_shl(aps.len() as u32).unwrap_or(0);
        if traces.iter().flat_map(|t| t.0.iter()).any(|&m| m >= limit) {
            return Err(Error::AlphabetMismatch(
                "trace mentions an undeclared proposition".into(),
            ));
        }
        Ok(TraceSet { aps, traces })
    }

    pub fn aps(&self) -> &[String] {
        &self.aps
    }

    pub fn shared_aps(&self) -> &Arc<[String]> {
        &self.aps
    }

    pub fn traces(&self) -> impl Iterator<Item = &Trace> {
        self.traces.iter()
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    /// Common length of the traces (0 for the empty set).
    pub fn trace_len(&self) -> usize {
        self.traces.iter().next().map_or(0, Trace::len)
    }

    pub fn contains(&self, t: &Trace) -> bool {
        self.traces.contains(t)
    }

    pub fn is_subset(&self, other: &TraceSet) -> bool {
        self.traces.is_subset(&other.traces)
    }

    pub fn without(&self, t: &Trace) -> TraceSet {
        let mut traces = self.traces.clone();
        traces.remove(t);
        TraceSet {
            aps: self.aps.clone(),
            traces,
        }
    }

    pub fn format_trace(&self, t: &Trace) -> String {
        if t.is_empty() {
            return "ε".to_string();
        }
        t.0.iter().map(|&m| format_set(&self.aps, m)).collect()
    }

    /// Parses the trace-file format: one trace per line, `#` comments.
    pub fn parse(aps: Arc<[String]>, text: &str) -> Result<TraceSet> {
        let mut traces = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let t = parse_set_sequence(&aps, line)
                .map_err(|e| Error::Format(format!("line {}: {e}", i + 1)))?;
            traces.push(Trace(t));
        }
        TraceSet::new(aps, traces)
    }

    pub fn to_text(&self) -> String {
        self.traces
            .iter()
            .map(|t| format!("{}\n", self.format_trace(t)))
            .collect()
    }
}

impl fmt::Display for TraceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.traces.iter().map(|t| self.format_trace(t)).collect();
        write!(f, "{{ {} }}", parts.join(", "))
    }
}

/// A total map `{1..k} → {1..m}`, stored zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PermutationMap {
    map: Vec<usize>,
    range: usize,
}

impl PermutationMap {
    pub fn new(map: Vec<usize>, range: usize) -> Result<Self> {
        if let Some(&bad) = map.iter().find(|&&v| v >= range) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: range,
            });
        }
        Ok(PermutationMap { map, range })
    }

    pub fn identity(k: usize) -> Self {
        PermutationMap {
            map: (0..k).collect(),
            range: k,
        }
    }

    /// All maps `{1..k} → {1..m}` in mixed-radix order, component 1 fastest.
    pub fn all(k: usize, m: usize) -> impl Iterator<Item = PermutationMap> {
        let total = m.checked_pow(k as u32).expect("map family too large");
        (0..total).map(move |mut idx| {
            let mut map = Vec::with_capacity(k);
            for _ in 0..k {
                map.push(idx % m);
                idx /= m;
            }
            PermutationMap { map, range: m }
        })
    }

    /// Size of the domain.
    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn get(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn is_bijective(&self) -> bool {
        self.map.len() == self.range && self.map.iter().collect::<BTreeSet<_>>().len() == self.range
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &PermutationMap) -> Result<PermutationMap> {
        if other.range != self.len() {
            return Err(Error::ArityMismatch {
                expected: self.len(),
                got: other.range,
            });
        }
        PermutationMap::new(other.map.iter().map(|&i| self.map[i]).collect(), self.range)
    }
}

impl fmt::Display for PermutationMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .map
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{}->{}", i + 1, v + 1))
            .collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// The set of component traces of `word`; `ε` yields the set holding the
/// empty trace.
pub fn unzip(sigma: &Alphabet, word: &Word) -> TraceSet {
    let traces: BTreeSet<Trace> = (0..sigma.arity())
        .map(|i| Trace(word.0.iter().map(|l| l.0[i]).collect()))
        .collect();
    TraceSet {
        aps: sigma.shared_aps().clone(),
        traces,
    }
}

/// Zips traces (all of equal length) in the given order.
pub(crate) fn zip(traces: &[&Trace]) -> Word {
    let len = traces.first().map_or(0, |t| t.len());
    Word(
        (0..len)
            .map(|j| Letter(traces.iter().map(|t| t.0[j]).collect()))
            .collect(),
    )
}

fn check_fits(t: &TraceSet, k: usize) -> Result<()> {
    if t.is_empty() {
        return Err(Error::Format("the empty trace set has no representation".into()));
    }
    if t.len() > k {
        return Err(Error::TooManyTraces {
            traces: t.len(),
            arity: k,
        });
    }
    Ok(())
}

/// Sorted traces zipped into a word of arity `k`, the last trace repeated to
/// fill unused components.
pub fn canonical_representation(t: &TraceSet, k: usize) -> Result<Word> {
    check_fits(t, k)?;
    let sorted: Vec<&Trace> = t.traces.iter().collect();
    let last = *sorted.last().unwrap();
    let mut components = sorted.clone();
    components.resize(k, last);
    Ok(zip(&components))
}

/// Every `k`-word whose components cover exactly the traces of `t`, sorted.
pub fn all_representations(t: &TraceSet, k: usize) -> Result<Vec<Word>> {
    check_fits(t, k)?;
    let sorted: Vec<&Trace> = t.traces.iter().collect();
    let mut words: BTreeSet<Word> = BTreeSet::new();
    for p in PermutationMap::all(k, sorted.len()) {
        let used: BTreeSet<usize> = p.as_slice().iter().copied().collect();
        if used.len() != sorted.len() {
            continue;
        }
        let components: Vec<&Trace> = p.as_slice().iter().map(|&i| sorted[i]).collect();
        words.insert(zip(&components));
    }
    Ok(words.into_iter().collect())
}

/// Letter `(v1..vm)` becomes `(v_{p(1)}..v_{p(k)})`; the word's arity must be
/// the map's range.
pub fn project_word(word: &Word, p: &PermutationMap) -> Result<Word> {
    if let Some(arity) = word.arity() {
        if arity != p.range() {
            return Err(Error::ArityMismatch {
                expected: p.range(),
                got: arity,
            });
        }
    }
    Ok(Word(
        word.0
            .iter()
            .map(|l| Letter(p.as_slice().iter().map(|&i| l.0[i]).collect()))
            .collect(),
    ))
}

/// Rearranges components by a map `{1..k} → {1..k}`.
pub fn permute_word(word: &Word, p: &PermutationMap) -> Result<Word> {
    if p.len() != p.range() {
        return Err(Error::ArityMismatch {
            expected: p.range(),
            got: p.len(),
        });
    }
    project_word(word, p)
}

fn extend_letter(letter: &Letter, k: usize) -> Letter {
    let mut parts = letter.0.clone();
    let last = *parts.last().expect("letters have positive arity");
    parts.resize(k, last);
    Letter(parts)
}

/// Copies the last component into positions `k+1..target`.
pub fn extend_word(word: &Word, target: usize) -> Result<Word> {
    if let Some(arity) = word.arity() {
        if target <= arity {
            return Err(Error::BadArity { arity, target });
        }
    }
    Ok(Word(word.0.iter().map(|l| extend_letter(l, target)).collect()))
}

/// For each letter of `wide`, the index of its projection through `map`
/// (a letter of arity `map.len()`).
pub(crate) fn projection_table(wide: &Alphabet, narrow: &Alphabet, map: &[usize]) -> Vec<usize> {
    (0..wide.size())
        .map(|l| {
            let parts = wide.components(l);
            let projected: Vec<u32> = map.iter().map(|&i| parts[i]).collect();
            narrow.index_of_components(&projected)
        })
        .collect()
}

/// The automaton over arity `target` that reads only letters whose extra
/// components repeat component `k`, mirroring `a`; other letters fall into a
/// fresh non-accepting sink.
pub fn lift_automaton(a: &Dfa, target: usize) -> Result<Dfa> {
    let k = a.arity();
    if target <= k {
        return Err(Error::BadArity { arity: k, target });
    }
    let wide = a.alphabet().with_arity(target)?;
    let narrow = a.alphabet();
    let dead = a.num_states();
    let mut accepting = a.accepting_mask().to_vec();
    accepting.push(false);
    Dfa::from_fn(wide.clone(), dead + 1, a.initial(), accepting, |q, l| {
        if q == dead {
            return dead;
        }
        let parts = wide.components(l);
        if parts[k..].iter().any(|&c| c != parts[k - 1]) {
            dead
        } else {
            a.next(q, narrow.index_of_components(&parts[..k]))
        }
    })
}

/// `δ'(q, ℓ) = δ(q, extend(ℓ, k))`: the arity-`target` view of `a` on
/// duplicated letters. Inverse of [`lift_automaton`] on languages.
pub fn restrict_arity(a: &Dfa, target: usize) -> Result<Dfa> {
    let k = a.arity();
    if target > k || target == 0 {
        return Err(Error::BadArity { arity: k, target });
    }
    if target == k {
        return Ok(a.clone());
    }
    let narrow = a.alphabet().with_arity(target)?;
    let wide = a.alphabet();
    let mut map: Vec<usize> = (0..target).collect();
    map.resize(k, target - 1);
    let table = projection_table(&narrow, wide, &map);
    Dfa::from_fn(
        narrow,
        a.num_states(),
        a.initial(),
        a.accepting_mask().to_vec(),
        |q, l| a.next(q, table[l]),
    )
}

/// `δ^p(s, (a1..ak)) = δ(s, (a_{p(1)}..a_{p(k)}))`.
pub fn permuted_copy(a: &Dfa, p: &PermutationMap) -> Result<Dfa> {
    let k = a.arity();
    if p.len() != k || p.range() != k {
        return Err(Error::ArityMismatch {
            expected: k,
            got: p.len().max(p.range()),
        });
    }
    let table = projection_table(a.alphabet(), a.alphabet(), p.as_slice());
    Dfa::from_fn(
        a.alphabet().clone(),
        a.num_states(),
        a.initial(),
        a.accepting_mask().to_vec(),
        |q, l| a.next(q, table[l]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::fixtures::{all_words, d1, d2};
    use crate::automata::language_equal;
    use proptest::prelude::*;

    fn sigma(k: usize) -> Alphabet {
        Alphabet::new(&["a"], k).unwrap()
    }

    fn set(traces: &[&str]) -> TraceSet {
        let aps: Arc<[String]> = vec!["a".to_string()].into();
        TraceSet::parse(aps, &traces.join("\n")).unwrap()
    }

    #[test]
    fn unzip_examples() {
        let s = sigma(2);
        let t = unzip(&s, &s.parse_word("({a},{a})({a},{})").unwrap());
        assert_eq!(t, set(&["{a}{a}", "{a}{}"]));
        let t = unzip(&s, &s.parse_word("({a},{a})").unwrap());
        assert_eq!(t, set(&["{a}"]));
        let t = unzip(&s, &Word::default());
        assert_eq!(t.len(), 1);
        assert_eq!(t.trace_len(), 0);
    }

    #[test]
    fn canonical_representation_examples() {
        let s = sigma(2);
        let w = canonical_representation(&set(&["{a}{a}", "{a}{}"]), 2).unwrap();
        assert_eq!(s.format_word(&w), "({a},{a})({},{a})");
        let w = canonical_representation(&set(&["{a}"]), 2).unwrap();
        assert_eq!(s.format_word(&w), "({a},{a})");
        let err = canonical_representation(&set(&["{a}", "{}"]), 1).unwrap_err();
        assert!(matches!(err, Error::TooManyTraces { traces: 2, arity: 1 }));
    }

    #[test]
    fn ragged_sets_are_rejected() {
        let aps: Arc<[String]> = vec!["a".to_string()].into();
        assert!(matches!(
            TraceSet::parse(aps, "{a}{a}\n{a}\n"),
            Err(Error::RaggedTraces)
        ));
    }

    #[test]
    fn all_representations_examples() {
        let s = sigma(2);
        let reps = all_representations(&set(&["{a}{a}", "{a}{}"]), 2).unwrap();
        let shown: Vec<String> = reps.iter().map(|w| s.format_word(w)).collect();
        assert_eq!(shown, ["({a},{a})({},{a})", "({a},{a})({a},{})"]);
        let reps = all_representations(&set(&["{a}"]), 1).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(all_representations(&set(&["{a}", "{}"]), 3).unwrap().len(), 6);
    }

    #[test]
    fn permute_and_extend_examples() {
        let s = sigma(2);
        let swap = PermutationMap::new(vec![1, 0], 2).unwrap();
        let w = s.parse_word("({a},{})({},{a})").unwrap();
        assert_eq!(s.format_word(&permute_word(&w, &swap).unwrap()), "({},{a})({a},{})");
        assert_eq!(permute_word(&w, &PermutationMap::identity(2)).unwrap(), w);
        assert!(permute_word(&w, &PermutationMap::identity(3)).is_err());

        let s1 = sigma(1);
        let one = s1.parse_word("({a})").unwrap();
        assert_eq!(s.format_word(&extend_word(&one, 2).unwrap()), "({a},{a})");
        assert_eq!(extend_word(&Word::default(), 3).unwrap(), Word::default());
        assert!(matches!(extend_word(&w, 2), Err(Error::BadArity { .. })));
    }

    #[test]
    fn map_enumeration_order() {
        let maps: Vec<Vec<usize>> = PermutationMap::all(2, 2).map(|p| p.as_slice().to_vec()).collect();
        assert_eq!(maps, [vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(PermutationMap::all(1, 3).count(), 3);
    }

    #[test]
    fn lift_examples() {
        let lifted = lift_automaton(&d1(), 2).unwrap();
        let s = sigma(2);
        assert!(lifted.accepts(&s.parse_word("({},{})").unwrap()).unwrap());
        assert!(!lifted.accepts(&s.parse_word("({},{a})").unwrap()).unwrap());
        assert!(matches!(lift_automaton(&d2(), 2), Err(Error::BadArity { .. })));

        // accepted unzip images agree up to length 3
        let mut narrow: BTreeSet<Vec<Trace>> = BTreeSet::new();
        for w in all_words(&sigma(1), 3) {
            if d1().accepts_indices(&w) {
                let word = sigma(1).word_from_indices(&w);
                narrow.insert(unzip(&sigma(1), &word).traces().cloned().collect());
            }
        }
        let mut wide: BTreeSet<Vec<Trace>> = BTreeSet::new();
        for w in all_words(&s, 3) {
            if lifted.accepts_indices(&w) {
                let word = s.word_from_indices(&w);
                wide.insert(unzip(&s, &word).traces().cloned().collect());
            }
        }
        assert_eq!(narrow, wide);
    }

    #[test]
    fn restrict_undoes_lift() {
        let d = d2();
        let back = restrict_arity(&lift_automaton(&d, 3).unwrap(), 2).unwrap();
        assert!(language_equal(&back, &d).unwrap());
    }

    #[test]
    fn permuted_copy_examples() {
        let d = d2();
        let swap = PermutationMap::new(vec![1, 0], 2).unwrap();
        assert!(language_equal(&permuted_copy(&d, &swap).unwrap(), &d).unwrap());
        assert!(permuted_copy(&d, &PermutationMap::identity(2))
            .unwrap()
            .is_isomorphic(&d));
    }

    fn arb_dfa(k: usize) -> impl Strategy<Value = Dfa> {
        let letters = 1usize << k;
        (1usize..=4).prop_flat_map(move |n| {
            (
                proptest::collection::vec(0..n, n * letters),
                proptest::collection::vec(any::<bool>(), n),
            )
                .prop_map(move |(delta, acc)| Dfa::new(sigma(k), 0, acc, delta).unwrap())
        })
    }

    fn arb_word(k: usize, max: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(proptest::collection::vec(0u32..2, k), 0..=max)
            .prop_map(|ls| Word(ls.into_iter().map(Letter).collect()))
    }

    proptest! {
        #[test]
        fn canonical_roundtrip(traces in proptest::collection::btree_set(proptest::collection::vec(0u32..4, 3), 1..=3)) {
            let aps: Arc<[String]> = vec!["a".to_string(), "b".to_string()].into();
            let t = TraceSet::new(aps.clone(), traces.into_iter().map(Trace)).unwrap();
            let s = Alphabet::from_shared(aps, 3).unwrap();
            let w = canonical_representation(&t, 3).unwrap();
            prop_assert_eq!(unzip(&s, &w), t.clone());
            let reps = all_representations(&t, 3).unwrap();
            prop_assert!(reps.contains(&w));
            for r in &reps {
                prop_assert_eq!(&unzip(&s, r), &t);
            }
        }

        #[test]
        fn unzip_of_permutations(w in arb_word(2, 3)) {
            let s = sigma(2);
            let original = unzip(&s, &w);
            for p in PermutationMap::all(2, 2) {
                let image = unzip(&s, &permute_word(&w, &p).unwrap());
                prop_assert!(image.is_subset(&original));
                if p.is_bijective() {
                    prop_assert_eq!(image, original.clone());
                }
            }
            let lifted = extend_word(&w, 3).unwrap();
            prop_assert_eq!(unzip(&sigma(3), &lifted), original);
        }

        #[test]
        fn permutation_group_action(w in arb_word(3, 3)) {
            let perms: Vec<PermutationMap> = PermutationMap::all(3, 3).filter(|p| p.is_bijective()).collect();
            for p in &perms {
                for q in &perms {
                    let lhs = permute_word(&permute_word(&w, p).unwrap(), q).unwrap();
                    let rhs = permute_word(&w, &p.compose(q).unwrap()).unwrap();
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }

        #[test]
        fn lift_commutes_with_extend(a in arb_dfa(2), w in arb_word(2, 3)) {
            let lifted = lift_automaton(&a, 3).unwrap();
            let ext = extend_word(&w, 3).unwrap();
            prop_assert_eq!(lifted.accepts(&ext).unwrap(), a.accepts(&w).unwrap());
        }

        #[test]
        fn permuted_copy_commutes(a in arb_dfa(2), w in arb_word(2, 3)) {
            for p in PermutationMap::all(2, 2) {
                let copy = permuted_copy(&a, &p).unwrap();
                prop_assert_eq!(
                    copy.accepts(&w).unwrap(),
                    a.accepts(&permute_word(&w, &p).unwrap()).unwrap()
                );
            }
        }
    }
}
