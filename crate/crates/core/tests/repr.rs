mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::*;
use hyperbpa::{
    all_representations, canonical_representation, extend_word, lift_automaton, permute_word, restrict_arity, unzip,
    Alphabet, Error, PermutationMap, Trace, TraceSet, Word,
};
use proptest::prelude::*;

fn aps() -> Arc<[String]> {
    vec!["a".to_string(), "b".to_string()].into()
}

fn arb_set(max: usize, len: usize) -> impl Strategy<Value = TraceSet> {
    proptest::collection::btree_set(proptest::collection::vec(0u32..4, len), 1..=max)
        .prop_map(|ts| TraceSet::new(aps(), ts.into_iter().map(Trace)).unwrap())
}

fn arb_word(arity: usize, max_len: usize) -> impl Strategy<Value = Word> {
    let sigma = Alphabet::from_shared(aps(), arity).unwrap();
    proptest::collection::vec(0..sigma.size(), 0..=max_len).prop_map(move |w| sigma.word_from_indices(&w))
}

fn bijections(k: usize) -> Vec<PermutationMap> {
    PermutationMap::all(k, k).filter(|p| p.is_bijective()).collect()
}

proptest! {
    #[test]
    fn representations_unzip_to_the_set(t in arb_set(3, 3), extra in 0usize..2) {
        let k = t.len() + extra;
        let sigma = Alphabet::from_shared(aps(), k).unwrap();
        let canonical = canonical_representation(&t, k).unwrap();
        prop_assert_eq!(&unzip(&sigma, &canonical), &t);
        let all = all_representations(&t, k).unwrap();
        prop_assert!(all.contains(&canonical));
        for w in &all {
            prop_assert_eq!(&unzip(&sigma, w), &t);
        }
        let distinct: BTreeSet<&Word> = all.iter().collect();
        prop_assert_eq!(distinct.len(), all.len());
    }

    #[test]
    fn permutation_group_action(w in arb_word(3, 4)) {
        let sigma = Alphabet::from_shared(aps(), 3).unwrap();
        for p in bijections(3) {
            prop_assert_eq!(unzip(&sigma, &permute_word(&w, &p).unwrap()), unzip(&sigma, &w));
            for q in bijections(3) {
                let twice = permute_word(&permute_word(&w, &p).unwrap(), &q).unwrap();
                prop_assert_eq!(twice, permute_word(&w, &p.compose(&q).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn lift_commutes_with_extend(a in arb_dfa(2, 4), w in proptest::collection::vec(0usize..4, 0..5)) {
        let sigma = a.alphabet().clone();
        let word = sigma.word_from_indices(&w);
        for target in [3, 4] {
            let lifted = lift_automaton(&a, target).unwrap();
            let wide = extend_word(&word, target).unwrap();
            prop_assert_eq!(lifted.accepts(&wide).unwrap(), a.accepts(&word).unwrap());
            let back = restrict_arity(&lifted, 2).unwrap();
            prop_assert_eq!(back.accepts(&word).unwrap(), a.accepts(&word).unwrap());
        }
    }
}

#[test]
fn representation_examples() {
    let one: Arc<[String]> = vec!["a".to_string()].into();
    let t = TraceSet::parse(one.clone(), "{a}{}\n{a}{a}\n").unwrap();
    let sigma = Alphabet::from_shared(one.clone(), 2).unwrap();
    let shown: Vec<String> = all_representations(&t, 2).unwrap().iter().map(|w| sigma.format_word(w)).collect();
    assert_eq!(shown, ["({a},{a})({},{a})", "({a},{a})({a},{})"]);
    assert!(matches!(canonical_representation(&t, 1), Err(Error::TooManyTraces { .. })));
    let empty = unzip(&sigma, &Word::default());
    assert_eq!(empty.len(), 1);
    assert_eq!(empty.trace_len(), 0);
    assert!(TraceSet::parse(one, "{a}\n{a}{a}\n").is_err());
}

#[test]
fn trace_files_ignore_comments_and_blank_lines() {
    let t = TraceSet::parse(aps(), "# two traces\n\n{a,b}{}\n{b}{a}  # second\n").unwrap();
    assert_eq!(t.len(), 2);
    let back = TraceSet::parse(aps(), &t.to_text()).unwrap();
    assert_eq!(back, t);
}
