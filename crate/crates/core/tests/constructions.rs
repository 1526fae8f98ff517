mod common;

use common::*;
use hyperbpa::{
    is_permutation_complete, lift_automaton, permutation_complete, permuted_copy, permuted_projection, tighten,
    Alphabet, Completeness, Dfa, Error, PermutationMap,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn tighten_matches_graph_oracle(a in arb_dfa(2, 4)) {
        let t = tighten(&a);
        let escape = escaping_states(&a);
        for q in 0..a.num_states() {
            prop_assert_eq!(t.is_accepting(q), !escape.contains(&q));
            prop_assert!(!a.is_accepting(q) || t.is_accepting(q));
        }
        prop_assert_eq!(tighten(&t), t);
    }

    #[test]
    fn completion_is_tightened_union_of_copies(a in arb_dfa(2, 3)) {
        let closed = permutation_complete(&a);
        let union = union_of_copies(&a);
        let escape = escaping_states(&union);
        for w in words(4, 3) {
            prop_assert_eq!(closed.accepts_indices(&w), !escape.contains(&run(&union, &w)));
        }
        prop_assert_eq!(is_permutation_complete(&closed), Completeness::Complete);
    }

    #[test]
    fn completion_contains_closure_of_tightened_input(a in arb_dfa(2, 3)) {
        let closed = permutation_complete(&a);
        let escape = escaping_states(&a);
        for w in words(4, 3) {
            let image = maps(2, 2).iter().any(|f| !escape.contains(&run(&a, &project(&w, f, 2, 2))));
            prop_assert!(!image || closed.accepts_indices(&w));
        }
    }

    #[test]
    fn projection_semantics(a in arb_dfa(1, 3)) {
        let wide = permuted_projection(&a, 3).unwrap();
        for w in words(8, 3) {
            let expected = maps(1, 3).iter().any(|f| a.accepts_indices(&project(&w, f, 2, 3)));
            prop_assert_eq!(wide.accepts_indices(&w), expected);
        }
    }

    #[test]
    fn projection_at_own_arity_agrees_with_untightened_union(a in arb_dfa(2, 3)) {
        let same = permuted_projection(&a, 2).unwrap();
        let union = union_of_copies(&a);
        for w in words(4, 3) {
            prop_assert_eq!(same.accepts_indices(&w), union.accepts_indices(&w));
        }
    }

    #[test]
    fn permuted_copy_commutes(a in arb_dfa(2, 4)) {
        for f in maps(2, 2) {
            let p = PermutationMap::new(f.clone(), 2).unwrap();
            let copy = permuted_copy(&a, &p).unwrap();
            for w in words(4, 3) {
                prop_assert_eq!(copy.accepts_indices(&w), a.accepts_indices(&project(&w, &f, 2, 2)));
            }
        }
    }

    #[test]
    fn size_bounds(a in arb_dfa(2, 3)) {
        let n = a.num_states();
        let reachable = |d: &Dfa| d.reachable().iter().filter(|&&r| r).count();
        prop_assert!(reachable(&permutation_complete(&a)) <= n.pow(4));
        prop_assert!(reachable(&permuted_projection(&a, 3).unwrap()) <= n.pow(9));
    }

    #[test]
    fn completeness_witness_is_genuine(a in arb_dfa(2, 4)) {
        if let Completeness::Witness { map, word } = is_permutation_complete(&a) {
            let w = a.alphabet().word_indices(&word).unwrap();
            prop_assert!(!a.accepts_indices(&w));
            prop_assert!(a.accepts_indices(&project(&w, map.as_slice(), 2, 2)));
        }
    }
}

#[test]
fn asymmetric_automaton_witness() {
    let sigma = Alphabet::new(&["a"], 2).unwrap();
    // accepts exactly the words starting with ({a},{})
    let a = Dfa::from_fn(sigma, 3, 0, vec![false, true, false], |q, l| match (q, l) {
        (0, 2) => 1,
        (0, _) => 2,
        (q, _) => q,
    })
    .unwrap();
    match is_permutation_complete(&a) {
        Completeness::Witness { word, .. } => assert_eq!(a.alphabet().format_word(&word), "({},{a})"),
        Completeness::Complete => panic!("expected a witness"),
    }
    let closed = permutation_complete(&a);
    for (w, expected) in [("({a},{})", true), ("({},{a})", true), ("({a},{a})", false), ("({},{})", false)] {
        let word = closed.alphabet().parse_word(w).unwrap();
        assert_eq!(closed.accepts(&word).unwrap(), expected, "{w}");
    }
}

#[test]
fn arity_one_is_always_complete() {
    let sigma = Alphabet::new(&["a"], 1).unwrap();
    let a = Dfa::from_fn(sigma, 2, 0, vec![false, true], |q, l| q.max(l)).unwrap();
    assert_eq!(is_permutation_complete(&a), Completeness::Complete);
}

#[test]
fn projection_rejects_smaller_target() {
    let a = lift_automaton(&Dfa::universal(Alphabet::new(&["a"], 1).unwrap(), false), 3).unwrap();
    assert!(matches!(permuted_projection(&a, 2), Err(Error::BadArity { .. })));
}
