mod common;

use std::sync::Arc;

use common::*;
use hyperbpa::learner::{Closedness, Consistency, Oracle, Outcome};
use hyperbpa::{
    is_permutation_complete, learn, parse_hyper, tighten, Alphabet, AutomatonTeacher, Completeness, Dfa, Error,
    LearnConfig, ObservationTable, TeacherSession,
};
use proptest::prelude::*;

const FORMULAS: &[&str] = &[
    "forall p. forall q. a[p] & G (a[p] <-> a[q])",
    "forall p. forall q. G (a[p] -> a[q])",
    "forall p. G a[p]",
    "forall p. X !a[p]",
    "forall p. forall q. G (a[p] -> X a[q])",
    "forall p. forall q. (!(i[p] <-> i[q])) R (o[p] <-> o[q])",
];

fn check_final(a: &Dfa) {
    assert!(a.minimize().is_isomorphic(a), "not minimal");
    assert_eq!(&tighten(a), a, "not tight");
    assert_eq!(is_permutation_complete(a), Completeness::Complete);
}

#[test]
fn learned_automata_are_minimal_tight_and_complete() {
    for text in FORMULAS {
        let f = parse_hyper(text).unwrap();
        let mut session = TeacherSession::new(f.clone()).unwrap();
        let report = learn(&mut session, LearnConfig::default()).unwrap();
        check_final(&report.automaton);
        assert!(report.equivalence_queries <= report.automaton.num_states(), "{text}: {} queries", report.equivalence_queries);
        assert!(report.arity <= f.arity());
        // the learned automaton agrees with the compiled one at the learned arity
        let compiled = hyperbpa::cli::compile(&f, Some(report.arity)).unwrap();
        assert!(hyperbpa::language_equal(&report.automaton, &compiled).unwrap(), "{text}");
        assert!(matches!(report.rounds.last().unwrap().outcome, Outcome::Accepted));
    }
}

#[test]
fn hypotheses_agree_with_their_tables() {
    let mut teacher = AutomatonTeacher::new(Dfa::from_text(&std::fs::read_to_string(fixture("D2.bpa")).unwrap()).unwrap());
    let aps: Arc<[String]> = vec!["a".to_string()].into();
    let sigma = Alphabet::from_shared(aps, 2).unwrap();
    let mut oracle = Oracle::new(&mut teacher);
    let mut table = ObservationTable::new(sigma.clone(), &mut oracle).unwrap();
    let before = table.distinct_rows();
    table.repair(&mut oracle).unwrap();
    assert!(table.distinct_rows() >= before);
    assert_eq!(table.check_closed(), Closedness::Closed);
    assert_eq!(table.check_consistent(), Consistency::Consistent);
    let h = table.hypothesis().unwrap();
    for (s, e, v) in table.entries() {
        assert_eq!(h.accepts(&s.concat(&e)).unwrap(), v);
    }
    assert!(matches!(table.extend(2, &mut oracle), Err(Error::BadArity { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn learns_random_references(a in arb_dfa(2, 4)) {
        let target = a.minimize();
        let report = learn(&mut AutomatonTeacher::new(target.clone()), LearnConfig::default()).unwrap();
        check_final(&report.automaton);
        prop_assert!(hyperbpa::representation_equivalent(&report.automaton, &target).unwrap().is_equivalent());
        for pair in report.rounds.windows(2) {
            if pair[0].arity == pair[1].arity {
                prop_assert!(pair[1].rows > pair[0].rows);
            } else {
                prop_assert!(pair[1].rows >= pair[0].rows);
            }
        }
    }
}
