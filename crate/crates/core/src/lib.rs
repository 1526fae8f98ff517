//! Bad-prefix automata for regular k-safety hyperproperties.
//!
//! Automata read words over a product alphabet `(2^AP)^k`; a word stands for
//! the set of its `k` component traces. The crate builds, transforms and
//! compares such automata, translates universally quantified safe HyperLTL
//! formulas into them, and learns them from membership and equivalence
//! queries.

pub mod alphabet;
pub mod automata;
pub mod cli;
pub mod constructions;
pub mod equiv;
pub mod error;
pub mod hyperltl;
pub mod learner;
pub mod ltl;
pub mod repr;

pub use alphabet::{Alphabet, Letter, Word};
pub use automata::{language_equal, language_subset, product, Combine, Dfa, Inclusion, Nfa, Product};
pub use constructions::{
    is_permutation_complete, permutation_complete, permuted_projection, tighten, Completeness,
    ConstructionReport,
};
pub use equiv::{covering_check, representation_equivalent, CoveringVerdict, Direction, Equivalence, Lasso};
pub use error::{Error, ParseError, Result};
pub use hyperltl::{
    assignment_closure, is_universally_safe, parse_hyper, Counterexample, HyperFormula, Quantifier,
    TeacherSession,
};
pub use learner::{learn, Answer, AutomatonTeacher, LearnConfig, LearnReport, ObservationTable, Teacher};
pub use ltl::{bad_prefix_dfa, is_syntactically_safe, parse_ltl, safety_nfa, to_nnf, Ltl};
pub use repr::{
    all_representations, canonical_representation, extend_word, lift_automaton, permute_word,
    permuted_copy, project_word, restrict_arity, unzip, PermutationMap, Trace, TraceSet,
};
