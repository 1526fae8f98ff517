//! Tableau translation of safe formulas. States are obligation sets: sorted
//! ids of NNF subformulas that must hold from the current position on.

use std::collections::{BTreeSet, HashMap};

use super::{is_syntactically_safe, to_nnf, Ltl};
use crate::alphabet::Alphabet;
use crate::automata::{Dfa, Nfa};
use crate::constructions::tighten;
use crate::error::{Error, Result};

type Id = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    /// Proposition bit and trace index; `negated` for `!a[i]`.
    Lit { bit: u32, trace: usize, negated: bool },
    And(Id, Id),
    Or(Id, Id),
    Next(Id),
    Release(Id, Id),
    Globally(Id),
}

/// Alternatives of next-position obligations; empty means unsatisfiable.
type Dnf = Vec<BTreeSet<Id>>;

struct Tableau {
    nodes: Vec<Node>,
    ids: HashMap<Node, Id>,
    expansions: HashMap<(Id, usize), Dnf>,
    alphabet: Alphabet,
}

impl Tableau {
    fn intern(&mut self, node: Node) -> Id {
        if let Some(&id) = self.ids.get(&node) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(node.clone());
        self.ids.insert(node, id);
        id
    }

    fn build(&mut self, f: &Ltl) -> Result<Id> {
        let node = match f {
            Ltl::True => Node::True,
            Ltl::False => Node::False,
            Ltl::Atom { .. } => self.literal(f, false)?,
            Ltl::Not(a) => self.literal(a, true)?,
            Ltl::And(a, b) => Node::And(self.build(a)?, self.build(b)?),
            Ltl::Or(a, b) => Node::Or(self.build(a)?, self.build(b)?),
            Ltl::Next(a) => Node::Next(self.build(a)?),
            Ltl::Release(a, b) => Node::Release(self.build(a)?, self.build(b)?),
            Ltl::Globally(a) => Node::Globally(self.build(a)?),
            Ltl::Until(..) | Ltl::Finally(..) | Ltl::Implies(..) | Ltl::Iff(..) => {
                return Err(Error::NotSafe)
            }
        };
        Ok(self.intern(node))
    }

    fn literal(&self, f: &Ltl, negated: bool) -> Result<Node> {
        let Ltl::Atom { prop, trace } = f else {
            return Err(Error::NotSafe);
        };
        let bit = self
            .alphabet
            .aps()
            .iter()
            .position(|a| a == prop)
            .ok_or_else(|| Error::AlphabetMismatch(format!("proposition `{prop}` is not declared")))?;
        if *trace >= self.alphabet.arity() {
            return Err(Error::IndexOutOfRange {
                index: *trace,
                len: self.alphabet.arity(),
            });
        }
        Ok(Node::Lit {
            bit: bit as u32,
            trace: *trace,
            negated,
        })
    }

    fn obligation(&self, id: Id) -> Option<Id> {
        // `true` obligations are dropped from sets
        (self.nodes[id] != Node::True).then_some(id)
    }

    fn expand(&mut self, id: Id, letter: usize, parts: &[u32]) -> Dnf {
        if let Some(d) = self.expansions.get(&(id, letter)) {
            return d.clone();
        }
        let out = match self.nodes[id].clone() {
            Node::True => vec![BTreeSet::new()],
            Node::False => vec![],
            Node::Lit { bit, trace, negated } => {
                if (parts[trace] >> bit & 1 == 1) != negated {
                    vec![BTreeSet::new()]
                } else {
                    vec![]
                }
            }
            Node::And(a, b) => {
                let x = self.expand(a, letter, parts);
                let y = self.expand(b, letter, parts);
                cross(&x, &y)
            }
            Node::Or(a, b) => {
                let mut x = self.expand(a, letter, parts);
                x.extend(self.expand(b, letter, parts));
                normalize(x)
            }
            Node::Next(a) => vec![self.obligation(a).into_iter().collect()],
            Node::Release(a, b) => {
                let now = self.expand(b, letter, parts);
                let mut later = self.expand(a, letter, parts);
                later.push(BTreeSet::from([id]));
                cross(&now, &normalize(later))
            }
            Node::Globally(a) => {
                let now = self.expand(a, letter, parts);
                cross(&now, &[BTreeSet::from([id])])
            }
        };
        self.expansions.insert((id, letter), out.clone());
        out
    }
}

fn normalize(mut d: Dnf) -> Dnf {
    d.sort();
    d.dedup();
    d
}

fn cross(x: &[BTreeSet<Id>], y: &[BTreeSet<Id>]) -> Dnf {
    let mut out = Vec::with_capacity(x.len() * y.len());
    for a in x {
        for b in y {
            out.push(a.union(b).copied().collect());
        }
    }
    normalize(out)
}

/// The safety NFA of a syntactically safe formula: every state accepts,
/// and a run gets stuck exactly when the obligations become unsatisfiable.
/// States from which no infinite run exists are removed.
pub fn safety_nfa(f: &Ltl, aps: &[String], arity: usize) -> Result<Nfa> {
    if !is_syntactically_safe(f) {
        return Err(Error::NotSafe);
    }
    let alphabet = Alphabet::new(aps, arity)?;
    let nnf = to_nnf(f);
    let mut tab = Tableau {
        nodes: Vec::new(),
        ids: HashMap::new(),
        expansions: HashMap::new(),
        alphabet: alphabet.clone(),
    };
    let root = tab.build(&nnf)?;
    let size = alphabet.size();
    let letters: Vec<Vec<u32>> = (0..size).map(|l| alphabet.components(l)).collect();

    let start: BTreeSet<Id> = tab.obligation(root).into_iter().collect();
    let mut index: HashMap<BTreeSet<Id>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        for (l, parts) in letters.iter().enumerate() {
            let mut alternatives = vec![BTreeSet::new()];
            for &ob in &states[i].clone() {
                let d = tab.expand(ob, l, parts);
                alternatives = cross(&alternatives, &d);
                if alternatives.is_empty() {
                    break;
                }
            }
            let mut targets = Vec::with_capacity(alternatives.len());
            for alt in alternatives {
                let fresh = states.len();
                let id = *index.entry(alt.clone()).or_insert(fresh);
                if id == fresh {
                    states.push(alt);
                }
                targets.push(id);
            }
            succ.push(targets);
        }
        i += 1;
    }

    // keep states with an infinite continuation
    let n = states.len();
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for q in 0..n {
            if alive[q] && !succ[q * size..(q + 1) * size].iter().flatten().any(|&t| alive[t]) {
                alive[q] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut renumber = vec![usize::MAX; n];
    let mut kept = 0;
    for q in 0..n {
        if alive[q] || q == 0 {
            renumber[q] = kept;
            kept += 1;
        }
    }
    let mut delta = Vec::with_capacity(kept * size);
    for q in 0..n {
        if renumber[q] == usize::MAX {
            continue;
        }
        for l in 0..size {
            delta.push(
                succ[q * size + l]
                    .iter()
                    .filter(|&&t| alive[t])
                    .map(|&t| renumber[t])
                    .collect(),
            );
        }
    }
    Nfa::new(alphabet, 0, vec![true; kept], delta, true)
}

/// The tight bad-prefix DFA of the safety language of `f`: it accepts `w`
/// iff no infinite extension of `w` satisfies `f`.
pub fn bad_prefix_dfa(f: &Ltl, aps: &[String], arity: usize) -> Result<Dfa> {
    let nfa = safety_nfa(f, aps, arity)?;
    let (dfa, subsets) = nfa.determinize_with_subsets();
    let dead: Vec<bool> = subsets.iter().map(|s| s.is_empty()).collect();
    // only differs from `dead` when the formula itself is unsatisfiable
    Ok(tighten(&dfa.with_accepting(dead)))
}
