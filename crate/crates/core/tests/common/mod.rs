//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's constructions; only plain data is read off automata.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::path::PathBuf;

use hyperbpa::{Alphabet, Dfa, Ltl};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// Random total DFA with `1..=max_states` states, initial state 0.
pub fn random_dfa(rng: &mut ChaCha8Rng, max_states: usize, aps: &[&str], arity: usize) -> Dfa {
    let sigma = Alphabet::new(aps, arity).unwrap();
    let n = rng.gen_range(1..=max_states);
    let accepting: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.35)).collect();
    let delta: Vec<usize> = (0..n * sigma.size()).map(|_| rng.gen_range(0..n)).collect();
    let size = sigma.size();
    Dfa::from_fn(sigma, n, 0, accepting, |q, l| delta[q * size + l]).unwrap()
}

/// Every word over `0..letters` of length at most `max_len`, shortest first.
pub fn words(letters: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut start = 0;
    for _ in 0..max_len {
        let end = out.len();
        for i in start..end {
            for l in 0..letters {
                let mut w = out[i].clone();
                w.push(l);
                out.push(w);
            }
        }
        start = end;
    }
    out
}

/// Component masks of a letter index; component 0 is the most significant digit.
pub fn decode(letter: usize, base: usize, arity: usize) -> Vec<u32> {
    let mut parts = vec![0u32; arity];
    let mut rest = letter;
    for i in (0..arity).rev() {
        parts[i] = (rest % base) as u32;
        rest /= base;
    }
    parts
}

pub fn encode(parts: &[u32], base: usize) -> usize {
    parts.iter().fold(0, |acc, &c| acc * base + c as usize)
}

/// All maps `{0..k-1} -> {0..m-1}`.
pub fn maps(k: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for f in &out {
            for j in 0..m {
                let mut g = f.clone();
                g.push(j);
                next.push(g);
            }
        }
        out = next;
    }
    out
}

/// The word whose position `i` component `j` is component `f[j]` of `w`.
pub fn project(w: &[usize], f: &[usize], base: usize, from_arity: usize) -> Vec<usize> {
    w.iter()
        .map(|&l| {
            let parts = decode(l, base, from_arity);
            let moved: Vec<u32> = f.iter().map(|&j| parts[j]).collect();
            encode(&moved, base)
        })
        .collect()
}

pub fn run(a: &Dfa, w: &[usize]) -> usize {
    w.iter().fold(a.initial(), |q, &l| a.next(q, l))
}

/// States from which some infinite path avoids the accepting set entirely,
/// found by looking for a rejecting cycle reachable through rejecting states.
pub fn escaping_states(a: &Dfa) -> BTreeSet<usize> {
    let n = a.num_states();
    let size = a.alphabet().size();
    let rejecting = |q: usize| !a.is_accepting(q);
    let reach_from = |q: usize| -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([q]);
        while let Some(p) = queue.pop_front() {
            for l in 0..size {
                let t = a.next(p, l);
                if rejecting(t) && seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        seen
    };
    let on_cycle: Vec<usize> = (0..n).filter(|&q| rejecting(q) && reach_from(q).contains(&q)).collect();
    (0..n)
        .filter(|&q| {
            rejecting(q) && {
                let r = reach_from(q);
                on_cycle.iter().any(|c| *c == q || r.contains(c))
            }
        })
        .collect()
}

/// Lasso-word evaluator. The formula is flattened once; truth values over
/// the positions of `stem · cycle` are bitmasks, so lassos are limited to 64
/// positions.
pub struct LassoEval {
    nodes: Vec<Node>,
}

enum Node {
    Const(bool),
    Atom { bit: u32, trace: usize },
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Iff(usize, usize),
    Next(usize),
    Until(usize, usize),
    Release(usize, usize),
    Globally(usize),
    Finally(usize),
}

impl LassoEval {
    pub fn new(f: &Ltl, aps: &[String]) -> Self {
        let mut e = LassoEval { nodes: Vec::new() };
        e.flatten(f, aps);
        e
    }

    fn flatten(&mut self, f: &Ltl, aps: &[String]) -> usize {
        let mut go = |g: &Ltl| self.flatten(g, aps);
        let node = match f {
            Ltl::True => Node::Const(true),
            Ltl::False => Node::Const(false),
            Ltl::Atom { prop, trace } => Node::Atom {
                bit: aps.iter().position(|a| a == prop).expect("declared proposition") as u32,
                trace: *trace,
            },
            Ltl::Not(a) => Node::Not(go(a)),
            Ltl::And(a, b) => Node::And(go(a), go(b)),
            Ltl::Or(a, b) => Node::Or(go(a), go(b)),
            Ltl::Implies(a, b) => Node::Implies(go(a), go(b)),
            Ltl::Iff(a, b) => Node::Iff(go(a), go(b)),
            Ltl::Next(a) => Node::Next(go(a)),
            Ltl::Until(a, b) => Node::Until(go(a), go(b)),
            Ltl::Release(a, b) => Node::Release(go(a), go(b)),
            Ltl::Globally(a) => Node::Globally(go(a)),
            Ltl::Finally(a) => Node::Finally(go(a)),
        };
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// Whether `stem · cycle^ω` satisfies the formula at position 0. Each
    /// position is a vector of component masks.
    pub fn holds(&self, stem: &[Vec<u32>], cycle: &[Vec<u32>]) -> bool {
        let pos: Vec<&Vec<u32>> = stem.iter().chain(cycle.iter()).collect();
        let n = pos.len();
        assert!(n <= 64 && !cycle.is_empty());
        let succ: Vec<usize> = (0..n).map(|i| if i + 1 < n { i + 1 } else { stem.len() }).collect();
        let all: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let shift = |x: u64| -> u64 { (0..n).filter(|&i| x >> succ[i] & 1 == 1).fold(0, |acc, i| acc | 1 << i) };
        let lfp = |step: &dyn Fn(u64) -> u64, init: u64| {
            let mut x = init;
            loop {
                let next = step(x);
                if next == x {
                    return x;
                }
                x = next;
            }
        };
        let mut val = vec![0u64; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            val[id] = match *node {
                Node::Const(b) => if b { all } else { 0 },
                Node::Atom { bit, trace } => (0..n).filter(|&i| pos[i][trace] >> bit & 1 == 1).fold(0, |acc, i| acc | 1 << i),
                Node::Not(a) => !val[a] & all,
                Node::And(a, b) => val[a] & val[b],
                Node::Or(a, b) => val[a] | val[b],
                Node::Implies(a, b) => (!val[a] | val[b]) & all,
                Node::Iff(a, b) => !(val[a] ^ val[b]) & all,
                Node::Next(a) => shift(val[a]),
                Node::Until(a, b) => {
                    let (x, y) = (val[a], val[b]);
                    lfp(&|cur| y | (x & shift(cur)), 0)
                }
                Node::Release(a, b) => {
                    let (x, y) = (val[a], val[b]);
                    lfp(&|cur| y & (x | shift(cur)), all)
                }
                Node::Globally(a) => {
                    let x = val[a];
                    lfp(&|cur| x & shift(cur), all)
                }
                Node::Finally(a) => {
                    let x = val[a];
                    lfp(&|cur| x | shift(cur), 0)
                }
            };
        }
        val[self.nodes.len() - 1] & 1 == 1
    }
}

/// Product of one copy of `a` per component map `{0..k-1} -> {0..k-1}`,
/// accepting where some copy accepts. Built without the library's
/// constructions.
pub fn union_of_copies(a: &Dfa) -> Dfa {
    let k = a.alphabet().arity();
    let base = a.alphabet().base();
    let size = a.alphabet().size();
    let fs = maps(k, k);
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut states = vec![vec![a.initial(); fs.len()]];
    index.insert(states[0].clone(), 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < states.len() {
        for l in 0..size {
            let next: Vec<usize> = states[i]
                .iter()
                .zip(&fs)
                .map(|(&q, f)| a.next(q, project(&[l], f, base, k)[0]))
                .collect();
            let id = *index.entry(next.clone()).or_insert_with(|| {
                states.push(next);
                states.len() - 1
            });
            delta.push(id);
        }
        i += 1;
    }
    let accepting = states.iter().map(|s| s.iter().any(|&q| a.is_accepting(q))).collect();
    Dfa::from_fn(a.alphabet().clone(), states.len(), 0, accepting, |q, l| delta[q * size + l]).unwrap()
}

/// Proptest strategy for total DFAs over `{a}` with up to `max_states` states.
pub fn arb_dfa(arity: usize, max_states: usize) -> impl proptest::strategy::Strategy<Value = Dfa> {
    use proptest::prelude::*;
    let size = 1usize << arity;
    (1..=max_states)
        .prop_flat_map(move |n| {
            (
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec(0..n, n * size),
            )
        })
        .prop_map(move |(accepting, delta)| {
            let sigma = Alphabet::new(&["a"], arity).unwrap();
            let n = accepting.len();
            Dfa::from_fn(sigma, n, 0, accepting, |q, l| delta[q * size + l]).unwrap()
        })
}
