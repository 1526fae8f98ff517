//! Line-based automaton text format and DOT export.
//!
//! ```text
//! bpa 1
//! aps a b
//! arity 2
//! states 3
//! initial 0
//! accepting 1
//! trans 0 ({a},{a}) 2
//! ```
//!
//! `#` starts a comment. Missing transitions lead to an implicit dead state.

use std::fmt::Write as _;

use super::Dfa;
use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

fn format_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Format(format!("line {line}: {msg}"))
}

fn parse_num(line: usize, tok: Option<&str>, what: &str) -> Result<usize> {
    tok.ok_or_else(|| format_err(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| format_err(line, format!("invalid {what}")))
}

impl Dfa {
    /// Writes every transition, states ascending, letters in canonical order.
    pub fn to_text(&self) -> String {
        let sigma = self.alphabet();
        let mut out = String::new();
        writeln!(out, "bpa 1").unwrap();
        let mut aps_line = String::from("aps");
        for ap in sigma.aps() {
            aps_line.push(' ');
            aps_line.push_str(ap);
        }
        writeln!(out, "{aps_line}").unwrap();
        writeln!(out, "arity {}", sigma.arity()).unwrap();
        writeln!(out, "states {}", self.num_states()).unwrap();
        writeln!(out, "initial {}", self.initial()).unwrap();
        let mut acc_line = String::from("accepting");
        for q in self.accepting_states() {
            write!(acc_line, " {q}").unwrap();
        }
        writeln!(out, "{acc_line}").unwrap();
        for q in 0..self.num_states() {
            for (l, &t) in self.row(q).iter().enumerate() {
                let letter = sigma.format_letter(&sigma.letter(l));
                writeln!(out, "trans {q} {letter} {t}").unwrap();
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Dfa> {
        let mut version_seen = false;
        let mut aps: Option<Vec<String>> = None;
        let mut arity: Option<usize> = None;
        let mut states: Option<usize> = None;
        let mut initial: Option<usize> = None;
        let mut accepting: Vec<usize> = Vec::new();
        let mut raw_edges: Vec<(usize, usize, String, usize)> = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match key {
                "bpa" => {
                    if rest != "1" {
                        return Err(format_err(lineno, format!("unsupported version `{rest}`")));
                    }
                    version_seen = true;
                }
                "aps" => aps = Some(rest.split_whitespace().map(String::from).collect()),
                "arity" => arity = Some(parse_num(lineno, Some(rest), "arity")?),
                "states" => states = Some(parse_num(lineno, Some(rest), "state count")?),
                "initial" => initial = Some(parse_num(lineno, Some(rest), "initial state")?),
                "accepting" => {
                    for tok in rest.split_whitespace() {
                        accepting.push(parse_num(lineno, Some(tok), "accepting state")?);
                    }
                }
                "trans" => {
                    let open = rest
                        .find('(')
                        .ok_or_else(|| format_err(lineno, "missing letter"))?;
                    let close = rest
                        .rfind(')')
                        .ok_or_else(|| format_err(lineno, "missing letter"))?;
                    if close < open {
                        return Err(format_err(lineno, "malformed letter"));
                    }
                    let from = parse_num(lineno, rest[..open].split_whitespace().next(), "source")?;
                    let to = parse_num(lineno, rest[close + 1..].split_whitespace().next(), "target")?;
                    raw_edges.push((lineno, from, rest[open..=close].to_string(), to));
                }
                other => return Err(format_err(lineno, format!("unknown directive `{other}`"))),
            }
        }
        if !version_seen {
            return Err(Error::Format("missing `bpa 1` header".into()));
        }
        let aps = aps.ok_or_else(|| Error::Format("missing `aps` line".into()))?;
        let arity = arity.ok_or_else(|| Error::Format("missing `arity` line".into()))?;
        let states = states.ok_or_else(|| Error::Format("missing `states` line".into()))?;
        let initial = initial.ok_or_else(|| Error::Format("missing `initial` line".into()))?;
        let sigma = Alphabet::new(&aps, arity)?;
        let mut edges = Vec::with_capacity(raw_edges.len());
        for (lineno, from, letter, to) in raw_edges {
            let l = sigma
                .parse_letter(&letter)
                .and_then(|l| sigma.index(&l))
                .map_err(|e| format_err(lineno, e))?;
            edges.push((from, l, to));
        }
        Dfa::from_partial(sigma, states, initial, &accepting, edges)
    }

    /// Graphviz rendering; parallel edges are merged into one labelled edge.
    pub fn to_dot(&self) -> String {
        let sigma = self.alphabet();
        let mut out = String::new();
        writeln!(out, "digraph bpa {{").unwrap();
        writeln!(out, "  rankdir=LR;").unwrap();
        writeln!(out, "  start [shape=point];").unwrap();
        for q in 0..self.num_states() {
            let shape = if self.is_accepting(q) { "doublecircle" } else { "circle" };
            writeln!(out, "  q{q} [shape={shape}];").unwrap();
        }
        writeln!(out, "  start -> q{};", self.initial()).unwrap();
        for ((from, to), letters) in self.grouped_edges() {
            let label = if letters.len() == sigma.size() {
                "*".to_string()
            } else {
                letters
                    .iter()
                    .map(|&l| sigma.format_letter(&sigma.letter(l)))
                    .collect::<Vec<_>>()
                    .join("\\n")
            };
            writeln!(out, "  q{from} -> q{to} [label=\"{label}\"];").unwrap();
        }
        writeln!(out, "}}").unwrap();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::{d1, d2};
    use super::*;

    #[test]
    fn text_roundtrip() {
        for dfa in [d1(), d2()] {
            let text = dfa.to_text();
            let back = Dfa::from_text(&text).unwrap();
            assert_eq!(back, dfa);
            assert_eq!(back.to_text(), text);
        }
    }

    #[test]
    fn missing_transitions_go_to_dead_state() {
        let text = "bpa 1\naps a b\narity 2\nstates 3\ninitial 0\naccepting 1\n\
                    trans 0 ({a},{a}) 2\ntrans 0 ( {a} , {} ) 1 # comment\n";
        let dfa = Dfa::from_text(text).unwrap();
        assert_eq!(dfa.num_states(), 4);
        let sigma = dfa.alphabet().clone();
        let l = sigma.index(&sigma.parse_letter("({a},{})").unwrap()).unwrap();
        assert_eq!(dfa.next(0, l), 1);
        assert_eq!(dfa.next(0, 0), 3);
        assert!(!dfa.is_accepting(3));
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(Dfa::from_text("aps a\narity 1\nstates 1\ninitial 0\n").is_err());
        assert!(Dfa::from_text("bpa 1\naps a\narity 1\nstates 1\ninitial 3\n").is_err());
        assert!(Dfa::from_text("bpa 1\naps a\narity 1\nstates 1\ninitial 0\ntrans 0 ({b}) 0\n").is_err());
        assert!(Dfa::from_text("bpa 1\naps a\narity 1\nstates 1\ninitial 0\nfoo\n").is_err());
    }

    #[test]
    fn dot_mentions_every_state() {
        let dot = d2().to_dot();
        assert!(dot.contains("q1 [shape=doublecircle]"));
        assert!(dot.contains("start -> q0"));
        assert!(dot.contains("q1 -> q1 [label=\"*\"]"));
    }
}
