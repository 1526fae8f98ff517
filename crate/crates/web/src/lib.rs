//! Browser bindings: compile a formula, test a trace set and run a learning
//! session. Every entry point returns a JSON string; errors are reported as
//! `{"ok": false, "error": ...}`.

use hyperbpa::cli::compile;
use hyperbpa::learner::Outcome;
use hyperbpa::{learn, parse_hyper, Dfa, Error, LearnConfig, TeacherSession, TraceSet};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn automaton_json(dfa: &Dfa) -> Value {
    let sigma = dfa.alphabet();
    let edges: Vec<Value> = dfa
        .grouped_edges()
        .into_iter()
        .map(|((from, to), letters)| {
            let labels: Vec<String> = letters
                .iter()
                .map(|&l| sigma.format_letter(&sigma.letter(l)))
                .collect();
            json!({ "from": from, "to": to, "labels": labels, "all": letters.len() == sigma.size() })
        })
        .collect();
    json!({
        "aps": sigma.aps(),
        "arity": sigma.arity(),
        "states": dfa.num_states(),
        "initial": dfa.initial(),
        "accepting": dfa.accepting_states(),
        "edges": edges,
        "text": dfa.to_text(),
    })
}

fn failure(e: Error) -> String {
    json!({ "ok": false, "error": e.to_string() }).to_string()
}

pub fn compile_json(formula: &str) -> String {
    let run = || -> Result<Value, Error> {
        let f = parse_hyper(formula)?;
        let dfa = compile(&f, None)?;
        Ok(json!({ "ok": true, "automaton": automaton_json(&dfa) }))
    };
    run().map_or_else(failure, |v| v.to_string())
}

pub fn member_json(formula: &str, traces: &str) -> String {
    let run = || -> Result<Value, Error> {
        let mut session = TeacherSession::new(parse_hyper(formula)?)?;
        let t = TraceSet::parse(session.aps().clone(), traces)?;
        let bad = session.member(&t)?;
        Ok(json!({ "ok": true, "bad_prefix": bad, "traces": t.to_string() }))
    };
    run().map_or_else(failure, |v| v.to_string())
}

pub fn learn_json(formula: &str, max_rounds: usize) -> String {
    let run = || -> Result<Value, Error> {
        let mut session = TeacherSession::new(parse_hyper(formula)?)?;
        let config = LearnConfig {
            max_rounds,
            max_arity: None,
        };
        let report = learn(&mut session, config)?;
        let rounds: Vec<Value> = report
            .rounds
            .iter()
            .map(|r| {
                let sigma = r.hypothesis.alphabet();
                let outcome = match &r.outcome {
                    Outcome::Negative(w) => format!("negative counterexample {}", sigma.format_word(w)),
                    Outcome::Positive(t) => format!("positive counterexample {t}"),
                    Outcome::NotComplete(w) => format!("not permutation-complete, witness {}", sigma.format_word(w)),
                    Outcome::Accepted => "accepted".to_string(),
                };
                json!({ "arity": r.arity, "rows": r.rows, "outcome": outcome, "automaton": automaton_json(&r.hypothesis) })
            })
            .collect();
        Ok(json!({
            "ok": true,
            "rounds": rounds,
            "automaton": automaton_json(&report.automaton),
            "membership_queries": report.membership_queries,
            "equivalence_queries": report.equivalence_queries,
        }))
    };
    run().map_or_else(failure, |v| v.to_string())
}

#[wasm_bindgen(js_name = compileFormula)]
pub fn compile_formula(formula: &str) -> String {
    compile_json(formula)
}

#[wasm_bindgen(js_name = checkMember)]
pub fn check_member(formula: &str, traces: &str) -> String {
    member_json(formula, traces)
}

#[wasm_bindgen(js_name = learnFormula)]
pub fn learn_formula(formula: &str, max_rounds: usize) -> String {
    learn_json(formula, max_rounds)
}

#[cfg(test)]
mod tests {
    use super::*;

    const RUN: &str = "forall p. forall q. a[p] & G (a[p] <-> a[q])";

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn compile_reports_automaton() {
        let v = parse(&compile_json(RUN));
        assert_eq!(v["ok"], true);
        assert_eq!(v["automaton"]["states"], 3);
        assert_eq!(v["automaton"]["arity"], 2);
        let v = parse(&compile_json("exists p. G a[p]"));
        assert_eq!(v["ok"], false);
    }

    #[test]
    fn member_verdicts() {
        let v = parse(&member_json(RUN, "{a}{}\n{a}{a}\n"));
        assert_eq!(v["bad_prefix"], true);
        let v = parse(&member_json(RUN, "{a}\n"));
        assert_eq!(v["bad_prefix"], false);
        let v = parse(&member_json(RUN, "{a}\n{a}{a}\n"));
        assert_eq!(v["ok"], false);
    }

    #[test]
    fn learn_reports_rounds() {
        let v = parse(&learn_json(RUN, 50));
        assert_eq!(v["ok"], true);
        assert_eq!(v["rounds"].as_array().unwrap().len(), 3);
        assert_eq!(v["automaton"]["states"], 3);
    }
}
