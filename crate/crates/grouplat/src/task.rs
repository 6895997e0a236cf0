//! Batch task engine behind the `grouplat` binary: JSON task ingestion,
//! JSON result emission, DOT export, and oracle cross-checks.
//!
//! One task file holds one problem instance. Outputs are schema-stable
//! and byte-deterministic for identical inputs and flags; oracle
//! verification only appends a `verified` field and never changes the
//! primary answer.

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::geodesic::{self, DEFAULT_EXPAND_BUDGET};
use crate::graph::stallings;
use crate::nilpotent::{MalcevVector, NilpotentPresentation};
use crate::oracles::{self, SearchBudget};
use crate::rational::{rational_distance, subgroup_distance, ReducedAcceptor};
use crate::words::{Alphabet, Word};
use crate::Error;

/// Flags shared by the CLI subcommands.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub check_oracle: Option<usize>,
    pub compact: bool,
    pub expand_budget: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            check_oracle: None,
            compact: false,
            expand_budget: DEFAULT_EXPAND_BUDGET,
        }
    }
}

/// Task failure with its CLI exit code: 2 for unparseable input, 3 for a
/// violated precondition.
#[derive(Debug)]
pub struct TaskError {
    pub exit_code: i32,
    pub message: String,
}

impl TaskError {
    fn parse(message: impl Into<String>) -> TaskError {
        TaskError {
            exit_code: 2,
            message: message.into(),
        }
    }

    fn precondition(message: impl Into<String>) -> TaskError {
        TaskError {
            exit_code: 3,
            message: message.into(),
        }
    }
}

impl From<Error> for TaskError {
    fn from(err: Error) -> TaskError {
        if err.is_parse_error() {
            TaskError::parse(err.to_string())
        } else {
            TaskError::precondition(err.to_string())
        }
    }
}

#[derive(Deserialize)]
struct RawTask {
    task: String,
    #[serde(default)]
    alphabet: Option<Vec<String>>,
    #[serde(default)]
    subgroup: Option<Vec<String>>,
    #[serde(default)]
    subgroup2: Option<Vec<String>>,
    #[serde(default)]
    g: Option<String>,
    #[serde(default)]
    w: Option<String>,
    #[serde(default)]
    h: Option<String>,
    #[serde(default)]
    acceptor1: Option<RawAcceptor>,
    #[serde(default)]
    acceptor2: Option<RawAcceptor>,
    #[serde(default)]
    r: Option<usize>,
    #[serde(default)]
    presentation: Option<RawPresentation>,
}

#[derive(Deserialize)]
struct RawAcceptor {
    states: usize,
    initial: usize,
    accepting: Vec<usize>,
    transitions: Vec<(usize, String, usize)>,
}

#[derive(Deserialize)]
struct RawPresentation {
    basis: usize,
    generators: usize,
    #[serde(default)]
    rules: Vec<RawRule>,
}

#[derive(Deserialize)]
struct RawRule {
    j: usize,
    i: usize,
    #[serde(default)]
    tail: Vec<(usize, i64)>,
}

struct Ctx {
    raw: RawTask,
    compact: bool,
}

impl Ctx {
    fn parse(input: &str, compact: bool) -> Result<Ctx, TaskError> {
        let raw: RawTask =
            serde_json::from_str(input).map_err(|e| TaskError::parse(format!("bad task JSON: {e}")))?;
        Ok(Ctx { raw, compact })
    }

    fn alphabet(&self) -> Result<Arc<Alphabet>, TaskError> {
        let names = self
            .raw
            .alphabet
            .as_ref()
            .ok_or_else(|| TaskError::parse("task needs an `alphabet` field"))?;
        Ok(Alphabet::new(names.iter().cloned())?)
    }

    fn word(&self, alphabet: &Arc<Alphabet>, text: &str) -> Result<Word, TaskError> {
        let word = if self.compact {
            Word::parse_compact(alphabet, text)?
        } else {
            Word::parse(alphabet, text)?
        };
        Ok(word)
    }

    fn words(&self, alphabet: &Arc<Alphabet>, texts: &[String]) -> Result<Vec<Word>, TaskError> {
        texts.iter().map(|t| self.word(alphabet, t)).collect()
    }

    fn field<'a, T>(&self, value: &'a Option<T>, name: &str) -> Result<&'a T, TaskError> {
        value
            .as_ref()
            .ok_or_else(|| TaskError::parse(format!("task needs a `{name}` field")))
    }

    fn fmt(&self, w: &Word) -> String {
        if self.compact {
            w.format_compact().expect("compact alphabet checked at parse")
        } else {
            w.to_string()
        }
    }

    fn subgroup_words(&self, alphabet: &Arc<Alphabet>) -> Result<Vec<Word>, TaskError> {
        self.words(alphabet, self.field(&self.raw.subgroup, "subgroup")?)
    }

    fn acceptor(&self, alphabet: &Arc<Alphabet>, raw: &RawAcceptor) -> Result<ReducedAcceptor, TaskError> {
        let mut transitions = Vec::with_capacity(raw.transitions.len());
        for (from, letter, to) in &raw.transitions {
            let word = self.word(alphabet, letter)?;
            if word.len() != 1 {
                return Err(TaskError::parse(format!(
                    "acceptor transition label `{letter}` must be a single letter"
                )));
            }
            transitions.push((*from, word.letters()[0], *to));
        }
        Ok(ReducedAcceptor::from_parts(
            alphabet,
            raw.states,
            raw.initial,
            &raw.accepting,
            &transitions,
        )?)
    }

    fn presentation(&self) -> Result<NilpotentPresentation, TaskError> {
        match (&self.raw.presentation, self.raw.r) {
            (Some(raw), None) => {
                let rules: Vec<(usize, usize, Vec<(usize, BigInt)>)> = raw
                    .rules
                    .iter()
                    .map(|rule| {
                        let tail = rule
                            .tail
                            .iter()
                            .map(|&(sym, exp)| (sym, BigInt::from(exp)))
                            .collect();
                        (rule.j, rule.i, tail)
                    })
                    .collect();
                Ok(NilpotentPresentation::from_rules(
                    raw.basis,
                    raw.generators,
                    0,
                    &rules,
                )?)
            }
            (None, Some(r)) => Ok(NilpotentPresentation::free_class2(r)?),
            (None, None) => Err(TaskError::parse(
                "nilpotent task needs `r` or a `presentation`",
            )),
            (Some(_), Some(_)) => Err(TaskError::parse(
                "give either `r` or a `presentation`, not both",
            )),
        }
    }
}

fn big_number(n: &BigInt) -> Value {
    Value::Number(serde_json::Number::from_str(&n.to_string()).expect("integer literal"))
}

fn malcev_value(v: &MalcevVector) -> Value {
    Value::Array(v.entries().iter().map(big_number).collect())
}

fn free_budget(k: usize) -> SearchBudget {
    SearchBudget::new(k, k)
}

/// Runs one task and returns the result object.
pub fn run_task(input: &str, opts: &RunOptions) -> Result<Value, TaskError> {
    let ctx = Ctx::parse(input, opts.compact)?;
    match ctx.raw.task.as_str() {
        "closest" => {
            let alphabet = ctx.alphabet()?;
            let gens = ctx.subgroup_words(&alphabet)?;
            let g = ctx.word(&alphabet, ctx.field(&ctx.raw.g, "g")?)?;
            let h = stallings(&alphabet, &gens);
            let (witness, d) = h.closest_element(&g);
            let mut out = json!({ "h": ctx.fmt(&witness), "distance": d });
            if let Some(k) = opts.check_oracle {
                let budget = free_budget(k.max(g.reduce().len()));
                let oracle = oracles::oracle_closest_free(&alphabet, &gens, &g, &budget)?;
                out["verified"] = Value::Bool(oracle == d);
            }
            Ok(out)
        }
        "shortest" => {
            let alphabet = ctx.alphabet()?;
            let gens = ctx.subgroup_words(&alphabet)?;
            let h = stallings(&alphabet, &gens);
            let answer = h.shortest_element();
            let mut out = match &answer {
                Some((w, len)) => json!({ "w": ctx.fmt(w), "length": len }),
                None => json!({ "w": null, "length": null }),
            };
            if let Some(k) = opts.check_oracle {
                let budget = free_budget(k.max(2 * h.edge_count() + 1));
                let oracle = oracles::oracle_shortest_free(&alphabet, &gens, &budget);
                out["verified"] = Value::Bool(oracle == answer.map(|(_, len)| len));
            }
            Ok(out)
        }
        "subdist" => {
            let alphabet = ctx.alphabet()?;
            let gens1 = ctx.subgroup_words(&alphabet)?;
            let gens2 = ctx.words(&alphabet, ctx.field(&ctx.raw.subgroup2, "subgroup2")?)?;
            let h = stallings(&alphabet, &gens1);
            let k = stallings(&alphabet, &gens2);
            let (hw, kw, d) = subgroup_distance(&h, &k)?;
            let mut out = json!({ "h": ctx.fmt(&hw), "k": ctx.fmt(&kw), "distance": d });
            if let Some(kb) = opts.check_oracle {
                let budget = free_budget(kb.max(hw.len()).max(kw.len()));
                let oracle = oracles::oracle_distance_free(&alphabet, &gens1, &gens2, &budget)?;
                out["verified"] = Value::Bool(oracle == d);
            }
            Ok(out)
        }
        "ratdist" => {
            let alphabet = ctx.alphabet()?;
            let a = ctx.acceptor(&alphabet, ctx.field(&ctx.raw.acceptor1, "acceptor1")?)?;
            let b = ctx.acceptor(&alphabet, ctx.field(&ctx.raw.acceptor2, "acceptor2")?)?;
            let (r, s, d) = rational_distance(&a, &b)?;
            let mut out = json!({ "r": ctx.fmt(&r), "s": ctx.fmt(&s), "distance": d });
            if let Some(k) = opts.check_oracle {
                let budget = free_budget(k.max(r.len()).max(s.len()));
                let oracle = oracles::oracle_rational(&a, &b, &budget);
                out["verified"] = Value::Bool(oracle == Some(d));
            }
            Ok(out)
        }
        "geodesic" => {
            let alphabet = ctx.alphabet()?;
            let gens = ctx.subgroup_words(&alphabet)?;
            let w = ctx.word(&alphabet, ctx.field(&ctx.raw.w, "w")?)?;
            match geodesic::geodesic(&alphabet, &gens, &w, opts.expand_budget) {
                Ok(result) => {
                    let mut out = json!({
                        "factorization": result.factorization.to_string(),
                        "k": result.length,
                    });
                    if let Some(k) = opts.check_oracle {
                        let budget = free_budget(k.max(result.length));
                        let oracle = oracles::oracle_geodesic(&alphabet, &gens, &w, &budget);
                        out["verified"] = Value::Bool(oracle == Some(result.length));
                    }
                    Ok(out)
                }
                // Not expressible in the generators: a negative answer,
                // not a failure.
                Err(Error::NotInSubgroup) => {
                    let mut out = json!({ "factorization": null, "k": null });
                    if let Some(k) = opts.check_oracle {
                        let budget = free_budget(k);
                        let oracle = oracles::oracle_geodesic(&alphabet, &gens, &w, &budget);
                        out["verified"] = Value::Bool(oracle.is_none());
                    }
                    Ok(out)
                }
                // Too long to expand: report the exact length anyway.
                Err(Error::BudgetExceeded { length, .. }) => Ok(json!({
                    "factorization": null,
                    "k": Value::Number(
                        serde_json::Number::from_str(&length.to_string()).expect("integer"),
                    ),
                })),
                Err(err) => Err(err.into()),
            }
        }
        "nilp-collect" => {
            let p = ctx.presentation()?;
            let w = ctx.word(p.alphabet(), ctx.field(&ctx.raw.w, "w")?)?;
            let vec = p.collect(&w);
            let mut out = json!({ "malcev": malcev_value(&vec) });
            if opts.check_oracle.is_some() {
                let verified = if ctx.raw.r.is_some() {
                    oracles::oracle_collect_class2(p.rank(), &w) == vec
                } else {
                    // No independent normal form for data presentations;
                    // check the homomorphism property over prefix splits.
                    (0..=w.len()).step_by(1.max(w.len() / 4)).all(|cut| {
                        let head =
                            Word::from_letters(p.alphabet(), w.letters()[..cut].to_vec()).unwrap();
                        let tail =
                            Word::from_letters(p.alphabet(), w.letters()[cut..].to_vec()).unwrap();
                        p.multiply(&p.collect(&head), &p.collect(&tail)) == vec
                    })
                };
                out["verified"] = Value::Bool(verified);
            }
            Ok(out)
        }
        "nilp-member" => {
            let p = ctx.presentation()?;
            let gens = ctx.subgroup_words(p.alphabet())?;
            let h = ctx.word(p.alphabet(), ctx.field(&ctx.raw.h, "h")?)?;
            let h_vec = p.collect(&h);
            let matrix = p.full_form(&p.collect_all(&gens));
            let answer = p.membership(&matrix, &h_vec);
            let mut out = match &answer {
                Some(exps) => json!({
                    "member": true,
                    "exponents": Value::Array(exps.iter().map(big_number).collect()),
                }),
                None => json!({ "member": false }),
            };
            if let Some(k) = opts.check_oracle {
                let budget = SearchBudget::new(k, k);
                let seen = oracles::oracle_nilpotent_subgroup(&p, &gens, &budget)?;
                // The enumeration is a subset of the subgroup: members it
                // contains must test positive, and a negative answer must
                // keep h outside it.
                let verified = if answer.is_some() {
                    true
                } else {
                    !seen.contains(&h_vec)
                };
                out["verified"] = Value::Bool(verified);
            }
            Ok(out)
        }
        "nilp-closest" => {
            let p = ctx.presentation()?;
            let gens = ctx.subgroup_words(p.alphabet())?;
            let g = ctx.word(p.alphabet(), ctx.field(&ctx.raw.g, "g")?)?;
            let (h, d) = p.closest_element(&gens, &g);
            let mut out = json!({ "h": ctx.fmt(&h), "distance": d });
            if let Some(k) = opts.check_oracle {
                let budget = SearchBudget::new(k, k);
                let seen = oracles::oracle_nilpotent_subgroup(&p, &gens, &budget)?;
                let g_red = g.reduce();
                let g_vec = p.collect(&g_red);
                let mut oracle = None;
                for (b_vec, b_word) in p.ball(g_red.len()) {
                    if seen.contains(&p.multiply(&g_vec, &b_vec)) {
                        oracle = Some(b_word.len());
                        break;
                    }
                }
                out["verified"] = Value::Bool(oracle == Some(d));
            }
            Ok(out)
        }
        "nilp-shortest" => {
            let p = ctx.presentation()?;
            let gens = ctx.subgroup_words(p.alphabet())?;
            let answer = p.shortest_element(&gens);
            let mut out = match &answer {
                Some((w, len)) => json!({ "w": ctx.fmt(w), "length": len }),
                None => json!({ "w": null, "length": null }),
            };
            if let Some(k) = opts.check_oracle {
                let budget = SearchBudget::new(k, k);
                let seen = oracles::oracle_nilpotent_subgroup(&p, &gens, &budget)?;
                let radius: usize = gens.iter().map(|g| g.reduce().len()).sum();
                let mut oracle = None;
                for (b_vec, b_word) in p.ball(radius) {
                    if !b_word.is_empty() && seen.contains(&b_vec) {
                        oracle = Some(b_word.len());
                        break;
                    }
                }
                out["verified"] = Value::Bool(oracle == answer.map(|(_, len)| len));
            }
            Ok(out)
        }
        other => Err(TaskError::parse(format!("unknown task kind `{other}`"))),
    }
}

/// DOT text of the graph behind a task: the folded subgroup graph for
/// `closest`/`shortest`/`subdist` (the first subgroup), the completed
/// bouquet with μ labels and ν lengths for `geodesic`.
pub fn export_dot(input: &str, opts: &RunOptions) -> Result<String, TaskError> {
    let ctx = Ctx::parse(input, opts.compact)?;
    match ctx.raw.task.as_str() {
        "closest" | "shortest" | "subdist" => {
            let alphabet = ctx.alphabet()?;
            let gens = ctx.subgroup_words(&alphabet)?;
            Ok(stallings(&alphabet, &gens).dot())
        }
        "geodesic" => {
            let alphabet = ctx.alphabet()?;
            let gens = ctx.subgroup_words(&alphabet)?;
            let graph = geodesic::bouquet(&alphabet, &gens)?.complete();
            Ok(graph.dot())
        }
        other => Err(TaskError::parse(format!(
            "task kind `{other}` does not produce a graph"
        ))),
    }
}

/// Runs the brute-force oracle matching a task, standalone.
pub fn run_oracle(input: &str, budget: Option<usize>, opts: &RunOptions) -> Result<Value, TaskError> {
    let ctx = Ctx::parse(input, opts.compact)?;
    match ctx.raw.task.as_str() {
        "closest" => {
            let alphabet = ctx.alphabet()?;
            let gens = ctx.subgroup_words(&alphabet)?;
            let g = ctx.word(&alphabet, ctx.field(&ctx.raw.g, "g")?)?;
            let k = budget.unwrap_or(g.reduce().len()).max(g.reduce().len());
            let d = oracles::oracle_closest_free(&alphabet, &gens, &g, &free_budget(k))?;
            Ok(json!({ "distance": d }))
        }
        "shortest" => {
            let alphabet = ctx.alphabet()?;
            let gens = ctx.subgroup_words(&alphabet)?;
            let h = stallings(&alphabet, &gens);
            let k = budget.unwrap_or(2 * h.edge_count() + 1);
            let answer = oracles::oracle_shortest_free(&alphabet, &gens, &free_budget(k));
            Ok(json!({ "length": answer }))
        }
        "subdist" => {
            let alphabet = ctx.alphabet()?;
            let gens1 = ctx.subgroup_words(&alphabet)?;
            let gens2 = ctx.words(&alphabet, ctx.field(&ctx.raw.subgroup2, "subgroup2")?)?;
            let total: usize = gens1.iter().chain(&gens2).map(|w| w.reduce().len()).sum();
            let k = budget.unwrap_or(total.max(1));
            let d = oracles::oracle_distance_free(&alphabet, &gens1, &gens2, &free_budget(k))?;
            Ok(json!({ "distance": d }))
        }
        "ratdist" => {
            let alphabet = ctx.alphabet()?;
            let a = ctx.acceptor(&alphabet, ctx.field(&ctx.raw.acceptor1, "acceptor1")?)?;
            let b = ctx.acceptor(&alphabet, ctx.field(&ctx.raw.acceptor2, "acceptor2")?)?;
            let k = budget.unwrap_or(6);
            let d = oracles::oracle_rational(&a, &b, &free_budget(k));
            Ok(json!({ "distance": d }))
        }
        "geodesic" => {
            let alphabet = ctx.alphabet()?;
            let gens = ctx.subgroup_words(&alphabet)?;
            let w = ctx.word(&alphabet, ctx.field(&ctx.raw.w, "w")?)?;
            let k = budget.unwrap_or(8);
            let answer = oracles::oracle_geodesic(&alphabet, &gens, &w, &free_budget(k));
            Ok(json!({ "k": answer }))
        }
        "nilp-collect" => {
            let p = ctx.presentation()?;
            if ctx.raw.r.is_none() {
                return Err(TaskError::precondition(
                    "no independent oracle for data presentations".to_string(),
                ));
            }
            let w = ctx.word(p.alphabet(), ctx.field(&ctx.raw.w, "w")?)?;
            Ok(json!({ "malcev": malcev_value(&oracles::oracle_collect_class2(p.rank(), &w)) }))
        }
        "nilp-member" => {
            let p = ctx.presentation()?;
            let gens = ctx.subgroup_words(p.alphabet())?;
            let h = ctx.word(p.alphabet(), ctx.field(&ctx.raw.h, "h")?)?;
            let k = budget.unwrap_or(4);
            let seen = oracles::oracle_nilpotent_subgroup(&p, &gens, &SearchBudget::new(k, k))?;
            Ok(json!({ "member": seen.contains(&p.collect(&h)) }))
        }
        other => Err(TaskError::parse(format!(
            "no oracle for task kind `{other}`"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(input: &str) -> Value {
        run_task(input, &RunOptions::default()).unwrap()
    }

    #[test]
    fn closest_task_matches_documented_output() {
        let out = run(r#"{"task":"closest","alphabet":["a","b"],"subgroup":["a b a^-1"],"g":"a b"}"#);
        assert_eq!(
            serde_json::to_string(&out).unwrap(),
            r#"{"h":"a b a^-1","distance":1}"#
        );
    }

    #[test]
    fn geodesic_task_matches_documented_output() {
        let out =
            run(r#"{"task":"geodesic","alphabet":["x1","x2"],"subgroup":["x1","x1 x2"],"w":"x2"}"#);
        assert_eq!(
            serde_json::to_string(&out).unwrap(),
            r#"{"factorization":"h1^-1 h2","k":2}"#
        );
    }

    #[test]
    fn collect_task_matches_documented_output() {
        let out = run(r#"{"task":"nilp-collect","r":2,"w":"x2 x1"}"#);
        assert_eq!(
            serde_json::to_string(&out).unwrap(),
            r#"{"malcev":[1,1,1]}"#
        );
    }

    #[test]
    fn oracle_flag_appends_verified() {
        let opts = RunOptions {
            check_oracle: Some(4),
            ..RunOptions::default()
        };
        for input in [
            r#"{"task":"closest","alphabet":["a","b"],"subgroup":["a b a^-1"],"g":"a b"}"#,
            r#"{"task":"geodesic","alphabet":["x1","x2"],"subgroup":["x1","x1 x2"],"w":"x2"}"#,
            r#"{"task":"nilp-collect","r":2,"w":"x2 x1"}"#,
        ] {
            let out = run_task(input, &opts).unwrap();
            assert_eq!(out["verified"], Value::Bool(true));
            // The flag only appends fields.
            let mut plain = run_task(input, &RunOptions::default()).unwrap();
            plain["verified"] = Value::Bool(true);
            assert_eq!(out, plain);
        }
    }

    #[test]
    fn exit_codes_by_error_class() {
        // Unknown generator: parse error.
        let err = run_task(
            r#"{"task":"closest","alphabet":["a"],"subgroup":["b"],"g":"a"}"#,
            &RunOptions::default(),
        )
        .unwrap_err();
        assert_eq!(err.exit_code, 2);
        // Trivial generator for the bouquet: precondition.
        let err = run_task(
            r#"{"task":"geodesic","alphabet":["a"],"subgroup":["a a^-1"],"w":"a"}"#,
            &RunOptions::default(),
        )
        .unwrap_err();
        assert_eq!(err.exit_code, 3);
        // Unknown task kind.
        let err = run_task(r#"{"task":"nope"}"#, &RunOptions::default()).unwrap_err();
        assert_eq!(err.exit_code, 2);
    }

    #[test]
    fn negative_answers_are_not_errors() {
        let out = run(r#"{"task":"geodesic","alphabet":["x1","x2"],"subgroup":["x1"],"w":"x2"}"#);
        assert_eq!(out["factorization"], Value::Null);
        let out = run(
            r#"{"task":"nilp-member","r":2,"subgroup":["x1 x1","x2"],"h":"x1^-1 x2^-1 x1 x2"}"#,
        );
        assert_eq!(out["member"], Value::Bool(false));
        let out = run(r#"{"task":"shortest","alphabet":["a"],"subgroup":["a a^-1"]}"#);
        assert_eq!(out["w"], Value::Null);
    }

    #[test]
    fn ratdist_task_round_trip() {
        // User automata must accept only reduced words, so runs of a
        // generator track their sign. Here: the coset words b^k·a against
        // the subgroup words b^m.
        let input = r#"{
            "task": "ratdist",
            "alphabet": ["a", "b"],
            "acceptor1": {"states": 4, "initial": 0, "accepting": [3],
                          "transitions": [[0, "b", 1], [1, "b", 1],
                                          [0, "b^-1", 2], [2, "b^-1", 2],
                                          [0, "a", 3], [1, "a", 3], [2, "a", 3]]},
            "acceptor2": {"states": 3, "initial": 0, "accepting": [0, 1, 2],
                          "transitions": [[0, "b", 1], [1, "b", 1],
                                          [0, "b^-1", 2], [2, "b^-1", 2]]}
        }"#;
        let out = run(input);
        assert_eq!(out["distance"], json!(1));
        assert_eq!(out["r"], json!("a"));
        assert_eq!(out["s"], json!(""));

        // A Stallings-style involutive automaton formally accepts the
        // unreduced word a·a⁻¹ and is rejected as user input.
        let bad = r#"{
            "task": "ratdist",
            "alphabet": ["a", "b"],
            "acceptor1": {"states": 1, "initial": 0, "accepting": [0],
                          "transitions": [[0, "a", 0], [0, "a^-1", 0]]},
            "acceptor2": {"states": 1, "initial": 0, "accepting": [0], "transitions": []}
        }"#;
        let err = run_task(bad, &RunOptions::default()).unwrap_err();
        assert_eq!(err.exit_code, 3);
    }

    #[test]
    fn compact_mode_parses_and_formats() {
        let opts = RunOptions {
            compact: true,
            ..RunOptions::default()
        };
        let out = run_task(
            r#"{"task":"closest","alphabet":["a","b"],"subgroup":["abA"],"g":"ab"}"#,
            &opts,
        )
        .unwrap();
        assert_eq!(out["h"], json!("abA"));
        assert_eq!(out["distance"], json!(1));
    }

    #[test]
    fn dot_export_shapes() {
        let out = export_dot(
            r#"{"task":"closest","alphabet":["a","b"],"subgroup":["a b a^-1"],"g":"a b"}"#,
            &RunOptions::default(),
        )
        .unwrap();
        assert_eq!(out.matches("->").count(), 2);

        let out = export_dot(
            r#"{"task":"shortest","alphabet":["a"],"subgroup":[]}"#,
            &RunOptions::default(),
        )
        .unwrap();
        assert_eq!(out.matches("->").count(), 0);

        let out = export_dot(
            r#"{"task":"geodesic","alphabet":["x1","x2"],"subgroup":["x1","x1 x2"],"w":"x2"}"#,
            &RunOptions::default(),
        )
        .unwrap();
        assert!(out.contains("digraph bouquet"));
        assert!(out.contains("(2)"), "ν lengths annotate the arcs: {out}");

        let err = export_dot(r#"{"task":"nilp-collect","r":2,"w":"x1"}"#, &RunOptions::default())
            .unwrap_err();
        assert_eq!(err.exit_code, 2);
    }

    #[test]
    fn oracle_subcommand_outputs() {
        let out = run_oracle(
            r#"{"task":"closest","alphabet":["a","b"],"subgroup":["a b a^-1"],"g":"a b"}"#,
            None,
            &RunOptions::default(),
        )
        .unwrap();
        assert_eq!(out["distance"], json!(1));

        let out = run_oracle(
            r#"{"task":"geodesic","alphabet":["x1","x2"],"subgroup":["x1","x1 x2"],"w":"x2"}"#,
            Some(4),
            &RunOptions::default(),
        )
        .unwrap();
        assert_eq!(out["k"], json!(2));
    }
}
