//! Built-in automaton pairs used throughout the test suites and available
//! from the command line via `--fixture`.

use crate::error::{Error, Result};
use crate::nba::Nba;

fn build(
    states: &[&str],
    alphabet: &[&str],
    transitions: &[(&str, &str, &str)],
    initial: &str,
    accepting: &[&str],
) -> Nba {
    let trans: Vec<(String, String, String)> = transitions
        .iter()
        .map(|&(s, l, d)| (s.to_string(), l.to_string(), d.to_string()))
        .collect();
    let acc: Vec<String> = accepting.iter().map(|s| s.to_string()).collect();
    Nba::from_parts(
        states.iter().map(|s| s.to_string()).collect(),
        alphabet.iter().map(|s| s.to_string()).collect(),
        &trans,
        initial,
        &acc,
    )
    .expect("fixture automata are well-formed")
}

/// Two-state automaton over {a, b}: p -a-> p, p -a-> q, q -b-> p, F = {q}.
/// Small enough that its transition monoid is easy to inspect by hand.
pub fn a1() -> Nba {
    build(
        &["p", "q"],
        &["a", "b"],
        &[("p", "a", "p"), ("p", "a", "q"), ("q", "b", "p")],
        "p",
        &["q"],
    )
}

/// The branching pair: the right automaton must commit between the b-branch
/// and the c-branch one letter early, so plain fair simulation and every
/// bounded buffer fail, while the quotient (unbounded) games hold.
pub fn branching() -> (Nba, Nba) {
    let sigma = ["a", "b", "c"];
    let a = build(
        &["a0", "a1", "a2", "a3"],
        &sigma,
        &[
            ("a0", "a", "a1"),
            ("a1", "a", "a1"),
            ("a1", "b", "a2"),
            ("a1", "c", "a3"),
            ("a2", "a", "a2"),
            ("a2", "b", "a2"),
            ("a2", "c", "a2"),
            ("a3", "a", "a3"),
            ("a3", "b", "a3"),
            ("a3", "c", "a3"),
        ],
        "a0",
        &["a2", "a3"],
    );
    let b = build(
        &["b0", "b1", "b2", "b3", "b4"],
        &sigma,
        &[
            ("b0", "a", "b1"),
            ("b0", "a", "b3"),
            ("b1", "a", "b1"),
            ("b1", "b", "b2"),
            ("b3", "a", "b3"),
            ("b3", "c", "b4"),
            ("b2", "a", "b2"),
            ("b2", "b", "b2"),
            ("b2", "c", "b2"),
            ("b4", "a", "b4"),
            ("b4", "b", "b4"),
            ("b4", "c", "b4"),
        ],
        "b0",
        &["b2", "b4"],
    );
    (a, b)
}

/// A pair separating the two quotient games: continuous simulation holds
/// but look-ahead (flush-to-empty) simulation fails, because the right
/// automaton can only track the b/c choices with a lag that never clears.
pub fn lookahead_gap() -> (Nba, Nba) {
    let sigma = ["a", "b", "c"];
    let a = build(
        &["a0", "a1"],
        &sigma,
        &[("a0", "a", "a1"), ("a1", "b", "a1"), ("a1", "c", "a1")],
        "a0",
        &["a1"],
    );
    let b = build(
        &["b0", "b1", "b3"],
        &sigma,
        &[
            ("b0", "a", "b1"),
            ("b0", "a", "b3"),
            ("b1", "b", "b1"),
            ("b1", "b", "b3"),
            ("b3", "c", "b3"),
            ("b3", "c", "b1"),
        ],
        "b0",
        &["b1", "b3"],
    );
    (a, b)
}

/// Language inclusion holds (both recognise a^ω ∪ a*b^ω) but even
/// continuous simulation fails: playing a forever forces the right side to
/// commit to the a-loop or starve.
pub fn inclusion_gap() -> (Nba, Nba) {
    let sigma = ["a", "b"];
    let a = build(
        &["s0", "s1"],
        &sigma,
        &[("s0", "a", "s0"), ("s0", "b", "s1"), ("s1", "b", "s1")],
        "s0",
        &["s0", "s1"],
    );
    let b = build(
        &["t0", "t1", "t2"],
        &sigma,
        &[
            ("t0", "a", "t0"),
            ("t0", "a", "t1"),
            ("t0", "b", "t2"),
            ("t1", "a", "t1"),
            ("t2", "b", "t2"),
        ],
        "t0",
        &["t1", "t2"],
    );
    (a, b)
}

pub const FIXTURE_NAMES: &[&str] = &["branching", "lookahead-gap", "inclusion-gap"];

pub fn fixture(name: &str) -> Result<(Nba, Nba)> {
    match name {
        "branching" => Ok(branching()),
        "lookahead-gap" => Ok(lookahead_gap()),
        "inclusion-gap" => Ok(inclusion_gap()),
        _ => Err(Error::UnknownFixture(name.to_string())),
    }
}
