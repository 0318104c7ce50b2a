//! Nondeterministic Büchi automata: the model, parsing, and serialisation.
//!
//! States and letters are kept in their declared order; all iteration is in
//! that order so every downstream construction is deterministic.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A nondeterministic Büchi automaton over an ordered alphabet.
///
/// Immutable after construction. A single initial state only; there are no
/// epsilon transitions.
#[derive(Debug, Clone)]
pub struct Nba {
    states: Vec<String>,
    alphabet: Vec<String>,
    /// Sorted, deduplicated (source, letter, target) triples.
    transitions: Vec<(u32, u32, u32)>,
    initial: u32,
    accepting: Vec<bool>,
    /// succ[state][letter] -> sorted target list.
    succ: Vec<Vec<Vec<u32>>>,
}

impl PartialEq for Nba {
    fn eq(&self, other: &Self) -> bool {
        self.states == other.states
            && self.alphabet == other.alphabet
            && self.transitions == other.transitions
            && self.initial == other.initial
            && self.accepting == other.accepting
    }
}
impl Eq for Nba {}

/// Input format accepted by [`parse_nba`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NbaFormat {
    /// RABIT-compatible `.ba` format.
    Ba,
    /// The line-based native format (`states:`, `alphabet:`, `initial:`,
    /// `accepting:`, `trans:`).
    Native,
}

impl Nba {
    /// Builds an automaton from named parts, validating every invariant.
    pub fn from_parts(
        states: Vec<String>,
        alphabet: Vec<String>,
        transitions: &[(String, String, String)],
        initial: &str,
        accepting: &[String],
    ) -> Result<Nba> {
        if states.is_empty() {
            return Err(Error::EmptyAutomaton);
        }
        let state_idx = unique_index(&states).map_err(Error::UnknownState)?;
        let letter_idx = unique_index(&alphabet).map_err(Error::UnknownLetter)?;
        let initial = *state_idx
            .get(initial)
            .ok_or_else(|| Error::UnknownState(initial.to_string()))?;
        let mut accepting_flags = vec![false; states.len()];
        for a in accepting {
            let i = *state_idx
                .get(a)
                .ok_or_else(|| Error::UnknownState(a.clone()))?;
            accepting_flags[i as usize] = true;
        }
        let mut triples = Vec::with_capacity(transitions.len());
        for (src, letter, dst) in transitions {
            let s = *state_idx
                .get(src)
                .ok_or_else(|| Error::UnknownState(src.clone()))?;
            let l = *letter_idx
                .get(letter)
                .ok_or_else(|| Error::UnknownLetter(letter.clone()))?;
            let d = *state_idx
                .get(dst)
                .ok_or_else(|| Error::UnknownState(dst.clone()))?;
            triples.push((s, l, d));
        }
        Ok(Self::from_indexed(states, alphabet, triples, initial, accepting_flags))
    }

    /// Builds from already-indexed parts. Indices must be in range.
    pub fn from_indexed(
        states: Vec<String>,
        alphabet: Vec<String>,
        mut transitions: Vec<(u32, u32, u32)>,
        initial: u32,
        accepting: Vec<bool>,
    ) -> Nba {
        assert!(!states.is_empty());
        assert!((initial as usize) < states.len());
        assert_eq!(accepting.len(), states.len());
        transitions.sort_unstable();
        transitions.dedup();
        for &(s, l, d) in &transitions {
            assert!((s as usize) < states.len());
            assert!((l as usize) < alphabet.len());
            assert!((d as usize) < states.len());
        }
        let mut succ = vec![vec![Vec::new(); alphabet.len()]; states.len()];
        for &(s, l, d) in &transitions {
            succ[s as usize][l as usize].push(d);
        }
        Nba { states, alphabet, transitions, initial, accepting, succ }
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }
    pub fn num_letters(&self) -> usize {
        self.alphabet.len()
    }
    pub fn states(&self) -> &[String] {
        &self.states
    }
    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }
    pub fn transitions(&self) -> &[(u32, u32, u32)] {
        &self.transitions
    }
    pub fn initial(&self) -> u32 {
        self.initial
    }
    pub fn is_accepting(&self, q: u32) -> bool {
        self.accepting[q as usize]
    }
    pub fn accepting_states(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.states.len() as u32).filter(|&q| self.accepting[q as usize])
    }
    pub fn state_name(&self, q: u32) -> &str {
        &self.states[q as usize]
    }
    pub fn letter_name(&self, l: u32) -> &str {
        &self.alphabet[l as usize]
    }
    pub fn state_index(&self, name: &str) -> Result<u32> {
        self.states
            .iter()
            .position(|s| s == name)
            .map(|i| i as u32)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }
    pub fn letter_index(&self, name: &str) -> Result<u32> {
        self.alphabet
            .iter()
            .position(|s| s == name)
            .map(|i| i as u32)
            .ok_or_else(|| Error::UnknownLetter(name.to_string()))
    }
    /// Sorted successor list of `q` on `letter`.
    pub fn successors(&self, q: u32, letter: u32) -> &[u32] {
        &self.succ[q as usize][letter as usize]
    }
    pub fn has_some_successor(&self, q: u32) -> bool {
        self.succ[q as usize].iter().any(|v| !v.is_empty())
    }

    /// Translates a whitespace-separated letter string (e.g. `"a b a"`) into
    /// letter indices.
    pub fn letters(&self, word: &str) -> Result<Vec<u32>> {
        word.split_whitespace().map(|l| self.letter_index(l)).collect()
    }

    /// States with no outgoing transitions.
    pub fn dead_ends(&self) -> Vec<u32> {
        (0..self.states.len() as u32)
            .filter(|&q| !self.has_some_successor(q))
            .collect()
    }

    /// The same transition structure with every state accepting (the LTS
    /// reading of the automaton).
    pub fn with_all_accepting(&self) -> Nba {
        let mut out = self.clone();
        out.accepting = vec![true; out.states.len()];
        out
    }

    /// The same automaton started from `q` instead of its declared initial
    /// state.
    pub fn with_initial(&self, q: u32) -> Nba {
        assert!((q as usize) < self.states.len());
        let mut out = self.clone();
        out.initial = q;
        out
    }

    /// Serialises to the native format.
    pub fn to_native(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "states: {}", self.states.join(" "));
        let _ = writeln!(out, "alphabet: {}", self.alphabet.join(" "));
        let _ = writeln!(out, "initial: {}", self.states[self.initial as usize]);
        let acc: Vec<&str> = self
            .states
            .iter()
            .enumerate()
            .filter(|(i, _)| self.accepting[*i])
            .map(|(_, s)| s.as_str())
            .collect();
        let _ = writeln!(out, "accepting: {}", acc.join(" "));
        for &(s, l, d) in &self.transitions {
            let _ = writeln!(
                out,
                "trans: {} {} {}",
                self.states[s as usize], self.alphabet[l as usize], self.states[d as usize]
            );
        }
        out
    }

    /// Serialises to the RABIT-compatible `.ba` format.
    ///
    /// The format cannot express isolated states or unused letters; those
    /// are silently dropped by a later re-parse.
    pub fn to_ba(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "[{}]", self.states[self.initial as usize]);
        for &(s, l, d) in &self.transitions {
            let _ = writeln!(
                out,
                "{},[{}]->[{}]",
                self.alphabet[l as usize], self.states[s as usize], self.states[d as usize]
            );
        }
        for (i, st) in self.states.iter().enumerate() {
            if self.accepting[i] {
                let _ = writeln!(out, "[{}]", st);
            }
        }
        out
    }

    /// Graphviz DOT export; accepting states are double-circled, node order
    /// is the declared order.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", name);
        let _ = writeln!(out, "  rankdir=LR;");
        let _ = writeln!(out, "  __init [shape=point];");
        for (i, st) in self.states.iter().enumerate() {
            let shape = if self.accepting[i] { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  \"{}\" [shape={}];", st, shape);
        }
        let _ = writeln!(out, "  __init -> \"{}\";", self.states[self.initial as usize]);
        for &(s, l, d) in &self.transitions {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                self.states[s as usize], self.states[d as usize], self.alphabet[l as usize]
            );
        }
        let _ = writeln!(out, "}}");
        out
    }
}

fn unique_index(items: &[String]) -> std::result::Result<HashMap<String, u32>, String> {
    let mut map = HashMap::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        if map.insert(item.clone(), i as u32).is_some() {
            return Err(format!("duplicate declaration `{}`", item));
        }
    }
    Ok(map)
}

/// Parses an automaton from text in the given format.
pub fn parse_nba(text: &str, format: NbaFormat) -> Result<Nba> {
    match format {
        NbaFormat::Native => parse_native(text),
        NbaFormat::Ba => parse_ba(text),
    }
}

fn parse_native(text: &str) -> Result<Nba> {
    let mut states: Option<Vec<String>> = None;
    let mut alphabet: Option<Vec<String>> = None;
    let mut initial: Option<String> = None;
    let mut accepting: Option<Vec<String>> = None;
    let mut transitions: Vec<(String, String, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, rest) = content.split_once(':').ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected `key: ...`, got `{}`", content),
        })?;
        let fields: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
        match key.trim() {
            "states" => set_once(&mut states, fields, "states", line)?,
            "alphabet" => set_once(&mut alphabet, fields, "alphabet", line)?,
            "initial" => {
                if fields.len() != 1 {
                    return Err(Error::Parse {
                        line,
                        msg: "exactly one initial state is required".into(),
                    });
                }
                set_once(&mut initial, fields.into_iter().next(), "initial", line)?;
            }
            "accepting" => set_once(&mut accepting, fields, "accepting", line)?,
            "trans" => {
                if fields.len() != 3 {
                    return Err(Error::Parse {
                        line,
                        msg: "trans needs `src letter dst`".into(),
                    });
                }
                transitions.push((fields[0].clone(), fields[1].clone(), fields[2].clone()));
            }
            other => {
                return Err(Error::Parse { line, msg: format!("unknown key `{}`", other) });
            }
        }
    }
    let states = states.ok_or_else(|| missing("states"))?;
    let alphabet = alphabet.ok_or_else(|| missing("alphabet"))?;
    let initial = initial.ok_or_else(|| missing("initial"))?;
    let accepting = accepting.unwrap_or_default();
    Nba::from_parts(states, alphabet, &transitions, &initial, &accepting)
}

fn missing(what: &str) -> Error {
    Error::Parse { line: 0, msg: format!("missing `{}:` declaration", what) }
}

fn set_once<T>(slot: &mut Option<T>, value: impl Into<Option<T>>, what: &str, line: usize) -> Result<()> {
    if slot.is_some() {
        return Err(Error::Parse { line, msg: format!("duplicate `{}:` declaration", what) });
    }
    *slot = value.into();
    Ok(())
}

/// Parses the RABIT `.ba` format. States and letters are registered in
/// first-seen order; the optional leading `[id]` line names the initial
/// state, otherwise the source of the first transition is initial. Trailing
/// `[id]` lines list accepting states; no such section means F is empty.
fn parse_ba(text: &str) -> Result<Nba> {
    let mut states: Vec<String> = Vec::new();
    let mut state_idx: HashMap<String, u32> = HashMap::new();
    let mut alphabet: Vec<String> = Vec::new();
    let mut letter_idx: HashMap<String, u32> = HashMap::new();
    let mut transitions: Vec<(u32, u32, u32)> = Vec::new();
    let mut initial: Option<u32> = None;
    let mut accepting_names: Vec<(usize, String)> = Vec::new();
    let mut seen_transition = false;

    let intern_state = |name: &str,
                            states: &mut Vec<String>,
                            state_idx: &mut HashMap<String, u32>| {
        *state_idx.entry(name.to_string()).or_insert_with(|| {
            states.push(name.to_string());
            states.len() as u32 - 1
        })
    };

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = parse_bracket_line(content) {
            if !seen_transition && initial.is_none() && accepting_names.is_empty() {
                let idx = intern_state(rest, &mut states, &mut state_idx);
                initial = Some(idx);
            } else {
                accepting_names.push((line, rest.to_string()));
            }
            continue;
        }
        // letter,[src]->[dst]
        let (letter, arrow) = content.split_once(',').ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected `letter,[src]->[dst]`, got `{}`", content),
        })?;
        let (src_part, dst_part) = arrow.split_once("->").ok_or_else(|| Error::Parse {
            line,
            msg: "missing `->` in transition".into(),
        })?;
        let src = strip_brackets(src_part.trim())
            .ok_or_else(|| Error::Parse { line, msg: "source state must be `[id]`".into() })?;
        let dst = strip_brackets(dst_part.trim())
            .ok_or_else(|| Error::Parse { line, msg: "target state must be `[id]`".into() })?;
        if !accepting_names.is_empty() {
            return Err(Error::Parse {
                line,
                msg: "transition after accepting-state section".into(),
            });
        }
        let l = *letter_idx.entry(letter.trim().to_string()).or_insert_with(|| {
            alphabet.push(letter.trim().to_string());
            alphabet.len() as u32 - 1
        });
        let s = intern_state(src, &mut states, &mut state_idx);
        let d = intern_state(dst, &mut states, &mut state_idx);
        if initial.is_none() {
            initial = Some(s);
        }
        transitions.push((s, l, d));
        seen_transition = true;
    }
    if states.is_empty() {
        return Err(Error::EmptyAutomaton);
    }
    let initial = initial.expect("states nonempty implies an initial state");
    let mut accepting = vec![false; states.len()];
    for (line, name) in accepting_names {
        match state_idx.get(&name) {
            Some(&i) => accepting[i as usize] = true,
            None => {
                return Err(Error::Parse {
                    line,
                    msg: format!("accepting state `{}` never occurs in a transition", name),
                })
            }
        }
    }
    Ok(Nba::from_indexed(states, alphabet, transitions, initial, accepting))
}

fn parse_bracket_line(content: &str) -> Option<&str> {
    if content.contains("->") || content.contains(',') {
        return None;
    }
    strip_brackets(content)
}

fn strip_brackets(s: &str) -> Option<&str> {
    s.strip_prefix('[')?.strip_suffix(']')
}

/// The disjoint union A ⊎ B used by the congruence and the quotient games.
///
/// States of `a` come first (same indices), states of `b` follow shifted by
/// `a.num_states()`; the union's declared initial state is `a`'s.
#[derive(Debug, Clone)]
pub struct DisjointUnion {
    pub nba: Nba,
    pub a_states: usize,
    pub b_states: usize,
    pub a_initial: u32,
    pub b_initial: u32,
}

impl DisjointUnion {
    pub fn new(a: &Nba, b: &Nba) -> Result<DisjointUnion> {
        if a.alphabet() != b.alphabet() {
            return Err(Error::AlphabetMismatch);
        }
        let offset = a.num_states() as u32;
        let mut states: Vec<String> = a.states().iter().map(|s| format!("A.{}", s)).collect();
        states.extend(b.states().iter().map(|s| format!("B.{}", s)));
        let mut transitions = a.transitions().to_vec();
        transitions.extend(b.transitions().iter().map(|&(s, l, d)| (s + offset, l, d + offset)));
        let mut accepting: Vec<bool> = (0..a.num_states() as u32).map(|q| a.is_accepting(q)).collect();
        accepting.extend((0..b.num_states() as u32).map(|q| b.is_accepting(q)));
        let nba = Nba::from_indexed(states, a.alphabet().to_vec(), transitions, a.initial(), accepting);
        Ok(DisjointUnion {
            nba,
            a_states: a.num_states(),
            b_states: b.num_states(),
            a_initial: a.initial(),
            b_initial: b.initial() + offset,
        })
    }

    pub fn is_a_state(&self, q: u32) -> bool {
        (q as usize) < self.a_states
    }
}
