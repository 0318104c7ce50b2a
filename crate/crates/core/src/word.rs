//! Finite and ultimately periodic words, runs, and the exact word-level
//! oracles: the brute-force profile of a finite word and membership of
//! u·v^ω via the product-lasso construction.

use crate::error::{Error, Result};
use crate::nba::Nba;
use crate::profile::Profile;

/// An ultimately periodic infinite word u·v^ω, stored as letter indices of a
/// reference alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UltimatelyPeriodicWord {
    pub stem: Vec<u32>,
    pub period: Vec<u32>,
}

impl UltimatelyPeriodicWord {
    pub fn new(stem: Vec<u32>, period: Vec<u32>) -> Result<UltimatelyPeriodicWord> {
        if period.is_empty() {
            return Err(Error::InvalidRun("period must be nonempty".into()));
        }
        Ok(UltimatelyPeriodicWord { stem, period })
    }

    /// The equivalent word with one period unrolled into the stem.
    pub fn unrolled_once(&self) -> UltimatelyPeriodicWord {
        let mut stem = self.stem.clone();
        stem.extend_from_slice(&self.period);
        UltimatelyPeriodicWord { stem, period: self.period.clone() }
    }

    /// The first `n` letters of the infinite word.
    pub fn prefix(&self, n: usize) -> Vec<u32> {
        (0..n)
            .map(|i| {
                if i < self.stem.len() {
                    self.stem[i]
                } else {
                    self.period[(i - self.stem.len()) % self.period.len()]
                }
            })
            .collect()
    }

    pub fn render(&self, a: &Nba) -> String {
        let part = |w: &[u32]| {
            if w.is_empty() {
                "ε".to_string()
            } else {
                w.iter().map(|&l| a.letter_name(l)).collect::<Vec<_>>().join(".")
            }
        };
        format!("{}:{}", part(&self.stem), part(&self.period))
    }
}

/// A finite path q_0 a_1 q_1 ... a_n q_n of a reference automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunPath {
    pub states: Vec<u32>,
    pub word: Vec<u32>,
}

impl RunPath {
    pub fn new(states: Vec<u32>, word: Vec<u32>) -> Result<RunPath> {
        if states.len() != word.len() + 1 {
            return Err(Error::InvalidRun(format!(
                "{} states do not fit {} letters",
                states.len(),
                word.len()
            )));
        }
        Ok(RunPath { states, word })
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Checks every step against the automaton's transition relation.
    pub fn validate(&self, a: &Nba) -> Result<()> {
        for i in 0..self.word.len() {
            if !a.successors(self.states[i], self.word[i]).contains(&self.states[i + 1]) {
                return Err(Error::InvalidRun(format!(
                    "step {} is not a transition",
                    i
                )));
            }
        }
        Ok(())
    }
}

/// The profile f_w of a finite word, computed by forward propagation of
/// (state, seen-accepting) sets per start state — independent of the monoid
/// module's profile composition.
pub fn word_profile(a: &Nba, w: &[u32]) -> Result<Profile> {
    let n = a.num_states();
    for &l in w {
        if l as usize >= a.num_letters() {
            return Err(Error::UnknownLetter(format!("#{}", l)));
        }
    }
    let mut out = Profile::empty(n);
    for start in 0..n {
        // reach[q] ∈ {0: unreachable, 1: path, 2: path through an accepting
        // position ≥ 1}. The start state's own acceptance never counts.
        let mut reach = vec![0u8; n];
        reach[start] = 1;
        for &l in w {
            let mut next = vec![0u8; n];
            for q in 0..n {
                if reach[q] == 0 {
                    continue;
                }
                for &d in a.successors(q as u32, l) {
                    let tag = if a.is_accepting(d) { 2 } else { reach[q] };
                    let slot = &mut next[d as usize];
                    *slot = (*slot).max(tag);
                }
            }
            reach = next;
        }
        for (q, &tag) in reach.iter().enumerate() {
            match tag {
                1 => out.set_path(start, q),
                2 => out.set_accepting(start, q),
                _ => {}
            }
        }
    }
    Ok(out)
}

/// Exact membership of u·v^ω in L(a): product of `a` with the lasso
/// automaton of (u, v), then search for a reachable cycle through an
/// accepting product state.
pub fn periodic_membership(a: &Nba, w: &UltimatelyPeriodicWord) -> bool {
    let stem_len = w.stem.len();
    let total = stem_len + w.period.len();
    let n = a.num_states();
    let letter_at = |s: usize| {
        if s < stem_len {
            w.stem[s]
        } else {
            w.period[s - stem_len]
        }
    };
    let next_pos = |s: usize| if s + 1 < total { s + 1 } else { stem_len };
    let node = |q: u32, s: usize| q as usize * total + s;

    // Reachable product exploration.
    let mut reachable = vec![false; n * total];
    let start = node(a.initial(), 0);
    reachable[start] = true;
    let mut stack = vec![start];
    let mut succs: Vec<Vec<u32>> = vec![Vec::new(); n * total];
    while let Some(v) = stack.pop() {
        let (q, s) = ((v / total) as u32, v % total);
        let l = letter_at(s);
        if (l as usize) < a.num_letters() {
            for &d in a.successors(q, l) {
                let u = node(d, next_pos(s));
                succs[v].push(u as u32);
                if !reachable[u] {
                    reachable[u] = true;
                    stack.push(u);
                }
            }
        }
    }

    // Tarjan over the reachable product; accept iff some SCC with an
    // internal edge contains an accepting state.
    let mut index = vec![usize::MAX; n * total];
    let mut low = vec![0usize; n * total];
    let mut on_stack = vec![false; n * total];
    let mut comp = vec![usize::MAX; n * total];
    let mut scc_stack: Vec<usize> = Vec::new();
    let mut counter = 0usize;
    let mut comp_count = 0usize;
    // Iterative Tarjan.
    for root in 0..n * total {
        if !reachable[root] || index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&mut (v, ref mut ci)) = call.last_mut() {
            if *ci == 0 {
                index[v] = counter;
                low[v] = counter;
                counter += 1;
                scc_stack.push(v);
                on_stack[v] = true;
            }
            if *ci < succs[v].len() {
                let u = succs[v][*ci] as usize;
                *ci += 1;
                if index[u] == usize::MAX {
                    call.push((u, 0));
                } else if on_stack[u] {
                    low[v] = low[v].min(index[u]);
                }
            } else {
                if low[v] == index[v] {
                    loop {
                        let u = scc_stack.pop().unwrap();
                        on_stack[u] = false;
                        comp[u] = comp_count;
                        if u == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
                let lv = low[v];
                call.pop();
                if let Some(&mut (parent, _)) = call.last_mut() {
                    low[parent] = low[parent].min(lv);
                }
            }
        }
    }

    let mut scc_has_edge = vec![false; comp_count];
    let mut scc_size = vec![0usize; comp_count];
    let mut scc_accepting = vec![false; comp_count];
    for v in 0..n * total {
        if !reachable[v] {
            continue;
        }
        let c = comp[v];
        scc_size[c] += 1;
        if a.is_accepting((v / total) as u32) {
            scc_accepting[c] = true;
        }
        for &u in &succs[v] {
            if comp[u as usize] == c {
                scc_has_edge[c] = true;
            }
        }
    }
    (0..comp_count).any(|c| scc_accepting[c] && (scc_size[c] > 1 || scc_has_edge[c]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{a1, fixture};
    use crate::profile::{ACCEPTING_PATH, NO_PATH, PLAIN_PATH};

    #[test]
    fn empty_word_profile_is_identity() {
        let a = a1();
        let f = word_profile(&a, &[]).unwrap();
        assert_eq!(f, Profile::identity(a.num_states()));
        assert_eq!(f.entry(0, 0), PLAIN_PATH);
        assert_eq!(f.entry(0, 1), NO_PATH);
    }

    #[test]
    fn a1_letter_and_word_profiles() {
        let a = a1();
        let (p, q) = (0usize, 1usize);
        let fa = word_profile(&a, &a.letters("a").unwrap()).unwrap();
        assert_eq!(fa.entry(p, q), ACCEPTING_PATH);
        assert_eq!(fa.entry(p, p), PLAIN_PATH);
        assert_eq!(fa.entry(q, p), NO_PATH);
        assert_eq!(fa.entry(q, q), NO_PATH);
        // p -a-> q -b-> p passes the accepting q at position 1.
        let fab = word_profile(&a, &a.letters("a b").unwrap()).unwrap();
        assert_eq!(fab.entry(p, p), ACCEPTING_PATH);
    }

    #[test]
    fn periodic_membership_a1() {
        let a = a1();
        let w = UltimatelyPeriodicWord::new(a.letters("a").unwrap(), a.letters("a b").unwrap())
            .unwrap();
        assert!(periodic_membership(&a, &w));
    }

    #[test]
    fn no_accepting_states_rejects_everything() {
        let a = a1();
        let no_acc = Nba::from_parts(
            a.states().to_vec(),
            a.alphabet().to_vec(),
            &[
                ("p".into(), "a".into(), "p".into()),
                ("p".into(), "a".into(), "q".into()),
                ("q".into(), "b".into(), "p".into()),
            ],
            "p",
            &[],
        )
        .unwrap();
        let w = UltimatelyPeriodicWord::new(vec![], a.letters("a").unwrap()).unwrap();
        assert!(!periodic_membership(&no_acc, &w));
    }

    #[test]
    fn inclusion_gap_left_accepts_a_omega() {
        let (left, _) = fixture("inclusion-gap").unwrap();
        let w = UltimatelyPeriodicWord::new(vec![], left.letters("a").unwrap()).unwrap();
        assert!(periodic_membership(&left, &w));
    }

    #[test]
    fn unrolling_invariance() {
        let a = a1();
        let w = UltimatelyPeriodicWord::new(a.letters("a").unwrap(), a.letters("a b").unwrap())
            .unwrap();
        assert_eq!(periodic_membership(&a, &w), periodic_membership(&a, &w.unrolled_once()));
    }
}
