//! State-preorder minimisation: quotienting and pruning driven by bounded-k
//! buffered simulations between states of a single automaton.

use crate::error::{Error, Result};
use crate::games::{build_bounded_buffer_arena, solve, Acceptance, BufferMode};
use crate::nba::Nba;

/// Which bounded simulation a preorder was computed from. Pruning is only
/// sound for direct provenance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreorderKind {
    Direct,
    Delayed,
}

impl PreorderKind {
    pub fn name(self) -> &'static str {
        match self {
            PreorderKind::Direct => "direct",
            PreorderKind::Delayed => "delayed",
        }
    }
}

impl std::str::FromStr for PreorderKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<PreorderKind> {
        match s {
            "direct" => Ok(PreorderKind::Direct),
            "delayed" => Ok(PreorderKind::Delayed),
            other => Err(Error::Parse { line: 0, msg: format!("unknown relation kind `{other}`") }),
        }
    }
}

/// A reflexive preorder over the states of one automaton, with provenance.
#[derive(Debug, Clone)]
pub struct StatePreorder {
    pub kind: PreorderKind,
    pub k: usize,
    num_states: usize,
    relation: Vec<bool>,
}

impl StatePreorder {
    /// The identity relation (only reflexive pairs).
    pub fn identity(num_states: usize, kind: PreorderKind, k: usize) -> StatePreorder {
        let mut relation = vec![false; num_states * num_states];
        for q in 0..num_states {
            relation[q * num_states + q] = true;
        }
        StatePreorder { kind, k, num_states, relation }
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    /// Whether A(q) is simulated by A(q').
    pub fn le(&self, q: u32, qp: u32) -> bool {
        self.relation[q as usize * self.num_states + qp as usize]
    }

    pub fn equivalent(&self, q: u32, qp: u32) -> bool {
        self.le(q, qp) && self.le(qp, q)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let n = self.num_states;
        (0..n * n).filter(|&i| self.relation[i]).map(move |i| ((i / n) as u32, (i % n) as u32))
    }
}

/// Computes the bounded-k look-ahead buffered simulation preorder between the
/// states of `a`: (q, q') is in the relation iff Duplicator wins the bounded-k
/// game between A(q) and A(q').
pub fn compute_preorder(a: &Nba, kind: PreorderKind, k: usize, cap: usize) -> Result<StatePreorder> {
    if k == 0 {
        return Err(Error::InvalidBufferBound);
    }
    let acceptance = match kind {
        PreorderKind::Direct => Acceptance::Direct,
        PreorderKind::Delayed => Acceptance::Delayed,
    };
    let n = a.num_states();
    let mut relation = vec![false; n * n];
    for q in 0..n as u32 {
        let from = a.with_initial(q);
        for qp in 0..n as u32 {
            let held = if q == qp {
                true
            } else {
                let to = a.with_initial(qp);
                let arena =
                    build_bounded_buffer_arena(&from, &to, k, BufferMode::Lookahead, acceptance, cap)?;
                solve(&arena).holds
            };
            relation[q as usize * n + qp as usize] = held;
        }
    }
    Ok(StatePreorder { kind, k, num_states: n, relation })
}

/// Merges mutually related states. A class is accepting iff any member is;
/// the initial class is the one containing the initial state. Class
/// representatives are the least member index, so output order is stable.
pub fn quotient(a: &Nba, r: &StatePreorder) -> Nba {
    assert_eq!(r.num_states(), a.num_states());
    let n = a.num_states();
    let mut class_of = vec![u32::MAX; n];
    let mut members: Vec<Vec<u32>> = Vec::new();
    for q in 0..n as u32 {
        if class_of[q as usize] != u32::MAX {
            continue;
        }
        let c = members.len() as u32;
        let mut group = vec![q];
        class_of[q as usize] = c;
        for qp in q + 1..n as u32 {
            if class_of[qp as usize] == u32::MAX && r.equivalent(q, qp) {
                class_of[qp as usize] = c;
                group.push(qp);
            }
        }
        members.push(group);
    }
    let states: Vec<String> = members
        .iter()
        .map(|group| {
            group.iter().map(|&q| a.state_name(q)).collect::<Vec<_>>().join("+")
        })
        .collect();
    let accepting: Vec<bool> =
        members.iter().map(|group| group.iter().any(|&q| a.is_accepting(q))).collect();
    let transitions: Vec<(u32, u32, u32)> = a
        .transitions()
        .iter()
        .map(|&(s, l, d)| (class_of[s as usize], l, class_of[d as usize]))
        .collect();
    let initial = class_of[a.initial() as usize];
    Nba::from_indexed(states, a.alphabet().to_vec(), transitions, initial, accepting)
}

/// Removes transitions strictly subsumed by a sibling transition on the same
/// letter, then drops states unreachable from the initial state. Only sound
/// for direct-provenance preorders.
pub fn prune(a: &Nba, r: &StatePreorder) -> Result<Nba> {
    if r.kind == PreorderKind::Delayed {
        return Err(Error::DelayedPruningRefused);
    }
    assert_eq!(r.num_states(), a.num_states());
    let kept: Vec<(u32, u32, u32)> = a
        .transitions()
        .iter()
        .copied()
        .filter(|&(s, l, d)| {
            !a.successors(s, l).iter().any(|&d2| d2 != d && r.le(d, d2) && !r.le(d2, d))
        })
        .collect();

    // Reachability over the kept transitions only.
    let n = a.num_states();
    let mut reach = vec![false; n];
    reach[a.initial() as usize] = true;
    let mut stack = vec![a.initial()];
    while let Some(q) = stack.pop() {
        for &(s, _, d) in &kept {
            if s == q && !reach[d as usize] {
                reach[d as usize] = true;
                stack.push(d);
            }
        }
    }
    let mut remap = vec![u32::MAX; n];
    let mut states = Vec::new();
    let mut accepting = Vec::new();
    for q in 0..n {
        if reach[q] {
            remap[q] = states.len() as u32;
            states.push(a.state_name(q as u32).to_string());
            accepting.push(a.is_accepting(q as u32));
        }
    }
    let transitions: Vec<(u32, u32, u32)> = kept
        .into_iter()
        .filter(|&(s, _, d)| reach[s as usize] && reach[d as usize])
        .map(|(s, l, d)| (remap[s as usize], l, remap[d as usize]))
        .collect();
    let initial = remap[a.initial() as usize];
    Ok(Nba::from_indexed(states, a.alphabet().to_vec(), transitions, initial, accepting))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::monoid::{language_inclusion, InclusionVerdict};
    use crate::randgen;
    use crate::DEFAULT_CAP;

    fn languages_equal(a: &Nba, b: &Nba) -> bool {
        matches!(language_inclusion(a, b, DEFAULT_CAP), Ok(InclusionVerdict::Included))
            && matches!(language_inclusion(b, a, DEFAULT_CAP), Ok(InclusionVerdict::Included))
    }

    #[test]
    fn identity_preorder_quotient_is_isomorphic() {
        let a = fixtures::branching().0;
        let r = StatePreorder::identity(a.num_states(), PreorderKind::Direct, 1);
        let q = quotient(&a, &r);
        assert_eq!(q.num_states(), a.num_states());
        assert_eq!(q.transitions(), a.transitions());
    }

    #[test]
    fn branching_a_sinks_merge_under_direct_1() {
        let a = fixtures::branching().0;
        let r = compute_preorder(&a, PreorderKind::Direct, 1, DEFAULT_CAP).unwrap();
        let s2 = a.state_index("a2").unwrap();
        let s3 = a.state_index("a3").unwrap();
        assert!(r.equivalent(s2, s3), "the two accepting sinks are bisimilar");
        let q = quotient(&a, &r);
        assert!(q.num_states() < a.num_states());
        assert!(languages_equal(&a, &q));
    }

    #[test]
    fn delayed_pruning_is_refused() {
        let a = fixtures::a1();
        let r = compute_preorder(&a, PreorderKind::Delayed, 1, DEFAULT_CAP).unwrap();
        assert!(matches!(prune(&a, &r), Err(Error::DelayedPruningRefused)));
    }

    #[test]
    fn antichain_prune_is_identity() {
        let a = fixtures::inclusion_gap().1;
        let r = StatePreorder::identity(a.num_states(), PreorderKind::Direct, 1);
        let p = prune(&a, &r).unwrap();
        assert_eq!(p.num_states(), a.num_states());
        assert_eq!(p.transitions(), a.transitions());
    }

    #[test]
    fn direct_relation_contained_in_delayed_on_random_automata() {
        let mut rng = randgen::rng(0xd1ec7);
        for _ in 0..25 {
            let a = randgen::random_nba(&mut rng, 3, 2);
            if !a.dead_ends().is_empty() {
                continue;
            }
            let rd = compute_preorder(&a, PreorderKind::Direct, 1, DEFAULT_CAP).unwrap();
            let rdel = compute_preorder(&a, PreorderKind::Delayed, 1, DEFAULT_CAP).unwrap();
            for (q, qp) in rd.pairs() {
                assert!(rdel.le(q, qp), "direct pair ({q},{qp}) missing from delayed");
            }
        }
    }

    #[test]
    fn quotient_and_prune_preserve_language_on_random_automata() {
        let mut rng = randgen::rng(0x5eed5);
        let mut checked = 0;
        for _ in 0..40 {
            let a = randgen::random_nba(&mut rng, 4, 2);
            if !a.dead_ends().is_empty() {
                continue;
            }
            let rdel = compute_preorder(&a, PreorderKind::Delayed, 1, DEFAULT_CAP).unwrap();
            let q = quotient(&a, &rdel);
            assert!(languages_equal(&a, &q), "delayed-1 quotient changed the language");
            let rd = compute_preorder(&a, PreorderKind::Direct, 1, DEFAULT_CAP).unwrap();
            let p = prune(&quotient(&a, &rd), &compute_preorder(
                &quotient(&a, &rd),
                PreorderKind::Direct,
                1,
                DEFAULT_CAP,
            ).unwrap())
            .unwrap();
            assert!(languages_equal(&a, &p), "direct-1 quotient+prune changed the language");
            assert!(p.num_states() <= a.num_states());
            assert!(p.transitions().len() <= a.transitions().len());
            checked += 1;
        }
        assert!(checked >= 15, "too few dead-end-free random automata ({checked})");
    }
}
