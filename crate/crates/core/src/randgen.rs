//! Seeded random instance generation for the property suites. Everything
//! is driven by ChaCha8 so suites are reproducible bit-for-bit.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::games::arena::{ArenaBuilder, GameArena, Player};
use crate::nba::Nba;
use crate::word::RunPath;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random automaton with `states` states over the first `letters` letters
/// a, b, c, ... Transition density and accepting density are moderate so
/// both empty and universal languages stay reasonably likely.
pub fn random_nba(r: &mut ChaCha8Rng, states: usize, letters: usize) -> Nba {
    assert!(states >= 1 && letters >= 1);
    let names: Vec<String> = (0..states).map(|i| format!("s{}", i)).collect();
    let alphabet: Vec<String> =
        (0..letters).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let mut transitions = Vec::new();
    for q in 0..states as u32 {
        for l in 0..letters as u32 {
            for t in 0..states as u32 {
                if r.gen_bool(0.4) {
                    transitions.push((q, l, t));
                }
            }
        }
    }
    let accepting: Vec<bool> = (0..states).map(|_| r.gen_bool(0.4)).collect();
    Nba::from_indexed(names, alphabet, transitions, 0, accepting)
}

/// A random finite word over `letters` letters.
pub fn random_word(r: &mut ChaCha8Rng, letters: usize, len: usize) -> Vec<u32> {
    (0..len).map(|_| r.gen_range(0..letters as u32)).collect()
}

/// A random parity arena with priorities in {0, 1, 2} and out-degree 1..=3.
pub fn random_arena(r: &mut ChaCha8Rng, positions: usize) -> GameArena {
    assert!(positions >= 1);
    let mut b = ArenaBuilder::new();
    for i in 0..positions {
        let owner = if r.gen_bool(0.5) { Player::Spoiler } else { Player::Duplicator };
        b.push(owner, r.gen_range(0..3u8), format!("n{}", i));
    }
    for u in 0..positions as u32 {
        let degree = r.gen_range(1..=3usize);
        for _ in 0..degree {
            b.add_edge(u, r.gen_range(0..positions as u32));
        }
    }
    b.finish(0)
}

/// A random walk of `a` from its initial state, up to `len` letters (may be
/// shorter if a dead end is hit).
pub fn random_run(r: &mut ChaCha8Rng, a: &Nba, len: usize) -> RunPath {
    let mut states = vec![a.initial()];
    let mut word = Vec::new();
    for _ in 0..len {
        let q = *states.last().unwrap();
        let moves: Vec<(u32, u32)> = (0..a.num_letters() as u32)
            .flat_map(|l| a.successors(q, l).iter().map(move |&t| (l, t)))
            .collect();
        if moves.is_empty() {
            break;
        }
        let (l, t) = moves[r.gen_range(0..moves.len())];
        word.push(l);
        states.push(t);
    }
    RunPath::new(states, word).expect("constructed stepwise")
}

/// A random accepting lasso run of `a`: a path to an accepting state that
/// lies on a cycle, returned as (stem run, cycle run from that state).
/// None if `a` has no reachable accepting cycle.
pub fn random_accepting_lasso(
    r: &mut ChaCha8Rng,
    a: &Nba,
    tries: usize,
) -> Option<(RunPath, RunPath)> {
    let n = a.num_states();
    for _ in 0..tries {
        let stem_len = r.gen_range(0..=2 * n);
        let stem = random_run(r, a, stem_len);
        let anchor = *stem.states.last().unwrap();
        if !a.is_accepting(anchor) {
            continue;
        }
        // Random walk until we return to the anchor.
        let cyc_len = r.gen_range(1..=3 * n);
        let mut cyc = random_run(r, &a.with_initial(anchor), cyc_len);
        if let Some(back) = cyc.states.iter().skip(1).position(|&q| q == anchor) {
            cyc.states.truncate(back + 2);
            cyc.word.truncate(back + 1);
            return Some((stem, cyc));
        }
    }
    None
}
