//! The classical (unbuffered) simulation game: Spoiler picks a letter and a
//! transition, Duplicator answers over the same letter immediately.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::games::arena::{ArenaBuilder, GameArena, Player};
use crate::games::Acceptance;
use crate::nba::Nba;

// (phase, q, letter, q_next, q', obligation); letter/q_next only hold data
// in Duplicator phase.
type Key = (u8, u32, u32, u32, u32, bool);
const SPOILER: u8 = 0;
const DUPLICATOR: u8 = 1;

pub fn build_plain_sim_arena(a: &Nba, b: &Nba, acceptance: Acceptance) -> Result<GameArena> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let mut builder = ArenaBuilder::new();
    let mut ids: HashMap<Key, u32> = HashMap::new();
    let mut queue: Vec<Key> = Vec::new();

    let q0 = a.initial();
    let q0p = b.initial();
    if acceptance == Acceptance::Direct && a.is_accepting(q0) && !b.is_accepting(q0p) {
        // The position-0 obligation already fails; a stuck Duplicator start
        // resolves to the Spoiler-winning sink.
        let start = builder.push(Player::Duplicator, 0, "start:unmatched-initial".into());
        return Ok(builder.finish(start));
    }
    let obligation0 = acceptance == Acceptance::Delayed && a.is_accepting(q0) && !b.is_accepting(q0p);

    let intern = |builder: &mut ArenaBuilder,
                      queue: &mut Vec<Key>,
                      ids: &mut HashMap<Key, u32>,
                      key: Key|
     -> u32 {
        if let Some(&id) = ids.get(&key) {
            return id;
        }
        let (phase, q, l, q2, qp, obl) = key;
        let (owner, priority, label) = match phase {
            SPOILER => {
                let prio = match acceptance {
                    Acceptance::Fair => {
                        if b.is_accepting(qp) {
                            2
                        } else {
                            0
                        }
                    }
                    Acceptance::Direct => 0,
                    Acceptance::Delayed => {
                        if obl {
                            1
                        } else {
                            2
                        }
                    }
                };
                (
                    Player::Spoiler,
                    prio,
                    format!("({},{}{})", a.state_name(q), b.state_name(qp), if obl { ",o" } else { "" }),
                )
            }
            _ => {
                let prio = match acceptance {
                    Acceptance::Fair => {
                        if a.is_accepting(q2) {
                            1
                        } else {
                            0
                        }
                    }
                    _ => 0,
                };
                (
                    Player::Duplicator,
                    prio,
                    format!(
                        "({},{},{},{}{})",
                        a.state_name(q),
                        a.letter_name(l),
                        a.state_name(q2),
                        b.state_name(qp),
                        if obl { ",o" } else { "" }
                    ),
                )
            }
        };
        let id = builder.push(owner, priority, label);
        ids.insert(key, id);
        queue.push(key);
        id
    };

    let start_key: Key = (SPOILER, q0, 0, 0, q0p, obligation0);
    let start = intern(&mut builder, &mut queue, &mut ids, start_key);

    let mut next = 0usize;
    while next < queue.len() {
        let key = queue[next];
        next += 1;
        let from = ids[&key];
        let (phase, q, l, q2, qp, obl) = key;
        if phase == SPOILER {
            for letter in 0..a.num_letters() as u32 {
                for &t in a.successors(q, letter) {
                    let to = intern(
                        &mut builder,
                        &mut queue,
                        &mut ids,
                        (DUPLICATOR, q, letter, t, qp, obl),
                    );
                    builder.add_edge(from, to);
                }
            }
        } else {
            for &tp in b.successors(qp, l) {
                if acceptance == Acceptance::Direct && a.is_accepting(q2) && !b.is_accepting(tp) {
                    continue; // the round's obligation must be met on the spot
                }
                let obl2 = match acceptance {
                    Acceptance::Delayed => !b.is_accepting(tp) && (obl || a.is_accepting(q2)),
                    _ => false,
                };
                let to =
                    intern(&mut builder, &mut queue, &mut ids, (SPOILER, q2, 0, 0, tp, obl2));
                builder.add_edge(from, to);
            }
        }
    }
    Ok(builder.finish(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{a1, fixture};
    use crate::games::solve;

    fn plain_holds(a: &Nba, b: &Nba, acc: Acceptance) -> bool {
        solve(&build_plain_sim_arena(a, b, acc).unwrap()).holds
    }

    #[test]
    fn reflexive_fair_simulation() {
        let a = a1();
        assert!(plain_holds(&a, &a, Acceptance::Fair));
        assert!(plain_holds(&a, &a, Acceptance::Direct));
        assert!(plain_holds(&a, &a, Acceptance::Delayed));
        for name in crate::fixtures::FIXTURE_NAMES {
            let (x, y) = fixture(name).unwrap();
            assert!(plain_holds(&x, &x, Acceptance::Fair), "{}", name);
            assert!(plain_holds(&y, &y, Acceptance::Delayed), "{}", name);
        }
    }

    #[test]
    fn branching_plain_fair_fails() {
        let (a, b) = fixture("branching").unwrap();
        assert!(!plain_holds(&a, &b, Acceptance::Fair));
    }

    #[test]
    fn lookahead_gap_plain_fair_fails() {
        let (a, b) = fixture("lookahead-gap").unwrap();
        assert!(!plain_holds(&a, &b, Acceptance::Fair));
    }

    #[test]
    fn direct_initial_mismatch() {
        // A accepts at its initial state, B does not: direct fails at
        // position 0 even though the automata are otherwise identical.
        let a = Nba::from_parts(
            vec!["x".into()],
            vec!["a".into()],
            &[("x".into(), "a".into(), "x".into())],
            "x",
            &["x".into()],
        )
        .unwrap();
        let b = Nba::from_parts(
            vec!["x".into()],
            vec!["a".into()],
            &[("x".into(), "a".into(), "x".into())],
            "x",
            &[],
        )
        .unwrap();
        assert!(!plain_holds(&a, &b, Acceptance::Direct));
        assert!(!plain_holds(&a, &b, Acceptance::Delayed));
        assert!(!plain_holds(&a, &b, Acceptance::Fair));
        assert!(plain_holds(&b, &a, Acceptance::Direct));
    }
}
