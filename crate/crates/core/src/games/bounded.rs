//! Bounded-buffer simulation games. Spoiler appends one letter per round
//! to the shared FIFO buffer; Duplicator consumes r letters — r ∈ {0, |β|}
//! in look-ahead mode, r ∈ {0..|β|} in continuous mode — one micro-step at
//! a time. Skipping (and more generally stopping) is only allowed while
//! the buffer can still absorb the next append, so its length never
//! exceeds k.
//!
//! If Spoiler's run ends at a dead end, Duplicator still owes a matching
//! run for every buffered letter: she must flush the buffer (consuming
//! only, no stopping) before the play counts as a win for her. Without
//! this rule Duplicator could relate a live state to a dead one by
//! stalling, which would make quotienting unsound.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::games::arena::{ArenaBuilder, GameArena, Player};
use crate::games::Acceptance;
use crate::nba::Nba;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BufferMode {
    Lookahead,
    Continuous,
}

impl BufferMode {
    pub fn name(self) -> &'static str {
        match self {
            BufferMode::Lookahead => "lookahead",
            BufferMode::Continuous => "continuous",
        }
    }
}

impl std::str::FromStr for BufferMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<BufferMode, String> {
        match s {
            "lookahead" => Ok(BufferMode::Lookahead),
            "continuous" => Ok(BufferMode::Continuous),
            other => Err(format!("unknown mode `{}`", other)),
        }
    }
}

/// Buffer entries: letter + whether Spoiler's target state was accepting.
type Buffer = Vec<(u32, bool)>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Key {
    /// 0 = Spoiler to append, 1 = Duplicator to consume or stop.
    phase: u8,
    q: u32,
    qp: u32,
    buf: Buffer,
    obligation: bool,
    /// Look-ahead only: mid-flush, stopping forbidden until empty.
    flushing: bool,
    /// Spoiler's run has ended at a dead end; Duplicator must consume the
    /// whole remaining buffer (no stopping) before she can claim the win.
    terminal: bool,
    /// Priority of the event that entered this position; part of the key so
    /// distinct events never share a position.
    priority: u8,
}

pub fn build_bounded_buffer_arena(
    a: &Nba,
    b: &Nba,
    k: usize,
    mode: BufferMode,
    acceptance: Acceptance,
    cap: usize,
) -> Result<GameArena> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    if k == 0 {
        return Err(Error::InvalidBufferBound);
    }
    let mut builder = ArenaBuilder::new();
    let mut ids: HashMap<Key, u32> = HashMap::new();
    let mut queue: Vec<Key> = Vec::new();

    let q0 = a.initial();
    let q0p = b.initial();
    if acceptance == Acceptance::Direct && a.is_accepting(q0) && !b.is_accepting(q0p) {
        let start = builder.push(Player::Duplicator, 0, "start:unmatched-initial".into());
        return Ok(builder.finish(start));
    }
    let obligation0 =
        acceptance == Acceptance::Delayed && a.is_accepting(q0) && !b.is_accepting(q0p);

    let label = |key: &Key| {
        let buf: Vec<String> = key
            .buf
            .iter()
            .map(|&(l, f)| format!("{}{}", a.letter_name(l), if f { "!" } else { "" }))
            .collect();
        format!(
            "{}({},{},[{}]{}{}{})",
            if key.phase == 0 { "S" } else { "D" },
            a.state_name(key.q),
            b.state_name(key.qp),
            buf.join(" "),
            if key.obligation { ",o" } else { "" },
            if key.flushing { ",f" } else { "" },
            if key.terminal { ",t" } else { "" },
        )
    };

    let intern = |builder: &mut ArenaBuilder,
                      queue: &mut Vec<Key>,
                      ids: &mut HashMap<Key, u32>,
                      key: Key|
     -> Result<u32> {
        if let Some(&id) = ids.get(&key) {
            return Ok(id);
        }
        if builder.len() >= cap {
            return Err(Error::CapExceeded { partial: builder.len(), cap });
        }
        let owner = if key.phase == 0 { Player::Spoiler } else { Player::Duplicator };
        let id = builder.push(owner, key.priority, label(&key));
        ids.insert(key.clone(), id);
        queue.push(key);
        Ok(id)
    };

    let start_key = Key {
        phase: 0,
        q: q0,
        qp: q0p,
        buf: Vec::new(),
        obligation: obligation0,
        flushing: false,
        terminal: false,
        priority: 0,
    };
    let start = intern(&mut builder, &mut queue, &mut ids, start_key)?;

    let mut next = 0usize;
    while next < queue.len() {
        let key = queue[next].clone();
        next += 1;
        let from = ids[&key];
        if key.phase == 0 {
            // Append: one letter along a transition of a; the buffer bound
            // guarantees |buf| ≤ k - 1 here.
            debug_assert!(key.buf.len() < k);
            let mut has_move = false;
            for letter in 0..a.num_letters() as u32 {
                for &t in a.successors(key.q, letter) {
                    has_move = true;
                    let flag = a.is_accepting(t);
                    let mut buf = key.buf.clone();
                    buf.push((letter, flag));
                    let prio = if acceptance == Acceptance::Fair && flag { 1 } else { 0 };
                    let to = intern(
                        &mut builder,
                        &mut queue,
                        &mut ids,
                        Key {
                            phase: 1,
                            q: t,
                            qp: key.qp,
                            buf,
                            obligation: key.obligation,
                            flushing: false,
                            terminal: false,
                            priority: prio,
                        },
                    )?;
                    builder.add_edge(from, to);
                }
            }
            // Spoiler is stuck at a dead end. With an empty buffer this is a
            // genuine dead end (Duplicator has matched everything and wins);
            // with letters still pending, Duplicator must first flush them.
            if !has_move && !key.buf.is_empty() {
                let to = intern(
                    &mut builder,
                    &mut queue,
                    &mut ids,
                    Key {
                        phase: 1,
                        q: key.q,
                        qp: key.qp,
                        buf: key.buf.clone(),
                        obligation: key.obligation,
                        flushing: true,
                        terminal: true,
                        priority: 0,
                    },
                )?;
                builder.add_edge(from, to);
            }
        } else {
            // Stop (r reached): allowed when the remaining buffer admits the
            // next append and, in look-ahead mode, no flush is underway.
            let may_stop = if key.terminal {
                key.buf.is_empty()
            } else {
                key.buf.len() < k
                    && (mode == BufferMode::Continuous || !key.flushing || key.buf.is_empty())
            };
            if may_stop {
                let to = intern(
                    &mut builder,
                    &mut queue,
                    &mut ids,
                    Key {
                        phase: 0,
                        q: key.q,
                        qp: key.qp,
                        buf: key.buf.clone(),
                        obligation: key.obligation,
                        flushing: false,
                        terminal: false,
                        priority: 0,
                    },
                )?;
                builder.add_edge(from, to);
            }
            // Consume the head entry along a transition of b.
            if let Some(&(letter, flag)) = key.buf.first() {
                for &tp in b.successors(key.qp, letter) {
                    let entered_acc = b.is_accepting(tp);
                    if acceptance == Acceptance::Direct && flag && !entered_acc {
                        continue;
                    }
                    let obligation = match acceptance {
                        Acceptance::Delayed => !entered_acc && (key.obligation || flag),
                        _ => false,
                    };
                    let prio = match acceptance {
                        Acceptance::Fair => {
                            if entered_acc {
                                2
                            } else {
                                0
                            }
                        }
                        Acceptance::Direct => 0,
                        Acceptance::Delayed => {
                            if obligation {
                                1
                            } else {
                                2
                            }
                        }
                    };
                    let rest: Buffer = key.buf[1..].to_vec();
                    let to = intern(
                        &mut builder,
                        &mut queue,
                        &mut ids,
                        Key {
                            phase: 1,
                            q: key.q,
                            qp: tp,
                            buf: rest,
                            obligation,
                            flushing: mode == BufferMode::Lookahead || key.terminal,
                            terminal: key.terminal,
                            priority: prio,
                        },
                    )?;
                    builder.add_edge(from, to);
                }
            }
        }
    }
    Ok(builder.finish(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture;
    use crate::games::plain::build_plain_sim_arena;
    use crate::games::solve;

    fn bounded_holds(a: &Nba, b: &Nba, k: usize, mode: BufferMode, acc: Acceptance) -> bool {
        solve(&build_bounded_buffer_arena(a, b, k, mode, acc, 1_000_000).unwrap()).holds
    }

    #[test]
    fn branching_bounded_lookahead_fails_for_small_k() {
        let (a, b) = fixture("branching").unwrap();
        for k in 1..=5 {
            assert!(
                !bounded_holds(&a, &b, k, BufferMode::Lookahead, Acceptance::Fair),
                "k = {}",
                k
            );
        }
    }

    #[test]
    fn reflexivity_with_buffers() {
        for name in crate::fixtures::FIXTURE_NAMES {
            let (a, b) = fixture(name).unwrap();
            for &mode in &[BufferMode::Lookahead, BufferMode::Continuous] {
                assert!(bounded_holds(&a, &a, 2, mode, Acceptance::Fair), "{}", name);
                assert!(bounded_holds(&b, &b, 2, mode, Acceptance::Direct), "{}", name);
                assert!(bounded_holds(&b, &b, 1, mode, Acceptance::Delayed), "{}", name);
            }
        }
    }

    #[test]
    fn k1_lookahead_matches_plain_on_fixtures() {
        for name in crate::fixtures::FIXTURE_NAMES {
            let (a, b) = fixture(name).unwrap();
            for &acc in &[Acceptance::Fair, Acceptance::Direct, Acceptance::Delayed] {
                let plain = solve(&build_plain_sim_arena(&a, &b, acc).unwrap()).holds;
                let k1 = bounded_holds(&a, &b, 1, BufferMode::Lookahead, acc);
                assert_eq!(plain, k1, "{} {:?}", name, acc);
            }
        }
    }

    #[test]
    fn invalid_k_rejected() {
        let (a, b) = fixture("branching").unwrap();
        assert!(matches!(
            build_bounded_buffer_arena(&a, &b, 0, BufferMode::Lookahead, Acceptance::Fair, 100),
            Err(Error::InvalidBufferBound)
        ));
    }

    #[test]
    fn cap_surfaces_as_error() {
        let (a, b) = fixture("branching").unwrap();
        assert!(matches!(
            build_bounded_buffer_arena(&a, &b, 3, BufferMode::Continuous, Acceptance::Fair, 10),
            Err(Error::CapExceeded { .. })
        ));
    }
}
