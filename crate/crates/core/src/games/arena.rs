//! The shared game-arena representation. Every game in the toolkit —
//! plain, bounded-buffer, and quotient — is encoded as a max-parity game
//! with priorities in {0, 1, 2}; safety games use priorities {0, 1} with an
//! absorbing odd sink. Duplicator (= Prover) wins a play iff the maximum
//! priority seen infinitely often is even.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Player {
    Spoiler,
    Duplicator,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Spoiler => Player::Duplicator,
            Player::Duplicator => Player::Spoiler,
        }
    }

    /// The player favoured by parity p: even parities favour Duplicator.
    pub fn of_parity(p: u8) -> Player {
        if p % 2 == 0 {
            Player::Duplicator
        } else {
            Player::Spoiler
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Spoiler => write!(f, "Spoiler"),
            Player::Duplicator => write!(f, "Duplicator"),
        }
    }
}

/// A finite max-parity arena. Positions are dense ids; every position has
/// at least one successor once `finish` has run (dead ends are rerouted to
/// a sink winning for the stuck player's opponent).
#[derive(Debug, Clone)]
pub struct GameArena {
    pub owner: Vec<Player>,
    pub priority: Vec<u8>,
    pub succ: Vec<Vec<u32>>,
    pub labels: Vec<String>,
    pub start: u32,
}

impl GameArena {
    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn max_priority(&self) -> u8 {
        self.priority.iter().copied().max().unwrap_or(0)
    }

    pub fn predecessors(&self) -> Vec<Vec<u32>> {
        let mut preds = vec![Vec::new(); self.len()];
        for (u, outs) in self.succ.iter().enumerate() {
            for &v in outs {
                preds[v as usize].push(u as u32);
            }
        }
        preds
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph \"{}\" {{\n", name);
        for i in 0..self.len() {
            let shape = match self.owner[i] {
                Player::Spoiler => "box",
                Player::Duplicator => "ellipse",
            };
            out.push_str(&format!(
                "  n{} [shape={}, label=\"{}\\np{}{}\"];\n",
                i,
                shape,
                self.labels[i].replace('"', "'"),
                self.priority[i],
                if i as u32 == self.start { " (start)" } else { "" },
            ));
        }
        for (u, outs) in self.succ.iter().enumerate() {
            for &v in outs {
                out.push_str(&format!("  n{} -> n{};\n", u, v));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Incremental arena construction with automatic dead-end rerouting.
#[derive(Debug, Default)]
pub struct ArenaBuilder {
    owner: Vec<Player>,
    priority: Vec<u8>,
    succ: Vec<Vec<u32>>,
    labels: Vec<String>,
}

impl ArenaBuilder {
    pub fn new() -> ArenaBuilder {
        ArenaBuilder::default()
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn push(&mut self, owner: Player, priority: u8, label: String) -> u32 {
        self.owner.push(owner);
        self.priority.push(priority);
        self.succ.push(Vec::new());
        self.labels.push(label);
        self.owner.len() as u32 - 1
    }

    pub fn add_edge(&mut self, from: u32, to: u32) {
        self.succ[from as usize].push(to);
    }

    /// Seals the arena: every successor-less position gets an edge to an
    /// absorbing sink that is winning for its owner's opponent ("the
    /// opponent wins the play" when a player is stuck).
    pub fn finish(mut self, start: u32) -> GameArena {
        let stuck: Vec<usize> =
            (0..self.len()).filter(|&i| self.succ[i].is_empty()).collect();
        let mut win_sink = [None, None]; // [duplicator wins, spoiler wins]
        for i in stuck {
            let idx = usize::from(self.owner[i] == Player::Duplicator);
            let sink = *win_sink[idx].get_or_insert_with(|| {
                // Owner irrelevant on an absorbing sink; even priority hands
                // the play to Duplicator, odd to Spoiler.
                let s = self.push(
                    Player::Spoiler,
                    if idx == 0 { 0 } else { 1 },
                    if idx == 0 { "sink:duplicator-wins".into() } else { "sink:spoiler-wins".into() },
                );
                self.succ[s as usize].push(s);
                s
            });
            self.succ[i].push(sink);
        }
        assert!((start as usize) < self.len());
        GameArena {
            owner: self.owner,
            priority: self.priority,
            succ: self.succ,
            labels: self.labels,
            start,
        }
    }
}
