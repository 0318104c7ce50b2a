//! Simulation games on finite arenas: the shared arena/solver layer, the
//! plain (unbuffered) games, and the bounded-buffer variants.

pub mod arena;
pub mod bounded;
pub mod plain;
pub mod solve;

pub use arena::{ArenaBuilder, GameArena, Player};
pub use bounded::{build_bounded_buffer_arena, BufferMode};
pub use plain::build_plain_sim_arena;
pub use solve::{solve, Verdict};

/// Winning-condition flavour shared by the plain and buffered games.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Acceptance {
    Fair,
    Direct,
    Delayed,
}

impl Acceptance {
    pub fn name(self) -> &'static str {
        match self {
            Acceptance::Fair => "fair",
            Acceptance::Direct => "direct",
            Acceptance::Delayed => "delayed",
        }
    }
}

impl std::str::FromStr for Acceptance {
    type Err = String;
    fn from_str(s: &str) -> Result<Acceptance, String> {
        match s {
            "fair" => Ok(Acceptance::Fair),
            "direct" => Ok(Acceptance::Direct),
            "delayed" => Ok(Acceptance::Delayed),
            other => Err(format!("unknown acceptance `{}`", other)),
        }
    }
}
