//! Core library of the buffsim toolkit: Büchi automata, transition-monoid
//! machinery, simulation games (plain, bounded-buffer, and quotient-based),
//! Ramsey language inclusion, simulation-based minimisation, and the
//! hardness-instance generators.

pub mod error;
pub mod fixtures;
pub mod games;
pub mod minimize;
pub mod monoid;
pub mod nba;
pub mod oracles;
pub mod profile;
pub mod quotient;
pub mod randgen;
pub mod suites;
pub mod tiling;
pub mod word;

pub use error::{Error, Result};
pub use games::{
    build_bounded_buffer_arena, build_plain_sim_arena, solve, Acceptance, BufferMode, GameArena,
    Player, Verdict,
};
pub use monoid::{
    build_monoid, language_inclusion, ramsey_factorize, InclusionVerdict, MonoidElement,
    TransitionMonoid,
};
pub use minimize::{compute_preorder, prune, quotient as quotient_automaton, PreorderKind, StatePreorder};
pub use nba::{parse_nba, DisjointUnion, Nba, NbaFormat};
pub use profile::{Profile, ACCEPTING_PATH, NO_PATH, PLAIN_PATH};
pub use quotient::{
    decide, replay, QuotientGame, QuotientRelation, SimulationOutcome, SimulationReport,
};
pub use tiling::{
    brute_force_tiling, brute_force_tiling_game, expected_exptime_holds, expected_pspace_holds,
    gen_exptime, gen_pspace, Tiling, TilingGameWinner, TilingSystem,
};
pub use word::{periodic_membership, word_profile, RunPath, UltimatelyPeriodicWord};

/// Default node budget for game arenas and monoid closures, overridable via
/// the `BUFFSIM_CAP` environment variable or per-call.
pub const DEFAULT_CAP: usize = 50_000;

pub fn default_cap() -> usize {
    std::env::var("BUFFSIM_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_CAP)
}
