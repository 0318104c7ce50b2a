use thiserror::Error;

/// Errors produced by the automata, monoid, game, and generator layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("empty automaton")]
    EmptyAutomaton,
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("the two automata do not share the same alphabet")]
    AlphabetMismatch,
    #[error("profile dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("monoid cap exceeded: construction stopped at {partial} elements (cap {cap})")]
    CapExceeded { partial: usize, cap: usize },
    #[error("buffer bound k must be at least 1")]
    InvalidBufferBound,
    #[error("invalid run: {0}")]
    InvalidRun(String),
    #[error("pruning with a delayed-provenance preorder is refused (delayed simulation is not good for pruning)")]
    DelayedPruningRefused,
    #[error("replay failure: {0}")]
    ReplayFailure(String),
    #[error("resource budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
