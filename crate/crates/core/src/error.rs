use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// Mathematical verdicts ("the theorem fails on this instance") are never
/// errors; errors signal bad input, violated preconditions or horizon
/// limits that make a query meaningless.
#[derive(Debug, Error)]
pub enum Error {
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("`{word}` is not a factor of the set")]
    NotAFactor { word: String },

    #[error("horizon {horizon} too small: the query on `{word}` needs length {needed}")]
    Horizon {
        word: String,
        needed: usize,
        horizon: usize,
    },

    #[error("empty source: a factor set needs at least one nonempty word")]
    EmptySource,

    #[error("morphism is not expanding from seed `{0}`")]
    NonExpanding(String),

    #[error("`{f}` does not fix its seed: f({seed}) must begin with {seed}")]
    SeedNotFixed { f: String, seed: String },

    #[error("code role violation: {0}")]
    Role(String),

    #[error("code is not contained in the factor set: `{0}` is missing")]
    Containment(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("coset transition conflict: `{p}` and `{q}` are in one class but disagree on `{letter}`")]
    CosetConflict { p: String, q: String, letter: String },

    #[error("the automaton recognizes an infinite code")]
    InfiniteCode,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
