use thiserror::Error;

use crate::automaton::Automaton;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("disconnected")]
    Disconnected,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("unknown direction token `{0}`")]
    UnknownDirection(String),

    #[error("invalid turn: {0}")]
    InvalidTurn(String),

    #[error("invalid fold: {0}")]
    InvalidFold(String),

    /// A fold produced a degenerate turn, so either the fold was not
    /// permissible or the tracked loop was not tight.
    #[error("fold was not permissible / loop not tight: {0}")]
    NotPermissible(String),

    #[error("edge map mismatch: {0}")]
    MapMismatch(String),

    #[error("not a self-map")]
    NotSelfMap,

    #[error("edge map is not tight: image of `{0}` backtracks")]
    NotTight(String),

    #[error("invalid label permutation: {0}")]
    InvalidPermutation(String),

    #[error("map is not transparent: {0}")]
    NotTransparent(String),

    #[error("not a train track map")]
    NotTrainTrack,

    #[error("stallings decomposition failed: {message}\n{dump}")]
    Stallings { message: String, dump: String },

    #[error("fold sequence is not closed")]
    NotClosed,

    #[error("unsupported rank {0} (only rank 3 is implemented)")]
    UnsupportedRank(usize),

    #[error("state cap {cap} exceeded")]
    StateCapExceeded { cap: usize, partial: Box<Automaton> },

    #[error("invalid loop: {0}")]
    InvalidLoop(String),

    #[error("format error: {0}")]
    Format(String),
}
