use thiserror::Error;

/// Errors produced by this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Agent count outside the supported `1..=16` range.
    #[error("agent count {0} outside supported range 1..=16")]
    AgentCount(u8),

    /// Gossip event with repeated or out-of-range agent indices.
    #[error("event ({speaker},{listener},{target}) invalid for n={n}: indices must be pairwise distinct and below n")]
    InvalidEvent {
        speaker: u8,
        listener: u8,
        target: u8,
        n: u8,
    },

    /// Encoding has bits set beyond the `n*(n-1)` defined positions.
    #[error("encoding {encoding:#x} out of range for n={n}")]
    EncodingOutOfRange { n: u8, encoding: u64 },

    /// Decomposition requested on a state that gossip can still change.
    #[error("matrix is not absorbing; faction decomposition exists only for absorbing states")]
    NotAbsorbing,

    /// Faction list that does not describe a valid absorbing state.
    #[error("invalid absorbing structure: {0}")]
    InvalidStructure(String),

    /// Scan shard bounds outside the state space.
    #[error("shard [{lo}, {hi}) invalid for n={n}")]
    BadShard { n: u8, lo: u64, hi: u64 },

    /// Operation requested beyond its supported system size.
    #[error("n={n} unsupported for {what} (limit {limit})")]
    SizeLimit {
        what: &'static str,
        n: u8,
        limit: u8,
    },

    /// Malformed textual representation.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
