//! Binary trust-gossip model.
//!
//! Agents hold binary trust opinions about each other: agent `i` either
//! trusts agent `j` or does not, and opinions about oneself are undefined.
//! A gossip event `(speaker, listener, target)` makes the listener copy the
//! speaker's opinion of the target, but only if the listener trusts the
//! speaker. States that no gossip event can change are *absorbing*; they
//! decompose into factions built around mutually-trusting cores.
//!
//! The crate provides:
//!
//! * [`trustnet`]: the trust matrix, gossip dynamics, the absorbing-state
//!   predicate, and the faction/core decomposition.
//! * [`enumerate`]: exhaustive and constructive enumeration of absorbing
//!   states.
//! * [`classify`]: classification of absorbing states up to agent
//!   relabeling.
//! * [`count`]: exact closed-form counts of absorbing states, labeled and
//!   unlabeled.
//! * [`dynamics`]: the full transition graph for small systems, strongly
//!   connected components, and reachability.
//! * [`simulate`]: seeded random trajectories and basin-of-attraction
//!   censuses.

pub mod classify;
pub mod count;
pub mod dynamics;
pub mod enumerate;
mod error;
mod partitions;
pub mod simulate;
pub mod trustnet;

pub use error::{Error, Result};
pub use trustnet::{
    enumerate_events, AbsorbingStructure, AgentSet, Faction, GossipEvent, TrustMatrix,
};
