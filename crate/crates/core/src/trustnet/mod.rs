//! Trust matrices, gossip events, and the faction/core structure of
//! absorbing states.
//!
//! A state of the system is a binary trust matrix with an undefined
//! diagonal. Gossip events are the only dynamics: the listener copies the
//! speaker's opinion of a target, provided the listener trusts the
//! speaker. A state is absorbing when no event can change it, and every
//! absorbing state decomposes uniquely into factions with non-empty
//! cores; [`decompose`](TrustMatrix::decompose) and
//! [`synthesize`](AbsorbingStructure::synthesize) convert between the two
//! representations.

mod matrix;
mod structure;

pub(crate) use matrix::{absorbing_encoding, bit_index};
pub use matrix::{enumerate_events, AgentSet, GossipEvent, TrustMatrix, MAX_AGENTS};
pub use structure::{AbsorbingStructure, Faction};
