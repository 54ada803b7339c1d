use std::fmt;

use super::matrix::{bit_index, AgentSet, TrustMatrix, MAX_AGENTS};
use crate::{Error, Result};

/// One faction of an absorbing state: its members and its core.
///
/// Core members trust each other mutually and are trusted by every
/// member; the remaining (peripheral) members trust exactly the core and
/// are trusted by nobody.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Faction {
    pub members: AgentSet,
    pub core: AgentSet,
}

impl Faction {
    pub fn new(members: AgentSet, core: AgentSet) -> Self {
        Faction { members, core }
    }

    /// Members outside the core.
    pub fn periphery(&self) -> AgentSet {
        AgentSet::from_mask(self.members.mask() & !self.core.mask())
    }
}

impl fmt::Display for Faction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.members, self.core)
    }
}

/// Faction decomposition of an absorbing state.
///
/// A valid structure is a partition of the agents into factions, each
/// with a non-empty core, and corresponds to exactly one absorbing
/// matrix: `trusts(i, j)` iff `i` and `j` share a faction and `j` is in
/// its core. Construction validates partition and core constraints, and
/// normalizes faction order (ascending smallest member), so structures
/// compare representationally.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbsorbingStructure {
    n: u8,
    factions: Vec<Faction>,
}

impl AbsorbingStructure {
    pub fn new(n: u8, factions: Vec<Faction>) -> Result<Self> {
        if n == 0 || n > MAX_AGENTS {
            return Err(Error::AgentCount(n));
        }
        let all = if n == 16 { u16::MAX } else { (1u16 << n) - 1 };
        let mut seen = 0u16;
        for f in &factions {
            if f.members.is_empty() {
                return Err(Error::InvalidStructure("empty faction".into()));
            }
            if f.core.is_empty() {
                return Err(Error::InvalidStructure(format!(
                    "faction {} has an empty core",
                    f.members
                )));
            }
            if !f.core.is_subset(&f.members) {
                return Err(Error::InvalidStructure(format!(
                    "core {} is not a subset of faction {}",
                    f.core, f.members
                )));
            }
            if f.members.mask() & !all != 0 {
                return Err(Error::InvalidStructure(format!(
                    "faction {} has members outside 0..{n}",
                    f.members
                )));
            }
            if f.members.mask() & seen != 0 {
                return Err(Error::InvalidStructure(format!(
                    "faction {} overlaps another faction",
                    f.members
                )));
            }
            seen |= f.members.mask();
        }
        if seen != all {
            return Err(Error::InvalidStructure(format!(
                "agents {} belong to no faction",
                AgentSet::from_mask(all & !seen)
            )));
        }
        Ok(Self::from_normalized(n, factions))
    }

    /// Constructor for callers that guarantee validity; only faction
    /// order is normalized.
    pub(crate) fn from_normalized(n: u8, mut factions: Vec<Faction>) -> Self {
        factions.sort_by_key(|f| f.members.smallest());
        AbsorbingStructure { n, factions }
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    /// Factions in ascending order of their smallest member.
    pub fn factions(&self) -> &[Faction] {
        &self.factions
    }

    /// The absorbing matrix this structure describes: `trusts(i, j)` iff
    /// `i` and `j` share a faction and `j` is in its core.
    pub fn synthesize(&self) -> TrustMatrix {
        let mut words = [0u64; 4];
        for f in &self.factions {
            for i in f.members.iter() {
                for j in f.core.iter() {
                    if i != j {
                        let b = bit_index(self.n, i, j);
                        words[(b / 64) as usize] |= 1u64 << (b % 64);
                    }
                }
            }
        }
        TrustMatrix::from_words(self.n, words)
    }
}

impl fmt::Display for AbsorbingStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}", self.n)?;
        for fac in &self.factions {
            write!(f, " {fac}")?;
        }
        Ok(())
    }
}

/// Extracts the faction/core structure of an absorbing matrix.
///
/// Peripheral agents are those with a one-way trust edge (they trust
/// someone who does not trust them back). Every non-peripheral agent's
/// core is its mutual-trust neighborhood plus itself; every peripheral
/// agent trusts exactly one faction's core and joins that faction.
pub(crate) fn structure_decompose(m: &TrustMatrix) -> Result<AbsorbingStructure> {
    if !m.is_absorbing() {
        return Err(Error::NotAbsorbing);
    }
    let n = m.n();
    let mut rows = [0u16; MAX_AGENTS as usize];
    let mut cols = [0u16; MAX_AGENTS as usize];
    for i in 0..n {
        rows[i as usize] = m.trust_targets(i).mask();
        cols[i as usize] = m.trusters(i).mask();
    }

    let mut factions: Vec<Faction> = Vec::new();
    let mut assigned = 0u16;
    for i in 0..n {
        let (r, c) = (rows[i as usize], cols[i as usize]);
        let peripheral = r & !c != 0;
        if peripheral || assigned >> i & 1 != 0 {
            continue;
        }
        let core = (1u16 << i) | (r & c);
        assigned |= core;
        factions.push(Faction::new(
            AgentSet::from_mask(core),
            AgentSet::from_mask(core),
        ));
    }
    for p in 0..n {
        let r = rows[p as usize];
        if r & !cols[p as usize] == 0 {
            continue;
        }
        let faction = factions
            .iter_mut()
            .find(|f| f.core.mask() == r)
            .unwrap_or_else(|| {
                unreachable!("peripheral row must equal a core in an absorbing state")
            });
        faction.members = faction.members.union(AgentSet::singleton(p));
    }
    Ok(AbsorbingStructure::from_normalized(n, factions))
}
